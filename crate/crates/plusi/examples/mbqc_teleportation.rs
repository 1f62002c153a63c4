//! One-bit teleportation as a measurement pattern.
//!
//! The resource is the two-vertex graph state with the input qubit
//! entangled to the output by a CZ. Measuring the input in the X basis
//! teleports H|ψ⟩ to the output, up to an X byproduct on the -1 branch.
//! The pattern records the byproduct in a Pauli frame; applying the frame
//! makes both branches agree.

use plusi::circuits::Gate;
use plusi::mbqc::{execute, teleportation_pattern, teleportation_resource, ExecutePolicy};
use plusi::statevec::{NamedState, Sign, StateVector};

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

fn main() {
    let resource = teleportation_resource();
    let pattern = teleportation_pattern();

    // Plant a random |ψ⟩ on the input vertex: state = CZ (|ψ⟩ ⊗ |+⟩).
    let mut rng = ChaCha12Rng::seed_from_u64(3);
    let psi = StateVector::random(1, &mut rng).unwrap();
    let state = psi
        .tensor(&StateVector::named(NamedState::Plus))
        .unwrap()
        .applied(&Gate::cz(1, 2))
        .unwrap();

    let expected = psi.applied(&Gate::h(1)).unwrap();

    for sign in [Sign::Plus, Sign::Minus] {
        let result = execute(
            &state,
            &resource,
            &pattern,
            ExecutePolicy::Postselect(vec![sign]),
        )
        .unwrap();
        let outcome = &result.outcomes[0];
        let corrected = result.corrected_residual().unwrap();
        println!(
            "branch {}: probability {:.3}, frame {:?}, fidelity with H|ψ⟩ = {:.15}",
            outcome.sign,
            outcome.probability,
            result.frame.flips_on(2),
            corrected.fidelity(&expected).unwrap()
        );
    }

    println!();
    println!("sampled shots:");
    for seed in 0..4 {
        let result = execute(
            &state,
            &resource,
            &pattern,
            ExecutePolicy::Sample { seed },
        )
        .unwrap();
        let corrected = result.corrected_residual().unwrap();
        println!(
            "  seed {seed}: outcome {}, corrected fidelity {:.15}",
            result.outcomes[0].sign,
            corrected.fidelity(&expected).unwrap()
        );
    }
}
