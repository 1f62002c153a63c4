//! Full compiler walk: random circuit in, catalytic program out.
//!
//! Starts from a circuit over {H, S, CCZ}, rewrites every S into the
//! catalytic gadget, and certifies the result against a native oracle.
//! Then runs the strict pipeline, which additionally lowers CS through
//! the borrowed-ancilla gadget before the catalytic stage.

use plusi::circuits::{random_circuit, Alphabet, Circuit, Gate};
use plusi::compiler::{compile_catalytic, compile_strict};
use plusi::statevec::{NamedState, StateVector};

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

fn main() {
    let mut rng = ChaCha12Rng::seed_from_u64(11);
    let mut source = random_circuit(3, 10, Alphabet::HSCCZ, &mut rng).unwrap();
    source.push(Gate::s(2)).unwrap();

    println!(
        "source: {} gates on {} qubits over {}",
        source.len(),
        source.num_qubits(),
        source.alphabet()
    );
    let program = compile_catalytic(&source).unwrap();
    println!(
        "compiled: {} gates on {} qubits over {}, {} S gates eliminated",
        program.inner().len(),
        program.inner().num_qubits(),
        program.inner().alphabet(),
        program.s_gate_count()
    );
    println!(
        "flag qubit {}, catalyst qubit {}",
        program.flag_qubit(),
        program.catalyst_qubit()
    );

    // Certify: native run ⊗ |1⟩ ⊗ |+i⟩ must match the program output.
    let oracle = source.run(&StateVector::zeros(3).unwrap()).unwrap();
    let expected = oracle
        .tensor(&StateVector::named(NamedState::One))
        .unwrap()
        .tensor(&StateVector::named(NamedState::PlusI))
        .unwrap();
    let deviation = program
        .run()
        .unwrap()
        .distance_up_to_global_phase(&expected)
        .unwrap();
    let (_, catalyst_weight) = program.logical_output().unwrap();
    println!("deviation from native oracle: {deviation:.3e}");
    println!("catalyst restored with weight {catalyst_weight:.15}");
    println!(
        "catalyst conservation across gadget boundaries: {:.3e}",
        program.catalyst_conservation_deviation().unwrap()
    );

    println!();
    let cs_source = Circuit::from_gates(
        2,
        Alphabet::HCS,
        vec![Gate::h(1), Gate::cs(1, 2), Gate::h(2)],
    )
    .unwrap();
    let strict = compile_strict(&cs_source).unwrap();
    println!(
        "strict pipeline: {{H, CS}} on 2 qubits → {} gates of {} on {} qubits",
        strict.inner().len(),
        strict.inner().alphabet(),
        strict.inner().num_qubits()
    );

    println!();
    println!("program as JSON:");
    println!("{}", serde_json::to_string_pretty(&strict).unwrap());
}
