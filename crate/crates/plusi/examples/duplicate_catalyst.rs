//! Duplicating the catalyst: |+i⟩ copies onto a fresh |0⟩ wire.
//!
//! Five {H, CCZ} gates map |1, 0, +i⟩ to |1, +i, +i⟩. Chaining the step
//! turns one catalyst into k of them, so k-fold parallel S layers need a
//! single seeded |+i⟩. The example runs the single step, then builds the
//! k = 4 plan and checks every produced catalyst.

use plusi::compiler::plan_parallel;
use plusi::circuits::duplicate_plus_i_gadget;
use plusi::statevec::{NamedState, StateVector};

fn main() {
    let gadget = duplicate_plus_i_gadget();
    println!("duplication step, {} gates:", gadget.len());
    for gate in gadget.gates() {
        println!("  {gate}");
    }

    let input = StateVector::product(&[
        NamedState::One,
        NamedState::Zero,
        NamedState::PlusI,
    ])
    .unwrap();
    let expected = StateVector::product(&[
        NamedState::One,
        NamedState::PlusI,
        NamedState::PlusI,
    ])
    .unwrap();
    let output = gadget.run(&input).unwrap();
    println!(
        "\n|1, 0, +i⟩ → |1, +i, +i⟩ up to {:.3e}\n",
        output.distance(&expected).unwrap()
    );

    let plan = plan_parallel(4).unwrap();
    println!(
        "parallel plan for k = 4: {} duplication steps on {} qubits",
        plan.schedule().len(),
        plan.num_qubits()
    );
    for step in plan.schedule() {
        println!(
            "  copy qubit {} onto fresh qubit {} (flag {})",
            step.source, step.fresh, step.flag
        );
    }

    let final_state = plan
        .to_circuit()
        .unwrap()
        .run(&plan.reference_input().unwrap())
        .unwrap();
    let plus_i = StateVector::named(NamedState::PlusI);
    let mut rest = final_state;
    println!();
    for copy in (1..=4usize).rev() {
        let top = rest.num_qubits();
        let (next, weight) = rest.contract_qubit(top, &plus_i).unwrap();
        println!("catalyst {copy}: |+i⟩ weight {weight:.15}");
        rest = next;
    }
}
