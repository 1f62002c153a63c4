//! Controlled-S from CCZ and Hadamards on one borrowed ancilla.
//!
//! The gadget conjugates CCZ by H on the ancilla wire, which turns the
//! doubly-controlled phase into a controlled phase of half the angle plus
//! a leftover S on the ancilla. Running it over all two-qubit basis states
//! shows the phase i landing exactly on |11⟩.

use plusi::circuits::controlled_s_gadget;
use plusi::statevec::StateVector;

fn main() {
    let gadget = controlled_s_gadget();
    println!("gate list ({} gates):", gadget.len());
    for gate in gadget.gates() {
        println!("  {gate}");
    }
    println!();

    println!("action on |jk⟩ ⊗ |0⟩ (ancilla last):");
    for (j, k) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        let input = StateVector::basis(3, &format!("{j}{k}0")).unwrap();
        let output = gadget.run(&input).unwrap();
        // The output stays a basis state, so one amplitude carries it all.
        let index = (j << 2) | (k << 1);
        let amp = output.amp(index);
        println!("  |{j}{k}⟩ → ({:+.3}{:+.3}i) |{j}{k}⟩", amp.re, amp.im);
    }

    let phase_on_11 = gadget
        .run(&StateVector::basis(3, "110").unwrap())
        .unwrap()
        .amp(0b110);
    println!();
    println!(
        "phase on |11⟩: {:+.6}{:+.6}i (want exactly i)",
        phase_on_11.re, phase_on_11.im
    );
}
