//! Deterministic |1⟩ preparation with {H, CCZ} alone.
//!
//! Neither H nor CCZ can flip a single qubit by itself, but a fixed
//! 30-gate sequence on three qubits walks |000⟩ to |100⟩ exactly, with
//! the two workspace qubits returned to |0⟩. The |1⟩ it produces seeds
//! the flag wire of every catalytic program.

use plusi::circuits::prepare_one_gadget;
use plusi::statevec::StateVector;

fn main() {
    let gadget = prepare_one_gadget();
    println!(
        "{} gates on {} qubits, alphabet {}",
        gadget.len(),
        gadget.num_qubits(),
        gadget.alphabet()
    );

    let output = gadget.run(&StateVector::zeros(3).unwrap()).unwrap();
    let target = StateVector::basis(3, "100").unwrap();

    println!("fidelity with |100⟩:    {:.17}", output.fidelity(&target).unwrap());
    println!(
        "workspace populations:  qubit 2 = {:.3e}, qubit 3 = {:.3e}",
        output.population_one(2).unwrap(),
        output.population_one(3).unwrap()
    );

    println!();
    println!("surviving amplitudes:");
    for index in 0..output.dim() {
        let amp = output.amp(index);
        if amp.norm_sqr() > 1e-24 {
            println!("  |{index:03b}⟩: {:+.12}{:+.12}i", amp.re, amp.im);
        }
    }
}
