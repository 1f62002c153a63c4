//! Hypergraph resource states and Y-basis catalyst injection.
//!
//! Hypergraph states built from {H, CZ, CCZ} have real amplitudes of
//! uniform magnitude, so no circuit in that family can produce |+i⟩
//! outright. Measuring one vertex in the Y basis escapes the real
//! manifold: both outcomes leave the neighbor in |+i⟩ after at most one
//! Z byproduct correction.

use plusi::hypergraph::{y_inject, Hypergraph, Sections, SectionedResource};
use plusi::statevec::{MeasurePolicy, NamedState, PauliBasis, Sign, StateVector};

fn main() {
    let mut graph = Hypergraph::new(2).unwrap();
    graph.add_edge2(1, 2).unwrap();
    let resource = graph.build_state().unwrap();

    println!("resource CZ(|+⟩⊗|+⟩), amplitudes:");
    for index in 0..resource.dim() {
        let amp = resource.amp(index);
        println!("  |{index:02b}⟩: {:+.4}{:+.4}i", amp.re, amp.im);
    }
    println!("real within 1e-12: {}", resource.is_real(1e-12));
    println!();

    let plus_i = StateVector::named(NamedState::PlusI);
    for sign in [Sign::Plus, Sign::Minus] {
        let (post, byproduct, outcome) =
            y_inject(&resource, 2, 1, MeasurePolicy::Postselect(sign)).unwrap();
        let corrected = byproduct.correct(&post, 1).unwrap();
        let eigenstate = StateVector::pauli_eigenstate(PauliBasis::Y, sign);
        let (target, _) = corrected.contract_qubit(2, &eigenstate).unwrap();
        println!(
            "outcome {}: probability {:.3}, byproduct {}, target fidelity with |+i⟩ = {:.15}",
            outcome.sign,
            outcome.probability,
            byproduct,
            target.fidelity(&plus_i).unwrap()
        );
    }

    // The same construction packaged with input/body/output sections.
    println!();
    let mut graph = Hypergraph::new(4).unwrap();
    graph.add_edge3(1, 2, 3).unwrap();
    let (with_ancilla, ancilla) = graph.attach_injection_vertex(3).unwrap();
    let resource = SectionedResource::new(
        with_ancilla,
        Sections::new(vec![1, 2], vec![ancilla], vec![3, 4]),
    )
    .unwrap();
    println!(
        "CCZ-edge resource with injection ancilla {ancilla}: {} vertices, measurable: {:?}",
        resource.hypergraph().num_vertices(),
        (1..=resource.hypergraph().num_vertices())
            .filter(|&v| resource.is_measurable(v))
            .collect::<Vec<_>>()
    );
}
