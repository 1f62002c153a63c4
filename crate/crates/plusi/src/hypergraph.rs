//! Hypergraph resource states and catalyst injection.
//!
//! A hypergraph with ordinary edges and three-vertex hyperedges fixes a
//! resource state: |+⟩ on every vertex, CZ across each edge, CCZ across
//! each hyperedge. All amplitudes are real with magnitude 2^{-m/2}, so
//! no such state can overlap a single-qubit |+i⟩ factor with fidelity
//! above 1/2. Supplying |+i⟩ therefore takes a measurement: attach one
//! extra vertex by an edge, measure it in Y, and correct the odd branch
//! with Z.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuits::Gate;
use crate::statevec::{
    MeasurePolicy, MeasurementOutcome, NamedState, PauliBasis, Sign, StateError, StateVector,
};

/// Resource-state construction is capped below the general simulator
/// limit; hypergraph checks never need more.
pub const MAX_RESOURCE_QUBITS: usize = 20;

#[derive(Debug, Error)]
pub enum HypergraphError {
    #[error("a hypergraph needs at least one vertex")]
    Empty,
    #[error("vertex {vertex} is outside 1..={num_vertices}")]
    VertexOutOfRange { vertex: usize, num_vertices: usize },
    #[error("edge vertices must be distinct, got {0:?}")]
    RepeatedVertex(Vec<usize>),
    #[error("duplicate edge {0:?}")]
    DuplicateEdge(Vec<usize>),
    #[error("resource states are capped at 20 qubits, this hypergraph has {0} vertices")]
    TooLarge(usize),
    #[error("sections must partition 1..={num_vertices}: {problem}")]
    BadSections { num_vertices: usize, problem: String },
    #[error("injection ancilla {0} must differ from the target")]
    AncillaIsTarget(usize),
    #[error(transparent)]
    State(#[from] StateError),
}

#[derive(Serialize, Deserialize)]
struct RawHypergraph {
    num_vertices: usize,
    edges2: Vec<[usize; 2]>,
    edges3: Vec<[usize; 3]>,
}

/// Vertices 1..=m with two kinds of edges. Edges are stored sorted, with
/// duplicates and degenerate edges rejected at insertion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawHypergraph", into = "RawHypergraph")]
pub struct Hypergraph {
    num_vertices: usize,
    edges2: Vec<[usize; 2]>,
    edges3: Vec<[usize; 3]>,
}

impl TryFrom<RawHypergraph> for Hypergraph {
    type Error = HypergraphError;

    fn try_from(raw: RawHypergraph) -> Result<Hypergraph, HypergraphError> {
        let mut graph = Hypergraph::new(raw.num_vertices)?;
        for [j, k] in raw.edges2 {
            graph.add_edge2(j, k)?;
        }
        for [j, k, l] in raw.edges3 {
            graph.add_edge3(j, k, l)?;
        }
        Ok(graph)
    }
}

impl From<Hypergraph> for RawHypergraph {
    fn from(graph: Hypergraph) -> RawHypergraph {
        RawHypergraph {
            num_vertices: graph.num_vertices,
            edges2: graph.edges2,
            edges3: graph.edges3,
        }
    }
}

impl Hypergraph {
    pub fn new(num_vertices: usize) -> Result<Self, HypergraphError> {
        if num_vertices == 0 {
            return Err(HypergraphError::Empty);
        }
        Ok(Hypergraph {
            num_vertices,
            edges2: Vec::new(),
            edges3: Vec::new(),
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edges2(&self) -> &[[usize; 2]] {
        &self.edges2
    }

    pub fn edges3(&self) -> &[[usize; 3]] {
        &self.edges3
    }

    fn check_vertex(&self, vertex: usize) -> Result<(), HypergraphError> {
        if vertex == 0 || vertex > self.num_vertices {
            return Err(HypergraphError::VertexOutOfRange {
                vertex,
                num_vertices: self.num_vertices,
            });
        }
        Ok(())
    }

    pub fn add_edge2(&mut self, j: usize, k: usize) -> Result<(), HypergraphError> {
        self.check_vertex(j)?;
        self.check_vertex(k)?;
        if j == k {
            return Err(HypergraphError::RepeatedVertex(vec![j, k]));
        }
        let edge = [j.min(k), j.max(k)];
        if self.edges2.contains(&edge) {
            return Err(HypergraphError::DuplicateEdge(edge.to_vec()));
        }
        self.edges2.push(edge);
        Ok(())
    }

    pub fn add_edge3(&mut self, j: usize, k: usize, l: usize) -> Result<(), HypergraphError> {
        for v in [j, k, l] {
            self.check_vertex(v)?;
        }
        let mut edge = [j, k, l];
        edge.sort_unstable();
        if edge[0] == edge[1] || edge[1] == edge[2] {
            return Err(HypergraphError::RepeatedVertex(vec![j, k, l]));
        }
        if self.edges3.contains(&edge) {
            return Err(HypergraphError::DuplicateEdge(edge.to_vec()));
        }
        self.edges3.push(edge);
        Ok(())
    }

    /// Build the resource state: |+⟩^m, then the diagonal CZ and CCZ
    /// layers. The edge application order is irrelevant because every
    /// gate involved is diagonal.
    pub fn build_state(&self) -> Result<StateVector, HypergraphError> {
        if self.num_vertices > MAX_RESOURCE_QUBITS {
            return Err(HypergraphError::TooLarge(self.num_vertices));
        }
        let mut state = StateVector::product(&vec![NamedState::Plus; self.num_vertices])?;
        for &[j, k] in &self.edges2 {
            state.apply(&Gate::cz(j, k))?;
        }
        for &[j, k, l] in &self.edges3 {
            state.apply(&Gate::ccz(j, k, l))?;
        }
        Ok(state)
    }

    /// Return a copy with one new vertex joined to `target` by an edge,
    /// along with the new vertex's index. The new vertex is the Y-measured
    /// ancilla of [`y_inject`].
    pub fn attach_injection_vertex(
        &self,
        target: usize,
    ) -> Result<(Hypergraph, usize), HypergraphError> {
        self.check_vertex(target)?;
        let mut extended = self.clone();
        extended.num_vertices += 1;
        let ancilla = extended.num_vertices;
        extended.add_edge2(target, ancilla)?;
        Ok((extended, ancilla))
    }
}

/// The Pauli left on the injection target, determined by the measured
/// eigenvalue: +1 leaves the state as intended, -1 leaves a Z byproduct.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Byproduct {
    Identity,
    Z,
}

impl Byproduct {
    pub fn from_outcome(sign: Sign) -> Self {
        match sign {
            Sign::Plus => Byproduct::Identity,
            Sign::Minus => Byproduct::Z,
        }
    }

    /// Undo the byproduct on `target`. Z is self-inverse, so applying the
    /// reported Pauli is the correction.
    pub fn correct(
        &self,
        state: &StateVector,
        target: usize,
    ) -> Result<StateVector, HypergraphError> {
        match self {
            Byproduct::Identity => Ok(state.clone()),
            Byproduct::Z => Ok(state.applied(&Gate::z(target))?),
        }
    }
}

impl std::fmt::Display for Byproduct {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Byproduct::Identity => write!(f, "I"),
            Byproduct::Z => write!(f, "Z"),
        }
    }
}

/// Measure `ancilla` in the Y basis to push an S onto its neighborhood.
/// On a resource state where the ancilla hangs off `target` by one edge,
/// the +1 branch leaves the target holding |+i⟩ and the -1 branch leaves
/// Z|+i⟩; correcting the reported byproduct makes the result outcome
/// independent. The ancilla stays in the register, projected onto its
/// eigenstate.
pub fn y_inject(
    state: &StateVector,
    ancilla: usize,
    target: usize,
    policy: MeasurePolicy,
) -> Result<(StateVector, Byproduct, MeasurementOutcome), HypergraphError> {
    if ancilla == target {
        return Err(HypergraphError::AncillaIsTarget(ancilla));
    }
    let (outcome, post) = state.measure_pauli(ancilla, PauliBasis::Y, policy)?;
    Ok((post, Byproduct::from_outcome(outcome.sign), outcome))
}

#[derive(Serialize, Deserialize)]
struct RawSections {
    input: Vec<usize>,
    body: Vec<usize>,
    output: Vec<usize>,
}

/// A partition of the vertices into input, body and output sections.
/// Input and body vertices may be measured; output vertices carry the
/// surviving state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "RawSections", into = "RawSections")]
pub struct Sections {
    input: Vec<usize>,
    body: Vec<usize>,
    output: Vec<usize>,
}

impl From<RawSections> for Sections {
    fn from(raw: RawSections) -> Sections {
        Sections::new(raw.input, raw.body, raw.output)
    }
}

impl From<Sections> for RawSections {
    fn from(sections: Sections) -> RawSections {
        RawSections {
            input: sections.input,
            body: sections.body,
            output: sections.output,
        }
    }
}

impl Sections {
    /// Membership is a set property; the stored lists are kept sorted.
    pub fn new(
        mut input: Vec<usize>,
        mut body: Vec<usize>,
        mut output: Vec<usize>,
    ) -> Self {
        input.sort_unstable();
        body.sort_unstable();
        output.sort_unstable();
        Sections {
            input,
            body,
            output,
        }
    }

    pub fn input(&self) -> &[usize] {
        &self.input
    }

    pub fn body(&self) -> &[usize] {
        &self.body
    }

    pub fn output(&self) -> &[usize] {
        &self.output
    }
}

#[derive(Serialize, Deserialize)]
struct RawResource {
    #[serde(flatten)]
    hypergraph: Hypergraph,
    sections: Sections,
}

/// A hypergraph whose vertices are partitioned into sections. This is the
/// resource description a measurement pattern runs against.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawResource", into = "RawResource")]
pub struct SectionedResource {
    hypergraph: Hypergraph,
    sections: Sections,
}

impl TryFrom<RawResource> for SectionedResource {
    type Error = HypergraphError;

    fn try_from(raw: RawResource) -> Result<SectionedResource, HypergraphError> {
        SectionedResource::new(raw.hypergraph, raw.sections)
    }
}

impl From<SectionedResource> for RawResource {
    fn from(resource: SectionedResource) -> RawResource {
        RawResource {
            hypergraph: resource.hypergraph,
            sections: resource.sections,
        }
    }
}

impl SectionedResource {
    /// The sections must partition 1..=m exactly: no overlap, no gaps, no
    /// out-of-range vertices.
    pub fn new(
        hypergraph: Hypergraph,
        sections: Sections,
    ) -> Result<SectionedResource, HypergraphError> {
        let m = hypergraph.num_vertices();
        let bad = |problem: String| HypergraphError::BadSections {
            num_vertices: m,
            problem,
        };
        let mut seen = BTreeSet::new();
        for (name, list) in [
            ("input", &sections.input),
            ("body", &sections.body),
            ("output", &sections.output),
        ] {
            for &vertex in list {
                if vertex == 0 || vertex > m {
                    return Err(bad(format!(
                        "{name} section lists vertex {vertex}, which is out of range"
                    )));
                }
                if !seen.insert(vertex) {
                    return Err(bad(format!("vertex {vertex} appears in two sections")));
                }
            }
        }
        if seen.len() != m {
            let missing = (1..=m).find(|v| !seen.contains(v)).expect("gap exists");
            return Err(bad(format!("vertex {missing} is in no section")));
        }
        Ok(SectionedResource {
            hypergraph,
            sections,
        })
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.hypergraph
    }

    pub fn sections(&self) -> &Sections {
        &self.sections
    }

    pub fn num_vertices(&self) -> usize {
        self.hypergraph.num_vertices()
    }

    /// Whether a pattern may measure this vertex: input and body only.
    pub fn is_measurable(&self, vertex: usize) -> bool {
        self.sections.input.binary_search(&vertex).is_ok()
            || self.sections.body.binary_search(&vertex).is_ok()
    }

    pub fn build_state(&self) -> Result<StateVector, HypergraphError> {
        self.hypergraph.build_state()
    }
}

/// The worked example: three input vertices in |+⟩ with no mutual edges,
/// plus an injection ancilla on vertex 3. Measuring the ancilla in Y and
/// correcting turns vertex 3 into |+i⟩, a state no measurement-free
/// hypergraph resource can hold.
pub fn transformed_demo_resource() -> (SectionedResource, StateVector) {
    let bare = Hypergraph::new(3).expect("three vertices is a valid hypergraph");
    let (graph, ancilla) = bare
        .attach_injection_vertex(3)
        .expect("vertex 3 exists");
    let sections = Sections::new(vec![1, 2, 3], vec![ancilla], vec![]);
    let resource =
        SectionedResource::new(graph, sections).expect("sections partition the four vertices");
    let state = resource
        .build_state()
        .expect("four qubits is far below the cap");
    (resource, state)
}
