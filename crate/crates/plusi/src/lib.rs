//! Exact tools for running quantum circuits over `{H, CCZ}` with a
//! reusable `|+i⟩` catalyst.
//!
//! The gate set `{H, CCZ}` is real: no circuit over it can create the
//! state `|+i⟩ = (|0⟩ + i|1⟩)/√2` from computational-basis inputs. One
//! copy of that state, supplied as a catalyst, closes the gap. This
//! crate contains the whole toolchain around that fact:
//!
//! * [`statevec`]: a dense state-vector simulator with exact gate
//!   actions, Pauli measurements and qubit contraction.
//! * [`circuits`]: alphabet-checked circuit values, serializable to
//!   JSON, plus the fixed gadget constructors everything else builds on.
//! * [`compiler`]: rewrites `{H, S, CCZ}` circuits (and `{H, CS}` via a
//!   lowering pass) into `{H, CCZ}`-only programs driven by one
//!   catalyst, along with parallel catalyst duplication plans.
//! * [`hypergraph`]: hypergraph resource states, which are always real,
//!   and the Y-measurement injection that sidesteps that obstruction.
//! * [`mbqc`]: adaptive Pauli-measurement patterns with byproduct
//!   tracking in a Pauli frame.
//! * [`counts`]: closed-form resource-state qubit counts and budget
//!   frontiers.
//! * [`verify`]: named check suites that certify every identity by
//!   simulation, with deterministic JSON reports.
//! * [`cli`]: the `plusi` binary's surface over all of the above.
//!
//! Every identity used anywhere is checked somewhere: the gadgets by
//! exhaustive or randomized state comparison, the compiler against a
//! native-gate oracle, the counts against frozen values.

pub mod circuits;
pub mod cli;
pub mod compiler;
pub mod counts;
pub mod hypergraph;
pub mod mbqc;
pub mod statevec;
pub mod verify;

pub use circuits::{Alphabet, Circuit, Gate, GateKind};
pub use compiler::{CatalyticProgram, ParallelPlan};
pub use hypergraph::{Hypergraph, SectionedResource, Sections};
pub use mbqc::{MeasurementPattern, MeasurementStep, PauliFrame};
pub use statevec::{
    MeasurePolicy, MeasurementOutcome, NamedState, PauliBasis, Sign, StateVector,
};
