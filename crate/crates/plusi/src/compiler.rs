//! The catalytic transformation as a circuit-to-circuit compiler.
//!
//! Two lowering stages, composable end to end:
//!
//! * [`lower_cs`] rewrites an `{H, CS}` circuit into `{H, S, CCZ}` with one
//!   reused ancilla, replacing each CS by [`controlled_s_gadget`].
//! * [`compile_catalytic`] eliminates every S gate: the register grows by
//!   exactly two qubits (a flag prepared to |1⟩ out of H and CCZ, and the
//!   |+i⟩ catalyst), and each S on qubit q becomes [`catalytic_s_gadget`]
//!   wired to the flag, the catalyst, and q. The catalyst is never
//!   consumed, so the width is n + 2 no matter how many S gates there are.
//!
//! The compiled contract is exact, not approximate: running the inner
//! circuit on |0^{n+1}⟩ ⊗ |+i⟩ produces (U|0ⁿ⟩) ⊗ |1⟩ ⊗ |+i⟩, with U the
//! input circuit's unitary.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuits::{
    catalytic_s_gadget, controlled_s_gadget, duplicate_plus_i_gadget, prepare_one_gadget,
    Alphabet, Circuit, CircuitError, GateKind,
};
use crate::statevec::{NamedState, StateError, StateVector};

/// Most catalysts a parallel plan will schedule.
pub const MAX_PARALLEL_CATALYSTS: usize = 16;

#[derive(Debug, Error)]
pub enum CompileError {
    #[error("expected a {expected} circuit, got alphabet {got}")]
    WrongAlphabet { expected: &'static str, got: Alphabet },
    #[error("catalytic compilation needs at least 2 logical qubits, got {0}")]
    TooFewQubits(usize),
    #[error("parallel catalyst count {0} is outside 1..=16")]
    BadCatalystCount(usize),
    #[error("inconsistent catalytic program: {0}")]
    MalformedProgram(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    State(#[from] StateError),
}

#[derive(Serialize, Deserialize)]
struct RawProgram {
    inner: Circuit,
    n: usize,
    catalyst_qubit: usize,
    flag_qubit: usize,
    s_gate_count: usize,
}

/// A compiled catalytic program: an `HCCZ`-only circuit on n + 2 qubits.
/// Qubit n + 1 is the flag (driven to |1⟩ by the preparation prefix) and
/// qubit n + 2 carries the catalyst, supplied as |+i⟩ at the input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawProgram", into = "RawProgram")]
pub struct CatalyticProgram {
    inner: Circuit,
    n: usize,
    s_gate_count: usize,
    /// Gate counts after the preparation prefix and after each catalytic
    /// S block; the flag and catalyst factor out as |1⟩⊗|+i⟩ at each.
    /// Recomputable only at compile time, so not serialized: a program
    /// read back from JSON has no recorded boundaries.
    #[serde(skip)]
    boundaries: Vec<usize>,
}

impl TryFrom<RawProgram> for CatalyticProgram {
    type Error = CompileError;

    fn try_from(raw: RawProgram) -> Result<CatalyticProgram, CompileError> {
        if raw.n < 2 {
            return Err(CompileError::TooFewQubits(raw.n));
        }
        if raw.inner.alphabet() != Alphabet::HCCZ {
            return Err(CompileError::MalformedProgram(format!(
                "inner alphabet is {}, must be HCCZ",
                raw.inner.alphabet()
            )));
        }
        if raw.inner.num_qubits() != raw.n + 2 {
            return Err(CompileError::MalformedProgram(format!(
                "inner circuit has {} qubits, expected n + 2 = {}",
                raw.inner.num_qubits(),
                raw.n + 2
            )));
        }
        if raw.flag_qubit != raw.n + 1 || raw.catalyst_qubit != raw.n + 2 {
            return Err(CompileError::MalformedProgram(format!(
                "flag/catalyst qubits are {}/{}, expected {}/{}",
                raw.flag_qubit,
                raw.catalyst_qubit,
                raw.n + 1,
                raw.n + 2
            )));
        }
        Ok(CatalyticProgram {
            inner: raw.inner,
            n: raw.n,
            s_gate_count: raw.s_gate_count,
            boundaries: Vec::new(),
        })
    }
}

impl From<CatalyticProgram> for RawProgram {
    fn from(program: CatalyticProgram) -> RawProgram {
        RawProgram {
            n: program.n,
            catalyst_qubit: program.catalyst_qubit(),
            flag_qubit: program.flag_qubit(),
            s_gate_count: program.s_gate_count,
            inner: program.inner,
        }
    }
}

impl CatalyticProgram {
    pub fn inner(&self) -> &Circuit {
        &self.inner
    }

    /// Logical register width of the source circuit.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Qubit that holds |1⟩ from the preparation prefix onward.
    pub fn flag_qubit(&self) -> usize {
        self.n + 1
    }

    /// Qubit that carries the reusable |+i⟩ catalyst.
    pub fn catalyst_qubit(&self) -> usize {
        self.n + 2
    }

    pub fn s_gate_count(&self) -> usize {
        self.s_gate_count
    }

    /// Recorded gadget boundaries; empty for deserialized programs.
    pub fn boundaries(&self) -> &[usize] {
        &self.boundaries
    }

    /// The fixed input convention: |0⟩ on the n logical qubits and the
    /// flag, |+i⟩ on the catalyst.
    pub fn reference_input(&self) -> Result<StateVector, CompileError> {
        let mut factors = vec![NamedState::Zero; self.n + 1];
        factors.push(NamedState::PlusI);
        Ok(StateVector::product(&factors)?)
    }

    /// Run the inner circuit on the reference input.
    pub fn run(&self) -> Result<StateVector, CompileError> {
        Ok(self.inner.run(&self.reference_input()?)?)
    }

    /// Run, then factor off the flag and catalyst, returning the n-qubit
    /// logical state and the weight of the |1⟩⊗|+i⟩ component (1 up to
    /// float error when the program is sound).
    pub fn logical_output(&self) -> Result<(StateVector, f64), CompileError> {
        let full = self.run()?;
        let (rest, w_cat) =
            full.contract_qubit(self.catalyst_qubit(), &StateVector::named(NamedState::PlusI))?;
        let (logical, w_flag) =
            rest.contract_qubit(self.flag_qubit(), &StateVector::named(NamedState::One))?;
        Ok((logical, w_cat * w_flag))
    }

    /// Worst deviation of the flag/catalyst pair from |1⟩⊗|+i⟩ across all
    /// recorded gadget boundaries, as 1 minus the component weight.
    /// Returns 0 when no boundaries are recorded.
    pub fn catalyst_conservation_deviation(&self) -> Result<f64, CompileError> {
        let bra_one = StateVector::named(NamedState::One);
        let bra_catalyst = StateVector::named(NamedState::PlusI);
        let mut state = self.reference_input()?;
        let mut worst = 0.0f64;
        let mut pending = self.boundaries.iter().peekable();
        for (applied, gate) in self.inner.gates().iter().enumerate() {
            state.apply(gate)?;
            if pending.peek() == Some(&&(applied + 1)) {
                pending.next();
                let (rest, w_cat) = state.contract_qubit(self.catalyst_qubit(), &bra_catalyst)?;
                let (_, w_flag) = rest.contract_qubit(self.flag_qubit(), &bra_one)?;
                worst = worst.max((1.0 - w_cat * w_flag).abs());
            }
        }
        Ok(worst)
    }
}

/// Rewrite an `{H, CS}` circuit over `{H, S, CCZ}` using one ancilla
/// (qubit n + 1) that every CS gadget borrows and returns in |0⟩. For
/// any logical input |φ⟩, the output maps |φ⟩⊗|0⟩ to (U|φ⟩)⊗|0⟩.
pub fn lower_cs(circuit: &Circuit) -> Result<Circuit, CompileError> {
    if circuit.alphabet() != Alphabet::HCS {
        return Err(CompileError::WrongAlphabet {
            expected: "HCS",
            got: circuit.alphabet(),
        });
    }
    let ancilla = circuit.num_qubits() + 1;
    let gadget = controlled_s_gadget();
    let mut out = Circuit::new(ancilla, Alphabet::HSCCZ)?;
    for gate in circuit.gates() {
        match gate.kind() {
            GateKind::H => out.push(gate.clone())?,
            GateKind::CS => {
                let q = gate.qubits();
                out.append_mapped(&gadget, &[q[0], q[1], ancilla])?;
            }
            _ => unreachable!("HCS circuits contain only H and CS"),
        }
    }
    Ok(out)
}

/// Eliminate every S gate from an `{H, S, CCZ}` circuit (an `HCCZ` input
/// is accepted as the S-free special case). The output register has two
/// extra qubits: the preparation prefix drives qubit n + 1 to |1⟩, and
/// each S on q becomes the catalytic gadget on (n + 1, n + 2, q). H and
/// CCZ gates pass through verbatim.
pub fn compile_catalytic(circuit: &Circuit) -> Result<CatalyticProgram, CompileError> {
    match circuit.alphabet() {
        Alphabet::HSCCZ | Alphabet::HCCZ => {}
        other => {
            return Err(CompileError::WrongAlphabet {
                expected: "HSCCZ",
                got: other,
            })
        }
    }
    let n = circuit.num_qubits();
    if n < 2 {
        return Err(CompileError::TooFewQubits(n));
    }

    let mut inner = Circuit::new(n + 2, Alphabet::HCCZ)?;
    // The preparation acts on qubits n+1, n, n-1; the two lower ones are
    // still |0⟩ at this point and are returned to |0⟩.
    inner.append_mapped(&prepare_one_gadget(), &[n + 1, n, n - 1])?;
    let mut boundaries = vec![inner.len()];

    let s_gadget = catalytic_s_gadget();
    let mut s_gate_count = 0;
    for gate in circuit.gates() {
        match gate.kind() {
            GateKind::S => {
                let q = gate.qubits()[0];
                inner.append_mapped(&s_gadget, &[n + 1, n + 2, q])?;
                s_gate_count += 1;
                boundaries.push(inner.len());
            }
            GateKind::H | GateKind::CCZ => inner.push(gate.clone())?,
            _ => unreachable!("HSCCZ circuits contain only H, S and CCZ"),
        }
    }
    if boundaries.last() != Some(&inner.len()) {
        boundaries.push(inner.len());
    }

    Ok(CatalyticProgram {
        inner,
        n,
        s_gate_count,
        boundaries,
    })
}

/// Full pipeline from the two-gate set: lower `{H, CS}` to `{H, S, CCZ}`,
/// then compile catalytically. The CS ancilla becomes logical qubit n + 1
/// of the resulting program, so its register is n + 3 qubits wide.
pub fn compile_strict(circuit: &Circuit) -> Result<CatalyticProgram, CompileError> {
    compile_catalytic(&lower_cs(circuit)?)
}

/// One duplication in a parallel-catalyst schedule: the gadget runs on
/// (flag, fresh |0⟩, source catalyst) and leaves both fresh and source
/// holding |+i⟩.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DuplicationStep {
    pub flag: usize,
    pub fresh: usize,
    pub source: usize,
}

/// A chain schedule that fans one catalyst out to k: qubit 1 is the flag,
/// qubit 2 the initial catalyst, and qubits 3..=k+1 fresh |0⟩ ancillas.
/// Step j duplicates from the catalyst produced by step j − 1, so the
/// schedule is strictly sequential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParallelPlan {
    k: usize,
    schedule: Vec<DuplicationStep>,
}

impl ParallelPlan {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Fresh |0⟩ ancillas consumed: k − 1.
    pub fn extra_zero_ancillas(&self) -> usize {
        self.k - 1
    }

    pub fn schedule(&self) -> &[DuplicationStep] {
        &self.schedule
    }

    /// Register width of [`to_circuit`](Self::to_circuit): flag plus k
    /// catalyst slots.
    pub fn num_qubits(&self) -> usize {
        self.k + 1
    }

    /// The qubits that hold |+i⟩ after the schedule runs.
    pub fn catalyst_qubits(&self) -> Vec<usize> {
        (2..=self.k + 1).collect()
    }

    /// Realize the schedule as an `HCCZ` circuit on k + 1 qubits. On the
    /// input |1⟩ ⊗ |+i⟩ ⊗ |0⟩^{k−1} every catalyst slot ends in |+i⟩.
    pub fn to_circuit(&self) -> Result<Circuit, CompileError> {
        let gadget = duplicate_plus_i_gadget();
        let mut circuit = Circuit::new(self.num_qubits(), Alphabet::HCCZ)?;
        for step in &self.schedule {
            circuit.append_mapped(&gadget, &[step.flag, step.fresh, step.source])?;
        }
        Ok(circuit)
    }

    /// The matching input state: flag |1⟩, initial catalyst |+i⟩, fresh
    /// ancillas |0⟩.
    pub fn reference_input(&self) -> Result<StateVector, CompileError> {
        let mut factors = vec![NamedState::One, NamedState::PlusI];
        factors.extend(std::iter::repeat_n(NamedState::Zero, self.k - 1));
        Ok(StateVector::product(&factors)?)
    }
}

/// Plan k simultaneous catalysts. k = 1 is the degenerate no-duplication
/// plan; the cap of 16 keeps the verification circuit simulable.
pub fn plan_parallel(k: usize) -> Result<ParallelPlan, CompileError> {
    if k == 0 || k > MAX_PARALLEL_CATALYSTS {
        return Err(CompileError::BadCatalystCount(k));
    }
    let schedule = (1..k)
        .map(|j| DuplicationStep {
            flag: 1,
            fresh: 2 + j,
            source: 1 + j,
        })
        .collect();
    Ok(ParallelPlan { k, schedule })
}
