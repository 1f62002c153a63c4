//! Circuit IR over a fixed gate alphabet, plus the canonical gadget
//! circuits of the catalytic construction.
//!
//! A [`Circuit`] is an ordered gate list (index 0 applied first) tagged
//! with the [`Alphabet`] it is allowed to draw from. The tag is load
//! bearing: the compiler's whole point is that its output is `HCCZ` only,
//! so alphabet violations are construction errors, not conventions.
//!
//! Circuits serialize as JSON `{num_qubits, alphabet, gates:[{kind,
//! qubits}]}` with 1-based qubit indices; this is the CLI interchange
//! format. Deserialization revalidates everything.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::statevec::{StateError, StateVector};

/// Dense unitaries are capped at 10 qubits (a 1024 × 1024 matrix).
pub const MAX_MATRIX_QUBITS: usize = 10;

#[derive(Debug, Error)]
pub enum CircuitError {
    #[error("{kind} acts on {expected} qubit(s), got {got}")]
    WrongArity {
        kind: GateKind,
        expected: usize,
        got: usize,
    },
    #[error("qubit indices are 1-based, got 0")]
    ZeroIndex,
    #[error("gate qubits must be distinct, got {0:?}")]
    RepeatedQubit(Vec<usize>),
    #[error("qubit {qubit} is outside 1..={num_qubits}")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("{kind} is not in the {alphabet} alphabet")]
    OutsideAlphabet { kind: GateKind, alphabet: Alphabet },
    #[error("circuit must act on at least one qubit")]
    EmptyRegister,
    #[error("circuit acts on {0} qubits, state has {1}")]
    InputWidthMismatch(usize, usize),
    #[error("circuits act on different widths: {0} vs {1}")]
    WidthMismatch(usize, usize),
    #[error("dense matrices are limited to {MAX_MATRIX_QUBITS} qubits, circuit has {0}")]
    TooWideForMatrix(usize),
    #[error("mapping must assign {expected} distinct in-range targets")]
    BadMapping { expected: usize },
    #[error("unknown alphabet \"{0}\"")]
    UnknownAlphabet(String),
    #[error(transparent)]
    State(#[from] StateError),
}

/// Every gate kind this crate can simulate. The compiler only ever emits
/// H and CCZ; the rest exist as inputs and as test oracles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    #[serde(alias = "h")]
    H,
    #[serde(alias = "s")]
    S,
    #[serde(alias = "sdg", alias = "SDG")]
    Sdg,
    #[serde(alias = "t")]
    T,
    #[serde(alias = "x")]
    X,
    #[serde(alias = "y")]
    Y,
    #[serde(alias = "z")]
    Z,
    #[serde(alias = "cz")]
    CZ,
    #[serde(alias = "cs")]
    CS,
    #[serde(alias = "ccz")]
    CCZ,
    #[serde(alias = "swap", alias = "Swap")]
    SWAP,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::H
            | GateKind::S
            | GateKind::Sdg
            | GateKind::T
            | GateKind::X
            | GateKind::Y
            | GateKind::Z => 1,
            GateKind::CZ | GateKind::CS | GateKind::SWAP => 2,
            GateKind::CCZ => 3,
        }
    }

    /// Symmetric gates ignore qubit order; their index lists are kept
    /// sorted ascending so equal gates compare equal.
    pub fn is_symmetric(self) -> bool {
        matches!(
            self,
            GateKind::CZ | GateKind::CS | GateKind::CCZ | GateKind::SWAP
        )
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::Sdg => "Sdg",
            GateKind::T => "T",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::CZ => "CZ",
            GateKind::CS => "CS",
            GateKind::CCZ => "CCZ",
            GateKind::SWAP => "SWAP",
        })
    }
}

/// The gate subsets the crate reasons about. HCCZ ⊂ HSCCZ ⊂ FULL, and
/// HCS is the two-gate universal set the strict pipeline starts from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Alphabet {
    HCCZ,
    HSCCZ,
    HCS,
    #[serde(rename = "FULL", alias = "Full")]
    Full,
}

impl Alphabet {
    pub fn allows(self, kind: GateKind) -> bool {
        match self {
            Alphabet::HCCZ => matches!(kind, GateKind::H | GateKind::CCZ),
            Alphabet::HSCCZ => matches!(kind, GateKind::H | GateKind::S | GateKind::CCZ),
            Alphabet::HCS => matches!(kind, GateKind::H | GateKind::CS),
            Alphabet::Full => true,
        }
    }

    pub fn kinds(self) -> &'static [GateKind] {
        match self {
            Alphabet::HCCZ => &[GateKind::H, GateKind::CCZ],
            Alphabet::HSCCZ => &[GateKind::H, GateKind::S, GateKind::CCZ],
            Alphabet::HCS => &[GateKind::H, GateKind::CS],
            Alphabet::Full => &[
                GateKind::H,
                GateKind::S,
                GateKind::Sdg,
                GateKind::T,
                GateKind::X,
                GateKind::Y,
                GateKind::Z,
                GateKind::CZ,
                GateKind::CS,
                GateKind::CCZ,
                GateKind::SWAP,
            ],
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Alphabet::HCCZ => "HCCZ",
            Alphabet::HSCCZ => "HSCCZ",
            Alphabet::HCS => "HCS",
            Alphabet::Full => "FULL",
        })
    }
}

impl FromStr for Alphabet {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, CircuitError> {
        match s.to_ascii_uppercase().as_str() {
            "HCCZ" => Ok(Alphabet::HCCZ),
            "HSCCZ" => Ok(Alphabet::HSCCZ),
            "HCS" => Ok(Alphabet::HCS),
            "FULL" => Ok(Alphabet::Full),
            other => Err(CircuitError::UnknownAlphabet(other.to_string())),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RawGate {
    kind: GateKind,
    qubits: Vec<usize>,
}

/// One gate application. Arity and distinctness are checked at
/// construction; symmetric gates store their qubits ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGate", into = "RawGate")]
pub struct Gate {
    kind: GateKind,
    qubits: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: &[usize]) -> Result<Gate, CircuitError> {
        if qubits.len() != kind.arity() {
            return Err(CircuitError::WrongArity {
                kind,
                expected: kind.arity(),
                got: qubits.len(),
            });
        }
        if qubits.contains(&0) {
            return Err(CircuitError::ZeroIndex);
        }
        let mut qubits = qubits.to_vec();
        if kind.is_symmetric() {
            qubits.sort_unstable();
        }
        if qubits.windows(2).any(|w| w[0] == w[1])
            || (!kind.is_symmetric() && has_duplicates(&qubits))
        {
            return Err(CircuitError::RepeatedQubit(qubits));
        }
        Ok(Gate { kind, qubits })
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    /// Same gate on relabeled wires; symmetric gates re-sort.
    pub fn mapped(&self, map: impl Fn(usize) -> usize) -> Result<Gate, CircuitError> {
        let qubits: Vec<usize> = self.qubits.iter().map(|&q| map(q)).collect();
        Gate::new(self.kind, &qubits)
    }

    fn literal(kind: GateKind, qubits: &[usize]) -> Gate {
        Gate::new(kind, qubits).expect("literal gate indices are valid")
    }

    // Shorthand constructors for literal circuits. These panic on
    // repeated indices; use Gate::new for untrusted input.

    pub fn h(q: usize) -> Gate {
        Gate::literal(GateKind::H, &[q])
    }

    pub fn s(q: usize) -> Gate {
        Gate::literal(GateKind::S, &[q])
    }

    pub fn sdg(q: usize) -> Gate {
        Gate::literal(GateKind::Sdg, &[q])
    }

    pub fn t(q: usize) -> Gate {
        Gate::literal(GateKind::T, &[q])
    }

    pub fn x(q: usize) -> Gate {
        Gate::literal(GateKind::X, &[q])
    }

    pub fn y(q: usize) -> Gate {
        Gate::literal(GateKind::Y, &[q])
    }

    pub fn z(q: usize) -> Gate {
        Gate::literal(GateKind::Z, &[q])
    }

    pub fn cz(a: usize, b: usize) -> Gate {
        Gate::literal(GateKind::CZ, &[a, b])
    }

    pub fn cs(a: usize, b: usize) -> Gate {
        Gate::literal(GateKind::CS, &[a, b])
    }

    pub fn ccz(a: usize, b: usize, c: usize) -> Gate {
        Gate::literal(GateKind::CCZ, &[a, b, c])
    }

    pub fn swap(a: usize, b: usize) -> Gate {
        Gate::literal(GateKind::SWAP, &[a, b])
    }
}

impl TryFrom<RawGate> for Gate {
    type Error = CircuitError;

    fn try_from(raw: RawGate) -> Result<Gate, CircuitError> {
        Gate::new(raw.kind, &raw.qubits)
    }
}

impl From<Gate> for RawGate {
    fn from(gate: Gate) -> RawGate {
        RawGate {
            kind: gate.kind,
            qubits: gate.qubits,
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        let mut sep = " ";
        for q in &self.qubits {
            write!(f, "{sep}{q}")?;
            sep = ",";
        }
        Ok(())
    }
}

fn has_duplicates(qubits: &[usize]) -> bool {
    for (i, a) in qubits.iter().enumerate() {
        if qubits[i + 1..].contains(a) {
            return true;
        }
    }
    false
}

#[derive(Serialize, Deserialize)]
struct RawCircuit {
    num_qubits: usize,
    alphabet: Alphabet,
    gates: Vec<Gate>,
}

/// An ordered gate list on a fixed-width register, restricted to one
/// alphabet. Index 0 is applied first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCircuit", into = "RawCircuit")]
pub struct Circuit {
    num_qubits: usize,
    alphabet: Alphabet,
    gates: Vec<Gate>,
}

impl TryFrom<RawCircuit> for Circuit {
    type Error = CircuitError;

    fn try_from(raw: RawCircuit) -> Result<Circuit, CircuitError> {
        Circuit::from_gates(raw.num_qubits, raw.alphabet, raw.gates)
    }
}

impl From<Circuit> for RawCircuit {
    fn from(circuit: Circuit) -> RawCircuit {
        RawCircuit {
            num_qubits: circuit.num_qubits,
            alphabet: circuit.alphabet,
            gates: circuit.gates,
        }
    }
}

impl Circuit {
    pub fn new(num_qubits: usize, alphabet: Alphabet) -> Result<Circuit, CircuitError> {
        if num_qubits == 0 {
            return Err(CircuitError::EmptyRegister);
        }
        Ok(Circuit {
            num_qubits,
            alphabet,
            gates: Vec::new(),
        })
    }

    pub fn from_gates(
        num_qubits: usize,
        alphabet: Alphabet,
        gates: Vec<Gate>,
    ) -> Result<Circuit, CircuitError> {
        let mut circuit = Circuit::new(num_qubits, alphabet)?;
        for gate in gates {
            circuit.push(gate)?;
        }
        Ok(circuit)
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        if !self.alphabet.allows(gate.kind()) {
            return Err(CircuitError::OutsideAlphabet {
                kind: gate.kind(),
                alphabet: self.alphabet,
            });
        }
        for &q in gate.qubits() {
            if q > self.num_qubits {
                return Err(CircuitError::QubitOutOfRange {
                    qubit: q,
                    num_qubits: self.num_qubits,
                });
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Splice another circuit in, relabeling its wires: `mapping[i]` is
    /// the target of the other circuit's qubit i+1. Targets must be
    /// distinct and in range; gates must fit this circuit's alphabet.
    pub fn append_mapped(&mut self, other: &Circuit, mapping: &[usize]) -> Result<(), CircuitError> {
        if mapping.len() != other.num_qubits
            || mapping.iter().any(|&t| t == 0 || t > self.num_qubits)
            || has_duplicates(mapping)
        {
            return Err(CircuitError::BadMapping {
                expected: other.num_qubits,
            });
        }
        for gate in &other.gates {
            self.push(gate.mapped(|q| mapping[q - 1])?)?;
        }
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn count_kind(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind() == kind).count()
    }

    /// Apply every gate in order to a copy of the input state.
    pub fn run(&self, input: &StateVector) -> Result<StateVector, CircuitError> {
        if input.num_qubits() != self.num_qubits {
            return Err(CircuitError::InputWidthMismatch(
                self.num_qubits,
                input.num_qubits(),
            ));
        }
        let mut state = input.clone();
        for gate in &self.gates {
            state.apply(gate)?;
        }
        Ok(state)
    }

    /// The circuit's unitary as a dense matrix, column j being the image
    /// of basis state j. Capped at 10 qubits.
    pub fn unitary(&self) -> Result<Unitary, CircuitError> {
        if self.num_qubits > MAX_MATRIX_QUBITS {
            return Err(CircuitError::TooWideForMatrix(self.num_qubits));
        }
        let dim = 1usize << self.num_qubits;
        let mut cols = Vec::with_capacity(dim);
        for j in 0..dim {
            let basis = StateVector::basis_index(self.num_qubits, j)?;
            cols.push(self.run(&basis)?.amps().to_vec());
        }
        Ok(Unitary { dim, cols })
    }
}

/// Dense unitary matrix, stored column major.
#[derive(Clone, Debug)]
pub struct Unitary {
    dim: usize,
    cols: Vec<Vec<Complex64>>,
}

impl Unitary {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.cols[col][row]
    }

    pub fn column(&self, col: usize) -> &[Complex64] {
        &self.cols[col]
    }

    /// Largest entrywise distance, with no phase freedom.
    pub fn max_entry_distance(&self, other: &Unitary) -> Result<f64, CircuitError> {
        self.check_dim(other)?;
        let mut max = 0.0f64;
        for (a, b) in self.cols.iter().zip(&other.cols) {
            for (x, y) in a.iter().zip(b) {
                max = max.max((x - y).norm());
            }
        }
        Ok(max)
    }

    /// Largest entrywise distance after aligning one global phase, read
    /// off at the other matrix's largest-magnitude entry.
    pub fn phase_aligned_distance(&self, other: &Unitary) -> Result<f64, CircuitError> {
        self.check_dim(other)?;
        let mut best = (0usize, 0usize);
        let mut best_mag = -1.0f64;
        for (j, col) in other.cols.iter().enumerate() {
            for (i, y) in col.iter().enumerate() {
                if y.norm_sqr() > best_mag {
                    best_mag = y.norm_sqr();
                    best = (i, j);
                }
            }
        }
        let ratio = self.entry(best.0, best.1) / other.entry(best.0, best.1);
        let lambda = if ratio.norm() < 1e-150 {
            Complex64::new(1.0, 0.0)
        } else {
            ratio / ratio.norm()
        };
        let mut max = 0.0f64;
        for (a, b) in self.cols.iter().zip(&other.cols) {
            for (x, y) in a.iter().zip(b) {
                max = max.max((x - lambda * y).norm());
            }
        }
        Ok(max)
    }

    fn check_dim(&self, other: &Unitary) -> Result<(), CircuitError> {
        if self.dim != other.dim {
            return Err(CircuitError::WidthMismatch(self.dim, other.dim));
        }
        Ok(())
    }
}

/// Matrix-level equivalence up to one global phase, entrywise within
/// `tol`. Both circuits must fit the 10-qubit matrix cap.
pub fn equivalent(c1: &Circuit, c2: &Circuit, tol: f64) -> Result<bool, CircuitError> {
    if c1.num_qubits() != c2.num_qubits() {
        return Err(CircuitError::WidthMismatch(c1.num_qubits(), c2.num_qubits()));
    }
    Ok(c1.unitary()?.phase_aligned_distance(&c2.unitary()?)? <= tol)
}

/// State-level equivalence on random inputs, for circuits too wide for
/// dense matrices. Not a proof, but 20 Haar-flavored states at tol 1e-9
/// leave no realistic room for disagreement.
pub fn equivalent_on_random_states<R: Rng + ?Sized>(
    c1: &Circuit,
    c2: &Circuit,
    samples: usize,
    tol: f64,
    rng: &mut R,
) -> Result<bool, CircuitError> {
    if c1.num_qubits() != c2.num_qubits() {
        return Err(CircuitError::WidthMismatch(c1.num_qubits(), c2.num_qubits()));
    }
    for _ in 0..samples {
        let input = StateVector::random(c1.num_qubits(), rng)?;
        let a = c1.run(&input)?;
        let b = c2.run(&input)?;
        if !a.equal_up_to_global_phase(&b, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Uniformly random circuit over the alphabet's kinds that fit the
/// register, for property tests and compiler fuzzing.
pub fn random_circuit<R: Rng + ?Sized>(
    num_qubits: usize,
    num_gates: usize,
    alphabet: Alphabet,
    rng: &mut R,
) -> Result<Circuit, CircuitError> {
    let kinds: Vec<GateKind> = alphabet
        .kinds()
        .iter()
        .copied()
        .filter(|k| k.arity() <= num_qubits)
        .collect();
    let mut circuit = Circuit::new(num_qubits, alphabet)?;
    for _ in 0..num_gates {
        let kind = kinds[rng.random_range(0..kinds.len())];
        let mut qubits: Vec<usize> = Vec::with_capacity(kind.arity());
        while qubits.len() < kind.arity() {
            let q = rng.random_range(1..=num_qubits);
            if !qubits.contains(&q) {
                qubits.push(q);
            }
        }
        circuit.push(Gate::new(kind, &qubits)?)?;
    }
    Ok(circuit)
}

/// Controlled-S over {H, S, CCZ} on three qubits: controls 1, 2 and one
/// ancilla (qubit 3) that enters and leaves in |0⟩. On |jk⟩⊗|0⟩ it acts
/// as Λ(S)⊗I, so the phase i appears exactly when j = k = 1. The whole
/// 8-dim unitary is not Λ(S)⊗I; the contract holds on the |0⟩-ancilla
/// subspace only.
pub fn controlled_s_gadget() -> Circuit {
    let gates = vec![
        Gate::h(3),
        Gate::ccz(1, 2, 3),
        Gate::h(3),
        Gate::s(3),
        Gate::h(3),
        Gate::ccz(1, 2, 3),
        Gate::h(3),
    ];
    Circuit::from_gates(3, Alphabet::HSCCZ, gates).expect("canonical construction is valid")
}

/// CZ on qubits 1,2 from CCZ and H alone: the block (CCZ then H on
/// qubit 3) repeated four times equals Λ(Z)₁₂ ⊗ I exactly, with no
/// phase freedom and no constraint on qubit 3's state.
pub fn cz_from_ccz_gadget() -> Circuit {
    let mut gates = Vec::with_capacity(8);
    for _ in 0..4 {
        gates.push(Gate::ccz(1, 2, 3));
        gates.push(Gate::h(3));
    }
    Circuit::from_gates(3, Alphabet::HCCZ, gates).expect("canonical construction is valid")
}

/// Prepare |1⟩ out of nothing but H and CCZ: maps |000⟩ to exactly
/// |100⟩, so qubit 1 ends in |1⟩ and qubits 2, 3 return to |0⟩. The
/// construction is (H⊗H)·Λ(Z)·(I⊗H)·Λ(Z)·(I⊗H)·Λ(Z)·(H⊗H) on qubits
/// 1,2 (rightmost factor first), with every Λ(Z) realized by
/// [`cz_from_ccz_gadget`] through qubit 3: 30 gates in all.
pub fn prepare_one_gadget() -> Circuit {
    let block = cz_from_ccz_gadget();
    let mut gates = vec![Gate::h(1), Gate::h(2)];
    gates.extend_from_slice(block.gates());
    gates.push(Gate::h(2));
    gates.extend_from_slice(block.gates());
    gates.push(Gate::h(2));
    gates.extend_from_slice(block.gates());
    gates.push(Gate::h(1));
    gates.push(Gate::h(2));
    Circuit::from_gates(3, Alphabet::HCCZ, gates).expect("canonical construction is valid")
}

/// Former half of the catalytic S gadget. With qubit 1 held at |1⟩ so
/// each CCZ acts as CZ on qubits 2,3, it maps |1⟩⊗|+i⟩⊗|ψ⟩ to
/// |1⟩⊗(S|ψ⟩)⊗|+i⟩: the S lands on qubit 2 and the catalyst moves to
/// qubit 3.
pub fn catalytic_s_former() -> Circuit {
    let gates = vec![
        Gate::h(3),
        Gate::ccz(1, 2, 3),
        Gate::h(2),
        Gate::h(3),
        Gate::ccz(1, 2, 3),
        Gate::h(2),
        Gate::ccz(1, 2, 3),
    ];
    Circuit::from_gates(3, Alphabet::HCCZ, gates).expect("canonical construction is valid")
}

/// Latter half of the catalytic S gadget: three CZ-conjugations that
/// equal SWAP on qubits 2,3 whenever qubit 1 is |1⟩ (the standard
/// three-CZ swap, each CZ dressed in H pairs).
pub fn catalytic_s_latter() -> Circuit {
    let gates = vec![
        Gate::h(3),
        Gate::ccz(1, 2, 3),
        Gate::h(3),
        Gate::h(2),
        Gate::ccz(1, 2, 3),
        Gate::h(2),
        Gate::h(3),
        Gate::ccz(1, 2, 3),
        Gate::h(3),
    ];
    Circuit::from_gates(3, Alphabet::HCCZ, gates).expect("canonical construction is valid")
}

/// Apply S through the catalyst: maps |1⟩⊗|+i⟩⊗|ψ⟩ to |1⟩⊗|+i⟩⊗(S|ψ⟩)
/// exactly, for every single-qubit |ψ⟩. Qubit 1 is the |1⟩ flag, qubit 2
/// the catalyst, qubit 3 the data. The flag and catalyst come back
/// unchanged, which is what makes the catalyst reusable.
pub fn catalytic_s_gadget() -> Circuit {
    let mut gates = catalytic_s_former().gates().to_vec();
    gates.extend_from_slice(catalytic_s_latter().gates());
    Circuit::from_gates(3, Alphabet::HCCZ, gates).expect("canonical construction is valid")
}

/// Duplicate the catalyst: maps |1⟩⊗|0⟩⊗|+i⟩ to |1⟩⊗|+i⟩⊗|+i⟩ exactly.
/// Qubit 1 is the |1⟩ flag, qubit 2 a fresh |0⟩, qubit 3 the existing
/// catalyst. Five gates; with the flag at |0⟩ the CCZs idle and the
/// circuit degrades to H on qubit 2.
pub fn duplicate_plus_i_gadget() -> Circuit {
    let gates = vec![
        Gate::h(2),
        Gate::h(3),
        Gate::ccz(1, 2, 3),
        Gate::h(3),
        Gate::ccz(1, 2, 3),
    ];
    Circuit::from_gates(3, Alphabet::HCCZ, gates).expect("canonical construction is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::{NamedState, C_I, C_ONE};
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    fn ket(bits: &str) -> StateVector {
        StateVector::basis(bits.len(), bits).unwrap()
    }

    #[test]
    fn gate_construction_validates() {
        assert!(matches!(
            Gate::new(GateKind::H, &[1, 2]),
            Err(CircuitError::WrongArity { .. })
        ));
        assert!(matches!(
            Gate::new(GateKind::CZ, &[2, 2]),
            Err(CircuitError::RepeatedQubit(_))
        ));
        assert!(matches!(
            Gate::new(GateKind::H, &[0]),
            Err(CircuitError::ZeroIndex)
        ));
        // Symmetric gates normalize their qubit order.
        let g = Gate::new(GateKind::CCZ, &[3, 1, 2]).unwrap();
        assert_eq!(g.qubits(), &[1, 2, 3]);
        assert_eq!(g, Gate::ccz(1, 2, 3));
    }

    #[test]
    fn circuit_enforces_alphabet_and_range() {
        let mut c = Circuit::new(3, Alphabet::HCCZ).unwrap();
        assert!(matches!(
            c.push(Gate::s(1)),
            Err(CircuitError::OutsideAlphabet { .. })
        ));
        assert!(matches!(
            c.push(Gate::h(4)),
            Err(CircuitError::QubitOutOfRange { .. })
        ));
        c.push(Gate::ccz(1, 2, 3)).unwrap();
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn run_applies_gates_in_order() {
        let c = Circuit::new(2, Alphabet::Full).unwrap();
        let input = ket("01");
        assert!(c.run(&input).unwrap().distance(&input).unwrap() < 1e-15);

        let c = Circuit::from_gates(1, Alphabet::Full, vec![Gate::h(1)]).unwrap();
        let plus = StateVector::named(NamedState::Plus);
        assert!(c.run(&ket("0")).unwrap().distance(&plus).unwrap() < 1e-15);
    }

    #[test]
    fn controlled_s_gadget_matches_cs_on_ancilla_zero() {
        let gadget = controlled_s_gadget();
        assert_eq!(gadget.alphabet(), Alphabet::HSCCZ);
        // Phase i shows up exactly on |110⟩.
        for (bits, phase) in [
            ("000", C_ONE),
            ("010", C_ONE),
            ("100", C_ONE),
            ("110", C_I),
        ] {
            let out = gadget.run(&ket(bits)).unwrap();
            let index = usize::from_str_radix(bits, 2).unwrap();
            assert!(
                (out.amp(index) - phase).norm() < 1e-12,
                "input {bits}: amp {}",
                out.amp(index)
            );
        }
        // And against a native CS on random two-qubit inputs.
        let mut r = rng(41);
        let cs = Circuit::from_gates(3, Alphabet::Full, vec![Gate::cs(1, 2)]).unwrap();
        for _ in 0..25 {
            let two = StateVector::random(2, &mut r).unwrap();
            let input = two.tensor(&ket("0")).unwrap();
            let a = gadget.run(&input).unwrap();
            let b = cs.run(&input).unwrap();
            assert!(a.distance(&b).unwrap() < 1e-12);
        }
    }

    #[test]
    fn cz_from_ccz_is_exactly_cz() {
        let gadget = cz_from_ccz_gadget();
        assert_eq!(gadget.len(), 8);
        assert_eq!(gadget.alphabet(), Alphabet::HCCZ);
        let literal = Circuit::from_gates(3, Alphabet::Full, vec![Gate::cz(1, 2)]).unwrap();
        let dist = gadget
            .unitary()
            .unwrap()
            .max_entry_distance(&literal.unitary().unwrap())
            .unwrap();
        assert!(dist < 1e-12, "entrywise distance {dist}");
        assert!(equivalent(&gadget, &literal, 1e-10).unwrap());
    }

    #[test]
    fn prepare_one_outputs_exactly_100() {
        let gadget = prepare_one_gadget();
        assert_eq!(gadget.alphabet(), Alphabet::HCCZ);
        assert_eq!(gadget.len(), 30);
        let out = gadget.run(&ket("000")).unwrap();
        let target = ket("100");
        assert!((out.fidelity(&target).unwrap() - 1.0).abs() < 1e-12);
        assert!(out.population_one(2).unwrap() < 1e-20);
        assert!(out.population_one(3).unwrap() < 1e-20);
    }

    #[test]
    fn catalytic_s_former_moves_s_psi_to_qubit_2() {
        let former = catalytic_s_former();
        let mut r = rng(5);
        for _ in 0..20 {
            let psi = StateVector::random(1, &mut r).unwrap();
            let input = ket("1")
                .tensor(&StateVector::named(NamedState::PlusI))
                .unwrap()
                .tensor(&psi)
                .unwrap();
            let mut s_psi = psi.clone();
            s_psi.apply(&Gate::s(1)).unwrap();
            let expected = ket("1")
                .tensor(&s_psi)
                .unwrap()
                .tensor(&StateVector::named(NamedState::PlusI))
                .unwrap();
            let out = former.run(&input).unwrap();
            assert!(out.distance(&expected).unwrap() < 1e-12);
        }
    }

    #[test]
    fn catalytic_s_latter_swaps_on_flag_subspace() {
        let latter = catalytic_s_latter();
        let swap = Circuit::from_gates(3, Alphabet::Full, vec![Gate::swap(2, 3)]).unwrap();
        let mut r = rng(6);
        for _ in 0..20 {
            let pair = StateVector::random(2, &mut r).unwrap();
            let input = ket("1").tensor(&pair).unwrap();
            let a = latter.run(&input).unwrap();
            let b = swap.run(&input).unwrap();
            assert!(a.distance(&b).unwrap() < 1e-12);
        }
    }

    #[test]
    fn catalytic_s_applies_s_and_returns_catalyst() {
        let gadget = catalytic_s_gadget();
        assert_eq!(gadget.alphabet(), Alphabet::HCCZ);
        assert_eq!(gadget.len(), 16);
        let flag_catalyst = ket("1")
            .tensor(&StateVector::named(NamedState::PlusI))
            .unwrap();
        let mut r = rng(7);
        for _ in 0..100 {
            let psi = StateVector::random(1, &mut r).unwrap();
            let mut s_psi = psi.clone();
            s_psi.apply(&Gate::s(1)).unwrap();
            let input = flag_catalyst.tensor(&psi).unwrap();
            let expected = flag_catalyst.tensor(&s_psi).unwrap();
            let out = gadget.run(&input).unwrap();
            assert!(out.distance(&expected).unwrap() < 1e-10);
        }
    }

    #[test]
    fn duplication_copies_the_catalyst() {
        let gadget = duplicate_plus_i_gadget();
        assert_eq!(gadget.len(), 5);
        let plus_i = StateVector::named(NamedState::PlusI);
        let input = ket("10").tensor(&plus_i).unwrap();
        let expected = ket("1").tensor(&plus_i).unwrap().tensor(&plus_i).unwrap();
        let out = gadget.run(&input).unwrap();
        assert!(out.distance(&expected).unwrap() < 1e-12);

        // Flag off: both CCZs idle, qubit 2 just gets an H.
        let off_input = ket("00").tensor(&plus_i).unwrap();
        let off_expected = ket("0")
            .tensor(&StateVector::named(NamedState::Plus))
            .unwrap()
            .tensor(&plus_i)
            .unwrap();
        let out = gadget.run(&off_input).unwrap();
        assert!(out.distance(&off_expected).unwrap() < 1e-12);
    }

    #[test]
    fn equivalence_distinguishes_h_from_x() {
        let h = Circuit::from_gates(1, Alphabet::Full, vec![Gate::h(1)]).unwrap();
        let x = Circuit::from_gates(1, Alphabet::Full, vec![Gate::x(1)]).unwrap();
        assert!(!equivalent(&h, &x, 1e-10).unwrap());
        assert!(equivalent(&h, &h, 1e-12).unwrap());

        let mut r = rng(9);
        assert!(equivalent_on_random_states(&h, &h, 10, 1e-10, &mut r).unwrap());
        assert!(!equivalent_on_random_states(&h, &x, 10, 1e-10, &mut r).unwrap());
    }

    #[test]
    fn gate_involutions_hold_exactly() {
        let mut r = rng(10);
        let doubles = [
            Gate::h(2),
            Gate::x(1),
            Gate::z(3),
            Gate::cz(1, 3),
            Gate::ccz(1, 2, 3),
            Gate::swap(1, 2),
        ];
        for gate in doubles {
            let s = StateVector::random(3, &mut r).unwrap();
            let mut t = s.clone();
            t.apply(&gate).unwrap();
            t.apply(&gate).unwrap();
            assert!(s.distance(&t).unwrap() < 1e-12, "{gate} squared is not I");
        }
        // S² = Z and S⁴ = I.
        let s = StateVector::random(1, &mut r).unwrap();
        let mut twice = s.clone();
        twice.apply(&Gate::s(1)).unwrap();
        twice.apply(&Gate::s(1)).unwrap();
        let z = s.applied(&Gate::z(1)).unwrap();
        assert!(twice.distance(&z).unwrap() < 1e-12);
        let mut four = twice;
        four.apply(&Gate::s(1)).unwrap();
        four.apply(&Gate::s(1)).unwrap();
        assert!(four.distance(&s).unwrap() < 1e-12);
    }

    #[test]
    fn serde_roundtrip_and_validation() {
        let circuit = catalytic_s_gadget();
        let json = serde_json::to_string(&circuit).unwrap();
        let back: Circuit = serde_json::from_str(&json).unwrap();
        assert_eq!(back, circuit);

        // Top-level shape sanity: fields and 1-based indices.
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["num_qubits"], 3);
        assert_eq!(value["alphabet"], "HCCZ");
        assert_eq!(value["gates"][0]["kind"], "H");
        assert_eq!(value["gates"][0]["qubits"][0], 3);

        // Alphabet violations and bad gates fail to parse.
        let bad = r#"{"num_qubits":2,"alphabet":"HCCZ","gates":[{"kind":"S","qubits":[1]}]}"#;
        assert!(serde_json::from_str::<Circuit>(bad).is_err());
        let bad = r#"{"num_qubits":3,"alphabet":"FULL","gates":[{"kind":"CZ","qubits":[2,2]}]}"#;
        assert!(serde_json::from_str::<Circuit>(bad).is_err());
        let bad = r#"{"num_qubits":2,"alphabet":"FULL","gates":[{"kind":"H","qubits":[7]}]}"#;
        assert!(serde_json::from_str::<Circuit>(bad).is_err());
        // Unsorted symmetric qubit lists are normalized, not rejected.
        let ok = r#"{"num_qubits":3,"alphabet":"FULL","gates":[{"kind":"CCZ","qubits":[3,1,2]}]}"#;
        let c: Circuit = serde_json::from_str(ok).unwrap();
        assert_eq!(c.gates()[0].qubits(), &[1, 2, 3]);
    }

    #[test]
    fn random_circuits_respect_their_alphabet() {
        let mut r = rng(12);
        for alphabet in [Alphabet::HCCZ, Alphabet::HSCCZ, Alphabet::HCS, Alphabet::Full] {
            for n in 1..=4usize {
                let c = random_circuit(n, 30, alphabet, &mut r).unwrap();
                assert_eq!(c.len(), 30);
                assert!(c.gates().iter().all(|g| alphabet.allows(g.kind())));
                assert!(c
                    .gates()
                    .iter()
                    .all(|g| g.qubits().iter().all(|&q| q >= 1 && q <= n)));
            }
        }
    }

    #[test]
    fn append_mapped_relabels_wires() {
        let mut big = Circuit::new(5, Alphabet::HCCZ).unwrap();
        big.append_mapped(&duplicate_plus_i_gadget(), &[5, 2, 4]).unwrap();
        assert_eq!(big.gates()[0], Gate::h(2));
        assert_eq!(big.gates()[2], Gate::ccz(2, 4, 5));

        let err = big.append_mapped(&duplicate_plus_i_gadget(), &[1, 1, 2]);
        assert!(matches!(err, Err(CircuitError::BadMapping { .. })));
    }

    #[test]
    fn unitary_columns_are_basis_images() {
        let h = Circuit::from_gates(1, Alphabet::Full, vec![Gate::h(1)]).unwrap();
        let u = h.unitary().unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((u.entry(0, 0) - Complex64::new(r, 0.0)).norm() < 1e-15);
        assert!((u.entry(1, 1) - Complex64::new(-r, 0.0)).norm() < 1e-15);

        let wide = Circuit::new(11, Alphabet::Full).unwrap();
        assert!(matches!(
            wide.unitary(),
            Err(CircuitError::TooWideForMatrix(11))
        ));
    }
}
