//! Dense state-vector simulation over at most 24 qubits.
//!
//! Indexing convention, used everywhere in this crate: qubit 1 is the most
//! significant bit of the basis index (the top wire of a circuit diagram).
//! For three qubits the basis index 0b100 is |100⟩, with qubit 1 excited,
//! so a ket label reads left to right as qubits 1, 2, 3.
//!
//! Every constructor returns a normalized state and every gate application
//! preserves the norm to 1e-12. Measuring a Pauli collapses the state but
//! leaves the measured qubit in the register, sitting in the observed
//! eigenstate; removing a qubit is a separate explicit contraction.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuits::{Gate, GateKind};

/// Hard cap on register width. 2^24 amplitudes is 256 MiB; beyond that a
/// dense simulator stops being a desk-scale tool.
pub const MAX_QUBITS: usize = 24;

/// Tolerance for norm and probability bookkeeping.
pub const NORM_TOL: f64 = 1e-12;

/// Smallest branch probability accepted when postselecting or contracting.
pub const MIN_BRANCH_PROBABILITY: f64 = 1e-12;

pub(crate) const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const C_ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const C_I: Complex64 = Complex64::new(0.0, 1.0);

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Error)]
pub enum StateError {
    #[error("register width {0} is outside 1..=24")]
    WidthOutOfRange(usize),
    #[error("bitstring \"{bits}\" does not describe {width} qubits")]
    BadBitstring { bits: String, width: usize },
    #[error("amplitude vector length {0} is not a supported power of two")]
    BadAmplitudeCount(usize),
    #[error("state has norm {0}, expected 1 within 1e-12")]
    NotNormalized(f64),
    #[error("cannot normalize a vector with negligible norm")]
    ZeroVector,
    #[error("qubit {qubit} is outside 1..={width}")]
    QubitOutOfRange { qubit: usize, width: usize },
    #[error("qubit counts differ: {0} vs {1}")]
    WidthMismatch(usize, usize),
    #[error("postselected {sign} branch has probability {probability:.3e}")]
    ImpossiblePostselection { sign: Sign, probability: f64 },
    #[error("contraction leaves weight {0:.3e}, below 1e-12")]
    NegligibleOverlap(f64),
    #[error("unknown state name \"{0}\"")]
    UnknownStateName(String),
    #[error("unknown Pauli basis \"{0}\"")]
    UnknownBasis(String),
    #[error("unknown outcome sign \"{0}\"")]
    UnknownSign(String),
    #[error("eigenvalue must be +1 or -1, got {0}")]
    BadEigenvalue(i8),
}

/// The three single-qubit measurement bases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PauliBasis {
    X,
    Y,
    Z,
}

impl fmt::Display for PauliBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PauliBasis::X => "X",
            PauliBasis::Y => "Y",
            PauliBasis::Z => "Z",
        })
    }
}

impl FromStr for PauliBasis {
    type Err = StateError;

    fn from_str(s: &str) -> Result<Self, StateError> {
        match s {
            "X" | "x" => Ok(PauliBasis::X),
            "Y" | "y" => Ok(PauliBasis::Y),
            "Z" | "z" => Ok(PauliBasis::Z),
            other => Err(StateError::UnknownBasis(other.to_string())),
        }
    }
}

/// Measurement outcome sign, the ±1 eigenvalue. Serialized as the integer
/// eigenvalue so outcome logs read naturally.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn eigenvalue(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl From<Sign> for i8 {
    fn from(sign: Sign) -> i8 {
        match sign {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = StateError;

    fn try_from(value: i8) -> Result<Self, StateError> {
        match value {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(StateError::BadEigenvalue(other)),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

impl FromStr for Sign {
    type Err = StateError;

    fn from_str(s: &str) -> Result<Self, StateError> {
        match s {
            "+1" | "+" | "plus" => Ok(Sign::Plus),
            "-1" | "-" | "minus" => Ok(Sign::Minus),
            other => Err(StateError::UnknownSign(other.to_string())),
        }
    }
}

/// Result of one Pauli measurement: the observed eigenvalue and the
/// probability that branch had before collapsing.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MeasurementOutcome {
    #[serde(rename = "eigenvalue")]
    pub sign: Sign,
    pub probability: f64,
}

impl MeasurementOutcome {
    pub fn eigenvalue(&self) -> f64 {
        self.sign.eigenvalue()
    }
}

/// How a measurement decides its branch.
#[derive(Clone, Copy, Debug)]
pub enum MeasurePolicy {
    /// Draw the outcome from the Born rule with a fresh ChaCha stream
    /// seeded here. One call consumes exactly one draw, so identical seeds
    /// reproduce identical outcomes.
    Sample { seed: u64 },
    /// Force the outcome; errors if its probability is below 1e-12.
    Postselect(Sign),
}

/// Frequently used single-qubit states, by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedState {
    Zero,
    One,
    Plus,
    Minus,
    PlusI,
    MinusI,
}

impl NamedState {
    pub fn amplitudes(self) -> [Complex64; 2] {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let hi = Complex64::new(0.0, FRAC_1_SQRT_2);
        match self {
            NamedState::Zero => [C_ONE, C_ZERO],
            NamedState::One => [C_ZERO, C_ONE],
            NamedState::Plus => [h, h],
            NamedState::Minus => [h, -h],
            NamedState::PlusI => [h, hi],
            NamedState::MinusI => [h, -hi],
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            NamedState::Zero => "0",
            NamedState::One => "1",
            NamedState::Plus => "+",
            NamedState::Minus => "-",
            NamedState::PlusI => "+i",
            NamedState::MinusI => "-i",
        }
    }
}

impl fmt::Display for NamedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for NamedState {
    type Err = StateError;

    fn from_str(s: &str) -> Result<Self, StateError> {
        match s {
            "0" | "zero" => Ok(NamedState::Zero),
            "1" | "one" => Ok(NamedState::One),
            "+" | "plus" => Ok(NamedState::Plus),
            "-" | "minus" => Ok(NamedState::Minus),
            "+i" | "plus_i" | "i" => Ok(NamedState::PlusI),
            "-i" | "minus_i" => Ok(NamedState::MinusI),
            other => Err(StateError::UnknownStateName(other.to_string())),
        }
    }
}

/// Render a basis index as a bitstring under the qubit-1-is-MSB convention.
pub fn basis_label(num_qubits: usize, index: usize) -> String {
    format!("{index:0width$b}", width = num_qubits)
}

/// A pure state of `num_qubits` qubits as 2^m dense complex amplitudes.
#[derive(Clone, Debug)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The computational basis state written as a bitstring, so
    /// `basis(3, "100")` is |100⟩ with qubit 1 in |1⟩.
    pub fn basis(num_qubits: usize, bits: &str) -> Result<Self, StateError> {
        check_width(num_qubits)?;
        if bits.len() != num_qubits || !bits.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(StateError::BadBitstring {
                bits: bits.to_string(),
                width: num_qubits,
            });
        }
        let index = bits
            .bytes()
            .fold(0usize, |acc, b| (acc << 1) | usize::from(b == b'1'));
        let mut amps = vec![C_ZERO; 1 << num_qubits];
        amps[index] = C_ONE;
        Ok(StateVector { num_qubits, amps })
    }

    /// The computational basis state with the given amplitude index.
    pub fn basis_index(num_qubits: usize, index: usize) -> Result<Self, StateError> {
        check_width(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(StateError::BadBitstring {
                bits: format!("index {index}"),
                width: num_qubits,
            });
        }
        let mut amps = vec![C_ZERO; dim];
        amps[index] = C_ONE;
        Ok(StateVector { num_qubits, amps })
    }

    /// |0...0⟩ on `num_qubits` qubits.
    pub fn zeros(num_qubits: usize) -> Result<Self, StateError> {
        check_width(num_qubits)?;
        let mut amps = vec![C_ZERO; 1 << num_qubits];
        amps[0] = C_ONE;
        Ok(StateVector { num_qubits, amps })
    }

    /// A single qubit in one of the named states.
    pub fn named(state: NamedState) -> Self {
        StateVector {
            num_qubits: 1,
            amps: state.amplitudes().to_vec(),
        }
    }

    /// Tensor product of named single-qubit states, first factor on top.
    pub fn product(factors: &[NamedState]) -> Result<Self, StateError> {
        let m = factors.len();
        check_width(m)?;
        let mut amps = vec![C_ONE; 1 << m];
        for (index, amp) in amps.iter_mut().enumerate() {
            for (pos, factor) in factors.iter().enumerate() {
                let bit = (index >> (m - 1 - pos)) & 1;
                *amp *= factor.amplitudes()[bit];
            }
        }
        Ok(StateVector { num_qubits: m, amps })
    }

    /// Wrap an amplitude vector that is already normalized to 1e-12.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, StateError> {
        let num_qubits = width_of_len(amps.len())?;
        let norm = l2_norm(&amps);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(StateError::NotNormalized(norm));
        }
        Ok(StateVector { num_qubits, amps })
    }

    /// Wrap an arbitrary nonzero amplitude vector, normalizing it.
    pub fn from_unnormalized(mut amps: Vec<Complex64>) -> Result<Self, StateError> {
        let num_qubits = width_of_len(amps.len())?;
        let norm = l2_norm(&amps);
        if norm < 1e-150 {
            return Err(StateError::ZeroVector);
        }
        let inv = 1.0 / norm;
        for a in &mut amps {
            *a *= inv;
        }
        Ok(StateVector { num_qubits, amps })
    }

    /// Haar-flavored random state: complex Gaussian amplitudes, normalized.
    pub fn random<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Result<Self, StateError> {
        check_width(num_qubits)?;
        let amps = (0..1usize << num_qubits)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::from_unnormalized(amps)
    }

    /// The single-qubit eigenstate of a Pauli with the given eigenvalue.
    pub fn pauli_eigenstate(basis: PauliBasis, sign: Sign) -> Self {
        StateVector::named(match (basis, sign) {
            (PauliBasis::X, Sign::Plus) => NamedState::Plus,
            (PauliBasis::X, Sign::Minus) => NamedState::Minus,
            (PauliBasis::Y, Sign::Plus) => NamedState::PlusI,
            (PauliBasis::Y, Sign::Minus) => NamedState::MinusI,
            (PauliBasis::Z, Sign::Plus) => NamedState::Zero,
            (PauliBasis::Z, Sign::Minus) => NamedState::One,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amp(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amps)
    }

    /// Apply a gate in place. Indices must be within the register; arity
    /// and distinctness are already guaranteed by [`Gate`] construction.
    pub fn apply(&mut self, gate: &Gate) -> Result<(), StateError> {
        for &q in gate.qubits() {
            self.check_qubit(q)?;
        }
        let qs = gate.qubits();
        match gate.kind() {
            GateKind::H => self.apply_one_qubit(qs[0], h_matrix()),
            GateKind::X => self.apply_one_qubit(qs[0], x_matrix()),
            GateKind::Y => self.apply_one_qubit(qs[0], y_matrix()),
            GateKind::S => {
                let m = self.bit_mask(qs[0]);
                self.phase_on_mask(m, C_I);
            }
            GateKind::Sdg => {
                let m = self.bit_mask(qs[0]);
                self.phase_on_mask(m, -C_I);
            }
            GateKind::T => {
                let m = self.bit_mask(qs[0]);
                self.phase_on_mask(m, Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4));
            }
            GateKind::Z => {
                let m = self.bit_mask(qs[0]);
                self.phase_on_mask(m, -C_ONE);
            }
            GateKind::CZ => {
                let m = self.bit_mask(qs[0]) | self.bit_mask(qs[1]);
                self.phase_on_mask(m, -C_ONE);
            }
            GateKind::CS => {
                let m = self.bit_mask(qs[0]) | self.bit_mask(qs[1]);
                self.phase_on_mask(m, C_I);
            }
            GateKind::CCZ => {
                let m = self.bit_mask(qs[0]) | self.bit_mask(qs[1]) | self.bit_mask(qs[2]);
                self.phase_on_mask(m, -C_ONE);
            }
            GateKind::SWAP => self.swap_qubits(qs[0], qs[1]),
        }
        Ok(())
    }

    /// Value-returning twin of [`apply`](Self::apply).
    pub fn applied(&self, gate: &Gate) -> Result<Self, StateError> {
        let mut out = self.clone();
        out.apply(gate)?;
        Ok(out)
    }

    /// Measure one qubit in a Pauli basis. The returned state keeps the
    /// measured qubit, collapsed to the observed eigenstate.
    pub fn measure_pauli(
        &self,
        qubit: usize,
        basis: PauliBasis,
        policy: MeasurePolicy,
    ) -> Result<(MeasurementOutcome, StateVector), StateError> {
        match policy {
            MeasurePolicy::Postselect(sign) => {
                let (probability, state) = self.project_pauli(qubit, basis, sign)?;
                Ok((MeasurementOutcome { sign, probability }, state))
            }
            MeasurePolicy::Sample { seed } => {
                let mut rng = ChaCha12Rng::seed_from_u64(seed);
                self.measure_pauli_with_rng(qubit, basis, &mut rng)
            }
        }
    }

    /// Sampling measurement drawing from a caller-owned stream, so a whole
    /// adaptive pattern can share one seeded generator.
    pub fn measure_pauli_with_rng<R: Rng + ?Sized>(
        &self,
        qubit: usize,
        basis: PauliBasis,
        rng: &mut R,
    ) -> Result<(MeasurementOutcome, StateVector), StateError> {
        let p_plus = self.outcome_probability(qubit, basis, Sign::Plus)?;
        // Deterministic branches skip the draw; otherwise one draw per call.
        let sign = if p_plus >= 1.0 - MIN_BRANCH_PROBABILITY {
            Sign::Plus
        } else if p_plus <= MIN_BRANCH_PROBABILITY {
            Sign::Minus
        } else if rng.random::<f64>() < p_plus {
            Sign::Plus
        } else {
            Sign::Minus
        };
        let (probability, state) = self.project_pauli(qubit, basis, sign)?;
        Ok((MeasurementOutcome { sign, probability }, state))
    }

    /// Probability of observing the given eigenvalue, without collapsing.
    pub fn outcome_probability(
        &self,
        qubit: usize,
        basis: PauliBasis,
        sign: Sign,
    ) -> Result<f64, StateError> {
        Ok(l2_norm_sqr(&self.branch_amps(qubit, basis, sign)?))
    }

    /// Project onto the ±1 eigenspace of a single-qubit Pauli and
    /// renormalize, returning the branch probability alongside.
    pub fn project_pauli(
        &self,
        qubit: usize,
        basis: PauliBasis,
        sign: Sign,
    ) -> Result<(f64, StateVector), StateError> {
        let mut amps = self.branch_amps(qubit, basis, sign)?;
        let probability = l2_norm_sqr(&amps);
        if probability <= MIN_BRANCH_PROBABILITY {
            return Err(StateError::ImpossiblePostselection { sign, probability });
        }
        let inv = 1.0 / probability.sqrt();
        for a in &mut amps {
            *a *= inv;
        }
        Ok((
            probability,
            StateVector {
                num_qubits: self.num_qubits,
                amps,
            },
        ))
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &StateVector) -> Result<f64, StateError> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// ⟨self|other⟩ with `self` on the bra side.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64, StateError> {
        self.check_same_width(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Euclidean distance ‖self − other‖, for checks with no phase freedom.
    pub fn distance(&self, other: &StateVector) -> Result<f64, StateError> {
        self.check_same_width(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// ‖self − λ·other‖ with the unit scalar λ read off at `other`'s
    /// largest-magnitude amplitude. Mismatched widths are an error.
    pub fn distance_up_to_global_phase(&self, other: &StateVector) -> Result<f64, StateError> {
        self.check_same_width(other)?;
        let k = dominant_index(&other.amps);
        let ratio = self.amps[k] / other.amps[k];
        if ratio.norm() < 1e-150 {
            // self vanishes where other peaks; for unit vectors the distance
            // is then far above any tolerance this crate uses.
            return Ok(f64::MAX.sqrt());
        }
        let lambda = ratio / ratio.norm();
        let dist_sqr: f64 = self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - lambda * b).norm_sqr())
            .sum();
        Ok(dist_sqr.sqrt())
    }

    /// True iff some unit scalar λ brings ‖self − λ·other‖ within `tol`.
    pub fn equal_up_to_global_phase(
        &self,
        other: &StateVector,
        tol: f64,
    ) -> Result<bool, StateError> {
        Ok(self.distance_up_to_global_phase(other)? <= tol)
    }

    /// True iff all amplitudes are real to `tol` once a global phase is
    /// removed (taken from the largest-magnitude amplitude).
    pub fn is_real(&self, tol: f64) -> bool {
        let k = dominant_index(&self.amps);
        let mag = self.amps[k].norm();
        if mag < 1e-150 {
            return true;
        }
        let rot = self.amps[k].conj() / mag;
        self.amps.iter().all(|a| (a * rot).im.abs() <= tol)
    }

    /// Probability that a Z measurement of `qubit` would give |1⟩.
    pub fn population_one(&self, qubit: usize) -> Result<f64, StateError> {
        self.check_qubit(qubit)?;
        let mask = self.bit_mask(qubit);
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Tensor product, `self` on the more significant wires.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector, StateError> {
        let m = self.num_qubits + other.num_qubits;
        check_width(m)?;
        let low = other.amps.len();
        let amps = (0..self.amps.len() * low)
            .map(|i| self.amps[i / low] * other.amps[i % low])
            .collect();
        Ok(StateVector {
            num_qubits: m,
            amps,
        })
    }

    /// Contract one qubit against a single-qubit bra, removing it from the
    /// register. Returns the renormalized remainder together with the
    /// squared norm of the contraction, which is the probability weight of
    /// finding that qubit in the bra state.
    pub fn contract_qubit(
        &self,
        qubit: usize,
        bra: &StateVector,
    ) -> Result<(StateVector, f64), StateError> {
        if bra.num_qubits != 1 {
            return Err(StateError::WidthMismatch(bra.num_qubits, 1));
        }
        self.check_qubit(qubit)?;
        if self.num_qubits == 1 {
            return Err(StateError::WidthOutOfRange(0));
        }
        let pos = self.num_qubits - qubit;
        let b0 = bra.amps[0].conj();
        let b1 = bra.amps[1].conj();
        let low_mask = (1usize << pos) - 1;
        let mut amps = vec![C_ZERO; self.amps.len() / 2];
        for (j, out) in amps.iter_mut().enumerate() {
            let i0 = ((j & !low_mask) << 1) | (j & low_mask);
            let i1 = i0 | (1 << pos);
            *out = b0 * self.amps[i0] + b1 * self.amps[i1];
        }
        let weight = l2_norm_sqr(&amps);
        if weight <= MIN_BRANCH_PROBABILITY {
            return Err(StateError::NegligibleOverlap(weight));
        }
        let inv = 1.0 / weight.sqrt();
        for a in &mut amps {
            *a *= inv;
        }
        Ok((
            StateVector {
                num_qubits: self.num_qubits - 1,
                amps,
            },
            weight,
        ))
    }

    fn branch_amps(
        &self,
        qubit: usize,
        basis: PauliBasis,
        sign: Sign,
    ) -> Result<Vec<Complex64>, StateError> {
        self.check_qubit(qubit)?;
        let mut flipped = self.clone();
        flipped.apply_pauli(qubit, basis);
        let s = sign.eigenvalue();
        // (I ± P)/2 applied through ψ± = (ψ ± Pψ)/2.
        Ok(self
            .amps
            .iter()
            .zip(&flipped.amps)
            .map(|(a, p)| (a + p * s) * 0.5)
            .collect())
    }

    fn apply_pauli(&mut self, qubit: usize, basis: PauliBasis) {
        match basis {
            PauliBasis::X => self.apply_one_qubit(qubit, x_matrix()),
            PauliBasis::Y => self.apply_one_qubit(qubit, y_matrix()),
            PauliBasis::Z => {
                let m = self.bit_mask(qubit);
                self.phase_on_mask(m, -C_ONE);
            }
        }
    }

    fn apply_one_qubit(&mut self, qubit: usize, u: [[Complex64; 2]; 2]) {
        let stride = self.bit_mask(qubit);
        let block = stride << 1;
        for base in (0..self.amps.len()).step_by(block) {
            for i0 in base..base + stride {
                let i1 = i0 | stride;
                let a = self.amps[i0];
                let b = self.amps[i1];
                self.amps[i0] = u[0][0] * a + u[0][1] * b;
                self.amps[i1] = u[1][0] * a + u[1][1] * b;
            }
        }
    }

    fn phase_on_mask(&mut self, mask: usize, phase: Complex64) {
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *a *= phase;
            }
        }
    }

    fn swap_qubits(&mut self, a: usize, b: usize) {
        let ma = self.bit_mask(a);
        let mb = self.bit_mask(b);
        for i in 0..self.amps.len() {
            if i & ma != 0 && i & mb == 0 {
                let j = (i & !ma) | mb;
                self.amps.swap(i, j);
            }
        }
    }

    /// Index mask of a qubit: bit position num_qubits − qubit.
    fn bit_mask(&self, qubit: usize) -> usize {
        1 << (self.num_qubits - qubit)
    }

    fn check_qubit(&self, qubit: usize) -> Result<(), StateError> {
        if qubit == 0 || qubit > self.num_qubits {
            return Err(StateError::QubitOutOfRange {
                qubit,
                width: self.num_qubits,
            });
        }
        Ok(())
    }

    fn check_same_width(&self, other: &StateVector) -> Result<(), StateError> {
        if self.num_qubits != other.num_qubits {
            return Err(StateError::WidthMismatch(self.num_qubits, other.num_qubits));
        }
        Ok(())
    }
}

fn check_width(num_qubits: usize) -> Result<(), StateError> {
    if num_qubits == 0 || num_qubits > MAX_QUBITS {
        return Err(StateError::WidthOutOfRange(num_qubits));
    }
    Ok(())
}

fn width_of_len(len: usize) -> Result<usize, StateError> {
    if len.is_power_of_two() && len >= 2 {
        let m = len.trailing_zeros() as usize;
        if m <= MAX_QUBITS {
            return Ok(m);
        }
    }
    Err(StateError::BadAmplitudeCount(len))
}

fn l2_norm_sqr(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

fn l2_norm(amps: &[Complex64]) -> f64 {
    l2_norm_sqr(amps).sqrt()
}

fn dominant_index(amps: &[Complex64]) -> usize {
    let mut best = 0;
    let mut best_mag = -1.0;
    for (i, a) in amps.iter().enumerate() {
        let mag = a.norm_sqr();
        if mag > best_mag {
            best = i;
            best_mag = mag;
        }
    }
    best
}

fn h_matrix() -> [[Complex64; 2]; 2] {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

fn x_matrix() -> [[Complex64; 2]; 2] {
    [[C_ZERO, C_ONE], [C_ONE, C_ZERO]]
}

fn y_matrix() -> [[Complex64; 2]; 2] {
    [[C_ZERO, -C_I], [C_I, C_ZERO]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::Gate;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    #[test]
    fn basis_states_read_left_to_right() {
        let s = StateVector::basis(3, "100").unwrap();
        assert_eq!(s.amp(0b100), C_ONE);
        assert_eq!(s.amps().iter().filter(|a| a.norm() > 0.0).count(), 1);

        let s = StateVector::basis(2, "11").unwrap();
        assert_eq!(s.amp(0b11), C_ONE);
    }

    #[test]
    fn bad_construction_is_rejected() {
        assert!(matches!(
            StateVector::basis(2, "101"),
            Err(StateError::BadBitstring { .. })
        ));
        assert!(matches!(
            StateVector::basis(0, ""),
            Err(StateError::WidthOutOfRange(0))
        ));
        assert!(matches!(
            StateVector::basis(25, &"0".repeat(25)),
            Err(StateError::WidthOutOfRange(25))
        ));
        assert!(matches!(
            StateVector::from_amplitudes(vec![C_ONE; 3]),
            Err(StateError::BadAmplitudeCount(3))
        ));
        assert!(matches!(
            StateVector::from_amplitudes(vec![C_ONE, C_ONE]),
            Err(StateError::NotNormalized(_))
        ));
    }

    #[test]
    fn named_plus_i_amplitudes() {
        let s = StateVector::named(NamedState::PlusI);
        assert!((s.amp(0) - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((s.amp(1) - c(0.0, FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn s_on_plus_gives_plus_i() {
        let mut s = StateVector::named(NamedState::Plus);
        s.apply(&Gate::s(1)).unwrap();
        let plus_i = StateVector::named(NamedState::PlusI);
        assert!(s.distance(&plus_i).unwrap() < 1e-15);
    }

    #[test]
    fn ccz_flips_sign_only_on_all_ones() {
        let mut s = StateVector::basis(3, "111").unwrap();
        s.apply(&Gate::ccz(1, 2, 3)).unwrap();
        assert_eq!(s.amp(0b111), -C_ONE);

        let mut s = StateVector::basis(3, "110").unwrap();
        s.apply(&Gate::ccz(1, 2, 3)).unwrap();
        assert_eq!(s.amp(0b110), C_ONE);
    }

    #[test]
    fn h_twice_is_identity_on_random_states() {
        let mut r = rng(7);
        for _ in 0..20 {
            let s = StateVector::random(3, &mut r).unwrap();
            let mut t = s.clone();
            t.apply(&Gate::h(2)).unwrap();
            t.apply(&Gate::h(2)).unwrap();
            assert!(s.distance(&t).unwrap() < 1e-12);
            assert!((t.norm() - 1.0).abs() < NORM_TOL);
        }
    }

    #[test]
    fn plus_i_is_a_y_eigenstate() {
        let s = StateVector::named(NamedState::PlusI);
        let (outcome, after) = s
            .measure_pauli(1, PauliBasis::Y, MeasurePolicy::Postselect(Sign::Plus))
            .unwrap();
        assert!((outcome.probability - 1.0).abs() < NORM_TOL);
        assert!(after.distance(&s).unwrap() < 1e-12);

        let err = s.measure_pauli(1, PauliBasis::Y, MeasurePolicy::Postselect(Sign::Minus));
        assert!(matches!(
            err,
            Err(StateError::ImpossiblePostselection { .. })
        ));
    }

    #[test]
    fn z_measurement_on_plus_is_unbiased() {
        let s = StateVector::named(NamedState::Plus);
        let (outcome, after) = s
            .measure_pauli(1, PauliBasis::Z, MeasurePolicy::Postselect(Sign::Plus))
            .unwrap();
        assert!((outcome.probability - 0.5).abs() < NORM_TOL);
        assert!(after.distance(&StateVector::basis(1, "0").unwrap()).unwrap() < 1e-12);
    }

    // Oracle for the injection gadget: measure qubit 2 of CZ(|+⟩|+⟩) in Y
    // and keep the +1 branch. Contracting the measured qubit with |+i⟩
    // must leave qubit 1 at amplitudes ((1-i)/2, (1+i)/2), which is |+i⟩
    // up to the global phase e^{-iπ/4}.
    #[test]
    fn y_measurement_after_cz_leaves_plus_i() {
        let mut s = StateVector::product(&[NamedState::Plus, NamedState::Plus]).unwrap();
        s.apply(&Gate::cz(1, 2)).unwrap();
        let (outcome, after) = s
            .measure_pauli(2, PauliBasis::Y, MeasurePolicy::Postselect(Sign::Plus))
            .unwrap();
        assert!((outcome.probability - 0.5).abs() < NORM_TOL);

        let (residual, weight) = after
            .contract_qubit(2, &StateVector::named(NamedState::PlusI))
            .unwrap();
        assert!((weight - 1.0).abs() < 1e-12);
        assert!((residual.amp(0) - c(0.5, -0.5)).norm() < 1e-12);
        assert!((residual.amp(1) - c(0.5, 0.5)).norm() < 1e-12);
        assert!(residual
            .equal_up_to_global_phase(&StateVector::named(NamedState::PlusI), 1e-10)
            .unwrap());
    }

    #[test]
    fn outcome_probabilities_sum_to_one() {
        let mut r = rng(11);
        for _ in 0..10 {
            let s = StateVector::random(4, &mut r).unwrap();
            for basis in [PauliBasis::X, PauliBasis::Y, PauliBasis::Z] {
                for q in 1..=4 {
                    let p_plus = s.outcome_probability(q, basis, Sign::Plus).unwrap();
                    let p_minus = s.outcome_probability(q, basis, Sign::Minus).unwrap();
                    assert!((p_plus + p_minus - 1.0).abs() < NORM_TOL);
                }
            }
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let s = StateVector::named(NamedState::Plus);
        let draw = |seed| {
            let (outcome, _) = s
                .measure_pauli(1, PauliBasis::Z, MeasurePolicy::Sample { seed })
                .unwrap();
            outcome.sign
        };
        for seed in 0..32 {
            assert_eq!(draw(seed), draw(seed));
        }
    }

    #[test]
    fn fidelity_basics() {
        let zero = StateVector::basis(1, "0").unwrap();
        let one = StateVector::basis(1, "1").unwrap();
        assert!((zero.fidelity(&zero).unwrap() - 1.0).abs() < NORM_TOL);
        assert!(zero.fidelity(&one).unwrap() < NORM_TOL);

        let two = StateVector::zeros(2).unwrap();
        assert!(matches!(
            zero.fidelity(&two),
            Err(StateError::WidthMismatch(1, 2))
        ));
    }

    #[test]
    fn global_phase_equality() {
        let zero = StateVector::basis(1, "0").unwrap();
        let i_zero = StateVector::from_amplitudes(vec![C_I, C_ZERO]).unwrap();
        assert!(zero.equal_up_to_global_phase(&i_zero, 1e-12).unwrap());

        let one = StateVector::basis(1, "1").unwrap();
        assert!(!zero.equal_up_to_global_phase(&one, 1e-10).unwrap());

        let two = StateVector::zeros(2).unwrap();
        assert!(zero.equal_up_to_global_phase(&two, 1e-10).is_err());
    }

    #[test]
    fn realness_detects_plus_i() {
        assert!(StateVector::named(NamedState::Plus).is_real(1e-9));
        assert!(!StateVector::named(NamedState::PlusI).is_real(1e-9));
        // A global phase alone does not make a state complex.
        let rotated = StateVector::from_amplitudes(vec![
            c(0.0, FRAC_1_SQRT_2),
            c(0.0, FRAC_1_SQRT_2),
        ])
        .unwrap();
        assert!(rotated.is_real(1e-12));
    }

    #[test]
    fn population_reads_single_bits() {
        let s = StateVector::basis(3, "100").unwrap();
        assert!((s.population_one(1).unwrap() - 1.0).abs() < NORM_TOL);
        assert!(s.population_one(2).unwrap() < NORM_TOL);
        assert!(s.population_one(3).unwrap() < NORM_TOL);
    }

    #[test]
    fn tensor_then_contract_roundtrips() {
        let mut r = rng(3);
        let left = StateVector::random(2, &mut r).unwrap();
        let catalyst = StateVector::named(NamedState::PlusI);
        let joint = left.tensor(&catalyst).unwrap();
        assert_eq!(joint.num_qubits(), 3);

        let (rest, weight) = joint.contract_qubit(3, &catalyst).unwrap();
        assert!((weight - 1.0).abs() < 1e-12);
        assert!((rest.fidelity(&left).unwrap() - 1.0).abs() < 1e-12);

        // Contracting against an orthogonal state has no support.
        let one = StateVector::named(NamedState::One);
        let zero_joint = left.tensor(&StateVector::named(NamedState::Zero)).unwrap();
        assert!(matches!(
            zero_joint.contract_qubit(3, &one),
            Err(StateError::NegligibleOverlap(_))
        ));
    }

    #[test]
    fn pauli_eigenstates_are_deterministic_outcomes() {
        for basis in [PauliBasis::X, PauliBasis::Y, PauliBasis::Z] {
            for sign in [Sign::Plus, Sign::Minus] {
                let s = StateVector::pauli_eigenstate(basis, sign);
                let p = s.outcome_probability(1, basis, sign).unwrap();
                assert!((p - 1.0).abs() < NORM_TOL);
            }
        }
    }

    #[test]
    fn sign_serializes_as_eigenvalue() {
        assert_eq!(serde_json::to_string(&Sign::Plus).unwrap(), "1");
        assert_eq!(serde_json::to_string(&Sign::Minus).unwrap(), "-1");
        assert_eq!(serde_json::from_str::<Sign>("-1").unwrap(), Sign::Minus);
        assert!(serde_json::from_str::<Sign>("3").is_err());
    }

    proptest! {
        // Any normalized vector equals its own copy under any global phase.
        #[test]
        fn phase_rotation_preserves_equality(
            parts in proptest::collection::vec(-1.0f64..1.0, 8),
            theta in 0.0f64..std::f64::consts::TAU,
        ) {
            let amps: Vec<Complex64> = parts
                .chunks(2)
                .map(|p| Complex64::new(p[0], p[1]))
                .collect();
            prop_assume!(l2_norm(&amps) > 1e-3);
            let s = StateVector::from_unnormalized(amps).unwrap();
            let rotated = StateVector::from_amplitudes(
                s.amps().iter().map(|a| a * Complex64::from_polar(1.0, theta)).collect(),
            ).unwrap();
            prop_assert!(s.equal_up_to_global_phase(&rotated, 1e-10).unwrap());
        }

        // Norm is preserved by every single-qubit gate on random states.
        #[test]
        fn gates_preserve_norm(parts in proptest::collection::vec(-1.0f64..1.0, 16)) {
            let amps: Vec<Complex64> = parts
                .chunks(2)
                .map(|p| Complex64::new(p[0], p[1]))
                .collect();
            prop_assume!(l2_norm(&amps) > 1e-3);
            let mut s = StateVector::from_unnormalized(amps).unwrap();
            for gate in [
                Gate::h(1), Gate::s(2), Gate::t(3), Gate::x(1), Gate::y(2), Gate::z(3),
                Gate::cz(1, 2), Gate::cs(2, 3), Gate::ccz(1, 2, 3), Gate::swap(1, 3),
            ] {
                s.apply(&gate).unwrap();
                prop_assert!((s.norm() - 1.0).abs() < NORM_TOL);
            }
        }
    }
}
