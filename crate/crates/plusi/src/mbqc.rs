//! Adaptive Pauli-measurement patterns on resource states.
//!
//! A pattern is an ordered list of single-qubit Pauli measurements.
//! Each step may adapt its basis sign on strictly earlier outcomes and
//! may push Pauli corrections into a frame, conditioned on any outcome
//! recorded so far including its own. Measured qubits are removed from
//! the register by contraction with the eigenstate they collapsed to,
//! so the residual state lives on the surviving qubits alone.
//!
//! The frame is classical bookkeeping: nothing is applied to the state
//! until [`ExecutionResult::corrected_residual`] or
//! [`PauliFrame::apply_to`] is called. Applying a frame twice is the
//! identity because a joint X and Z flip is applied as the single gate Y.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuits::Gate;
use crate::hypergraph::{HypergraphError, SectionedResource};
use crate::statevec::{PauliBasis, Sign, StateError, StateVector};

#[derive(Debug, Error)]
pub enum MbqcError {
    #[error("step {step} measures qubit {qubit}, which an earlier step already measured")]
    RepeatedMeasurement { step: usize, qubit: usize },
    #[error("step {step} adapts on step {on}, which is not strictly earlier")]
    AdaptNotEarlier { step: usize, on: usize },
    #[error("step {step} corrects on step {on}, which has no outcome at that point")]
    CorrectionTooEarly { step: usize, on: usize },
    #[error("step {step} measures qubit {qubit}, which is not in the input or body section")]
    NotMeasurable { step: usize, qubit: usize },
    #[error("pattern has {steps} steps but the postselection list has {given} signs")]
    PostselectionLength { steps: usize, given: usize },
    #[error("resource state has {state} qubits but the sections describe {sections} vertices")]
    ResourceWidthMismatch { state: usize, sections: usize },
    #[error("pattern measures every qubit, leaving no residual state")]
    NothingLeft,
    #[error("frame flips qubit {0}, which was measured away")]
    FrameOnMeasuredQubit(usize),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

/// Correction Paulis are X or Z; a step that needs both simply records
/// both flips and the frame applies them as one Y.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FramePauli {
    X,
    Z,
}

/// Flip the measurement-basis sign when the outcome of step `on` was -1.
/// `flip: false` makes the rule inert, which is allowed but pointless.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdaptRule {
    pub on: usize,
    pub flip: bool,
}

/// Toggle `pauli` on `target` in the frame when the outcome of step `on`
/// was -1. Unlike adaptation, `on` may name the rule's own step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrectionRule {
    pub on: usize,
    pub pauli: FramePauli,
    pub target: usize,
}

/// One measurement: a qubit, a Pauli basis, and the adaptive rules.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementStep {
    pub qubit: usize,
    pub basis: PauliBasis,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub adapt: Vec<AdaptRule>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub correct: Vec<CorrectionRule>,
}

impl MeasurementStep {
    pub fn new(qubit: usize, basis: PauliBasis) -> Self {
        MeasurementStep {
            qubit,
            basis,
            adapt: Vec::new(),
            correct: Vec::new(),
        }
    }

    pub fn adapting_on(mut self, on: usize) -> Self {
        self.adapt.push(AdaptRule { on, flip: true });
        self
    }

    pub fn correcting(mut self, on: usize, pauli: FramePauli, target: usize) -> Self {
        self.correct.push(CorrectionRule { on, pauli, target });
        self
    }
}

#[derive(Serialize, Deserialize)]
struct RawPattern {
    steps: Vec<MeasurementStep>,
}

/// A validated measurement pattern. Steps are indexed from 1; each qubit
/// is measured at most once, adaptation references strictly earlier
/// steps, and corrections reference steps up to and including their own.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPattern", into = "RawPattern")]
pub struct MeasurementPattern {
    steps: Vec<MeasurementStep>,
}

impl TryFrom<RawPattern> for MeasurementPattern {
    type Error = MbqcError;

    fn try_from(raw: RawPattern) -> Result<MeasurementPattern, MbqcError> {
        MeasurementPattern::new(raw.steps)
    }
}

impl From<MeasurementPattern> for RawPattern {
    fn from(pattern: MeasurementPattern) -> RawPattern {
        RawPattern {
            steps: pattern.steps,
        }
    }
}

impl MeasurementPattern {
    pub fn new(steps: Vec<MeasurementStep>) -> Result<Self, MbqcError> {
        let mut measured = BTreeMap::new();
        for (index, step) in steps.iter().enumerate() {
            let number = index + 1;
            if measured.insert(step.qubit, number).is_some() {
                return Err(MbqcError::RepeatedMeasurement {
                    step: number,
                    qubit: step.qubit,
                });
            }
            for rule in &step.adapt {
                if rule.on == 0 || rule.on >= number {
                    return Err(MbqcError::AdaptNotEarlier {
                        step: number,
                        on: rule.on,
                    });
                }
            }
            for rule in &step.correct {
                if rule.on == 0 || rule.on > number {
                    return Err(MbqcError::CorrectionTooEarly {
                        step: number,
                        on: rule.on,
                    });
                }
            }
        }
        Ok(MeasurementPattern { steps })
    }

    pub fn steps(&self) -> &[MeasurementStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

#[derive(Serialize, Deserialize)]
struct RawFlip {
    qubit: usize,
    x: bool,
    z: bool,
}

/// Deferred Pauli corrections, one (x, z) flip pair per qubit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<RawFlip>", into = "Vec<RawFlip>")]
pub struct PauliFrame {
    flips: BTreeMap<usize, (bool, bool)>,
}

impl From<Vec<RawFlip>> for PauliFrame {
    fn from(raw: Vec<RawFlip>) -> PauliFrame {
        let mut frame = PauliFrame::new();
        for flip in raw {
            if flip.x {
                frame.flip(FramePauli::X, flip.qubit);
            }
            if flip.z {
                frame.flip(FramePauli::Z, flip.qubit);
            }
        }
        frame
    }
}

impl From<PauliFrame> for Vec<RawFlip> {
    fn from(frame: PauliFrame) -> Vec<RawFlip> {
        frame
            .flips
            .into_iter()
            .map(|(qubit, (x, z))| RawFlip { qubit, x, z })
            .collect()
    }
}

impl PauliFrame {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn flip(&mut self, pauli: FramePauli, qubit: usize) {
        let entry = self.flips.entry(qubit).or_insert((false, false));
        match pauli {
            FramePauli::X => entry.0 = !entry.0,
            FramePauli::Z => entry.1 = !entry.1,
        }
        if *entry == (false, false) {
            self.flips.remove(&qubit);
        }
    }

    /// The (x, z) flip pair recorded for a qubit.
    pub fn flips_on(&self, qubit: usize) -> (bool, bool) {
        self.flips.get(&qubit).copied().unwrap_or((false, false))
    }

    /// Qubits with at least one flip, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.flips.keys().copied()
    }

    pub fn is_identity(&self) -> bool {
        self.flips.is_empty()
    }

    /// Apply the recorded Paulis, reading frame keys as qubit indices of
    /// `state`. A joint (x, z) flip is applied as Y, which makes this map
    /// an exact involution.
    pub fn apply_to(&self, state: &StateVector) -> Result<StateVector, MbqcError> {
        let mut out = state.clone();
        for (&qubit, &(x, z)) in &self.flips {
            let gate = match (x, z) {
                (true, true) => Gate::y(qubit),
                (true, false) => Gate::x(qubit),
                (false, true) => Gate::z(qubit),
                (false, false) => continue,
            };
            out.apply(&gate)?;
        }
        Ok(out)
    }

    /// Rewrite frame keys through a relabeling map.
    fn relabeled(&self, map: &BTreeMap<usize, usize>) -> Result<PauliFrame, MbqcError> {
        let mut out = PauliFrame::new();
        for (&qubit, &(x, z)) in &self.flips {
            let &new = map
                .get(&qubit)
                .ok_or(MbqcError::FrameOnMeasuredQubit(qubit))?;
            if x {
                out.flip(FramePauli::X, new);
            }
            if z {
                out.flip(FramePauli::Z, new);
            }
        }
        Ok(out)
    }
}

/// How outcomes are chosen during execution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExecutePolicy {
    /// Draw each outcome from the Born rule with a seeded generator.
    Sample { seed: u64 },
    /// Force the recorded outcome of each step, in order. Fails on a
    /// branch of negligible probability.
    Postselect(Vec<Sign>),
}

/// One executed step: the sign is the eigenvalue of the operator actually
/// measured, after any adaptive sign flip.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordedOutcome {
    pub step: usize,
    pub qubit: usize,
    pub basis: PauliBasis,
    pub flipped: bool,
    #[serde(rename = "eigenvalue")]
    pub sign: Sign,
    pub probability: f64,
}

/// Everything a pattern run produces: the outcome log, the residual state
/// on the surviving qubits, the correction frame (still keyed by original
/// qubit labels), and the label map.
#[derive(Clone, Debug)]
pub struct ExecutionResult {
    pub outcomes: Vec<RecordedOutcome>,
    pub residual: StateVector,
    pub frame: PauliFrame,
    /// Original qubit label -> index in `residual`, ascending.
    pub reindex: BTreeMap<usize, usize>,
}

impl ExecutionResult {
    /// The frame with keys rewritten to residual indices. Fails if a
    /// correction targeted a qubit the pattern measured away.
    pub fn frame_on_residual(&self) -> Result<PauliFrame, MbqcError> {
        self.frame.relabeled(&self.reindex)
    }

    /// The residual state with all pending corrections applied.
    pub fn corrected_residual(&self) -> Result<StateVector, MbqcError> {
        self.frame_on_residual()?.apply_to(&self.residual)
    }
}

/// Run a pattern on a resource state. The state and the sectioned
/// description must agree on the register width, and every measured qubit
/// must sit in the input or body section.
pub fn execute(
    state: &StateVector,
    resource: &SectionedResource,
    pattern: &MeasurementPattern,
    policy: ExecutePolicy,
) -> Result<ExecutionResult, MbqcError> {
    match policy {
        ExecutePolicy::Sample { seed } => {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            execute_with_rng(state, resource, pattern, &mut rng)
        }
        ExecutePolicy::Postselect(signs) => {
            if signs.len() != pattern.len() {
                return Err(MbqcError::PostselectionLength {
                    steps: pattern.len(),
                    given: signs.len(),
                });
            }
            run_pattern(state, resource, pattern, OutcomeSource::Forced(&signs))
        }
    }
}

/// Sampling variant that draws from a caller-owned generator, so repeated
/// shots consume one contiguous random stream.
pub fn execute_with_rng<R: Rng>(
    state: &StateVector,
    resource: &SectionedResource,
    pattern: &MeasurementPattern,
    rng: &mut R,
) -> Result<ExecutionResult, MbqcError> {
    run_pattern(state, resource, pattern, OutcomeSource::Rng(rng))
}

enum OutcomeSource<'a> {
    Forced(&'a [Sign]),
    Rng(&'a mut dyn rand::RngCore),
}

fn run_pattern(
    state: &StateVector,
    resource: &SectionedResource,
    pattern: &MeasurementPattern,
    mut source: OutcomeSource<'_>,
) -> Result<ExecutionResult, MbqcError> {
    if state.num_qubits() != resource.num_vertices() {
        return Err(MbqcError::ResourceWidthMismatch {
            state: state.num_qubits(),
            sections: resource.num_vertices(),
        });
    }
    if pattern.len() == state.num_qubits() && !pattern.is_empty() {
        return Err(MbqcError::NothingLeft);
    }
    for (index, step) in pattern.steps().iter().enumerate() {
        if step.qubit > state.num_qubits() {
            return Err(MbqcError::State(StateError::QubitOutOfRange {
                qubit: step.qubit,
                width: state.num_qubits(),
            }));
        }
        if !resource.is_measurable(step.qubit) {
            return Err(MbqcError::NotMeasurable {
                step: index + 1,
                qubit: step.qubit,
            });
        }
    }

    let mut current = state.clone();
    let mut outcomes: Vec<RecordedOutcome> = Vec::with_capacity(pattern.len());
    let mut frame = PauliFrame::new();
    // (qubit, basis, actual eigenvalue of the unflipped Pauli) per step,
    // used to contract measured qubits out afterwards.
    let mut collapsed: Vec<(usize, PauliBasis, Sign)> = Vec::with_capacity(pattern.len());

    for (index, step) in pattern.steps().iter().enumerate() {
        let number = index + 1;
        // Adaptive basis sign: parity of triggered flips.
        let mut flipped = false;
        for rule in &step.adapt {
            if rule.flip && outcomes[rule.on - 1].sign == Sign::Minus {
                flipped = !flipped;
            }
        }

        // The recorded sign refers to the adapted operator; the actual
        // projection acts on the unflipped Pauli eigenspaces.
        let (recorded, probability, post) = match &mut source {
            OutcomeSource::Forced(signs) => {
                let sign = signs[index];
                let actual = if flipped { sign.flip() } else { sign };
                let (probability, post) =
                    current.project_pauli(step.qubit, step.basis, actual)?;
                (sign, probability, post)
            }
            OutcomeSource::Rng(rng) => {
                let (outcome, post) =
                    current.measure_pauli_with_rng(step.qubit, step.basis, *rng)?;
                let recorded = if flipped {
                    outcome.sign.flip()
                } else {
                    outcome.sign
                };
                (recorded, outcome.probability, post)
            }
        };
        current = post;
        let actual = if flipped { recorded.flip() } else { recorded };
        collapsed.push((step.qubit, step.basis, actual));
        outcomes.push(RecordedOutcome {
            step: number,
            qubit: step.qubit,
            basis: step.basis,
            flipped,
            sign: recorded,
            probability,
        });

        for rule in &step.correct {
            if outcomes[rule.on - 1].sign == Sign::Minus {
                frame.flip(rule.pauli, rule.target);
            }
        }
    }

    // Remove measured qubits in descending label order; labels below the
    // one being removed are unaffected, so each contraction sees its
    // original index.
    collapsed.sort_by(|a, b| b.0.cmp(&a.0));
    for &(qubit, basis, sign) in &collapsed {
        let eigenstate = StateVector::pauli_eigenstate(basis, sign);
        let (rest, _weight) = current.contract_qubit(qubit, &eigenstate)?;
        current = rest;
    }

    let measured: Vec<usize> = collapsed.iter().map(|c| c.0).collect();
    let mut reindex = BTreeMap::new();
    let mut next = 1usize;
    for original in 1..=state.num_qubits() {
        if !measured.contains(&original) {
            reindex.insert(original, next);
            next += 1;
        }
    }

    Ok(ExecutionResult {
        outcomes,
        residual: current,
        frame,
        reindex,
    })
}

/// Two vertices joined by an edge: measuring vertex 1 in X teleports its
/// state to vertex 2 through an H, with an X correction on the -1 branch.
pub fn teleportation_resource() -> SectionedResource {
    let mut graph = crate::hypergraph::Hypergraph::new(2).expect("two vertices");
    graph.add_edge2(1, 2).expect("fresh edge");
    SectionedResource::new(
        graph,
        crate::hypergraph::Sections::new(vec![1], vec![], vec![2]),
    )
    .expect("sections partition both vertices")
}

/// The one-bit teleportation pattern on [`teleportation_resource`].
pub fn teleportation_pattern() -> MeasurementPattern {
    MeasurementPattern::new(vec![MeasurementStep::new(1, PauliBasis::X).correcting(
        1,
        FramePauli::X,
        2,
    )])
    .expect("a single step is always consistent")
}

/// Catalyst injection as a pattern: Y-measure the ancilla, Z-correct the
/// target on the -1 branch.
pub fn injection_pattern(ancilla: usize, target: usize) -> MeasurementPattern {
    MeasurementPattern::new(vec![MeasurementStep::new(ancilla, PauliBasis::Y).correcting(
        1,
        FramePauli::Z,
        target,
    )])
    .expect("a single step is always consistent")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::Gate;
    use crate::hypergraph::transformed_demo_resource;
    use crate::statevec::NamedState;

    fn rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    /// CZ(|psi⟩ ⊗ |+⟩), the teleportation input.
    fn teleport_state(psi: &StateVector) -> StateVector {
        let mut joint = psi
            .tensor(&StateVector::named(NamedState::Plus))
            .unwrap();
        joint.apply(&Gate::cz(1, 2)).unwrap();
        joint
    }

    #[test]
    fn teleportation_moves_h_psi_on_both_branches() {
        let resource = teleportation_resource();
        let pattern = teleportation_pattern();
        let mut r = rng(57);
        for _ in 0..50 {
            let psi = StateVector::random(1, &mut r).unwrap();
            let joint = teleport_state(&psi);
            let expected = psi.applied(&Gate::h(1)).unwrap();

            let mut corrected_branches = Vec::new();
            for sign in [Sign::Plus, Sign::Minus] {
                let result = execute(
                    &joint,
                    &resource,
                    &pattern,
                    ExecutePolicy::Postselect(vec![sign]),
                )
                .unwrap();
                assert_eq!(result.residual.num_qubits(), 1);
                assert!((result.outcomes[0].probability - 0.5).abs() < 1e-10);
                let corrected = result.corrected_residual().unwrap();
                assert!(corrected.equal_up_to_global_phase(&expected, 1e-10).unwrap());
                corrected_branches.push(corrected);
            }
            assert!(corrected_branches[0]
                .equal_up_to_global_phase(&corrected_branches[1], 1e-10)
                .unwrap());
        }
    }

    #[test]
    fn injection_pattern_yields_plus_i_on_the_demo_resource() {
        let (resource, state) = transformed_demo_resource();
        let pattern = injection_pattern(4, 3);
        let expected = StateVector::product(&[
            NamedState::Plus,
            NamedState::Plus,
            NamedState::PlusI,
        ])
        .unwrap();

        for sign in [Sign::Plus, Sign::Minus] {
            let result = execute(
                &state,
                &resource,
                &pattern,
                ExecutePolicy::Postselect(vec![sign]),
            )
            .unwrap();
            assert_eq!(result.residual.num_qubits(), 3);
            // Qubits 1..3 keep their labels: the ancilla was the top one.
            assert_eq!(result.reindex.get(&3), Some(&3));
            let corrected = result.corrected_residual().unwrap();
            assert!(corrected.equal_up_to_global_phase(&expected, 1e-10).unwrap());
        }
    }

    #[test]
    fn sampling_is_reproducible_and_roughly_unbiased() {
        let (resource, state) = transformed_demo_resource();
        let pattern = injection_pattern(4, 3);

        let a = execute(&state, &resource, &pattern, ExecutePolicy::Sample { seed: 3 }).unwrap();
        let b = execute(&state, &resource, &pattern, ExecutePolicy::Sample { seed: 3 }).unwrap();
        assert_eq!(a.outcomes, b.outcomes);

        let mut stream = rng(11);
        let shots = 2000usize;
        let mut plus = 0usize;
        for _ in 0..shots {
            let result = execute_with_rng(&state, &resource, &pattern, &mut stream).unwrap();
            if result.outcomes[0].sign == Sign::Plus {
                plus += 1;
            }
        }
        let frequency = plus as f64 / shots as f64;
        assert!((frequency - 0.5).abs() < 0.05, "frequency {frequency}");
    }

    #[test]
    fn adaptive_flip_changes_the_recorded_operator() {
        // Step 2 measures X on qubit 2, flipped when step 1 saw -1. On
        // |0⟩⊗|+⟩ step 1 (Z on qubit 1) is deterministically +1... so use
        // |1⟩⊗|+⟩ to force -1 and trigger the flip.
        let mut graph = crate::hypergraph::Hypergraph::new(3).unwrap();
        graph.add_edge2(1, 2).unwrap();
        let resource = SectionedResource::new(
            graph,
            crate::hypergraph::Sections::new(vec![1, 2], vec![], vec![3]),
        )
        .unwrap();
        let state = StateVector::product(&[
            NamedState::One,
            NamedState::Plus,
            NamedState::Zero,
        ])
        .unwrap();
        // No edge applied: build the state by hand, sections only gate
        // measurability.
        let pattern = MeasurementPattern::new(vec![
            MeasurementStep::new(1, PauliBasis::Z),
            MeasurementStep::new(2, PauliBasis::X).adapting_on(1),
        ])
        .unwrap();

        let result = execute(
            &state,
            &resource,
            &pattern,
            ExecutePolicy::Postselect(vec![Sign::Minus, Sign::Minus]),
        )
        .unwrap();
        assert!(result.outcomes[0].sign == Sign::Minus);
        assert!(result.outcomes[1].flipped);
        // Qubit 2 is |+⟩, a certain +1 under X; measured as -X it is
        // recorded -1, with probability 1.
        assert_eq!(result.outcomes[1].sign, Sign::Minus);
        assert!((result.outcomes[1].probability - 1.0).abs() < 1e-12);

        // The unflipped branch is now impossible to force.
        let impossible = execute(
            &state,
            &resource,
            &pattern,
            ExecutePolicy::Postselect(vec![Sign::Minus, Sign::Plus]),
        );
        assert!(matches!(impossible, Err(MbqcError::State(_))));
    }

    #[test]
    fn frame_application_is_involutive() {
        let mut r = rng(63);
        for _ in 0..20 {
            let state = StateVector::random(3, &mut r).unwrap();
            let mut frame = PauliFrame::new();
            frame.flip(FramePauli::X, 1);
            frame.flip(FramePauli::Z, 1);
            frame.flip(FramePauli::Z, 2);
            frame.flip(FramePauli::X, 3);
            let twice = frame
                .apply_to(&frame.apply_to(&state).unwrap())
                .unwrap();
            assert!(state.distance(&twice).unwrap() < 1e-12);
        }
    }

    #[test]
    fn frame_toggles_cancel() {
        let mut frame = PauliFrame::new();
        frame.flip(FramePauli::X, 2);
        frame.flip(FramePauli::X, 2);
        assert!(frame.is_identity());
        frame.flip(FramePauli::Z, 5);
        assert_eq!(frame.flips_on(5), (false, true));
        assert_eq!(frame.support().collect::<Vec<_>>(), vec![5]);
    }

    #[test]
    fn removal_reindexes_surviving_qubits() {
        // Measure the middle qubit of three; survivors 1 and 3 become 1
        // and 2.
        let mut graph = crate::hypergraph::Hypergraph::new(3).unwrap();
        graph.add_edge2(1, 2).unwrap();
        let resource = SectionedResource::new(
            graph,
            crate::hypergraph::Sections::new(vec![2], vec![], vec![1, 3]),
        )
        .unwrap();
        let state = StateVector::product(&[
            NamedState::Zero,
            NamedState::Zero,
            NamedState::MinusI,
        ])
        .unwrap();
        let pattern = MeasurementPattern::new(vec![MeasurementStep::new(2, PauliBasis::X)
            .correcting(1, FramePauli::Z, 3)])
        .unwrap();

        let result = execute(
            &state,
            &resource,
            &pattern,
            ExecutePolicy::Postselect(vec![Sign::Minus]),
        )
        .unwrap();
        assert_eq!(
            result.reindex,
            BTreeMap::from([(1usize, 1usize), (3usize, 2usize)])
        );
        // The frame targeted original qubit 3; after relabeling it must
        // act on residual qubit 2.
        let relabeled = result.frame_on_residual().unwrap();
        assert_eq!(relabeled.flips_on(2), (false, true));
        let corrected = result.corrected_residual().unwrap();
        let expected = StateVector::product(&[NamedState::Zero, NamedState::PlusI]).unwrap();
        assert!(corrected.equal_up_to_global_phase(&expected, 1e-10).unwrap());
    }

    #[test]
    fn pattern_validation_rejects_inconsistent_rules() {
        let double = MeasurementPattern::new(vec![
            MeasurementStep::new(1, PauliBasis::X),
            MeasurementStep::new(1, PauliBasis::Z),
        ]);
        assert!(matches!(
            double,
            Err(MbqcError::RepeatedMeasurement { step: 2, qubit: 1 })
        ));

        let self_adapt =
            MeasurementPattern::new(vec![MeasurementStep::new(1, PauliBasis::X).adapting_on(1)]);
        assert!(matches!(
            self_adapt,
            Err(MbqcError::AdaptNotEarlier { step: 1, on: 1 })
        ));

        let future_correct = MeasurementPattern::new(vec![MeasurementStep::new(1, PauliBasis::X)
            .correcting(2, FramePauli::X, 2)]);
        assert!(matches!(
            future_correct,
            Err(MbqcError::CorrectionTooEarly { step: 1, on: 2 })
        ));
    }

    #[test]
    fn execution_validates_against_the_resource() {
        let (resource, state) = transformed_demo_resource();

        // Wrong width.
        let narrow = StateVector::zeros(3).unwrap();
        let pattern = injection_pattern(4, 3);
        assert!(matches!(
            execute(&narrow, &resource, &pattern, ExecutePolicy::Sample { seed: 0 }),
            Err(MbqcError::ResourceWidthMismatch { state: 3, sections: 4 })
        ));

        // Postselection list length.
        assert!(matches!(
            execute(&state, &resource, &pattern, ExecutePolicy::Postselect(vec![])),
            Err(MbqcError::PostselectionLength { steps: 1, given: 0 })
        ));

        // Empty pattern leaves the resource untouched.
        let empty = MeasurementPattern::new(vec![]).unwrap();
        let result = execute(&state, &resource, &empty, ExecutePolicy::Sample { seed: 0 }).unwrap();
        assert!(result.outcomes.is_empty());
        assert!(result.frame.is_identity());
        assert_eq!(result.residual.num_qubits(), 4);
        assert!(result.residual.distance(&state).unwrap() < 1e-15);
    }

    #[test]
    fn measuring_an_output_vertex_is_rejected() {
        let resource = teleportation_resource();
        let psi = StateVector::named(NamedState::Zero);
        let joint = teleport_state(&psi);
        let pattern =
            MeasurementPattern::new(vec![MeasurementStep::new(2, PauliBasis::X)]).unwrap();
        assert!(matches!(
            execute(&joint, &resource, &pattern, ExecutePolicy::Sample { seed: 0 }),
            Err(MbqcError::NotMeasurable { step: 1, qubit: 2 })
        ));
    }

    #[test]
    fn pattern_json_roundtrip() {
        let pattern = injection_pattern(4, 3);
        let json = serde_json::to_string(&pattern).unwrap();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["steps"][0]["qubit"], 4);
        assert_eq!(value["steps"][0]["basis"], "Y");
        assert_eq!(value["steps"][0]["correct"][0]["pauli"], "Z");

        let back: MeasurementPattern = serde_json::from_str(&json).unwrap();
        assert_eq!(back, pattern);

        // A malformed pattern is rejected on parse.
        let bad = r#"{"steps":[{"qubit":1,"basis":"X","adapt":[{"on":1,"flip":true}]}]}"#;
        assert!(serde_json::from_str::<MeasurementPattern>(bad).is_err());
    }
}
