//! Named check suites over every identity this crate relies on.
//!
//! Each check runs an exact simulation, measures a deviation, and passes
//! iff the deviation is within its tolerance. Checks are deterministic
//! for a fixed seed, and the JSON form of a report contains no wall-clock
//! data, so repeated runs with the same flags are byte identical. The
//! human-readable table does include per-check timing.

use std::time::{Duration, Instant};

use serde_json::json;

use crate::circuits::{
    catalytic_s_former, catalytic_s_gadget, catalytic_s_latter, controlled_s_gadget,
    cz_from_ccz_gadget, duplicate_plus_i_gadget, prepare_one_gadget, random_circuit, Alphabet,
    Circuit, Gate,
};
use crate::compiler::{compile_catalytic, compile_strict, plan_parallel};
use crate::counts::{
    max_under_budget, qubits_rnq1, qubits_rnq2, Formula, ResourceParams,
};
use crate::hypergraph::{transformed_demo_resource, y_inject, Byproduct, Hypergraph};
use crate::mbqc::{
    execute, injection_pattern, teleportation_pattern, teleportation_resource, ExecutePolicy,
    FramePauli, PauliFrame,
};
use crate::statevec::{MeasurePolicy, NamedState, PauliBasis, Sign, StateVector};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Default seed for randomized checks; overridable per run.
pub const DEFAULT_SEED: u64 = 7;

/// A named group of checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// The controlled-S gadget and the CS lowering built on it.
    AppendixA,
    /// CZ from CCZ, |1⟩ preparation, and the catalytic S identities.
    AppendixB,
    /// Catalyst duplication.
    AppendixC,
    /// Resource states, the fidelity bound, injection and patterns.
    Hypergraph,
    /// The catalytic compiler end to end.
    Compiler,
    /// Counting formulas and budget frontiers.
    Counts,
    /// Everything above.
    All,
}

impl Suite {
    pub const ALL_NAMES: [&'static str; 7] = [
        "appendixA",
        "appendixB",
        "appendixC",
        "hypergraph",
        "compiler",
        "counts",
        "all",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::AppendixA => "appendixA",
            Suite::AppendixB => "appendixB",
            Suite::AppendixC => "appendixC",
            Suite::Hypergraph => "hypergraph",
            Suite::Compiler => "compiler",
            Suite::Counts => "counts",
            Suite::All => "all",
        }
    }
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "appendixa" => Ok(Suite::AppendixA),
            "appendixb" => Ok(Suite::AppendixB),
            "appendixc" => Ok(Suite::AppendixC),
            "hypergraph" => Ok(Suite::Hypergraph),
            "compiler" => Ok(Suite::Compiler),
            "counts" => Ok(Suite::Counts),
            "all" => Ok(Suite::All),
            other => Err(format!(
                "unknown suite '{other}', expected one of: {}",
                Suite::ALL_NAMES.join(", ")
            )),
        }
    }
}

/// One executed check.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub deviation: f64,
    pub tolerance: f64,
    pub wall: Duration,
    /// Populated only when the check could not run at all.
    pub error: Option<String>,
}

/// The outcome of a suite run.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub suite: Suite,
    pub seed: u64,
    pub version: String,
    pub precision: String,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_count(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    /// Deterministic JSON: no timing, fixed ordering, stable float text.
    pub fn to_json(&self) -> serde_json::Value {
        let checks: Vec<serde_json::Value> = self
            .checks
            .iter()
            .map(|c| {
                let mut entry = json!({
                    "name": c.name,
                    "passed": c.passed,
                    "deviation": c.deviation,
                    "tolerance": c.tolerance,
                });
                if let Some(message) = &c.error {
                    entry["error"] = json!(message);
                }
                entry
            })
            .collect();
        json!({
            "suite": self.suite.name(),
            "seed": self.seed,
            "version": self.version,
            "precision": self.precision,
            "passed": self.all_passed(),
            "checks": checks,
        })
    }

    /// Fixed-width table with wall-clock timing, for human eyes.
    pub fn render_table(&self) -> String {
        let name_width = self
            .checks
            .iter()
            .map(|c| c.name.len())
            .max()
            .unwrap_or(5)
            .max(5);
        let mut out = String::new();
        out.push_str(&format!(
            "suite {} (seed {}, v{}, {})\n",
            self.suite, self.seed, self.version, self.precision
        ));
        out.push_str(&format!(
            "{:<name_width$}  {:<6}  {:>12}  {:>12}  {:>9}\n",
            "check", "status", "deviation", "tolerance", "time"
        ));
        for check in &self.checks {
            let status = if check.passed { "pass" } else { "FAIL" };
            let time = format!("{:.2} ms", check.wall.as_secs_f64() * 1e3);
            out.push_str(&format!(
                "{:<name_width$}  {:<6}  {:>12.3e}  {:>12.3e}  {:>9}\n",
                check.name, status, check.deviation, check.tolerance, time
            ));
            if let Some(message) = &check.error {
                out.push_str(&format!("    error: {message}\n"));
            }
        }
        let failed = self.failed_count();
        if failed == 0 {
            out.push_str(&format!("all {} checks passed\n", self.checks.len()));
        } else {
            out.push_str(&format!(
                "{failed} of {} checks FAILED\n",
                self.checks.len()
            ));
        }
        out
    }
}

type CheckBody = Box<dyn FnOnce() -> Result<f64, Box<dyn std::error::Error>>>;

fn run_check(name: &str, tolerance: f64, body: CheckBody) -> CheckResult {
    let start = Instant::now();
    match body() {
        Ok(deviation) => CheckResult {
            name: name.to_string(),
            passed: deviation <= tolerance,
            deviation,
            tolerance,
            wall: start.elapsed(),
            error: None,
        },
        Err(error) => CheckResult {
            name: name.to_string(),
            passed: false,
            deviation: f64::INFINITY,
            tolerance,
            wall: start.elapsed(),
            error: Some(error.to_string()),
        },
    }
}

fn rng_for(seed: u64, salt: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Run one suite and collect its report, sorted by check name.
pub fn run_suite(suite: Suite, seed: u64) -> VerificationReport {
    let mut checks = Vec::new();
    match suite {
        Suite::AppendixA => checks_appendix_a(seed, &mut checks),
        Suite::AppendixB => checks_appendix_b(seed, &mut checks),
        Suite::AppendixC => checks_appendix_c(seed, &mut checks),
        Suite::Hypergraph => checks_hypergraph(seed, &mut checks),
        Suite::Compiler => checks_compiler(seed, &mut checks),
        Suite::Counts => checks_counts(seed, &mut checks),
        Suite::All => {
            checks_appendix_a(seed, &mut checks);
            checks_appendix_b(seed, &mut checks);
            checks_appendix_c(seed, &mut checks);
            checks_hypergraph(seed, &mut checks);
            checks_compiler(seed, &mut checks);
            checks_counts(seed, &mut checks);
        }
    }
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    VerificationReport {
        suite,
        seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        precision: "f64".to_string(),
        checks,
    }
}

fn checks_appendix_a(seed: u64, out: &mut Vec<CheckResult>) {
    out.push(run_check(
        "appendixA.controlled_s.basis_action",
        1e-10,
        Box::new(|| {
            // The gadget fixes |00⟩, |01⟩ and |10⟩ and puts phase i on
            // |11⟩, always returning the ancilla to |0⟩.
            let gadget = controlled_s_gadget();
            let i = num_complex::Complex64::new(0.0, 1.0);
            let mut worst = 0.0f64;
            for bits in ["000", "010", "100", "110"] {
                let input = StateVector::basis(3, bits)?;
                let output = gadget.run(&input)?;
                let expected = if bits == "110" {
                    let mut amps = vec![num_complex::Complex64::new(0.0, 0.0); 8];
                    amps[0b110] = i;
                    StateVector::from_amplitudes(amps)?
                } else {
                    input.clone()
                };
                worst = worst.max(output.distance(&expected)?);
            }
            Ok(worst)
        }),
    ));

    out.push(run_check(
        "appendixA.controlled_s.superpositions",
        1e-10,
        Box::new(move || {
            let gadget = controlled_s_gadget();
            let native = Circuit::from_gates(3, Alphabet::Full, vec![Gate::cs(1, 2)])?;
            let zero = StateVector::named(NamedState::Zero);
            let mut rng = rng_for(seed, 1);
            let mut worst = 0.0f64;
            for _ in 0..25 {
                let pair = StateVector::random(2, &mut rng)?;
                let input = pair.tensor(&zero)?;
                let output = gadget.run(&input)?;
                let expected = native.run(&input)?;
                worst = worst.max(output.distance(&expected)?);
            }
            Ok(worst)
        }),
    ));

    out.push(run_check(
        "appendixA.controlled_s.ancilla_returned",
        1e-12,
        Box::new(move || {
            let gadget = controlled_s_gadget();
            let zero = StateVector::named(NamedState::Zero);
            let mut rng = rng_for(seed, 2);
            let mut worst = 0.0f64;
            for _ in 0..25 {
                let input = StateVector::random(2, &mut rng)?.tensor(&zero)?;
                let output = gadget.run(&input)?;
                worst = worst.max(output.population_one(3)?);
            }
            Ok(worst)
        }),
    ));

    out.push(run_check(
        "appendixA.lower_cs.random_circuits",
        1e-9,
        Box::new(move || {
            let mut rng = rng_for(seed, 3);
            let mut worst = 0.0f64;
            for _ in 0..20 {
                let source = random_circuit(3, 12, Alphabet::HCS, &mut rng)?;
                let lowered = crate::compiler::lower_cs(&source)?;
                let mut native = Circuit::new(4, Alphabet::Full)?;
                for gate in source.gates() {
                    native.push(gate.clone())?;
                }
                let input = StateVector::zeros(4)?;
                let a = lowered.run(&input)?;
                let b = native.run(&input)?;
                worst = worst.max(a.distance_up_to_global_phase(&b)?);
            }
            Ok(worst)
        }),
    ));
}

fn checks_appendix_b(seed: u64, out: &mut Vec<CheckResult>) {
    out.push(run_check(
        "appendixB.cz_from_ccz.unitary",
        1e-12,
        Box::new(|| {
            let gadget = cz_from_ccz_gadget();
            let native = Circuit::from_gates(3, Alphabet::Full, vec![Gate::cz(1, 2)])?;
            Ok(gadget.unitary()?.max_entry_distance(&native.unitary()?)?)
        }),
    ));

    out.push(run_check(
        "appendixB.prepare_one.basis_output",
        1e-12,
        Box::new(|| {
            let output = prepare_one_gadget().run(&StateVector::zeros(3)?)?;
            Ok(output.distance(&StateVector::basis(3, "100")?)?)
        }),
    ));

    out.push(run_check(
        "appendixB.prepare_one.workspace_population",
        1e-12,
        Box::new(|| {
            let output = prepare_one_gadget().run(&StateVector::zeros(3)?)?;
            Ok(output.population_one(2)? + output.population_one(3)?)
        }),
    ));

    out.push(run_check(
        "appendixB.catalytic_s.former_identity",
        1e-10,
        Box::new(move || {
            let former = catalytic_s_former();
            let one = StateVector::named(NamedState::One);
            let plus_i = StateVector::named(NamedState::PlusI);
            let mut rng = rng_for(seed, 4);
            let mut worst = 0.0f64;
            for _ in 0..25 {
                let psi = StateVector::random(1, &mut rng)?;
                let input = one.tensor(&plus_i)?.tensor(&psi)?;
                let s_psi = psi.applied(&Gate::s(1))?;
                let expected = one.tensor(&s_psi)?.tensor(&plus_i)?;
                worst = worst.max(former.run(&input)?.distance(&expected)?);
            }
            Ok(worst)
        }),
    ));

    out.push(run_check(
        "appendixB.catalytic_s.latter_swap",
        1e-10,
        Box::new(move || {
            let latter = catalytic_s_latter();
            let one = StateVector::named(NamedState::One);
            let swap = Circuit::from_gates(3, Alphabet::Full, vec![Gate::swap(2, 3)])?;
            let mut rng = rng_for(seed, 5);
            let mut worst = 0.0f64;
            for _ in 0..25 {
                let pair = StateVector::random(2, &mut rng)?;
                let input = one.tensor(&pair)?;
                let expected = swap.run(&input)?;
                worst = worst.max(latter.run(&input)?.distance(&expected)?);
            }
            Ok(worst)
        }),
    ));

    out.push(run_check(
        "appendixB.catalytic_s.full_gadget",
        1e-10,
        Box::new(move || {
            let gadget = catalytic_s_gadget();
            let one = StateVector::named(NamedState::One);
            let plus_i = StateVector::named(NamedState::PlusI);
            let mut rng = rng_for(seed, 6);
            let mut worst = 0.0f64;
            for _ in 0..100 {
                let psi = StateVector::random(1, &mut rng)?;
                let input = one.tensor(&plus_i)?.tensor(&psi)?;
                let expected = one.tensor(&plus_i)?.tensor(&psi.applied(&Gate::s(1))?)?;
                worst = worst.max(gadget.run(&input)?.distance(&expected)?);
            }
            Ok(worst)
        }),
    ));

    out.push(run_check(
        "appendixB.catalytic_s.fourth_power",
        1e-10,
        Box::new(move || {
            // S has order four; the gadget applied four times must be the
            // identity on the data qubit, catalyst included.
            let gadget = catalytic_s_gadget();
            let one = StateVector::named(NamedState::One);
            let plus_i = StateVector::named(NamedState::PlusI);
            let mut rng = rng_for(seed, 7);
            let mut worst = 0.0f64;
            for _ in 0..10 {
                let psi = StateVector::random(1, &mut rng)?;
                let input = one.tensor(&plus_i)?.tensor(&psi)?;
                let mut state = input.clone();
                for _ in 0..4 {
                    state = gadget.run(&state)?;
                }
                worst = worst.max(state.distance(&input)?);
            }
            Ok(worst)
        }),
    ));
}

fn checks_appendix_c(_seed: u64, out: &mut Vec<CheckResult>) {
    out.push(run_check(
        "appendixC.duplicate.exact_map",
        1e-12,
        Box::new(|| {
            let gadget = duplicate_plus_i_gadget();
            let input = StateVector::product(&[
                NamedState::One,
                NamedState::Zero,
                NamedState::PlusI,
            ])?;
            let expected = StateVector::product(&[
                NamedState::One,
                NamedState::PlusI,
                NamedState::PlusI,
            ])?;
            Ok(gadget.run(&input)?.distance(&expected)?)
        }),
    ));

    out.push(run_check(
        "appendixC.duplicate.flag_off",
        1e-12,
        Box::new(|| {
            let gadget = duplicate_plus_i_gadget();
            let input = StateVector::product(&[
                NamedState::Zero,
                NamedState::Zero,
                NamedState::PlusI,
            ])?;
            let expected = StateVector::product(&[
                NamedState::Zero,
                NamedState::Plus,
                NamedState::PlusI,
            ])?;
            Ok(gadget.run(&input)?.distance(&expected)?)
        }),
    ));

    out.push(run_check(
        "appendixC.duplicate.chain_k4",
        1e-10,
        Box::new(|| {
            let plan = plan_parallel(4)?;
            let output = plan.to_circuit()?.run(&plan.reference_input()?)?;
            let mut factors = vec![NamedState::One];
            factors.extend(std::iter::repeat_n(NamedState::PlusI, 4));
            Ok(output.distance(&StateVector::product(&factors)?)?)
        }),
    ));
}

fn checks_hypergraph(seed: u64, out: &mut Vec<CheckResult>) {
    fn random_graph(m: usize, rng: &mut ChaCha12Rng) -> Result<Hypergraph, Box<dyn std::error::Error>> {
        let mut graph = Hypergraph::new(m)?;
        for _ in 0..(2 * m) {
            let j = rng.random_range(1..=m);
            let k = rng.random_range(1..=m);
            if j != k {
                let _ = graph.add_edge2(j, k);
            }
            if m >= 3 {
                let l = rng.random_range(1..=m);
                if j != k && k != l && j != l {
                    let _ = graph.add_edge3(j, k, l);
                }
            }
        }
        Ok(graph)
    }

    out.push(run_check(
        "hypergraph.states.realness",
        1e-12,
        Box::new(move || {
            let mut rng = rng_for(seed, 8);
            let mut worst = 0.0f64;
            for m in 1..=5usize {
                for _ in 0..4 {
                    let state = random_graph(m, &mut rng)?.build_state()?;
                    for index in 0..state.dim() {
                        worst = worst.max(state.amp(index).im.abs());
                    }
                }
            }
            Ok(worst)
        }),
    ));

    out.push(run_check(
        "hypergraph.states.magnitudes",
        1e-12,
        Box::new(move || {
            let mut rng = rng_for(seed, 9);
            let mut worst = 0.0f64;
            for m in 1..=5usize {
                for _ in 0..4 {
                    let state = random_graph(m, &mut rng)?.build_state()?;
                    let magnitude = 0.5f64.powf(m as f64 / 2.0);
                    for index in 0..state.dim() {
                        worst = worst.max((state.amp(index).norm() - magnitude).abs());
                    }
                }
            }
            Ok(worst)
        }),
    ));

    out.push(run_check(
        "hypergraph.states.edge_order",
        0.0,
        Box::new(|| {
            let mut forward = Hypergraph::new(4)?;
            forward.add_edge2(1, 2)?;
            forward.add_edge2(2, 3)?;
            forward.add_edge3(1, 2, 4)?;
            forward.add_edge3(2, 3, 4)?;
            let mut backward = Hypergraph::new(4)?;
            backward.add_edge3(4, 3, 2)?;
            backward.add_edge3(4, 2, 1)?;
            backward.add_edge2(3, 2)?;
            backward.add_edge2(2, 1)?;
            Ok(forward.build_state()?.distance(&backward.build_state()?)?)
        }),
    ));

    out.push(run_check(
        "hypergraph.fidelity_bound.plus_i_weight",
        1e-12,
        Box::new(move || {
            // On any real state the |+i⟩⟨+i| weight of each qubit is
            // exactly 1/2: Y expectations vanish. This is the obstruction
            // that makes injection necessary.
            let mut rng = rng_for(seed, 10);
            let mut worst = 0.0f64;
            for m in 1..=4usize {
                for _ in 0..3 {
                    let state = random_graph(m, &mut rng)?.build_state()?;
                    for qubit in 1..=m {
                        let weight =
                            state.outcome_probability(qubit, PauliBasis::Y, Sign::Plus)?;
                        worst = worst.max((weight - 0.5).abs());
                    }
                }
            }
            Ok(worst)
        }),
    ));

    out.push(run_check(
        "hypergraph.injection.plus_branch",
        1e-10,
        Box::new(|| {
            let (_, state) = transformed_demo_resource();
            let (post, byproduct, _) =
                y_inject(&state, 4, 3, MeasurePolicy::Postselect(Sign::Plus))?;
            if byproduct != Byproduct::Identity {
                return Err("plus branch reported a Z byproduct".into());
            }
            let (rest, _) =
                post.contract_qubit(4, &StateVector::pauli_eigenstate(PauliBasis::Y, Sign::Plus))?;
            let expected = StateVector::product(&[
                NamedState::Plus,
                NamedState::Plus,
                NamedState::PlusI,
            ])?;
            Ok(1.0 - rest.fidelity(&expected)?)
        }),
    ));

    out.push(run_check(
        "hypergraph.injection.minus_branch",
        1e-10,
        Box::new(|| {
            let (_, state) = transformed_demo_resource();
            let (post, byproduct, _) =
                y_inject(&state, 4, 3, MeasurePolicy::Postselect(Sign::Minus))?;
            if byproduct != Byproduct::Z {
                return Err("minus branch reported no byproduct".into());
            }
            let corrected = byproduct.correct(&post, 3)?;
            let (rest, _) = corrected
                .contract_qubit(4, &StateVector::pauli_eigenstate(PauliBasis::Y, Sign::Minus))?;
            let expected = StateVector::product(&[
                NamedState::Plus,
                NamedState::Plus,
                NamedState::PlusI,
            ])?;
            Ok(1.0 - rest.fidelity(&expected)?)
        }),
    ));

    out.push(run_check(
        "hypergraph.injection.branch_probabilities",
        1e-12,
        Box::new(|| {
            let (_, state) = transformed_demo_resource();
            let mut worst = 0.0f64;
            for sign in [Sign::Plus, Sign::Minus] {
                let (_, _, outcome) = y_inject(&state, 4, 3, MeasurePolicy::Postselect(sign))?;
                worst = worst.max((outcome.probability - 0.5).abs());
            }
            Ok(worst)
        }),
    ));

    out.push(run_check(
        "hypergraph.pattern.injection_corrected",
        1e-10,
        Box::new(|| {
            let (resource, state) = transformed_demo_resource();
            let pattern = injection_pattern(4, 3);
            let expected = StateVector::product(&[
                NamedState::Plus,
                NamedState::Plus,
                NamedState::PlusI,
            ])?;
            let mut worst = 0.0f64;
            for sign in [Sign::Plus, Sign::Minus] {
                let result = execute(
                    &state,
                    &resource,
                    &pattern,
                    ExecutePolicy::Postselect(vec![sign]),
                )?;
                let corrected = result.corrected_residual()?;
                worst = worst.max(corrected.distance_up_to_global_phase(&expected)?);
            }
            Ok(worst)
        }),
    ));

    out.push(run_check(
        "hypergraph.pattern.teleportation",
        1e-10,
        Box::new(move || {
            let resource = teleportation_resource();
            let pattern = teleportation_pattern();
            let mut rng = rng_for(seed, 11);
            let mut worst = 0.0f64;
            for _ in 0..10 {
                let psi = StateVector::random(1, &mut rng)?;
                let mut joint = psi.tensor(&StateVector::named(NamedState::Plus))?;
                joint.apply(&Gate::cz(1, 2))?;
                let expected = psi.applied(&Gate::h(1))?;
                for sign in [Sign::Plus, Sign::Minus] {
                    let result = execute(
                        &joint,
                        &resource,
                        &pattern,
                        ExecutePolicy::Postselect(vec![sign]),
                    )?;
                    let corrected = result.corrected_residual()?;
                    worst = worst.max(corrected.distance_up_to_global_phase(&expected)?);
                }
            }
            Ok(worst)
        }),
    ));

    out.push(run_check(
        "hypergraph.pattern.frame_involution",
        1e-12,
        Box::new(move || {
            let mut rng = rng_for(seed, 12);
            let mut worst = 0.0f64;
            for _ in 0..10 {
                let state = StateVector::random(3, &mut rng)?;
                let mut frame = PauliFrame::new();
                for qubit in 1..=3usize {
                    if rng.random::<bool>() {
                        frame.flip(FramePauli::X, qubit);
                    }
                    if rng.random::<bool>() {
                        frame.flip(FramePauli::Z, qubit);
                    }
                }
                let twice = frame.apply_to(&frame.apply_to(&state)?)?;
                worst = worst.max(state.distance(&twice)?);
            }
            Ok(worst)
        }),
    ));
}

fn checks_compiler(seed: u64, out: &mut Vec<CheckResult>) {
    out.push(run_check(
        "compiler.catalytic.random_soundness",
        1e-9,
        Box::new(move || {
            let mut rng = rng_for(seed, 13);
            let mut worst = 0.0f64;
            for _ in 0..50 {
                let n = rng.random_range(2..=4usize);
                let len = rng.random_range(1..=24usize);
                let mut source = random_circuit(n, len, Alphabet::HSCCZ, &mut rng)?;
                source.push(Gate::s(rng.random_range(1..=n)))?;
                let program = compile_catalytic(&source)?;
                let oracle = source.run(&StateVector::zeros(n)?)?;
                let expected = oracle
                    .tensor(&StateVector::named(NamedState::One))?
                    .tensor(&StateVector::named(NamedState::PlusI))?;
                worst = worst.max(program.run()?.distance_up_to_global_phase(&expected)?);
            }
            Ok(worst)
        }),
    ));

    out.push(run_check(
        "compiler.catalytic.catalyst_exact",
        1e-10,
        Box::new(move || {
            let mut rng = rng_for(seed, 14);
            let mut worst = 0.0f64;
            for _ in 0..20 {
                let n = rng.random_range(2..=4usize);
                let mut source = random_circuit(n, 12, Alphabet::HSCCZ, &mut rng)?;
                source.push(Gate::s(rng.random_range(1..=n)))?;
                let program = compile_catalytic(&source)?;
                let (_, weight) = program.logical_output()?;
                worst = worst.max((1.0 - weight).abs());
            }
            Ok(worst)
        }),
    ));

    out.push(run_check(
        "compiler.catalytic.boundary_conservation",
        1e-10,
        Box::new(move || {
            let mut rng = rng_for(seed, 15);
            let mut worst = 0.0f64;
            for _ in 0..10 {
                let n = rng.random_range(2..=3usize);
                let mut source = random_circuit(n, 10, Alphabet::HSCCZ, &mut rng)?;
                source.push(Gate::s(rng.random_range(1..=n)))?;
                let program = compile_catalytic(&source)?;
                worst = worst.max(program.catalyst_conservation_deviation()?);
            }
            Ok(worst)
        }),
    ));

    out.push(run_check(
        "compiler.catalytic.width_n_plus_2",
        0.0,
        Box::new(move || {
            let mut rng = rng_for(seed, 16);
            let mut violations = 0u32;
            for _ in 0..10 {
                let n = rng.random_range(2..=5usize);
                let source = random_circuit(n, 15, Alphabet::HSCCZ, &mut rng)?;
                let program = compile_catalytic(&source)?;
                if program.inner().num_qubits() != n + 2 {
                    violations += 1;
                }
                if program.inner().alphabet() != Alphabet::HCCZ {
                    violations += 1;
                }
            }
            Ok(f64::from(violations))
        }),
    ));

    out.push(run_check(
        "compiler.strict.end_to_end",
        1e-9,
        Box::new(move || {
            let mut rng = rng_for(seed, 17);
            let mut worst = 0.0f64;
            for _ in 0..20 {
                let source = random_circuit(3, 10, Alphabet::HCS, &mut rng)?;
                let program = compile_strict(&source)?;
                // Native oracle with the CS ancilla appended.
                let mut native = Circuit::new(4, Alphabet::Full)?;
                for gate in source.gates() {
                    native.push(gate.clone())?;
                }
                let oracle = native.run(&StateVector::zeros(4)?)?;
                let (logical, weight) = program.logical_output()?;
                worst = worst.max((1.0 - weight).abs());
                worst = worst.max(logical.distance_up_to_global_phase(&oracle)?);
            }
            Ok(worst)
        }),
    ));

    out.push(run_check(
        "compiler.parallel.k_sweep",
        1e-10,
        Box::new(|| {
            let mut worst = 0.0f64;
            for k in 1..=4usize {
                let plan = plan_parallel(k)?;
                let output = plan.to_circuit()?.run(&plan.reference_input()?)?;
                let mut factors = vec![NamedState::One];
                factors.extend(std::iter::repeat_n(NamedState::PlusI, k));
                worst = worst.max(output.distance(&StateVector::product(&factors)?)?);
            }
            Ok(worst)
        }),
    ));
}

fn checks_counts(_seed: u64, out: &mut Vec<CheckResult>) {
    fn params(n: u64, d: u64) -> ResourceParams {
        ResourceParams { n, d }
    }

    out.push(run_check(
        "counts.rnq1.golden",
        0.0,
        Box::new(|| {
            let mut worst = 0.0f64;
            for (n, d, expected) in [(6, 5, 7495u64), (3, 1, 67)] {
                let value = qubits_rnq1(params(n, d))?;
                worst = worst.max((value as f64 - expected as f64).abs());
            }
            Ok(worst)
        }),
    ));

    out.push(run_check(
        "counts.rnq2.golden",
        0.0,
        Box::new(|| {
            let mut worst = 0.0f64;
            for (n, d, expected) in [(6, 5, 607u64), (2, 1, 21), (1, 1, 8)] {
                let value = qubits_rnq2(params(n, d))?;
                worst = worst.max((value as f64 - expected as f64).abs());
            }
            Ok(worst)
        }),
    ));

    out.push(run_check(
        "counts.budget_1121.n_max",
        0.0,
        Box::new(|| {
            let report = max_under_budget(1121, Formula::Rnq2)?;
            Ok((report.n_max as f64 - 26.0).abs())
        }),
    ));

    out.push(run_check(
        "counts.budget_1121.d_max",
        0.0,
        Box::new(|| {
            let report = max_under_budget(1121, Formula::Rnq2)?;
            Ok((report.d_max as f64 - 28.0).abs())
        }),
    ));

    out.push(run_check(
        "counts.monotonicity",
        0.0,
        Box::new(|| {
            let mut violations = 0u32;
            for formula in [Formula::Rnq1, Formula::Rnq2] {
                for n in formula.min_n()..=32 {
                    for d in 1..=32 {
                        let here = formula.evaluate(params(n, d))?;
                        if formula.evaluate(params(n + 1, d))? <= here {
                            violations += 1;
                        }
                        if formula.evaluate(params(n, d + 1))? <= here {
                            violations += 1;
                        }
                    }
                }
            }
            Ok(f64::from(violations))
        }),
    ));

    out.push(run_check(
        "counts.crossover.rnq2_wins",
        0.0,
        Box::new(|| {
            let mut violations = 0u32;
            for n in 6..=32 {
                for d in [1u64, 4, 16] {
                    if qubits_rnq2(params(n, d))? >= qubits_rnq1(params(n, d))? {
                        violations += 1;
                    }
                }
            }
            Ok(f64::from(violations))
        }),
    ));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_with_the_default_seed() {
        for suite in [
            Suite::AppendixA,
            Suite::AppendixB,
            Suite::AppendixC,
            Suite::Hypergraph,
            Suite::Compiler,
            Suite::Counts,
        ] {
            let report = run_suite(suite, DEFAULT_SEED);
            assert!(!report.checks.is_empty());
            for check in &report.checks {
                assert!(
                    check.passed,
                    "{} failed: deviation {:.3e} > {:.3e} {}",
                    check.name,
                    check.deviation,
                    check.tolerance,
                    check.error.as_deref().unwrap_or("")
                );
            }
        }
    }

    #[test]
    fn the_all_suite_merges_everything_sorted() {
        let report = run_suite(Suite::All, DEFAULT_SEED);
        let names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
        assert!(names.iter().any(|n| n.starts_with("appendixA.")));
        assert!(names.iter().any(|n| n.starts_with("counts.")));
        assert!(report.all_passed());
    }

    #[test]
    fn json_report_is_deterministic_and_time_free() {
        let a = run_suite(Suite::AppendixB, 11).to_json();
        let b = run_suite(Suite::AppendixB, 11).to_json();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        let text = serde_json::to_string(&a).unwrap();
        assert!(!text.contains("wall"));
        assert!(!text.contains("time"));
        assert_eq!(a["seed"], 11);
        assert_eq!(a["precision"], "f64");
    }

    #[test]
    fn table_rendering_flags_failures() {
        let mut report = run_suite(Suite::Counts, DEFAULT_SEED);
        let table = report.render_table();
        assert!(table.contains("all"));
        assert!(table.contains("pass"));

        report.checks[0].passed = false;
        let broken = report.render_table();
        assert!(broken.contains("FAIL"));
        assert!(report.failed_count() == 1);
    }

    #[test]
    fn suite_names_parse_exactly() {
        for name in Suite::ALL_NAMES {
            let suite: Suite = name.parse().unwrap();
            assert_eq!(suite.name(), name);
        }
        assert!("appendixD".parse::<Suite>().is_err());
        assert!("".parse::<Suite>().is_err());
    }
}
