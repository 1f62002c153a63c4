//! Command-line surface: verify, compile, simulate, counts.
//!
//! Exit codes are part of the contract: 0 success, 1 failed checks or
//! i/o trouble, 2 usage errors (unknown suite, formula or mode), 3
//! malformed or invalid input (bad JSON, alphabet violations), 4 a
//! compile-time equivalence check that did not hold, 5 a request beyond
//! the simulation caps. With a fixed seed every JSON output is byte
//! identical across runs; the seed comes from `--seed`, then the
//! `PLUSI_SEED` environment variable, then the built-in default.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::json;
use thiserror::Error;

use crate::circuits::Circuit;
use crate::compiler::{compile_catalytic, compile_strict, CatalyticProgram, CompileError};
use crate::counts::{max_under_budget, CountsError, Formula, ResourceParams};
use crate::hypergraph::{HypergraphError, SectionedResource};
use crate::mbqc::{
    execute_with_rng, ExecutePolicy, MeasurementPattern, MeasurementStep,
};
use crate::statevec::{basis_label, NamedState, Sign, StateVector, MAX_QUBITS};
use crate::verify::{run_suite, Suite, DEFAULT_SEED};

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Environment variable consulted when `--seed` is absent.
pub const SEED_ENV_VAR: &str = "PLUSI_SEED";

/// Register width --verify is willing to simulate.
pub const VERIFY_MAX_LOGICAL_QUBITS: usize = 8;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    InvalidInput(String),
    #[error("{0}")]
    VerificationFailed(String),
    #[error("{0}")]
    CapExceeded(String),
    #[error("{0} of {1} checks failed")]
    ChecksFailed(usize, usize),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ChecksFailed(..) | CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::InvalidInput(_) => 3,
            CliError::VerificationFailed(_) => 4,
            CliError::CapExceeded(_) => 5,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "plusi",
    version,
    about = "Catalytic {H, CCZ} circuits: verify, compile, simulate, count"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a named check suite and report deviations.
    Verify {
        /// Suite: appendixA, appendixB, appendixC, hypergraph, compiler,
        /// counts, or all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Seed for randomized checks.
        #[arg(long)]
        seed: Option<u64>,
        /// Emit the deterministic JSON report instead of the table.
        #[arg(long)]
        json: bool,
    },
    /// Compile a circuit JSON file into a catalytic program.
    Compile {
        /// Input circuit (JSON).
        #[arg(long = "in")]
        input: PathBuf,
        /// catalytic (from {H, S, CCZ}) or strict (from {H, CS}).
        #[arg(long, default_value = "catalytic")]
        mode: String,
        /// Where to write the program JSON; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Simulate source and program and require equivalence.
        #[arg(long)]
        verify: bool,
    },
    /// Run a circuit or a measurement pattern from a JSON file.
    Simulate {
        /// Input file: a circuit, or {"resource": ..., "steps": [...]}.
        #[arg(long = "in")]
        input: PathBuf,
        /// Initial state for circuits: comma-separated tokens from
        /// {0, 1, +, -, +i, -i}, or a plain bitstring.
        #[arg(long = "input")]
        initial: Option<String>,
        /// Force pattern outcomes: comma-separated +1/-1 (or +/-).
        #[arg(long)]
        postselect: Option<String>,
        /// Seed for sampled outcomes.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of sampled pattern runs; one JSON line each.
        #[arg(long, default_value_t = 1)]
        shots: u64,
    },
    /// Evaluate resource-count formulas or scan a qubit budget.
    Counts {
        /// Logical width n; requires --d.
        #[arg(long)]
        n: Option<u64>,
        /// Depth d; requires --n.
        #[arg(long)]
        d: Option<u64>,
        /// rnq1 or rnq2.
        #[arg(long, default_value = "rnq2")]
        formula: String,
        /// Report the feasibility frontier under this many qubits.
        #[arg(long)]
        budget: Option<u64>,
        /// Emit JSON instead of the table.
        #[arg(long)]
        json: bool,
    },
}

/// Dispatch a parsed invocation. Errors carry their exit code.
pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Verify { suite, seed, json } => cmd_verify(&suite, seed, json),
        Command::Compile {
            input,
            mode,
            out,
            verify,
        } => cmd_compile(&input, &mode, out.as_deref(), verify),
        Command::Simulate {
            input,
            initial,
            postselect,
            seed,
            shots,
        } => cmd_simulate(&input, initial.as_deref(), postselect.as_deref(), seed, shots),
        Command::Counts {
            n,
            d,
            formula,
            budget,
            json,
        } => cmd_counts(n, d, &formula, budget, json),
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV_VAR) {
        Ok(text) => text.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "{SEED_ENV_VAR} must be an unsigned integer, got '{text}'"
            ))
        }),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_SEED),
        Err(error) => Err(CliError::Usage(format!("{SEED_ENV_VAR}: {error}"))),
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|error| CliError::InvalidInput(format!("cannot read {}: {error}", path.display())))
}

fn cmd_verify(suite: &str, seed: Option<u64>, json: bool) -> Result<(), CliError> {
    let suite: Suite = suite.parse().map_err(CliError::Usage)?;
    let seed = resolve_seed(seed)?;
    let report = run_suite(suite, seed);
    if json {
        println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("report is plain data"));
    } else {
        print!("{}", report.render_table());
    }
    if report.all_passed() {
        Ok(())
    } else {
        Err(CliError::ChecksFailed(
            report.failed_count(),
            report.checks.len(),
        ))
    }
}

fn map_compile_error(error: CompileError) -> CliError {
    CliError::InvalidInput(error.to_string())
}

fn cmd_compile(
    input: &Path,
    mode: &str,
    out: Option<&Path>,
    verify: bool,
) -> Result<(), CliError> {
    let text = read_input(input)?;
    let source: Circuit = serde_json::from_str(&text)
        .map_err(|error| CliError::InvalidInput(format!("invalid circuit JSON: {error}")))?;

    let program = match mode {
        "catalytic" => compile_catalytic(&source).map_err(map_compile_error)?,
        "strict" => compile_strict(&source).map_err(map_compile_error)?,
        other => {
            return Err(CliError::Usage(format!(
                "unknown mode '{other}', expected catalytic or strict"
            )))
        }
    };

    if verify {
        verify_program(&source, &program)?;
    }

    let rendered = serde_json::to_string_pretty(&program).expect("program is plain data");
    match out {
        Some(path) => {
            std::fs::write(path, format!("{rendered}\n"))?;
            eprintln!(
                "wrote program ({} gates on {} qubits, {} S gates eliminated) to {}",
                program.inner().len(),
                program.inner().num_qubits(),
                program.s_gate_count(),
                path.display()
            );
        }
        None => println!("{rendered}"),
    }
    Ok(())
}

/// Run both sides on the reference input and require agreement up to a
/// global phase, plus an exactly restored catalyst.
fn verify_program(source: &Circuit, program: &CatalyticProgram) -> Result<(), CliError> {
    if program.n() > VERIFY_MAX_LOGICAL_QUBITS {
        return Err(CliError::CapExceeded(format!(
            "--verify simulates up to {VERIFY_MAX_LOGICAL_QUBITS} logical qubits, program has {}",
            program.n()
        )));
    }
    let failed = |message: String| CliError::VerificationFailed(message);

    // The oracle register: the source plus any ancillas the lowering
    // introduced, with native gates throughout.
    let mut oracle_circuit = Circuit::new(program.n(), crate::circuits::Alphabet::Full)
        .map_err(|e| failed(e.to_string()))?;
    for gate in source.gates() {
        oracle_circuit
            .push(gate.clone())
            .map_err(|e| failed(e.to_string()))?;
    }
    let oracle = oracle_circuit
        .run(&StateVector::zeros(program.n()).map_err(|e| failed(e.to_string()))?)
        .map_err(|e| failed(e.to_string()))?;
    let expected = oracle
        .tensor(&StateVector::named(NamedState::One))
        .and_then(|s| s.tensor(&StateVector::named(NamedState::PlusI)))
        .map_err(|e| failed(e.to_string()))?;

    let actual = program.run().map_err(|e| failed(e.to_string()))?;
    let deviation = actual
        .distance_up_to_global_phase(&expected)
        .map_err(|e| failed(e.to_string()))?;
    if deviation > 1e-9 {
        return Err(failed(format!(
            "compiled program deviates from the source by {deviation:.3e} (tolerance 1e-9)"
        )));
    }
    let (_, weight) = program.logical_output().map_err(|e| failed(e.to_string()))?;
    if (1.0 - weight).abs() > 1e-9 {
        return Err(failed(format!(
            "catalyst not restored: |1⟩⊗|+i⟩ weight {weight:.12}"
        )));
    }
    eprintln!("verify: ok, deviation {deviation:.3e}");
    Ok(())
}

/// Parse an initial-state spec: comma-separated named tokens, or a plain
/// bitstring when every character is 0 or 1.
fn parse_initial_state(spec: &str, num_qubits: usize) -> Result<StateVector, CliError> {
    let tokens: Vec<String> = if spec.contains(',') {
        spec.split(',').map(|t| t.trim().to_string()).collect()
    } else if !spec.is_empty() && spec.chars().all(|c| c == '0' || c == '1') {
        spec.chars().map(|c| c.to_string()).collect()
    } else {
        vec![spec.trim().to_string()]
    };
    if tokens.len() != num_qubits {
        return Err(CliError::InvalidInput(format!(
            "initial state has {} tokens but the circuit has {num_qubits} qubits",
            tokens.len()
        )));
    }
    let mut factors = Vec::with_capacity(tokens.len());
    for token in &tokens {
        let named: NamedState = token
            .parse()
            .map_err(|error| CliError::InvalidInput(format!("{error}")))?;
        factors.push(named);
    }
    StateVector::product(&factors).map_err(|error| CliError::InvalidInput(error.to_string()))
}

fn parse_postselect(spec: &str, steps: usize) -> Result<Vec<Sign>, CliError> {
    let signs: Result<Vec<Sign>, CliError> = spec
        .split(',')
        .map(|token| match token.trim() {
            "+" | "+1" => Ok(Sign::Plus),
            "-" | "-1" => Ok(Sign::Minus),
            other => Err(CliError::InvalidInput(format!(
                "bad postselection token '{other}', expected +1 or -1"
            ))),
        })
        .collect();
    let signs = signs?;
    if signs.len() != steps {
        return Err(CliError::InvalidInput(format!(
            "postselection lists {} signs but the pattern has {steps} steps",
            signs.len()
        )));
    }
    Ok(signs)
}

fn amplitudes_json(state: &StateVector) -> Vec<serde_json::Value> {
    // Negligible amplitudes are suppressed so wide registers stay
    // readable; the cutoff matches the branch-probability floor.
    (0..state.dim())
        .filter_map(|index| {
            let amp = state.amp(index);
            if amp.norm_sqr() < 1e-24 {
                return None;
            }
            Some(json!({
                "basis": basis_label(state.num_qubits(), index),
                "re": amp.re,
                "im": amp.im,
            }))
        })
        .collect()
}

fn cmd_simulate(
    input: &Path,
    initial: Option<&str>,
    postselect: Option<&str>,
    seed: Option<u64>,
    shots: u64,
) -> Result<(), CliError> {
    let text = read_input(input)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|error| CliError::InvalidInput(format!("invalid JSON: {error}")))?;

    if value.get("gates").is_some() {
        if postselect.is_some() || shots != 1 {
            return Err(CliError::Usage(
                "--postselect and --shots apply to measurement patterns, not circuits".to_string(),
            ));
        }
        return simulate_circuit(value, initial);
    }
    if value.get("steps").is_some() {
        if initial.is_some() {
            return Err(CliError::Usage(
                "--input applies to circuits; patterns build their state from the resource"
                    .to_string(),
            ));
        }
        return simulate_pattern(value, postselect, seed, shots);
    }
    Err(CliError::InvalidInput(
        "input JSON is neither a circuit (gates) nor a pattern (steps)".to_string(),
    ))
}

fn simulate_circuit(value: serde_json::Value, initial: Option<&str>) -> Result<(), CliError> {
    let circuit: Circuit = serde_json::from_value(value)
        .map_err(|error| CliError::InvalidInput(format!("invalid circuit JSON: {error}")))?;
    if circuit.num_qubits() > MAX_QUBITS {
        return Err(CliError::CapExceeded(format!(
            "circuit has {} qubits, the simulator caps at {MAX_QUBITS}",
            circuit.num_qubits()
        )));
    }
    let input_state = match initial {
        Some(spec) => parse_initial_state(spec, circuit.num_qubits())?,
        None => StateVector::zeros(circuit.num_qubits())
            .map_err(|error| CliError::CapExceeded(error.to_string()))?,
    };
    let output = circuit
        .run(&input_state)
        .map_err(|error| CliError::InvalidInput(error.to_string()))?;
    let report = json!({
        "kind": "circuit",
        "num_qubits": circuit.num_qubits(),
        "gates": circuit.len(),
        "amplitudes": amplitudes_json(&output),
    });
    println!("{}", serde_json::to_string_pretty(&report).expect("plain data"));
    Ok(())
}

#[derive(serde::Deserialize)]
struct PatternFile {
    resource: SectionedResource,
    steps: Vec<MeasurementStep>,
}

fn map_hypergraph_error(error: HypergraphError) -> CliError {
    match error {
        HypergraphError::TooLarge(_) => CliError::CapExceeded(error.to_string()),
        other => CliError::InvalidInput(other.to_string()),
    }
}

fn simulate_pattern(
    value: serde_json::Value,
    postselect: Option<&str>,
    seed: Option<u64>,
    shots: u64,
) -> Result<(), CliError> {
    let file: PatternFile = serde_json::from_value(value)
        .map_err(|error| CliError::InvalidInput(format!("invalid pattern JSON: {error}")))?;
    let pattern = MeasurementPattern::new(file.steps)
        .map_err(|error| CliError::InvalidInput(error.to_string()))?;
    let state = file.resource.build_state().map_err(map_hypergraph_error)?;

    if let Some(spec) = postselect {
        let signs = parse_postselect(spec, pattern.len())?;
        if shots != 1 {
            return Err(CliError::Usage(
                "--shots is for sampling; a postselected run is deterministic".to_string(),
            ));
        }
        let result = crate::mbqc::execute(
            &state,
            &file.resource,
            &pattern,
            ExecutePolicy::Postselect(signs),
        )
        .map_err(|error| CliError::InvalidInput(error.to_string()))?;
        let corrected = result
            .corrected_residual()
            .map_err(|error| CliError::InvalidInput(error.to_string()))?;
        let report = json!({
            "kind": "pattern",
            "policy": "postselect",
            "outcomes": result.outcomes,
            "frame": result.frame,
            "reindex": result.reindex,
            "corrected_residual": amplitudes_json(&corrected),
        });
        println!("{}", serde_json::to_string_pretty(&report).expect("plain data"));
        return Ok(());
    }

    let seed = resolve_seed(seed)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut plus_counts = vec![0u64; pattern.len()];
    for shot in 0..shots {
        let result = execute_with_rng(&state, &file.resource, &pattern, &mut rng)
            .map_err(|error| CliError::InvalidInput(error.to_string()))?;
        for (index, outcome) in result.outcomes.iter().enumerate() {
            if outcome.sign == Sign::Plus {
                plus_counts[index] += 1;
            }
        }
        if shots == 1 {
            let corrected = result
                .corrected_residual()
                .map_err(|error| CliError::InvalidInput(error.to_string()))?;
            let report = json!({
                "kind": "pattern",
                "policy": "sample",
                "seed": seed,
                "outcomes": result.outcomes,
                "frame": result.frame,
                "reindex": result.reindex,
                "corrected_residual": amplitudes_json(&corrected),
            });
            println!("{}", serde_json::to_string_pretty(&report).expect("plain data"));
        } else {
            let line = json!({
                "shot": shot,
                "outcomes": result.outcomes,
                "frame": result.frame,
            });
            println!("{}", serde_json::to_string(&line).expect("plain data"));
        }
    }
    if shots > 1 {
        let frequencies: Vec<f64> = plus_counts
            .iter()
            .map(|&count| count as f64 / shots as f64)
            .collect();
        let summary = json!({
            "shots": shots,
            "seed": seed,
            "plus_frequency": frequencies,
        });
        println!("{}", serde_json::to_string(&summary).expect("plain data"));
    }
    Ok(())
}

fn map_counts_error(error: CountsError) -> CliError {
    CliError::InvalidInput(error.to_string())
}

fn cmd_counts(
    n: Option<u64>,
    d: Option<u64>,
    formula: &str,
    budget: Option<u64>,
    json: bool,
) -> Result<(), CliError> {
    let formula: Formula = formula.parse().map_err(CliError::Usage)?;

    match (n, d, budget) {
        (Some(n), Some(d), None) => {
            let params =
                ResourceParams::new(n, d).map_err(map_counts_error)?;
            let qubits = formula.evaluate(params).map_err(map_counts_error)?;
            if json {
                let report = json!({
                    "formula": formula.to_string(),
                    "n": n,
                    "d": d,
                    "qubits": qubits,
                });
                println!("{}", serde_json::to_string_pretty(&report).expect("plain data"));
            } else {
                println!("{formula}(n = {n}, d = {d}) = {qubits} qubits");
            }
            Ok(())
        }
        (None, None, Some(budget)) => {
            let report = max_under_budget(budget, formula).map_err(map_counts_error)?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("plain data")
                );
            } else {
                println!(
                    "{formula} under {budget} qubits: n up to {} (d = 1), d up to {} (n = {})",
                    report.n_max,
                    report.d_max,
                    report.frontier.first().map(|&(n, _)| n).unwrap_or(0),
                );
                println!("{:>4}  {:>6}", "n", "d_max");
                for (n, d) in &report.frontier {
                    println!("{n:>4}  {d:>6}");
                }
            }
            Ok(())
        }
        (Some(_), Some(_), Some(_)) => Err(CliError::Usage(
            "give either --n with --d, or --budget, not both".to_string(),
        )),
        _ => Err(CliError::Usage(
            "counts needs --n with --d, or --budget".to_string(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_state_specs_parse() {
        let tokens = parse_initial_state("1,+i,+", 3).unwrap();
        let expected = StateVector::product(&[
            NamedState::One,
            NamedState::PlusI,
            NamedState::Plus,
        ])
        .unwrap();
        assert!(tokens.distance(&expected).unwrap() < 1e-15);

        let bits = parse_initial_state("010", 3).unwrap();
        assert!(bits
            .distance(&StateVector::basis(3, "010").unwrap())
            .unwrap()
            < 1e-15);

        assert!(parse_initial_state("0,1", 3).is_err());
        assert!(parse_initial_state("0,q", 2).is_err());
    }

    #[test]
    fn postselection_specs_parse() {
        assert_eq!(
            parse_postselect("+1,-1,+", 3).unwrap(),
            vec![Sign::Plus, Sign::Minus, Sign::Plus]
        );
        assert!(parse_postselect("+1", 2).is_err());
        assert!(parse_postselect("up", 1).is_err());
    }

    #[test]
    fn exit_codes_are_fixed() {
        assert_eq!(CliError::Usage(String::new()).exit_code(), 2);
        assert_eq!(CliError::InvalidInput(String::new()).exit_code(), 3);
        assert_eq!(CliError::VerificationFailed(String::new()).exit_code(), 4);
        assert_eq!(CliError::CapExceeded(String::new()).exit_code(), 5);
        assert_eq!(CliError::ChecksFailed(1, 2).exit_code(), 1);
    }

    #[test]
    fn seed_resolution_prefers_the_flag() {
        assert_eq!(resolve_seed(Some(99)).unwrap(), 99);
    }
}
