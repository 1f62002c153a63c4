//! Resource-state qubit counts for two hypergraph constructions.
//!
//! Both formulas count the qubits of a resource state that implements a
//! depth-d layer structure on n logical qubits. The first grows like
//! n³ per layer; the second routes through sorting networks and stays
//! quasilinear, so it wins from n = 6 onward. All arithmetic is checked:
//! counts that do not fit in u64 are reported as overflow, never wrapped.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CountsError {
    #[error("n and d must both be at least 1")]
    ZeroParameter,
    #[error("rnq1 is defined for n >= 3, got n = {0}")]
    NTooSmall(u64),
    #[error("qubit count overflows u64 at n = {n}, d = {d}")]
    Overflow { n: u64, d: u64 },
    #[error("budget {budget} is below the smallest {formula} count {minimum}")]
    InfeasibleBudget {
        budget: u64,
        formula: Formula,
        minimum: u64,
    },
}

/// Which counting formula to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Formula {
    Rnq1,
    Rnq2,
}

impl Formula {
    /// Where budget scans start. Widths below 3 have no room for a CCZ
    /// layer (and rnq1's binomial vanishes there), so the frontier is
    /// taken over n >= 3 for both formulas even though rnq2 evaluates
    /// for any positive n.
    pub fn min_n(&self) -> u64 {
        3
    }

    pub fn evaluate(&self, params: ResourceParams) -> Result<u64, CountsError> {
        match self {
            Formula::Rnq1 => qubits_rnq1(params),
            Formula::Rnq2 => qubits_rnq2(params),
        }
    }
}

impl std::fmt::Display for Formula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Formula::Rnq1 => write!(f, "rnq1"),
            Formula::Rnq2 => write!(f, "rnq2"),
        }
    }
}

impl std::str::FromStr for Formula {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "rnq1" => Ok(Formula::Rnq1),
            "rnq2" => Ok(Formula::Rnq2),
            other => Err(format!("unknown formula '{other}', expected rnq1 or rnq2")),
        }
    }
}

/// Width n and depth d of the circuit the resource state implements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceParams {
    pub n: u64,
    pub d: u64,
}

impl ResourceParams {
    pub fn new(n: u64, d: u64) -> Result<Self, CountsError> {
        if n == 0 || d == 0 {
            return Err(CountsError::ZeroParameter);
        }
        Ok(ResourceParams { n, d })
    }
}

fn overflow(params: ResourceParams) -> CountsError {
    CountsError::Overflow {
        n: params.n,
        d: params.d,
    }
}

/// n choose 3, checked.
fn choose3(n: u64) -> Option<u64> {
    // Of three consecutive integers one is divisible by 3 and at least
    // one by 2, so dividing stepwise stays exact.
    if n < 3 {
        return Some(0);
    }
    let a = n.checked_mul(n - 1)? / 2;
    a.checked_mul(n - 2).map(|v| v / 3)
}

/// a choose 2.
fn choose2(a: u64) -> Option<u64> {
    a.checked_mul(a.saturating_sub(1)).map(|v| v / 2)
}

/// Smallest k with 2^k >= n.
fn ceil_log2(n: u64) -> u64 {
    debug_assert!(n >= 1);
    u64::from(n.next_power_of_two().trailing_zeros())
}

/// First construction: d(2n + 63) * C(n, 3) - n + 1 qubits. Exact, and
/// cubic in n per layer.
pub fn qubits_rnq1(params: ResourceParams) -> Result<u64, CountsError> {
    let ResourceParams { n, d } = params;
    if n == 0 || d == 0 {
        return Err(CountsError::ZeroParameter);
    }
    if n < 3 {
        return Err(CountsError::NTooSmall(n));
    }
    let weight = n
        .checked_mul(2)
        .and_then(|v| v.checked_add(63))
        .ok_or_else(|| overflow(params))?;
    let per_triple = d.checked_mul(weight).ok_or_else(|| overflow(params))?;
    let total = per_triple
        .checked_mul(choose3(n).ok_or_else(|| overflow(params))?)
        .ok_or_else(|| overflow(params))?;
    // n >= 3 makes the subtrahend safe: the product is at least 69.
    total
        .checked_sub(n - 1)
        .ok_or_else(|| overflow(params))
}

/// Second construction: 3d[n C(ceil(log2 n), 2) + 2(2n - 1)] + n + 1
/// qubits. An upper bound, quasilinear in n.
pub fn qubits_rnq2(params: ResourceParams) -> Result<u64, CountsError> {
    let ResourceParams { n, d } = params;
    if n == 0 || d == 0 {
        return Err(CountsError::ZeroParameter);
    }
    let sorting = n
        .checked_mul(choose2(ceil_log2(n)).ok_or_else(|| overflow(params))?)
        .ok_or_else(|| overflow(params))?;
    let copies = n
        .checked_mul(2)
        .map(|v| v - 1)
        .and_then(|v| v.checked_mul(2))
        .ok_or_else(|| overflow(params))?;
    let per_layer = sorting.checked_add(copies).ok_or_else(|| overflow(params))?;
    let layers = per_layer
        .checked_mul(3)
        .and_then(|v| v.checked_mul(d))
        .ok_or_else(|| overflow(params))?;
    n.checked_add(1)
        .and_then(|v| v.checked_add(layers))
        .ok_or_else(|| overflow(params))
}

/// The feasibility frontier under a qubit budget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BudgetReport {
    pub formula: Formula,
    pub budget: u64,
    /// Largest n feasible at some depth.
    pub n_max: u64,
    /// Largest depth feasible at some n.
    pub d_max: u64,
    /// For each feasible n in ascending order, the largest feasible d.
    pub frontier: Vec<(u64, u64)>,
}

/// Largest d with formula(n, d) <= budget, by monotone doubling then
/// bisection. Both formulas are strictly increasing in d.
fn max_depth_for(formula: Formula, n: u64, budget: u64) -> Option<u64> {
    let fits = |d: u64| match formula.evaluate(ResourceParams { n, d }) {
        Ok(value) => value <= budget,
        // Overflowing u64 certainly exceeds any u64 budget.
        Err(_) => false,
    };
    if !fits(1) {
        return None;
    }
    let mut lo = 1u64;
    let mut hi = 2u64;
    while fits(hi) {
        lo = hi;
        match hi.checked_mul(2) {
            Some(next) => hi = next,
            None => return Some(u64::MAX),
        }
    }
    // Invariant: fits(lo), !fits(hi).
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

/// Scan the (n, d) frontier under `budget`. Both formulas increase in n
/// at fixed d, so the scan stops at the first n that does not fit even
/// at depth 1.
pub fn max_under_budget(budget: u64, formula: Formula) -> Result<BudgetReport, CountsError> {
    let mut frontier = Vec::new();
    let mut n = formula.min_n();
    loop {
        match max_depth_for(formula, n, budget) {
            Some(d) => frontier.push((n, d)),
            None => break,
        }
        n += 1;
    }
    if frontier.is_empty() {
        let minimum = formula.evaluate(ResourceParams {
            n: formula.min_n(),
            d: 1,
        })?;
        return Err(CountsError::InfeasibleBudget {
            budget,
            formula,
            minimum,
        });
    }
    let n_max = frontier.last().expect("nonempty").0;
    let d_max = frontier.iter().map(|&(_, d)| d).max().expect("nonempty");
    Ok(BudgetReport {
        formula,
        budget,
        n_max,
        d_max,
        frontier,
    })
}
