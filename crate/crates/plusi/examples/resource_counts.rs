//! Resource-state qubit counts for the two fault-tolerant layouts.
//!
//! rnq1 counts the layout that spends a CCZ per triple at distance d;
//! rnq2 counts the recursive layout. The crossover is dramatic: at
//! n = 6, d = 5 the first needs 7495 qubits, the second 607. The budget
//! scan inverts the formula, reporting how far n and d stretch under a
//! fixed qubit budget.

use plusi::counts::{max_under_budget, Formula, ResourceParams};

fn main() {
    println!("{:>4} {:>4} {:>12} {:>12}", "n", "d", "rnq1", "rnq2");
    for (n, d) in [(3, 3), (4, 3), (6, 5), (8, 7), (12, 9)] {
        let params = ResourceParams { n, d };
        println!(
            "{n:>4} {d:>4} {:>12} {:>12}",
            Formula::Rnq1.evaluate(params).unwrap(),
            Formula::Rnq2.evaluate(params).unwrap()
        );
    }

    println!();
    let budget = 1121;
    let report = max_under_budget(budget, Formula::Rnq2).unwrap();
    println!(
        "rnq2 under {budget} qubits: n up to {}, d up to {}",
        report.n_max, report.d_max
    );
    println!("feasibility frontier (largest d per n):");
    println!("{:>4}  {:>6}", "n", "d_max");
    for (n, d) in &report.frontier {
        println!("{n:>4}  {d:>6}");
    }
}
