//! Runs every randomized property suite with a fixed seed and summarizes.
//! Pass a case count to override the defaults.

use operadlab::suites::{default_cases, run_suite, SUITES};
use operadlab::Tolerances;

fn main() -> operadlab::Result<()> {
    let cases: Option<usize> = std::env::args().nth(1).and_then(|a| a.parse().ok());
    for &suite in SUITES {
        let n = cases.unwrap_or_else(|| default_cases(suite));
        let r = run_suite(suite, 7, n, &Tolerances::default())?;
        println!(
            "{suite:<12} {:>6} cases  {:>4} failures  max error {:.2e}",
            r.cases,
            r.failures.len(),
            r.max_error
        );
    }
    Ok(())
}
