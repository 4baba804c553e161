//! Acceptance suite: every criterion at its stated tolerance, one verdict
//! line each, followed by the individual checks. Exits non-zero if any
//! criterion fails.

use std::process::ExitCode;

use tcopo::validation::{run_all, ValidationConfig};

fn main() -> ExitCode {
    let results = run_all(&ValidationConfig::default());
    println!();
    for r in &results {
        println!("{}", r.summary());
    }
    println!();
    for r in &results {
        print!("{r}");
    }
    let failed = results.iter().filter(|r| !r.passed()).count();
    println!("\nacceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
