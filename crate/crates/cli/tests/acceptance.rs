//! One PASS/FAIL line per acceptance criterion; exits non-zero on failure.

use std::process::ExitCode;
use std::time::Instant;

use pfext_cli::acceptance;

fn main() -> ExitCode {
    let start = Instant::now();
    let results = acceptance::run_all(acceptance::DEFAULT_SEED);
    for c in &results {
        println!("{}", c.line());
    }
    let failed = results.iter().filter(|c| !c.pass).count();
    println!("{} of {} criteria passed in {:.1}s", results.len() - failed, results.len(), start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
