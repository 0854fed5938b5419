//! Runs every acceptance criterion and prints one pass/fail line each.
//! `ACCEPTANCE_VERBOSE=1` adds the per-item report lines.

use std::process::ExitCode;

use hurwitz_core::suite::{run_criterion, SuiteConfig, CRITERIA};

fn main() -> ExitCode {
    let verbose = std::env::var_os("ACCEPTANCE_VERBOSE").is_some();
    let cfg = SuiteConfig::default();
    let mut failed = 0;
    for id in 1..=CRITERIA {
        let r = run_criterion(id, &cfg);
        println!("{}", r.line());
        if verbose || !r.passed {
            for l in &r.report {
                println!("      {l}");
            }
        }
        failed += usize::from(!r.passed);
    }
    println!("acceptance: {} passed, {failed} failed", CRITERIA - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
