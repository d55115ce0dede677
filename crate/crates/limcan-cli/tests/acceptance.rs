//! Acceptance run: every verification suite at a fixed seed, one PASS/FAIL line per criterion.
//! Suites run on separate threads; lines are printed in suite order.

use std::process::ExitCode;
use std::thread;

use limcan_cli::suites::{run_suite, SUITES};

const SEED: u64 = 7;

fn main() -> ExitCode {
    let handles: Vec<_> = (0..SUITES.len()).map(|i| thread::spawn(move || run_suite(i, SEED))).collect();
    let mut failed = 0;
    for (i, h) in handles.into_iter().enumerate() {
        match h.join() {
            Ok(report) => {
                println!("{}", report.line());
                if !report.passed() || report.check.instances == 0 {
                    failed += 1;
                }
            }
            Err(_) => {
                println!("FAIL {:<18} panicked", SUITES[i].name);
                failed += 1;
            }
        }
    }
    println!("acceptance: {} of {} criteria passed (seed {SEED})", SUITES.len() - failed, SUITES.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
