//! Runs the full verification suite and prints one PASS/FAIL line per criterion.
//! Built without the libtest harness so the lines are never captured.

use std::process::ExitCode;

use gcikit::config::RunConfig;
use gcikit::thermal::weyl_energy_report;
use gcikit::verify::run_all;

/// Criteria whose literal statement does not hold; each is asserted to fail for the
/// documented reason rather than skipped.
const KNOWN_FAILURES: [u32; 1] = [9];

fn main() -> ExitCode {
    let summary = run_all(&RunConfig::default());
    let mut problems = Vec::new();
    for c in &summary.checks {
        println!("{}", c.line());
        match (KNOWN_FAILURES.contains(&c.id), c.passed) {
            (true, true) => problems.push(format!(
                "criterion {} now passes; update the known-failure list",
                c.id
            )),
            (false, false) => problems.push(format!("criterion {} failed: {}", c.id, c.detail)),
            _ => {}
        }
    }
    if summary.checks.len() != 13 {
        problems.push(format!("expected 13 checks, got {}", summary.checks.len()));
    }
    // the failure of 9 is confined to the literal Weyl modular line
    match weyl_energy_report(25) {
        Ok(w)
            if w.e0_literal == "-17/960"
                && !w.literal_equal
                && w.corrected_equal
                && w.e0_corrected == "17/960" =>
        {
            println!("known failure 9: literal constant -17/960 disagrees beyond q^0; E0 = +17/960 matches through q^25");
        }
        other => problems.push(format!("unexpected Weyl energy report: {other:?}")),
    }
    let passed = summary.checks.iter().filter(|c| c.passed).count();
    println!(
        "acceptance: {passed}/{} criteria pass",
        summary.checks.len()
    );
    for p in &problems {
        eprintln!("error: {p}");
    }
    if problems.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
