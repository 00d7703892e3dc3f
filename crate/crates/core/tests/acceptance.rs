//! Acceptance criteria A1 to A11 at their pinned tolerances.
//!
//! Prints every individual check, then one pass/fail line per criterion.

use liouspace::verify::{run_suite, CheckResult, Suite};

fn criterion(r: &CheckResult) -> &str {
    r.name.split('.').next().unwrap_or(&r.name)
}

fn main() {
    let results = run_suite(Suite::All);
    for r in &results {
        println!("{r}");
    }

    let mut ids: Vec<&str> = Vec::new();
    for r in &results {
        if !ids.contains(&criterion(r)) {
            ids.push(criterion(r));
        }
    }
    let expected: Vec<String> = (1..=11).map(|k| format!("A{k}")).collect();
    if ids != expected {
        eprintln!("criteria covered out of order or missing: {ids:?}");
        std::process::exit(1);
    }

    let mut failed = Vec::new();
    for id in &ids {
        let checks: Vec<&CheckResult> = results.iter().filter(|r| criterion(r) == *id).collect();
        let ok = checks.iter().all(|r| r.passed());
        println!("{id}: {} ({} checks)", if ok { "PASS" } else { "FAIL" }, checks.len());
        if !ok {
            failed.push(*id);
        }
    }
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
