//! Run one named verification suite from code; pass a suite name to choose.

use liouspace::verify::{run_suite, Suite};

pub fn run(suite: Suite) -> bool {
    let results = run_suite(suite);
    for r in &results {
        println!("{r}");
    }
    results.iter().all(|r| r.passed())
}

#[allow(dead_code)]
fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "greens".into());
    let suite: Suite = name.parse().unwrap_or_else(|e| {
        eprintln!("error: {e}");
        std::process::exit(2);
    });
    if !run(suite) {
        std::process::exit(1);
    }
}
