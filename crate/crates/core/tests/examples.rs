//! Every example runs to completion.

#[path = "../examples/gaussian_evolution.rs"]
mod gaussian_evolution;
#[path = "../examples/wigner_roundtrip.rs"]
mod wigner_roundtrip;
#[path = "../examples/factorize.rs"]
mod factorize;
#[path = "../examples/gauge_phase.rs"]
mod gauge_phase;
#[path = "../examples/green_propagation.rs"]
mod green_propagation;
#[path = "../examples/negativity.rs"]
mod negativity;
#[path = "../examples/commuting_square.rs"]
mod commuting_square;
#[path = "../examples/convergence.rs"]
mod convergence;
#[path = "../examples/field_files.rs"]
mod field_files;
#[path = "../examples/verify_suites.rs"]
mod verify_suites;

#[test]
fn examples_run() {
    gaussian_evolution::run().unwrap();
    wigner_roundtrip::run().unwrap();
    factorize::run().unwrap();
    gauge_phase::run().unwrap();
    green_propagation::run().unwrap();
    negativity::run().unwrap();
    commuting_square::run().unwrap();
    convergence::run().unwrap();
    field_files::run().unwrap();
    assert!(verify_suites::run(liouspace::verify::Suite::Negativity));
}
