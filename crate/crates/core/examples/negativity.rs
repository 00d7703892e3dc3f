//! The first excited state has a phase-space function that dips to -1/pi at
//! the origin, so it is not a classical distribution.

use liouspace::duality_maps::wavefunction_to_f;
use liouspace::oracles::{hermite_state, negativity_scan_default};
use liouspace::phase_flow::standard_solution;
use liouspace::{PhaseSpaceField, Result, UniformGrid1D};

pub fn run() -> Result<()> {
    let xgrid = UniformGrid1D::new(-10.0, 10.0, 321)?;
    let qgrid = UniformGrid1D::new(-6.0, 6.0, 193)?;
    let pgrid = UniformGrid1D::new(-8.0, 8.0, 257)?;

    for n in 0..2 {
        let f = wavefunction_to_f(&hermite_state(n, xgrid)?, qgrid, pgrid)?;
        let r = negativity_scan_default(&f);
        println!(
            "n={n}: min {:+.2e} at ({:+.3}, {:+.3}), negative mass {:.4}, classical {}",
            r.min_value, r.argmin.0, r.argmin.1, r.negative_mass, r.classical
        );
    }
    println!("-1/pi = {:+.6}", -std::f64::consts::FRAC_1_PI);

    let g = PhaseSpaceField::sample(&|q: f64, p: f64| standard_solution(q, p, 1.5), qgrid, pgrid)?;
    println!("evolved Gaussian classical: {}", negativity_scan_default(&g).classical);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
