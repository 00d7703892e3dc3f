//! Recover the wave function behind a pure density matrix, and refuse a
//! mixture.

use liouspace::duality_maps::{f_to_rho, factorize_density, purity};
use liouspace::oracles::hermite_state;
use liouspace::phase_flow::standard_solution;
use liouspace::schrodinger_like::{psi_gaussian_gauged, GaugePhase};
use liouspace::{Complex64, DensityMatrixField, Result, UniformGrid1D};

pub fn run() -> Result<()> {
    let t = 1.0;
    let xgrid = UniformGrid1D::new(-10.0, 10.0, 321)?;
    let rho = f_to_rho(&|q: f64, p: f64| standard_solution(q, p, t), xgrid, UniformGrid1D::new(-10.0, 10.0, 2049)?)?;
    let psi = factorize_density(&rho, 1e-8)?;

    // agree with the analytic state up to one global phase
    let phase = GaugePhase::default();
    let anchor = psi.gauge_anchor.unwrap_or(0);
    let rot = psi_gaussian_gauged(xgrid.point(anchor), t, &phase).conj();
    let rot = rot / rot.norm();
    let err = xgrid
        .points()
        .zip(&psi.values)
        .map(|(x, v)| (psi_gaussian_gauged(x, t, &phase) * rot - v).norm())
        .fold(0.0, f64::max);
    println!("purity {:.12}, anchor x={}, deviation from analytic state {err:.2e}", purity(&rho), xgrid.point(anchor));

    let h0 = hermite_state(0, xgrid)?.outer();
    let h1 = hermite_state(1, xgrid)?.outer();
    let mixed: Vec<Complex64> = h0.values.iter().zip(&h1.values).map(|(a, b)| 0.5 * (a + b)).collect();
    let mixed = DensityMatrixField::new(xgrid, mixed, 0.0)?;
    println!("mixture purity {:.6}", purity(&mixed));
    match factorize_density(&mixed, 1e-8) {
        Err(e) => println!("mixture: {e}"),
        Ok(_) => println!("mixture unexpectedly factorized"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
