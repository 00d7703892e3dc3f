//! Two routes from the initial wave function to the phase-space function at
//! t=1: propagate then transform, or transform then transport classically.

use liouspace::duality_maps::wavefunction_to_f;
use liouspace::phase_flow::propagate_distribution;
use liouspace::schrodinger_like::{propagate_psi, psi_gaussian_raw};
use liouspace::{Result, UniformGrid1D, WaveFunctionField};

pub fn run() -> Result<()> {
    // spacing 1/16 everywhere, so backward characteristics hit grid nodes
    let xgrid = UniformGrid1D::new(-10.0, 10.0, 321)?;
    let qgrid = UniformGrid1D::new(-6.0, 6.0, 193)?;
    let pgrid = UniformGrid1D::new(-8.0, 8.0, 257)?;
    let psi0 = WaveFunctionField::from_fn(xgrid, 0.0, |x| psi_gaussian_raw(x, 0.0))?;

    let quantum = wavefunction_to_f(&propagate_psi(&psi0, 1.0, xgrid)?, qgrid, pgrid)?;
    let f0 = wavefunction_to_f(&psi0, xgrid, UniformGrid1D::new(-10.0, 10.0, 321)?)?;
    let classical = propagate_distribution(&f0, 1.0, qgrid, pgrid)?;

    let gap = quantum.values.iter().zip(&classical.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("peak {:.6}, routes differ by {gap:.2e}", quantum.max_abs());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
