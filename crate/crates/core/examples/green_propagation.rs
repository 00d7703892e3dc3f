//! Propagate a sampled wave function with the Green kernel and compare with
//! the analytic state.

use liouspace::schrodinger_like::{chirp_spacing_bound, greens, propagate_psi, psi_gaussian_gauged, psi_gaussian_raw, GaugePhase};
use liouspace::{Result, UniformGrid1D, WaveFunctionField};

pub fn run() -> Result<()> {
    let xgrid = UniformGrid1D::new(-10.0, 10.0, 801)?;
    let psi0 = WaveFunctionField::from_fn(xgrid, 0.0, |x| psi_gaussian_raw(x, 0.0))?;
    let phase = GaugePhase::default();

    for t in [0.25, 1.0, 1.5] {
        println!("t={t}: spacing {} vs chirp bound {:.4}", xgrid.spacing(), chirp_spacing_bound(t, &xgrid, &xgrid));
        let psi = propagate_psi(&psi0, t, xgrid)?;
        let gap = xgrid
            .points()
            .zip(&psi.values)
            .map(|(x, v)| (v.norm() - psi_gaussian_gauged(x, t, &phase).norm()).abs())
            .fold(0.0, f64::max);
        println!("  norm {:.12}, modulus gap {gap:.2e}", psi.norm_sqr());
    }

    let half = propagate_psi(&propagate_psi(&psi0, 0.5, xgrid)?, 0.5, xgrid)?;
    let full = propagate_psi(&psi0, 1.0, xgrid)?;
    let gap = half.values.iter().zip(&full.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    println!("two half steps vs one step: {gap:.2e}");

    let g = greens(0.5, -0.5, 1.0)?;
    println!("G(0.5, -0.5, 1) = {:.6}{:+.6}i", g.re, g.im);
    if let Err(e) = greens(0.0, 0.0, 0.0) {
        println!("t=0: {e}");
    }
    let coarse = UniformGrid1D::new(-10.0, 10.0, 81)?;
    let psi = WaveFunctionField::from_fn(coarse, 0.0, |x| psi_gaussian_raw(x, 0.0))?;
    if let Err(e) = propagate_psi(&psi, 0.5, coarse) {
        println!("coarse grid: {e}");
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
