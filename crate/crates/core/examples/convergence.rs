//! Observed order of the central-difference residuals on exact solutions.

use liouspace::duality_maps::von_neumann_residual;
use liouspace::oracles::convergence_report;
use liouspace::phase_flow::{liouville_residual, PhasePoint};
use liouspace::schrodinger_like::{psi_gaussian_gauged, psi_gaussian_raw, schrodinger_residual, GaugePhase};
use liouspace::Result;

fn bumpy(q: f64, p: f64, t: f64) -> f64 {
    let (q0, p0) = (q - p * t - 0.5 * t * t, p + t);
    (-q0 * q0 - p0 * p0).exp() * (1.0 + 0.3 * (2.0 * q0).sin() * p0.cos())
}

pub fn run() -> Result<()> {
    let liouville = convergence_report(|h| liouville_residual(bumpy, PhasePoint::new(0.3, -0.4), 0.7, h).unwrap_or(f64::NAN), 0.05, 4)?;
    let rho = |x: f64, y: f64, t: f64| psi_gaussian_raw(x, t) * psi_gaussian_raw(y, t).conj();
    let von_neumann = convergence_report(|h| von_neumann_residual(rho, 0.7, -0.4, 0.9, h).map_or(f64::NAN, |c| c.norm()), 0.05, 4)?;
    let phase = GaugePhase::default();
    let schrodinger =
        convergence_report(|h| schrodinger_residual(|x, t| psi_gaussian_gauged(x, t, &phase), 0.7, 1.3, h, h).map_or(f64::NAN, |c| c.norm()), 0.05, 4)?;

    for (name, r) in [("liouville", liouville), ("von neumann", von_neumann), ("schrodinger", schrodinger)] {
        println!("{name:>12}: order {:.3}, largest residual {:.2e}", r.convergence_order.unwrap_or(f64::NAN), r.max_abs);
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
