//! The raw wave function misses a time-dependent phase. Its residual ratio is
//! the same at every x, and integrating that ratio gives the gauge.

use liouspace::oracles::analytic_residual_ratio;
use liouspace::schrodinger_like::{phase_closed, phase_integrate, psi_gaussian_raw, residual_coefficient, schrodinger_residual};
use liouspace::Result;

pub fn run() -> Result<()> {
    let t = 1.0;
    for x in [-2.0, 0.0, 1.5] {
        let fd = schrodinger_residual(psi_gaussian_raw, x, t, 1e-4, 1e-4)? / psi_gaussian_raw(x, t);
        let exact = analytic_residual_ratio(x, t, 0.0);
        println!("x={x:>4}: finite differences {:.8}{:+.1e}i, analytic {:.12}", fd.re, fd.im, exact.re);
    }
    println!("coefficient at t=1: {}", residual_coefficient(1.0));

    let ode = phase_integrate(5.0, 1e-3)?;
    println!("{:>4} {:>20} {:>20} {:>10}", "t", "closed", "rk4", "gap");
    for t in [0.5, 1.0, 2.0, 3.0, 5.0] {
        let a = phase_closed(t);
        let b = ode.value(t).unwrap_or(f64::NAN);
        println!("{t:>4} {a:>20.15} {b:>20.15} {:>10.1e}", (a - b).abs());
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
