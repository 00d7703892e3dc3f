//! Distribution to density matrix and back, on grids where every midpoint
//! lands on a node.

use liouspace::duality_maps::{f_to_rho, offset_window_for, purity, rho_to_f};
use liouspace::phase_flow::standard_solution;
use liouspace::{PhaseSpaceField, Result, UniformGrid1D};

pub fn run() -> Result<()> {
    let xgrid = UniformGrid1D::new(-10.0, 10.0, 321)?;
    let qgrid = UniformGrid1D::new(-6.0, 6.0, 193)?;
    let pgrid = UniformGrid1D::new(-8.0, 8.0, 257)?;
    let pquad = UniformGrid1D::new(-10.0, 10.0, 2049)?;

    for t in [0.0, 0.5, 1.0] {
        let f = move |q: f64, p: f64| standard_solution(q, p, t);
        let rho = f_to_rho(&f, xgrid, pquad)?;
        let back = rho_to_f(&rho, qgrid, pgrid, offset_window_for(&xgrid))?;
        let exact = PhaseSpaceField::sample(&f, qgrid, pgrid)?;
        let err = back.values.iter().zip(&exact.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        println!(
            "t={t}: trace {:.12}, purity {:.10}, hermiticity {:.1e}, round trip {err:.2e}",
            rho.trace(),
            purity(&rho),
            rho.hermiticity_error()
        );
    }

    // a narrow window is refused rather than silently truncated
    let f = |q: f64, p: f64| standard_solution(q, p, 0.0);
    match f_to_rho(&f, xgrid, UniformGrid1D::new(-2.0, 2.0, 65)?) {
        Err(e) => println!("narrow window: {e}"),
        Ok(_) => println!("narrow window unexpectedly accepted"),
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
