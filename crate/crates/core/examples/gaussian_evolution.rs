//! Transport a Gaussian phase-space state along the flow of `H = p^2/2 + q`
//! and watch its dispersion matrix shear.

use liouspace::oracles::monte_carlo_dispersion;
use liouspace::phase_flow::{evolve_gaussian, flow_forward, hamiltonian, liouville_residual, standard_solution, GaussianPhaseState, PhasePoint};
use liouspace::Result;

pub fn run() -> Result<()> {
    let g0 = GaussianPhaseState::standard();
    println!("{:>5} {:>9} {:>9} {:>9} {:>9}", "t", "mean_q", "s_qq", "s_qp", "s_pp");
    for t in [0.0, 0.5, 1.0, 2.0, 4.0] {
        let g = evolve_gaussian(&g0, t);
        let (m, c) = (g.mean(), g.cov());
        println!("{t:>5} {:>9.4} {:>9.4} {:>9.4} {:>9.4}", m.q, c[0][0], c[0][1], c[1][1]);
    }

    let mc = monte_carlo_dispersion(100_000, 2.0, 7);
    println!("sampled at t=2: s_qq={:.4} s_qp={:.4} s_pp={:.4}", mc[0][0], mc[0][1], mc[1][1]);

    // energy is carried along each trajectory
    let pt = PhasePoint::new(1.0, 0.5);
    let later = flow_forward(pt, 3.0);
    println!("H before {:.6}, after {:.6}", hamiltonian(pt), hamiltonian(later));

    let r = liouville_residual(standard_solution, PhasePoint::new(0.3, -0.2), 1.0, 1e-3)?;
    println!("Liouville residual of the exact density: {r:.2e}");

    let shifted = GaussianPhaseState::from_entries(1.0, 2.0, 0.3, 0.1, 0.8)?;
    let g = evolve_gaussian(&shifted, 1.5);
    println!("det(cov) {:.12} -> {:.12}", shifted.det(), g.det());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
