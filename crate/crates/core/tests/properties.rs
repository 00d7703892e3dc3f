use liouspace::duality_maps::{f_to_rho, factorize_density, purity, rho_to_f, offset_window_for};
use liouspace::field::PhaseSpaceField;
use liouspace::fieldfile::FieldFile;
use liouspace::grid::trapezoid;
use liouspace::oracles::{analytic_residual_ratio, brute_force_rho, negativity_scan_default};
use liouspace::phase_flow::{
    evolve_gaussian, flow_backward, flow_forward, gaussian_density, hamiltonian, GaussianPhaseState, PhasePoint,
    TransformMatrix,
};
use liouspace::schrodinger_like::{
    phase_closed, phase_rhs, psi_gaussian_gauged, residual_coefficient, GaugePhase, GreenKernel,
};
use liouspace::{Complex64, UniformGrid1D, WaveFunctionField};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = PhasePoint> {
    (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(q, p)| PhasePoint::new(q, p))
}

/// Positive-definite covariance entries with moderate condition number.
fn covariance() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.2..2.0f64, 0.2..2.0f64, -0.8..0.8f64).prop_map(|(a, b, r)| (a, r * (a * b).sqrt(), b))
}

/// Narrow enough that the density matrix decays inside [-10, 10].
fn compact_covariance() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.3..1.0f64, 0.3..1.5f64, -0.5..0.5f64).prop_map(|(a, b, r)| (a, r * (a * b).sqrt(), b))
}

proptest! {
    #[test]
    fn energy_is_conserved(pt in point(), t in -10.0..10.0f64) {
        prop_assert!((hamiltonian(flow_forward(pt, t)) - hamiltonian(pt)).abs() <= 1e-12);
    }

    #[test]
    fn flow_composes(pt in point(), t1 in -10.0..10.0f64, t2 in -10.0..10.0f64) {
        let a = flow_forward(flow_forward(pt, t1), t2);
        let b = flow_forward(pt, t1 + t2);
        prop_assert!((a.q - b.q).abs() <= 1e-12 * a.q.abs().max(1.0) && (a.p - b.p).abs() <= 1e-12 * a.p.abs().max(1.0),
            "{a:?} vs {b:?}");
    }

    #[test]
    fn backward_inverts_forward(pt in point(), t in -10.0..10.0f64) {
        let back = flow_backward(flow_forward(pt, t), t);
        prop_assert!((back.q - pt.q).abs() <= 1e-12 * pt.q.abs().max(1.0));
        prop_assert!((back.p - pt.p).abs() <= 1e-12 * pt.p.abs().max(1.0));
    }

    #[test]
    fn determinant_is_invariant((sqq, sqp, spp) in covariance(), t in -10.0..10.0f64) {
        prop_assert_eq!(TransformMatrix::for_time(t).det(), 1.0);
        let g0 = GaussianPhaseState::from_entries(0.0, 0.0, sqq, sqp, spp).unwrap();
        let g = evolve_gaussian(&g0, t);
        prop_assert!((g.det() / g0.det() - 1.0).abs() <= 1e-12 * (1.0 + t * t).powi(2));
    }

    #[test]
    fn gaussian_density_has_unit_mass((sqq, sqp, spp) in covariance(), q0 in -2.0..2.0f64, p0 in -2.0..2.0f64) {
        let g = GaussianPhaseState::from_entries(q0, p0, sqq, sqp, spp).unwrap();
        let (sq, sp) = (sqq.sqrt(), spp.sqrt());
        let qg = UniformGrid1D::new(q0 - 8.0 * sq, q0 + 8.0 * sq, 161).unwrap();
        let pg = UniformGrid1D::new(p0 - 8.0 * sp, p0 + 8.0 * sp, 161).unwrap();
        let f = PhaseSpaceField::sample(&|q: f64, p: f64| gaussian_density(&g, PhasePoint::new(q, p)), qg, pg).unwrap();
        prop_assert!((f.integral() - 1.0).abs() <= 1e-9);
        prop_assert!(negativity_scan_default(&f).classical);
    }

    #[test]
    fn gauge_cancels_residual(t in -5.0..5.0f64) {
        prop_assert_eq!(residual_coefficient(t) + phase_rhs(t), 0.0);
    }

    #[test]
    fn closed_phase_is_antiderivative(t in 0.0..5.0f64) {
        let h = 1e-5;
        prop_assert!(((phase_closed(t + h) - phase_closed(t - h)) / (2.0 * h) - phase_rhs(t)).abs() <= 1e-6);
    }

    #[test]
    fn gauged_solution_has_no_residual(x in -4.0..4.0f64, t in 1e-3..3.0f64) {
        let rate = phase_rhs(t);
        let r = analytic_residual_ratio(x, t, rate) * psi_gaussian_gauged(x, t, &GaugePhase::default());
        prop_assert!(r.norm() <= 1e-12);
    }

    #[test]
    fn raw_residual_is_real_and_uniform(x in -4.0..4.0f64, y in -4.0..4.0f64, t in 0.0..3.0f64) {
        let a = analytic_residual_ratio(x, t, 0.0);
        let b = analytic_residual_ratio(y, t, 0.0);
        prop_assert!(a.im.abs() <= 1e-8);
        prop_assert!((a - b).norm() <= 1e-8);
    }

    #[test]
    fn green_amplitude_is_flat(x in -10.0..10.0f64, xp in -10.0..10.0f64, t in 0.01..5.0f64) {
        let g = GreenKernel::new(t).unwrap();
        prop_assert!((g.eval(x, xp).norm() / g.amplitude() - 1.0).abs() <= 4.0 * f64::EPSILON);
        prop_assert!((g.amplitude() * (2.0 * std::f64::consts::PI * t).sqrt() - 1.0).abs() <= 4.0 * f64::EPSILON);
    }

    #[test]
    fn field_files_round_trip_bitwise(bits in prop::collection::vec(any::<u64>(), 12), t in -1e3..1e3f64) {
        let values: Vec<f64> = bits.iter().map(|b| f64::from_bits(*b)).map(|v| if v.is_finite() { v } else { 0.0 }).collect();
        let qg = UniformGrid1D::new(-1.5, 2.25, 3).unwrap();
        let pg = UniformGrid1D::new(-0.1, 0.7, 4).unwrap();
        let mut f = PhaseSpaceField::new(qg, pg, values.clone(), t).unwrap();
        f.classical = false;
        let text = FieldFile::PhaseSpace(f.clone()).render();
        let back = FieldFile::parse(&text).unwrap();
        prop_assert_eq!(back.render(), text);
        match back {
            FieldFile::PhaseSpace(g) => {
                prop_assert!(g.values.iter().zip(&values).all(|(a, b)| a.to_bits() == b.to_bits()));
                prop_assert_eq!(g.time.to_bits(), t.to_bits());
            }
            other => prop_assert!(false, "wrong kind {}", other.kind()),
        }

        let xg = UniformGrid1D::new(-3.0, 3.0, 6).unwrap();
        let w = WaveFunctionField::new(xg, values[..6].iter().zip(&values[6..]).map(|(a, b)| Complex64::new(*a, *b)).collect(), t, Some(2)).unwrap();
        let text = FieldFile::WaveFunction(w).render();
        prop_assert_eq!(FieldFile::parse(&text).unwrap().render(), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn factorization_reconstructs_pure_states(x0 in -2.0..2.0f64, k in -2.0..2.0f64, w in 0.7..1.4f64) {
        let xg = UniformGrid1D::new(-10.0, 10.0, 201).unwrap();
        let psi = WaveFunctionField::from_fn(xg, 0.0, |x| {
            let z = (x - x0) / w;
            Complex64::from_polar((-0.5 * z * z).exp(), k * x + 0.3 * x * x)
        }).unwrap();
        let n = psi.norm_sqr().sqrt();
        let psi = WaveFunctionField::new(xg, psi.values.iter().map(|v| v / n).collect(), 0.0, None).unwrap();
        let rho = psi.outer();
        let back = factorize_density(&rho, 1e-8).unwrap();
        let again = back.outer();
        let worst = rho.values.iter().zip(&again.values).fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
        prop_assert!(worst <= 1e-8 * rho.max_abs());
        prop_assert!((purity(&again) - 1.0).abs() <= 1e-8);
    }

    #[test]
    fn transforms_preserve_trace_and_invert((sqq, sqp, spp) in compact_covariance(), q0 in -1.0..1.0f64, p0 in -1.0..1.0f64) {
        let g = GaussianPhaseState::from_entries(q0, p0, sqq, sqp, spp).unwrap();
        let f = move |q: f64, p: f64| gaussian_density(&g, PhasePoint::new(q, p));
        let xg = UniformGrid1D::new(-10.0, 10.0, 321).unwrap();
        let rho = f_to_rho(&f, xg, UniformGrid1D::new(-12.0, 12.0, 1025).unwrap()).unwrap();
        prop_assert!(rho.hermiticity_error() <= 1e-10);
        prop_assert!((rho.trace() - 1.0).abs() <= 1e-6);

        let qg = UniformGrid1D::new(-6.0, 6.0, 193).unwrap();
        let pg = UniformGrid1D::new(-8.0, 8.0, 129).unwrap();
        let back = rho_to_f(&rho, qg, pg, offset_window_for(&xg)).unwrap();
        let exact = PhaseSpaceField::sample(&f, qg, pg).unwrap();
        let worst = back.values.iter().zip(&exact.values).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        prop_assert!(worst <= 1e-6, "round trip {worst}");

        let diag = rho.diagonal();
        let marg = exact.position_marginal();
        let start = xg.nearest(qg.min());
        let gap = marg.iter().enumerate().fold(0.0f64, |m, (i, v)| m.max((diag[start + i].re - v).abs()));
        prop_assert!(gap <= 1e-8, "marginal {gap}");
    }

    #[test]
    fn oracle_rho_is_hermitian(x in -4.0..4.0f64, xp in -4.0..4.0f64, t in 0.0..2.0f64) {
        let pq = UniformGrid1D::new(-12.0, 12.0, 2049).unwrap();
        let a = brute_force_rho(x, xp, t, &pq).unwrap();
        let b = brute_force_rho(xp, x, t, &pq).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-10);
    }
}

#[test]
fn oracle_rho_has_unit_trace() {
    let pq = UniformGrid1D::new(-12.0, 12.0, 2049).unwrap();
    let xg = UniformGrid1D::new(-10.0, 10.0, 401).unwrap();
    for t in [0.0, 1.0, 2.0] {
        let diag: Vec<f64> = xg.points().map(|x| brute_force_rho(x, x, t, &pq).unwrap().re).collect();
        assert!((trapezoid(&xg, &diag) - 1.0).abs() <= 1e-6, "t={t}");
    }
}
