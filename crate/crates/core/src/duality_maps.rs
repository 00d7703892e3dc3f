//! Fourier bridges between phase-space distributions and density matrices.
//!
//! A classical distribution `f(q, p)` is treated like a Wigner function with
//! `W = 2 pi f`:
//!
//! ```text
//! rho(x, x') = int f((x + x')/2, p) e^{i p (x - x')} dp
//! f(q, p)    = (1 / 2 pi) int rho(q + u/2, q - u/2) e^{-i p u} du
//! ```
//!
//! Both integrals are evaluated by the trapezoidal rule on uniform grids.
//! Windows are never truncated silently: if the integrand at a window edge
//! exceeds `1e-9` of its peak the transform fails with
//! [`Error::WindowTooSmall`].

use crate::error::{Error, Result};
use crate::field::{DensityKernel, DensityMatrixField, PhaseDensity, PhaseSpaceField, RankOne, WaveFunctionField, HERMITIAN_TOL, NORM_TOL};
use crate::grid::UniformGrid1D;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::fmt;

/// Edge-to-peak ratio above which a quadrature window is rejected.
pub const WINDOW_RATIO: f64 = 1e-9;
/// Smallest admissible diagonal peak for factorization.
pub const DEGENERATE_DIAGONAL: f64 = 1e-12;

fn check_window(edge: f64, peak: f64) -> Result<()> {
    let limit = WINDOW_RATIO * peak;
    if edge > limit {
        return Err(Error::WindowTooSmall { edge, limit });
    }
    Ok(())
}

/// Density matrix of a phase-space function.
///
/// `f` is evaluated only at the midpoints `(x_i + x_j)/2` and the `pquad`
/// nodes. The result is Hermitian by construction (the kernel of row `j, i`
/// is the exact conjugate of row `i, j`) and is validated, not symmetrized.
pub fn f_to_rho<F: PhaseDensity + ?Sized>(f: &F, xgrid: UniformGrid1D, pquad: UniformGrid1D) -> Result<DensityMatrixField> {
    let n = xgrid.len();
    let np = pquad.len();
    let dx = xgrid.spacing();
    let p: Vec<f64> = pquad.points().collect();
    let w = pquad.weights();

    // midpoint k = i + j
    let samples: Vec<Vec<f64>> = (0..2 * n - 1)
        .into_par_iter()
        .map(|k| {
            let m = 0.5 * (xgrid.point(k / 2) + xgrid.point(k - k / 2));
            p.iter().map(|&pk| f.density(m, pk)).collect()
        })
        .collect();

    let peak = samples.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
    let edge = samples
        .iter()
        .fold(f.edge_max(), |a, row| a.max(row[0].abs()).max(row[np - 1].abs()));
    check_window(edge, peak)?;

    let weighted: Vec<Vec<f64>> = samples
        .into_iter()
        .map(|row| row.iter().zip(&w).map(|(v, wk)| v * wk).collect())
        .collect();
    // separation l = i - j >= 0; negative separations use the conjugate
    let phases: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|l| {
            let d = l as f64 * dx;
            p.iter().map(|&pk| Complex64::from_polar(1.0, pk * d)).collect()
        })
        .collect();

    let mut values = vec![Complex64::new(0.0, 0.0); n * n];
    values.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        for (j, out) in row.iter_mut().enumerate() {
            let fw = &weighted[i + j];
            let (l, conj) = if i >= j { (i - j, false) } else { (j - i, true) };
            let e = &phases[l];
            let mut re = 0.0;
            let mut im = 0.0;
            for k in 0..np {
                re += fw[k] * e[k].re;
                im += fw[k] * e[k].im;
            }
            *out = Complex64::new(re, if conj { -im } else { im });
        }
    });

    let rho = DensityMatrixField::new(xgrid, values, f.time())?;
    rho.validate()?;
    Ok(rho)
}

/// Phase-space function of a density matrix.
///
/// `uquad` must be symmetric about zero; samples at `u` and `-u` are compared
/// to check Hermiticity of the input before the transform.
pub fn rho_to_f<K: DensityKernel + ?Sized>(
    rho: &K,
    qgrid: UniformGrid1D,
    pgrid: UniformGrid1D,
    uquad: UniformGrid1D,
) -> Result<PhaseSpaceField> {
    if !uquad.is_symmetric() {
        return Err(Error::InvalidGrid(format!(
            "offset window [{}, {}] must be symmetric about zero",
            uquad.min(),
            uquad.max()
        )));
    }
    let nu = uquad.len();
    let np = pgrid.len();
    let u: Vec<f64> = uquad.points().collect();
    let w = uquad.weights();
    let kernels: Vec<Vec<Complex64>> = pgrid
        .points()
        .map(|p| u.iter().zip(&w).map(|(&uj, &wj)| Complex64::from_polar(wj / (2.0 * PI), -p * uj)).collect())
        .collect();

    struct Row {
        values: Vec<f64>,
        peak: f64,
        edge: f64,
        herm: f64,
        imag: f64,
    }

    let rows: Vec<Row> = (0..qgrid.len())
        .into_par_iter()
        .map(|i| {
            let q = qgrid.point(i);
            let s: Vec<Complex64> = u.iter().map(|&uj| rho.element(q + 0.5 * uj, q - 0.5 * uj)).collect();
            let peak = s.iter().fold(0.0f64, |a, v| a.max(v.norm()));
            let edge = s[0].norm().max(s[nu - 1].norm());
            let herm = (0..nu).fold(0.0f64, |a, j| a.max((s[j] - s[nu - 1 - j].conj()).norm()));
            let mut imag = 0.0f64;
            let values = kernels
                .iter()
                .map(|kp| {
                    let v: Complex64 = s.iter().zip(kp).map(|(a, b)| a * b).sum();
                    imag = imag.max(v.im.abs());
                    v.re
                })
                .collect();
            Row { values, peak, edge, herm, imag }
        })
        .collect();

    let peak = rows.iter().fold(0.0f64, |a, r| a.max(r.peak));
    let edge = rows.iter().fold(rho.edge_max(), |a, r| a.max(r.edge));
    check_window(edge, peak)?;
    let herm = rows.iter().fold(0.0f64, |a, r| a.max(r.herm));
    if herm > HERMITIAN_TOL {
        return Err(Error::NonHermitian(herm));
    }
    let imag = rows.iter().fold(0.0f64, |a, r| a.max(r.imag));
    if imag > HERMITIAN_TOL {
        return Err(Error::NonHermitian(imag));
    }
    let mut values = Vec::with_capacity(qgrid.len() * np);
    for r in rows {
        values.extend(r.values);
    }
    PhaseSpaceField::new(qgrid, pgrid, values, rho.time())
}

/// Offset window matched to a wave-function grid: spacing `2 dx`, wide enough
/// that `q +- u/2` sweeps the whole grid from any `q` on it.
pub fn offset_window_for(xgrid: &UniformGrid1D) -> UniformGrid1D {
    let width = xgrid.max() - xgrid.min();
    UniformGrid1D::symmetric(width, xgrid.len()).expect("grid width is positive")
}

/// Phase-space function of the rank-one matrix `Psi(x) Psi*(x')`.
///
/// The result is a pseudo-distribution until it passes
/// [`PhaseSpaceField::certify_classical`]. When `qgrid` nodes coincide with
/// nodes of the wave-function grid no interpolation takes place.
pub fn wavefunction_to_f(psi: &WaveFunctionField, qgrid: UniformGrid1D, pgrid: UniformGrid1D) -> Result<PhaseSpaceField> {
    let norm = psi.norm_sqr();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::Normalization(norm));
    }
    rho_to_f(&RankOne(psi), qgrid, pgrid, offset_window_for(&psi.xgrid))
}

/// Trapezoidal `int int |rho(x, x')|^2 dx dx'`.
pub fn purity(rho: &DensityMatrixField) -> f64 {
    let n = rho.dim();
    (0..n)
        .map(|i| {
            let wi = rho.xgrid.weight(i);
            (0..n).map(|j| wi * rho.xgrid.weight(j) * rho.get(i, j).norm_sqr()).sum::<f64>()
        })
        .sum()
}

/// Recovers `Psi` with `rho = Psi Psi*`, anchored at the largest diagonal
/// entry, where the sample is made real and positive.
pub fn factorize_density(rho: &DensityMatrixField, tol: f64) -> Result<WaveFunctionField> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let n = rho.dim();
    let (anchor, peak) = (0..n)
        .map(|i| (i, rho.get(i, i).re))
        .fold((0, f64::NEG_INFINITY), |best, c| if c.1 > best.1 { c } else { best });
    if peak < DEGENERATE_DIAGONAL {
        return Err(Error::DegenerateDiagonal(peak));
    }
    let pur = purity(rho);
    if pur < 1.0 - tol {
        return Err(Error::NotFactorizable(format!("purity {pur:.6} below 1 - {tol:e}")));
    }
    let scale = peak.sqrt();
    let values: Vec<Complex64> = (0..n).map(|i| rho.get(i, anchor) / scale).collect();
    let psi = WaveFunctionField::new(rho.xgrid, values, rho.time, None)?.fix_gauge_at(anchor)?;

    let bound = tol * rho.max_abs();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((rho.get(i, j) - psi.values[i] * psi.values[j].conj()).norm());
        }
    }
    if worst > bound {
        return Err(Error::NotFactorizable(format!("reconstruction error {worst:.3e} exceeds {bound:.3e}")));
    }
    psi.validate()?;
    Ok(psi)
}

/// `i d(rho)/dt + (1/2)(d^2/dx^2 - d^2/dx'^2) rho - (x - x') rho` by central
/// differences; zero for exact solutions.
pub fn von_neumann_residual<R>(rho: R, x: f64, xp: f64, t: f64, h: f64) -> Result<Complex64>
where
    R: Fn(f64, f64, f64) -> Complex64,
{
    if !(h > 0.0) {
        return Err(Error::NonPositiveStep(h));
    }
    let c = rho(x, xp, t);
    let dt = (rho(x, xp, t + h) - rho(x, xp, t - h)) / (2.0 * h);
    let dxx = (rho(x + h, xp, t) - c * 2.0 + rho(x - h, xp, t)) / (h * h);
    let dpp = (rho(x, xp + h, t) - c * 2.0 + rho(x, xp - h, t)) / (h * h);
    Ok(Complex64::i() * dt + (dxx - dpp) * 0.5 - c * (x - xp))
}

/// Which of the two transform kernels a [`DeltaKernel`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    /// Density matrix to phase space.
    Forward,
    /// Phase space to density matrix.
    Inverse,
}

/// A transform kernel of the form `amplitude * e^{i phase} * delta(offset)`
/// at fixed `(x, y, q, p)`.
///
/// The delta is never evaluated numerically: the transforms integrate it out
/// through the change of variables `q = (x + y)/2`, `u = x - y`. This type
/// records what the kernel is at a point and prints its symbolic form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaKernel {
    pub kind: KernelKind,
    pub amplitude: f64,
    pub phase: f64,
    /// Argument of the delta, `(x + y)/2 - q`; the kernel is supported where it vanishes.
    pub delta_argument: f64,
}

impl DeltaKernel {
    pub fn is_on_support(&self, tol: f64) -> bool {
        self.delta_argument.abs() <= tol
    }
}

impl fmt::Display for DeltaKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            KernelKind::Forward => f.write_str("(1/2π)e^{−ip(x−y)}δ((x+y)/2 − q)"),
            KernelKind::Inverse => f.write_str("e^{ip(x−y)}δ((x+y)/2 − q)"),
        }
    }
}

/// Kernel `F(x, y, q, p)` taking `rho` to `f`.
pub fn kernel_f(x: f64, y: f64, q: f64, p: f64) -> DeltaKernel {
    DeltaKernel {
        kind: KernelKind::Forward,
        amplitude: 1.0 / (2.0 * PI),
        phase: -p * (x - y),
        delta_argument: 0.5 * (x + y) - q,
    }
}

/// Kernel `F^{-1}(x, y, q, p)` taking `f` to `rho`.
pub fn kernel_f_inv(x: f64, y: f64, q: f64, p: f64) -> DeltaKernel {
    DeltaKernel {
        kind: KernelKind::Inverse,
        amplitude: 1.0,
        phase: p * (x - y),
        delta_argument: 0.5 * (x + y) - q,
    }
}

/// `(x, y) -> (q, u)` with `q = (x + y)/2`, `u = x - y`.
pub fn to_center_offset(x: f64, y: f64) -> (f64, f64) {
    (0.5 * (x + y), x - y)
}

/// `(q, u) -> (x, y)` with `x = q + u/2`, `y = q - u/2`.
pub fn from_center_offset(q: f64, u: f64) -> (f64, f64) {
    (q + 0.5 * u, q - 0.5 * u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_flow::standard_solution;

    fn g(a: f64, b: f64, n: usize) -> UniformGrid1D {
        UniformGrid1D::new(a, b, n).unwrap()
    }

    fn ground(x: f64) -> Complex64 {
        Complex64::new(PI.powf(-0.25) * (-0.5 * x * x).exp(), 0.0)
    }

    #[test]
    fn gaussian_at_t0_maps_to_separable_matrix() {
        let f = |q: f64, p: f64| standard_solution(q, p, 0.0);
        let rho = f_to_rho(&f, g(-6.0, 6.0, 97), g(-10.0, 10.0, 1025)).unwrap();
        let c = rho.get(48, 48);
        assert!((c.re - 1.0 / PI.sqrt()).abs() < 1e-12 && c.im.abs() < 1e-15);
        for &(i, j) in &[(10, 40), (50, 60), (90, 3)] {
            let (x, xp) = (rho.xgrid.point(i), rho.xgrid.point(j));
            let want = (-(x * x + xp * xp) / 2.0).exp() / PI.sqrt();
            assert!((rho.get(i, j) - want).norm() < 1e-12);
        }
        assert_eq!(rho.hermiticity_error(), 0.0);
    }

    #[test]
    fn narrow_momentum_window_is_rejected() {
        let f = |q: f64, p: f64| standard_solution(q, p, 0.0);
        let err = f_to_rho(&f, g(-4.0, 4.0, 33), g(-3.0, 3.0, 201)).unwrap_err();
        assert!(matches!(err, Error::WindowTooSmall { .. }), "{err}");
    }

    #[test]
    fn narrow_offset_window_is_rejected() {
        let rho = |x: f64, y: f64| ground(x) * ground(y).conj();
        let err = rho_to_f(&rho, g(-4.0, 4.0, 9), g(-4.0, 4.0, 9), g(-3.0, 3.0, 101)).unwrap_err();
        assert!(matches!(err, Error::WindowTooSmall { .. }));
    }

    #[test]
    fn asymmetric_offset_window_is_rejected() {
        let rho = |x: f64, y: f64| ground(x) * ground(y).conj();
        assert!(matches!(
            rho_to_f(&rho, g(-4.0, 4.0, 9), g(-4.0, 4.0, 9), g(-10.0, 12.0, 101)),
            Err(Error::InvalidGrid(_))
        ));
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let rho = |x: f64, y: f64| ground(x) * ground(y) * Complex64::from_polar(1.0, 0.3 * x);
        let err = rho_to_f(&rho, g(-4.0, 4.0, 9), g(-4.0, 4.0, 9), g(-12.0, 12.0, 481)).unwrap_err();
        assert!(matches!(err, Error::NonHermitian(_)));
    }

    #[test]
    fn separable_matrix_maps_back_to_gaussian() {
        let rho = |x: f64, y: f64| Complex64::new((-(x * x + y * y) / 2.0).exp() / PI.sqrt(), 0.0);
        let f = rho_to_f(&rho, g(-4.0, 4.0, 17), g(-4.0, 4.0, 17), g(-14.0, 14.0, 561)).unwrap();
        for i in 0..17 {
            for j in 0..17 {
                let (q, p) = (f.qgrid.point(i), f.pgrid.point(j));
                assert!((f.get(i, j) - (-q * q - p * p).exp() / PI).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn purity_of_pure_and_mixed() {
        let xg = g(-10.0, 10.0, 201);
        let psi0 = WaveFunctionField::from_fn(xg, 0.0, ground).unwrap();
        assert!((purity(&psi0.outer()) - 1.0).abs() < 1e-6);

        let psi1 =
            WaveFunctionField::from_fn(xg, 0.0, |x| ground(x) * (2f64.sqrt() * x)).unwrap();
        let a = psi0.outer();
        let b = psi1.outer();
        let mixed: Vec<Complex64> = a.values.iter().zip(&b.values).map(|(u, v)| (u + v) * 0.5).collect();
        let mixed = DensityMatrixField::new(xg, mixed, 0.0).unwrap();
        assert!((purity(&mixed) - 0.5).abs() < 1e-6);
        assert!(matches!(factorize_density(&mixed, 1e-6), Err(Error::NotFactorizable(_))));
    }

    #[test]
    fn factorization_recovers_ground_state() {
        let xg = g(-8.0, 8.0, 161);
        let rho = |x: f64, y: f64| Complex64::new((-(x * x + y * y) / 2.0).exp() / PI.sqrt(), 0.0);
        let values = xg.points().flat_map(|x| xg.points().map(move |y| rho(x, y))).collect();
        let m = DensityMatrixField::new(xg, values, 0.0).unwrap();
        let psi = factorize_density(&m, 1e-6).unwrap();
        assert_eq!(psi.gauge_anchor, Some(80));
        for (i, x) in xg.points().enumerate() {
            assert!((psi.values[i] - ground(x)).norm() < 1e-12);
        }
    }

    #[test]
    fn degenerate_diagonal_is_reported() {
        let xg = g(-1.0, 1.0, 5);
        let m = DensityMatrixField::new(xg, vec![Complex64::new(0.0, 0.0); 25], 0.0).unwrap();
        assert!(matches!(factorize_density(&m, 1e-6), Err(Error::DegenerateDiagonal(_))));
    }

    #[test]
    fn frozen_matrix_has_nonzero_von_neumann_residual() {
        let rho0 = |x: f64, y: f64, _t: f64| Complex64::new((-(x * x + y * y) / 2.0).exp() / PI.sqrt(), 0.0);
        let r = von_neumann_residual(rho0, 1.0, 0.0, 0.0, 1e-3).unwrap();
        let want = -0.5 * (-0.5f64).exp() / PI.sqrt();
        assert!((r.re - want).abs() < 1e-6 && r.im.abs() < 1e-12, "{r}");
        assert!(von_neumann_residual(rho0, 1.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn kernel_descriptions() {
        let k = kernel_f(1.0, 0.5, 0.75, 2.0);
        assert_eq!(k.to_string(), "(1/2π)e^{−ip(x−y)}δ((x+y)/2 − q)");
        assert!(k.is_on_support(0.0));
        assert_eq!(k.phase, -1.0);
        let ki = kernel_f_inv(1.0, 0.5, 0.0, 2.0);
        assert_eq!(ki.to_string(), "e^{ip(x−y)}δ((x+y)/2 − q)");
        assert!(!ki.is_on_support(1e-3));
        let (q, u) = to_center_offset(1.0, 0.5);
        assert_eq!(from_center_offset(q, u), (1.0, 0.5));
    }
}
