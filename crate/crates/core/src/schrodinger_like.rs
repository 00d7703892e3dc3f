//! The classical wave function of the linear-potential problem.
//!
//! The Gaussian distribution started from `(1/pi) exp(-q^2 - p^2)` factorizes
//! as `rho = Psi Psi*` with
//!
//! ```text
//! Psi(x, t) = (pi (1 + t^2))^{-1/4}
//!           * exp{ -(t^4/2 + 2x^2 + 2t^2 x + 4ixt - 2ix^2 t + 2it^3 x) / (4 (1 + t^2)) }
//! ```
//!
//! This `Psi` reproduces the density matrix but leaves a pure time-dependent
//! residual in `i dPsi/dt = -Psi''/2 + x Psi`. Attaching the gauge phase
//! `phi(t) = -t/8 - t^3/24 - atan(t)/2 + t/(8(1 + t^2))` removes it.
//! The same equation is solved for arbitrary initial data by the kernel
//!
//! ```text
//! G(x, x', t) = (2 pi i t)^{-1/2} exp{ i[(x - x')^2/(2t) - t(x + x')/2 - t^3/24] }
//! ```

use crate::error::{Error, Result};
use crate::field::{DensityMatrixField, WaveFunctionField, NORM_TOL};
use crate::grid::UniformGrid1D;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Smallest time at which the Green kernel is sampled.
pub const T_MIN: f64 = 1e-3;
/// Default constant phase of the Green kernel; gives the `(2 pi i t)^{-1/2}` amplitude.
pub const GREEN_PREFACTOR_PHASE: f64 = -PI / 4.0;
/// Default RK4 step for the gauge-phase integration.
pub const DEFAULT_PHASE_STEP: f64 = 1e-3;
/// Largest admissible `|Psi|^2` at the edges of a propagated input.
pub const DECAY_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseMethod {
    ClosedForm,
    OdeIntegrated,
}

/// Time-dependent global phase attached to the Gaussian wave function.
///
/// The ODE branch stores RK4 knots `(t, phi)` sorted by time and evaluates
/// between them by cubic Hermite interpolation, using the exact right-hand
/// side for the knot derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugePhase {
    pub method: PhaseMethod,
    /// Value at `t = 0`.
    pub constant: f64,
    pub samples: Option<Vec<(f64, f64)>>,
}

impl Default for GaugePhase {
    fn default() -> Self {
        Self::closed(0.0)
    }
}

impl GaugePhase {
    pub fn closed(constant: f64) -> Self {
        Self { method: PhaseMethod::ClosedForm, constant, samples: None }
    }

    /// Phase at `t`, or `None` outside the integrated range of the ODE branch.
    pub fn value(&self, t: f64) -> Option<f64> {
        match (self.method, &self.samples) {
            (PhaseMethod::ClosedForm, _) => Some(phase_closed(t) + self.constant),
            (PhaseMethod::OdeIntegrated, Some(knots)) => hermite_lookup(knots, t).map(|v| v + self.constant),
            (PhaseMethod::OdeIntegrated, None) => None,
        }
    }

    /// `(t_min, t_max)` covered by this phase; unbounded for the closed form.
    pub fn range(&self) -> (f64, f64) {
        match &self.samples {
            Some(k) if self.method == PhaseMethod::OdeIntegrated => (k[0].0, k[k.len() - 1].0),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }
}

fn hermite_lookup(knots: &[(f64, f64)], t: f64) -> Option<f64> {
    let (t0, t1) = (knots.first()?.0, knots.last()?.0);
    if !(t >= t0 && t <= t1) {
        return None;
    }
    if knots.len() == 1 {
        return Some(knots[0].1);
    }
    let i = knots.partition_point(|k| k.0 <= t).clamp(1, knots.len() - 1) - 1;
    let (ta, ya) = knots[i];
    let (tb, yb) = knots[i + 1];
    let h = tb - ta;
    let s = (t - ta) / h;
    let (da, db) = (phase_rhs(ta) * h, phase_rhs(tb) * h);
    let s2 = s * s;
    let s3 = s2 * s;
    Some((2.0 * s3 - 3.0 * s2 + 1.0) * ya + (s3 - 2.0 * s2 + s) * da + (-2.0 * s3 + 3.0 * s2) * yb + (s3 - s2) * db)
}

/// Gaussian wave function with no gauge phase attached.
pub fn psi_gaussian_raw(x: f64, t: f64) -> Complex64 {
    gaussian_with_offset(x, t, t.powi(4) / 2.0)
}

/// Same as [`psi_gaussian_raw`] but with `t^2/2` as the constant term of the
/// exponent. Kept only for regression checks: it is not normalized for
/// `t` outside `{0, 1}` and does not factorize the density matrix there.
pub fn psi_gaussian_quadratic_offset(x: f64, t: f64) -> Complex64 {
    gaussian_with_offset(x, t, t * t / 2.0)
}

fn gaussian_with_offset(x: f64, t: f64, offset: f64) -> Complex64 {
    let s = 1.0 + t * t;
    let re = offset + 2.0 * x * x + 2.0 * t * t * x;
    let im = 4.0 * x * t - 2.0 * x * x * t + 2.0 * t.powi(3) * x;
    let norm = (PI * s).powf(-0.25);
    (Complex64::new(re, im) * (-0.25 / s)).exp() * norm
}

/// Gaussian wave function with the gauge phase attached.
///
/// # Panics
/// If `t` lies outside the range of an ODE-integrated phase.
pub fn psi_gaussian_gauged(x: f64, t: f64, phase: &GaugePhase) -> Complex64 {
    let phi = phase
        .value(t)
        .unwrap_or_else(|| panic!("gauge phase not available at t = {t} (range {:?})", phase.range()));
    psi_gaussian_raw(x, t) * Complex64::from_polar(1.0, phi)
}

/// Coefficient `c(t)` with `(-d^2/dx^2 / 2 + x - i d/dt) Psi_raw = c(t) Psi_raw`.
pub fn residual_coefficient(t: f64) -> f64 {
    let t2 = t * t;
    let s = 1.0 + t2;
    (4.0 + 8.0 * t2 + 3.0 * t2 * t2 + t2 * t2 * t2) / (8.0 * s * s)
}

/// Right-hand side of the gauge-phase equation, `dphi/dt = -c(t)`.
pub fn phase_rhs(t: f64) -> f64 {
    -residual_coefficient(t)
}

/// Closed-form antiderivative of [`phase_rhs`] with `phi(0) = 0`.
pub fn phase_closed(t: f64) -> f64 {
    -t / 8.0 - t.powi(3) / 24.0 - 0.5 * t.atan() + t / (8.0 * (1.0 + t * t))
}

/// Integrates `dphi/dt = phase_rhs(t)` from `phi(0) = 0` to `t_end` with
/// classical RK4; the step is shrunk so the last knot lands on `t_end`.
pub fn phase_integrate(t_end: f64, step: f64) -> Result<GaugePhase> {
    if !(step > 0.0) {
        return Err(Error::NonPositiveStep(step));
    }
    if !t_end.is_finite() {
        return Err(Error::InvalidArgument(format!("non-finite end time {t_end}")));
    }
    let n = (t_end.abs() / step).ceil() as usize;
    let mut knots = Vec::with_capacity(n + 1);
    knots.push((0.0, 0.0));
    if n > 0 {
        let h = t_end / n as f64;
        let mut phi = 0.0;
        for k in 0..n {
            let t = k as f64 * h;
            let k1 = phase_rhs(t);
            let k2 = phase_rhs(t + 0.5 * h);
            let k4 = phase_rhs(t + h);
            // the right-hand side does not depend on phi, so k3 == k2
            phi += h / 6.0 * (k1 + 4.0 * k2 + k4);
            let tk = if k + 1 == n { t_end } else { (k + 1) as f64 * h };
            knots.push((tk, phi));
        }
        if h < 0.0 {
            knots.reverse();
        }
    }
    Ok(GaugePhase { method: PhaseMethod::OdeIntegrated, constant: 0.0, samples: Some(knots) })
}

/// `-Psi''/2 + x Psi - i dPsi/dt` by central differences.
pub fn schrodinger_residual<P>(psi: P, x: f64, t: f64, hx: f64, ht: f64) -> Result<Complex64>
where
    P: Fn(f64, f64) -> Complex64,
{
    if !(hx > 0.0) {
        return Err(Error::NonPositiveStep(hx));
    }
    if !(ht > 0.0) {
        return Err(Error::NonPositiveStep(ht));
    }
    let c = psi(x, t);
    let dxx = (psi(x + hx, t) - c * 2.0 + psi(x - hx, t)) / (hx * hx);
    let dt = (psi(x, t + ht) - psi(x, t - ht)) / (2.0 * ht);
    Ok(dxx * -0.5 + c * x - Complex64::i() * dt)
}

/// Propagator of the Schrödinger-like equation at a fixed positive time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenKernel {
    time: f64,
    pub prefactor_phase: f64,
}

impl GreenKernel {
    pub fn new(time: f64) -> Result<Self> {
        Self::with_prefactor_phase(time, GREEN_PREFACTOR_PHASE)
    }

    pub fn with_prefactor_phase(time: f64, prefactor_phase: f64) -> Result<Self> {
        if !(time >= T_MIN) {
            return Err(Error::PropagatorSingular(time));
        }
        Ok(Self { time, prefactor_phase })
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// `|G|`, the same for every pair of positions.
    pub fn amplitude(&self) -> f64 {
        (2.0 * PI * self.time).powf(-0.5)
    }

    pub fn phase(&self, x: f64, xp: f64) -> f64 {
        let t = self.time;
        let d = x - xp;
        d * d / (2.0 * t) - 0.5 * t * (x + xp) - t.powi(3) / 24.0 + self.prefactor_phase
    }

    pub fn eval(&self, x: f64, xp: f64) -> Complex64 {
        Complex64::from_polar(self.amplitude(), self.phase(x, xp))
    }

    /// `G(x, x') G*(y, y')`.
    pub fn density_kernel(&self, x: f64, y: f64, xp: f64, yp: f64) -> Complex64 {
        self.eval(x, xp) * self.eval(y, yp).conj()
    }
}

pub fn greens(x: f64, xp: f64, t: f64) -> Result<Complex64> {
    Ok(GreenKernel::new(t)?.eval(x, xp))
}

/// Density-matrix propagator `B(x, y, x', y', t) = G(x, x', t) G*(y, y', t)`.
pub fn b_kernel(x: f64, y: f64, xp: f64, yp: f64, t: f64) -> Result<Complex64> {
    Ok(GreenKernel::new(t)?.density_kernel(x, y, xp, yp))
}

/// Largest input spacing for which the kernel phase changes by less than
/// `pi` per sample.
pub fn chirp_spacing_bound(t: f64, xin: &UniformGrid1D, xout: &UniformGrid1D) -> f64 {
    PI * t / (xout.max_abs() + xin.max_abs())
}

fn check_propagation_input(psi0: &WaveFunctionField, t: f64, xgrid_out: &UniformGrid1D) -> Result<GreenKernel> {
    let kernel = GreenKernel::new(t)?;
    let bound = chirp_spacing_bound(t, &psi0.xgrid, xgrid_out);
    let spacing = psi0.xgrid.spacing();
    if spacing > bound {
        return Err(Error::ChirpUndersampled { spacing, bound });
    }
    let v = &psi0.values;
    let edge = v[0].norm_sqr().max(v[v.len() - 1].norm_sqr());
    if edge > DECAY_THRESHOLD {
        return Err(Error::NotDecayed(edge));
    }
    Ok(kernel)
}

/// `Psi(x, t) = int G(x, x', t) Psi0(x') dx'` by the trapezoidal rule.
///
/// The output is not rescaled; its norm is checked against 1 as a unitarity
/// test. Its global phase is left as produced by the kernel.
pub fn propagate_psi(psi0: &WaveFunctionField, t: f64, xgrid_out: UniformGrid1D) -> Result<WaveFunctionField> {
    let kernel = check_propagation_input(psi0, t, &xgrid_out)?;
    let weighted: Vec<(f64, Complex64)> = psi0
        .xgrid
        .points()
        .zip(&psi0.values)
        .enumerate()
        .map(|(k, (xp, v))| (xp, v * psi0.xgrid.weight(k)))
        .collect();
    let values: Vec<Complex64> = (0..xgrid_out.len())
        .into_par_iter()
        .map(|i| {
            let x = xgrid_out.point(i);
            weighted.iter().map(|(xp, v)| kernel.eval(x, *xp) * v).sum()
        })
        .collect();
    let out = WaveFunctionField::new(xgrid_out, values, psi0.time + t, None)?;
    let norm = out.norm_sqr();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::Normalization(norm));
    }
    Ok(out)
}

/// Evolves a density matrix with the kernel `B = G G*`.
///
/// Because `B` factorizes, the double quadrature is carried out as
/// `rho = K rho0 K^dagger` with `K_ik = G(x_i, x'_k) w_k`.
pub fn evolve_density(rho0: &DensityMatrixField, t: f64, xgrid_out: UniformGrid1D) -> Result<DensityMatrixField> {
    let kernel = GreenKernel::new(t)?;
    let bound = chirp_spacing_bound(t, &rho0.xgrid, &xgrid_out);
    if rho0.xgrid.spacing() > bound {
        return Err(Error::ChirpUndersampled { spacing: rho0.xgrid.spacing(), bound });
    }
    let n_in = rho0.dim();
    let n_out = xgrid_out.len();
    let k: Vec<Vec<Complex64>> = (0..n_out)
        .map(|i| {
            let x = xgrid_out.point(i);
            (0..n_in).map(|j| kernel.eval(x, rho0.xgrid.point(j)) * rho0.xgrid.weight(j)).collect()
        })
        .collect();
    // tmp = rho0 K^dagger, n_in x n_out
    let tmp: Vec<Vec<Complex64>> = (0..n_in)
        .into_par_iter()
        .map(|a| (0..n_out).map(|j| (0..n_in).map(|b| rho0.get(a, b) * k[j][b].conj()).sum()).collect())
        .collect();
    let values: Vec<Complex64> = (0..n_out)
        .into_par_iter()
        .flat_map_iter(|i| {
            let k = &k;
            let tmp = &tmp;
            (0..n_out).map(move |j| (0..n_in).map(|a| k[i][a] * tmp[a][j]).sum())
        })
        .collect();
    DensityMatrixField::new(xgrid_out, values, rho0.time + t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn raw_wave_function_at_t0() {
        for x in [-1.5f64, 0.0, 0.7] {
            let want = PI.powf(-0.25) * (-0.5 * x * x).exp();
            let v = psi_gaussian_raw(x, 0.0);
            assert!((v.re - want).abs() < 1e-15 && v.im == 0.0);
        }
        assert!((psi_gaussian_raw(0.0, 0.0).re - 0.751_125_544_464_942_5).abs() < 1e-15);
    }

    #[test]
    fn modulus_is_shifted_gaussian() {
        for t in [0.5, 1.0, 2.0] {
            for x in [-3.0, -0.5, 0.0, 1.2] {
                let s: f64 = 1.0 + t * t;
                let want = (PI * s).powf(-0.5) * (-(x + t * t / 2.0).powi(2) / s).exp();
                assert!((psi_gaussian_raw(x, t).norm_sqr() - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn gauge_keeps_modulus() {
        let phase = GaugePhase::default();
        assert!((psi_gaussian_gauged(0.0, 0.0, &phase).re - PI.powf(-0.25)).abs() < 1e-15);
        for (x, t) in [(0.3, 0.4), (-2.0, 1.7), (1.0, 3.0)] {
            assert!((psi_gaussian_gauged(x, t, &phase).norm() - psi_gaussian_raw(x, t).norm()).abs() < 1e-15);
        }
    }

    #[test]
    fn phase_values() {
        assert_eq!(phase_rhs(0.0), -0.5);
        assert_eq!(phase_rhs(1.0), -0.5);
        assert!((phase_rhs(2.0) + 0.74).abs() < 1e-15);
        assert_eq!(residual_coefficient(0.0), 0.5);
        assert_eq!(residual_coefficient(1.0), 0.5);
        for t in [0.0, 0.5, 1.0, 2.0, 5.0] {
            assert_eq!(residual_coefficient(t) + phase_rhs(t), 0.0);
        }
        assert_eq!(phase_closed(0.0), 0.0);
        assert!((phase_closed(1.0) - (-5.0 / 48.0 - PI / 8.0)).abs() < 1e-15);
        let h = 1e-5;
        let d = (phase_closed(1.0 + h) - phase_closed(1.0 - h)) / (2.0 * h);
        assert!((d + 0.5).abs() < 1e-6);
    }

    #[test]
    fn integrated_phase_matches_closed_form() {
        let z = phase_integrate(0.0, 1e-3).unwrap();
        assert_eq!(z.value(0.0), Some(0.0));
        let p = phase_integrate(5.0, 1e-3).unwrap();
        for t in [1.0, 2.345_6, 5.0] {
            assert!((p.value(t).unwrap() - phase_closed(t)).abs() < 1e-8);
        }
        assert!(p.value(5.1).is_none());
        let n = phase_integrate(-2.0, 1e-3).unwrap();
        assert!((n.value(-1.3).unwrap() - phase_closed(-1.3)).abs() < 1e-8);
        assert!(matches!(phase_integrate(1.0, 0.0), Err(Error::NonPositiveStep(_))));
    }

    #[test]
    fn raw_residual_is_half_at_t1() {
        let psi = |x: f64, t: f64| psi_gaussian_raw(x, t);
        for x in [-2.0, -0.3, 0.0, 1.1, 2.0] {
            let r = schrodinger_residual(psi, x, 1.0, 1e-4, 1e-4).unwrap() / psi_gaussian_raw(x, 1.0);
            assert!((r.re - 0.5).abs() < 1e-4 && r.im.abs() < 1e-4, "{r}");
        }
        assert!(schrodinger_residual(psi, 0.0, 1.0, 0.0, 1e-4).is_err());
        assert!(schrodinger_residual(psi, 0.0, 1.0, 1e-4, -1.0).is_err());
    }

    #[test]
    fn gauged_residual_vanishes() {
        let phase = GaugePhase::default();
        let psi = |x: f64, t: f64| psi_gaussian_gauged(x, t, &phase);
        let r = schrodinger_residual(psi, 0.7, 1.3, 1e-3, 1e-3).unwrap();
        assert!(r.norm() < 1e-5, "{r}");
    }

    #[test]
    fn green_kernel_values() {
        let g = greens(0.3, -1.2, 1.0).unwrap();
        assert!((g.norm() - 0.398_942_280_401_432_7).abs() < 1e-15);
        let a = greens(1.0, 0.0, 1.0).unwrap();
        let b = greens(0.0, 0.0, 1.0).unwrap();
        assert!((a - b).norm() < 1e-15);
        let c = greens(0.0, 0.0, 2.0).unwrap();
        let want = -1.0 / 3.0 - PI / 4.0;
        assert!((c.arg() - want).abs() < 1e-14);
        assert!(matches!(greens(0.0, 0.0, 5e-4), Err(Error::PropagatorSingular(_))));
        assert!(b_kernel(0.0, 0.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn b_kernel_diagonal_is_real() {
        let b = b_kernel(0.4, 0.4, -1.0, -1.0, 0.8).unwrap();
        assert!((b.re - 1.0 / (2.0 * PI * 0.8)).abs() < 1e-15 && b.im.abs() < 1e-15);
    }

    #[test]
    fn propagation_rejects_undersampled_or_truncated_input() {
        let coarse = UniformGrid1D::new(-10.0, 10.0, 41).unwrap();
        let psi = WaveFunctionField::from_fn(coarse, 0.0, |x| psi_gaussian_raw(x, 0.0)).unwrap();
        assert!(matches!(propagate_psi(&psi, 1.0, coarse), Err(Error::ChirpUndersampled { .. })));

        let narrow = UniformGrid1D::new(-3.0, 3.0, 301).unwrap();
        let psi = WaveFunctionField::from_fn(narrow, 0.0, |x| psi_gaussian_raw(x, 0.0)).unwrap();
        assert!(matches!(propagate_psi(&psi, 1.0, narrow), Err(Error::NotDecayed(_))));
        assert!(matches!(propagate_psi(&psi, 1e-4, narrow), Err(Error::PropagatorSingular(_))));
    }
}
