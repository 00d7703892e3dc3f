//! Independent verifiers and test-state generators.
//!
//! Nothing here calls into [`crate::duality_maps`] or
//! [`crate::schrodinger_like`]: the density-matrix oracle integrates the
//! transported Gaussian directly, and the analytic residuals are written out
//! from hand-derived derivatives of the closed-form wave function.

use crate::error::{Error, Result};
use crate::field::{PhaseSpaceField, WaveFunctionField, EPS_NEG};
use crate::grid::UniformGrid1D;
use crate::phase_flow::{flow_forward, Mat2, PhasePoint};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use std::f64::consts::PI;

/// Discrepancy summary of a residual or comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub max_abs: f64,
    pub l2: f64,
    pub location_of_max: Vec<f64>,
    pub stencil_steps: Vec<f64>,
    pub convergence_order: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativityReport {
    pub min_value: f64,
    pub argmin: (f64, f64),
    /// Trapezoidal `int int max(-f, 0) dq dp`.
    pub negative_mass: f64,
    pub classical: bool,
}

/// Direct p-quadrature of the density matrix of the transported standard Gaussian,
/// `(1/pi) int exp{-(p+t)^2 - ((x+x')/2 - p t - t^2/2)^2} e^{i p (x - x')} dp`.
pub fn brute_force_rho(x: f64, xp: f64, t: f64, pquad: &UniformGrid1D) -> Result<Complex64> {
    let m = 0.5 * (x + xp);
    let d = x - xp;
    let f = |p: f64| {
        let a = p + t;
        let b = m - p * t - 0.5 * t * t;
        (-a * a - b * b).exp() / PI
    };
    let n = pquad.len();
    let mut peak = 0.0f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let p = pquad.point(k);
        let v = f(p);
        peak = peak.max(v);
        sum += Complex64::from_polar(v * pquad.weight(k), p * d);
    }
    let edge = f(pquad.point(0)).max(f(pquad.point(n - 1)));
    if edge > 1e-9 * peak {
        return Err(Error::WindowTooSmall { edge, limit: 1e-9 * peak });
    }
    Ok(sum)
}

/// Closed-form position marginal of the transported standard Gaussian,
/// `(pi (1+t^2))^{-1/2} exp{-(x + t^2/2)^2 / (1+t^2)}`.
pub fn gaussian_position_marginal(x: f64, t: f64) -> f64 {
    let s = 1.0 + t * t;
    (PI * s).powf(-0.5) * (-(x + 0.5 * t * t).powi(2) / s).exp()
}

/// Scans every sample; ties in the minimum resolve to the lowest `q` index,
/// then the lowest `p` index.
pub fn negativity_scan(f: &PhaseSpaceField, eps: f64) -> NegativityReport {
    let np = f.pgrid.len();
    let mut min_value = f64::INFINITY;
    let mut at = (0, 0);
    let mut negative_mass = 0.0;
    for (i, row) in f.values.chunks(np).enumerate() {
        let wq = f.qgrid.weight(i);
        for (j, &v) in row.iter().enumerate() {
            if v < min_value {
                min_value = v;
                at = (i, j);
            }
            if v < 0.0 {
                negative_mass -= wq * f.pgrid.weight(j) * v;
            }
        }
    }
    NegativityReport {
        min_value,
        argmin: (f.qgrid.point(at.0), f.pgrid.point(at.1)),
        negative_mass,
        classical: min_value >= -eps,
    }
}

/// Convenience form of [`negativity_scan`] at the standard threshold.
pub fn negativity_scan_default(f: &PhaseSpaceField) -> NegativityReport {
    negativity_scan(f, EPS_NEG)
}

/// Oscillator states `n = 0` and `n = 1`, renormalized on the grid and
/// anchored at their largest real sample.
pub fn hermite_state(n: u32, xgrid: UniformGrid1D) -> Result<WaveFunctionField> {
    let c = PI.powf(-0.25);
    let psi = |x: f64| -> f64 {
        match n {
            0 => c * (-0.5 * x * x).exp(),
            _ => c * 2f64.sqrt() * x * (-0.5 * x * x).exp(),
        }
    };
    if n > 1 {
        return Err(Error::InvalidArgument(format!("hermite_state supports n = 0 or 1, got {n}")));
    }
    let raw: Vec<f64> = xgrid.points().map(psi).collect();
    let norm: f64 = raw.iter().enumerate().map(|(i, v)| xgrid.weight(i) * v * v).sum();
    let scale = norm.sqrt().recip();
    let values: Vec<Complex64> = raw.iter().map(|v| Complex64::new(v * scale, 0.0)).collect();
    let anchor = (0..values.len()).fold(0, |best, i| if values[i].re > values[best].re { i } else { best });
    WaveFunctionField::new(xgrid, values, 0.0, Some(anchor))
}

/// Compares the momentum marginal of `f` against `|Psi|^2` on a shared axis.
pub fn marginal_check(f: &PhaseSpaceField, psi: &WaveFunctionField) -> Result<ResidualReport> {
    if !f.qgrid.same_as(&psi.xgrid) {
        return Err(Error::GridMismatch(format!(
            "q axis [{}, {}; {}] vs x axis [{}, {}; {}]",
            f.qgrid.min(),
            f.qgrid.max(),
            f.qgrid.len(),
            psi.xgrid.min(),
            psi.xgrid.max(),
            psi.xgrid.len()
        )));
    }
    let marginal = f.position_marginal();
    let mut max_abs = 0.0f64;
    let mut at = 0;
    let mut l2 = 0.0;
    for (i, (m, v)) in marginal.iter().zip(&psi.values).enumerate() {
        let d = (m - v.norm_sqr()).abs();
        if d > max_abs {
            max_abs = d;
            at = i;
        }
        l2 += f.qgrid.weight(i) * d * d;
    }
    Ok(ResidualReport {
        max_abs,
        l2: l2.sqrt(),
        location_of_max: vec![f.qgrid.point(at)],
        stencil_steps: vec![],
        convergence_order: None,
    })
}

/// Least-squares slope of `log r(h)` against `log h` over `h0, h0/2, ...`.
pub fn convergence_order<R: FnMut(f64) -> f64>(mut residual_fn: R, h0: f64, levels: usize) -> Result<f64> {
    if levels < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 levels, got {levels}")));
    }
    if !(h0 > 0.0) {
        return Err(Error::NonPositiveStep(h0));
    }
    let mut pts = Vec::with_capacity(levels);
    let mut h = h0;
    for level in 0..levels {
        let r = residual_fn(h).abs();
        if !(r >= 1e-14) {
            return Err(Error::NonPositiveResidual(r, level));
        }
        pts.push((h.ln(), r.ln()));
        h *= 0.5;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// Runs [`convergence_order`] and packages the finest-level residual.
pub fn convergence_report<R: FnMut(f64) -> f64>(mut residual_fn: R, h0: f64, levels: usize) -> Result<ResidualReport> {
    let mut steps = Vec::with_capacity(levels);
    let mut values = Vec::with_capacity(levels);
    let order = convergence_order(
        |h| {
            let r = residual_fn(h);
            steps.push(h);
            values.push(r.abs());
            r
        },
        h0,
        levels,
    )?;
    let max_abs = values.iter().cloned().fold(0.0, f64::max);
    let l2 = values.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(ResidualReport { max_abs, l2, location_of_max: vec![], stencil_steps: steps, convergence_order: Some(order) })
}

/// `(-Psi''/2 + x Psi - i dPsi/dt) / Psi` for the Gaussian wave function
/// `Psi = N(t) exp(E(x, t)) exp(i phi(t))`, from hand-derived derivatives of
/// `E = -Q / (4 (1 + t^2))`. `phase_rate` is `dphi/dt` (zero for the raw state).
pub fn analytic_residual_ratio(x: f64, t: f64, phase_rate: f64) -> Complex64 {
    let i = Complex64::i();
    let s = 1.0 + t * t;
    let q = Complex64::new(t.powi(4) / 2.0 + 2.0 * x * x + 2.0 * t * t * x, 4.0 * x * t - 2.0 * x * x * t + 2.0 * t.powi(3) * x);
    let q_x = Complex64::new(4.0 * x + 2.0 * t * t, 4.0 * t - 4.0 * x * t + 2.0 * t.powi(3));
    let q_xx = Complex64::new(4.0, -4.0 * t);
    let q_t = Complex64::new(2.0 * t.powi(3) + 4.0 * t * x, 4.0 * x - 2.0 * x * x + 6.0 * t * t * x);
    let e_x = -q_x / (4.0 * s);
    let e_xx = -q_xx / (4.0 * s);
    let e_t = -q_t / (4.0 * s) + q * (2.0 * t) / (4.0 * s * s);
    let log_norm_t = -t / (2.0 * s);
    -(e_xx + e_x * e_x) * 0.5 + x - i * (e_t + log_norm_t) + phase_rate
}

/// Derivative of `-t/8 - t^3/24 - atan(t)/2 + t / (8 (1 + t^2))`, term by term.
pub fn closed_phase_derivative(t: f64) -> f64 {
    let s = 1.0 + t * t;
    -1.0 / 8.0 - t * t / 8.0 - 0.5 / s + (1.0 - t * t) / (8.0 * s * s)
}

/// Sample dispersion matrix of `samples` Gaussian draws from the standard
/// state pushed along the flow to time `t`.
pub fn monte_carlo_dispersion(samples: usize, t: f64, seed: u64) -> Mat2 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 0.5f64.sqrt()).expect("valid standard deviation");
    let pts: Vec<PhasePoint> = (0..samples)
        .map(|_| flow_forward(PhasePoint::new(normal.sample(&mut rng), normal.sample(&mut rng)), t))
        .collect();
    let n = samples as f64;
    let mq = pts.iter().map(|p| p.q).sum::<f64>() / n;
    let mp = pts.iter().map(|p| p.p).sum::<f64>() / n;
    let (mut cqq, mut cqp, mut cpp) = (0.0, 0.0, 0.0);
    for p in &pts {
        let (dq, dp) = (p.q - mq, p.p - mp);
        cqq += dq * dq;
        cqp += dq * dp;
        cpp += dp * dp;
    }
    let d = n - 1.0;
    [[cqq / d, cqp / d], [cqp / d, cpp / d]]
}
