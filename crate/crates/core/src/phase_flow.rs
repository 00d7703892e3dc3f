//! Classical dynamics under `H = p^2/2 + q` with unit mass and charge.
//!
//! Trajectories are parabolas, `q = q0 + p0 t - t^2/2`, `p = p0 - t`, so the
//! flow is affine and acts on Gaussian states through the shear
//! `A = [[1, t], [0, 1]]`. Distributions are transported exactly by pulling
//! back along the characteristics.

use crate::error::{Error, Result};
use crate::field::{PhaseDensity, PhaseSpaceField};
use crate::grid::UniformGrid1D;
use std::f64::consts::PI;

/// Default central-difference step.
pub const DEFAULT_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub q: f64,
    pub p: f64,
}

impl PhasePoint {
    pub const fn new(q: f64, p: f64) -> Self {
        Self { q, p }
    }

    pub fn is_finite(&self) -> bool {
        self.q.is_finite() && self.p.is_finite()
    }
}

/// 2x2 matrix in `(q, p)` ordering.
pub type Mat2 = [[f64; 2]; 2];

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn transpose(a: &Mat2) -> Mat2 {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

/// Linear part of the flow acting on `(q, p)` deviations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformMatrix {
    pub a: Mat2,
}

impl TransformMatrix {
    pub fn for_time(t: f64) -> Self {
        Self { a: [[1.0, t], [0.0, 1.0]] }
    }

    pub fn det(&self) -> f64 {
        self.a[0][0] * self.a[1][1] - self.a[0][1] * self.a[1][0]
    }

    /// `A C A^T`
    pub fn congruence(&self, c: &Mat2) -> Mat2 {
        mat_mul(&mat_mul(&self.a, c), &transpose(&self.a))
    }
}

/// Gaussian phase-space distribution: mean and dispersion matrix
/// `[[s_qq, s_qp], [s_qp, s_pp]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPhaseState {
    pub mean_q: f64,
    pub mean_p: f64,
    cov: Mat2,
}

impl GaussianPhaseState {
    pub fn new(mean_q: f64, mean_p: f64, cov: Mat2) -> Result<Self> {
        if !mean_q.is_finite() || !mean_p.is_finite() {
            return Err(Error::InvalidArgument("non-finite mean".into()));
        }
        if cov.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidCovariance("non-finite entry".into()));
        }
        let asym = (cov[0][1] - cov[1][0]).abs();
        if asym > 1e-12 * cov[0][1].abs().max(1.0) {
            return Err(Error::InvalidCovariance(format!("not symmetric (off-diagonal mismatch {asym:e})")));
        }
        let det = cov[0][0] * cov[1][1] - cov[0][1] * cov[1][0];
        if cov[0][0] <= 0.0 || det <= 0.0 {
            return Err(Error::InvalidCovariance(format!("not positive definite (s_qq = {}, det = {det})", cov[0][0])));
        }
        Ok(Self { mean_q, mean_p, cov })
    }

    /// From the three independent entries `s_qq, s_qp, s_pp`.
    pub fn from_entries(mean_q: f64, mean_p: f64, s_qq: f64, s_qp: f64, s_pp: f64) -> Result<Self> {
        Self::new(mean_q, mean_p, [[s_qq, s_qp], [s_qp, s_pp]])
    }

    /// The state `(1/pi) exp(-q^2 - p^2)`: zero mean, dispersion `I/2`.
    pub fn standard() -> Self {
        Self { mean_q: 0.0, mean_p: 0.0, cov: [[0.5, 0.0], [0.0, 0.5]] }
    }

    pub fn cov(&self) -> Mat2 {
        self.cov
    }

    pub fn mean(&self) -> PhasePoint {
        PhasePoint::new(self.mean_q, self.mean_p)
    }

    pub fn det(&self) -> f64 {
        self.cov[0][0] * self.cov[1][1] - self.cov[0][1] * self.cov[1][0]
    }
}

pub fn hamiltonian(pt: PhasePoint) -> f64 {
    0.5 * pt.p * pt.p + pt.q
}

pub fn flow_forward(pt0: PhasePoint, t: f64) -> PhasePoint {
    PhasePoint::new(pt0.q + pt0.p * t - 0.5 * t * t, pt0.p - t)
}

/// Initial point of the trajectory that reaches `pt` at time `t`.
pub fn flow_backward(pt: PhasePoint, t: f64) -> PhasePoint {
    PhasePoint::new(pt.q - pt.p * t - 0.5 * t * t, pt.p + t)
}

/// Mean moves along the characteristic; dispersion transforms as `A C A^T`.
pub fn evolve_gaussian(g0: &GaussianPhaseState, t: f64) -> GaussianPhaseState {
    let mean = flow_forward(g0.mean(), t);
    let mut cov = TransformMatrix::for_time(t).congruence(&g0.cov);
    let off = 0.5 * (cov[0][1] + cov[1][0]);
    cov[0][1] = off;
    cov[1][0] = off;
    GaussianPhaseState { mean_q: mean.q, mean_p: mean.p, cov }
}

/// Bivariate normal density of `g` at `pt`.
pub fn gaussian_density(g: &GaussianPhaseState, pt: PhasePoint) -> f64 {
    let [[a, b], [_, d]] = g.cov;
    let det = g.det();
    let dq = pt.q - g.mean_q;
    let dp = pt.p - g.mean_p;
    let quad = (d * dq * dq - 2.0 * b * dq * dp + a * dp * dp) / det;
    (-0.5 * quad).exp() / (2.0 * PI * det.sqrt())
}

/// Transports `f0` to time `t` on the given grid: `f(q, p, t) = f0(flow_backward((q, p), t))`.
pub fn propagate_distribution<F: PhaseDensity + ?Sized>(
    f0: &F,
    t: f64,
    qgrid: UniformGrid1D,
    pgrid: UniformGrid1D,
) -> Result<PhaseSpaceField> {
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!("non-finite time {t}")));
    }
    let pulled = |q: f64, p: f64| {
        let back = flow_backward(PhasePoint::new(q, p), t);
        f0.density(back.q, back.p)
    };
    let mut field = PhaseSpaceField::sample(&pulled, qgrid, pgrid)?;
    field.time = f0.time() + t;
    Ok(field)
}

/// `df/dt + p df/dq - df/dp` by second-order central differences.
pub fn liouville_residual<F>(f: F, pt: PhasePoint, t: f64, h: f64) -> Result<f64>
where
    F: Fn(f64, f64, f64) -> f64,
{
    if !(h > 0.0) {
        return Err(Error::NonPositiveStep(h));
    }
    let PhasePoint { q, p } = pt;
    let dt = (f(q, p, t + h) - f(q, p, t - h)) / (2.0 * h);
    let dq = (f(q + h, p, t) - f(q - h, p, t)) / (2.0 * h);
    let dp = (f(q, p + h, t) - f(q, p - h, t)) / (2.0 * h);
    Ok(dt + p * dq - dp)
}

/// The Gaussian solution `(1/pi) exp{-(p+t)^2 - (q - p t - t^2/2)^2}`
/// obtained from the standard state.
pub fn standard_solution(q: f64, p: f64, t: f64) -> f64 {
    let a = p + t;
    let b = q - p * t - 0.5 * t * t;
    (-a * a - b * b).exp() / PI
}
