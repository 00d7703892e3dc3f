//! Sampled fields on uniform grids and the sampler traits the transforms consume.
//!
//! A transform accepts either a closure or a gridded field. Gridded fields are
//! evaluated off-grid by bilinear (or, for wave functions, linear)
//! interpolation and read as zero outside their grid; they report the largest
//! magnitude on their boundary so callers can detect truncation.

use crate::error::{Error, Result};
use crate::grid::UniformGrid1D;
use num_complex::Complex64;

/// Tolerance on classical nonnegativity.
pub const EPS_NEG: f64 = 1e-12;
/// Tolerance on unit normalization of distributions, traces and wave functions.
pub const NORM_TOL: f64 = 1e-6;
/// Tolerance on Hermiticity of density matrices.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// A real function on the phase plane.
pub trait PhaseDensity: Sync {
    fn density(&self, q: f64, p: f64) -> f64;

    /// Largest magnitude on the sampled boundary, for gridded data.
    fn edge_max(&self) -> f64 {
        0.0
    }

    fn time(&self) -> f64 {
        0.0
    }
}

impl<F> PhaseDensity for F
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    fn density(&self, q: f64, p: f64) -> f64 {
        self(q, p)
    }
}

/// A complex two-point kernel `rho(x, x')`.
pub trait DensityKernel: Sync {
    fn element(&self, x: f64, xp: f64) -> Complex64;

    fn edge_max(&self) -> f64 {
        0.0
    }

    fn time(&self) -> f64 {
        0.0
    }
}

impl<F> DensityKernel for F
where
    F: Fn(f64, f64) -> Complex64 + Sync,
{
    fn element(&self, x: f64, xp: f64) -> Complex64 {
        self(x, xp)
    }
}

/// Attaches a time stamp to a closure sampler.
#[derive(Debug, Clone, Copy)]
pub struct AtTime<F> {
    pub inner: F,
    pub time: f64,
}

impl<F: Fn(f64, f64) -> f64 + Sync> PhaseDensity for AtTime<F> {
    fn density(&self, q: f64, p: f64) -> f64 {
        (self.inner)(q, p)
    }

    fn time(&self) -> f64 {
        self.time
    }
}

impl<F: Fn(f64, f64) -> Complex64 + Sync> DensityKernel for AtTime<F> {
    fn element(&self, x: f64, xp: f64) -> Complex64 {
        (self.inner)(x, xp)
    }

    fn time(&self) -> f64 {
        self.time
    }
}

/// Samples of `f(q, p)` at a fixed time, row-major with `p` fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceField {
    pub qgrid: UniformGrid1D,
    pub pgrid: UniformGrid1D,
    pub values: Vec<f64>,
    pub time: f64,
    /// Set only after the field has passed the nonnegativity and
    /// normalization checks of [`PhaseSpaceField::certify_classical`].
    pub classical: bool,
}

impl PhaseSpaceField {
    pub fn new(qgrid: UniformGrid1D, pgrid: UniformGrid1D, values: Vec<f64>, time: f64) -> Result<Self> {
        if values.len() != qgrid.len() * pgrid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a {}x{} grid",
                values.len(),
                qgrid.len(),
                pgrid.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite field value {v}")));
        }
        Ok(Self { qgrid, pgrid, values, time, classical: false })
    }

    /// Samples a phase-space function on the grid.
    pub fn sample<F: PhaseDensity + ?Sized>(f: &F, qgrid: UniformGrid1D, pgrid: UniformGrid1D) -> Result<Self> {
        use rayon::prelude::*;
        let np = pgrid.len();
        let mut values = vec![0.0; qgrid.len() * np];
        values.par_chunks_mut(np).enumerate().for_each(|(i, row)| {
            let q = qgrid.point(i);
            for (j, v) in row.iter_mut().enumerate() {
                *v = f.density(q, pgrid.point(j));
            }
        });
        Self::new(qgrid, pgrid, values, f.time())
    }

    pub fn get(&self, iq: usize, ip: usize) -> f64 {
        self.values[iq * self.pgrid.len() + ip]
    }

    /// Trapezoidal integral over the plane.
    pub fn integral(&self) -> f64 {
        let np = self.pgrid.len();
        self.values
            .chunks(np)
            .enumerate()
            .map(|(i, row)| {
                let wq = self.qgrid.weight(i);
                row.iter().enumerate().map(|(j, v)| wq * self.pgrid.weight(j) * v).sum::<f64>()
            })
            .sum()
    }

    /// Momentum marginal `int f(q, p) dp` at each `q` sample.
    pub fn position_marginal(&self) -> Vec<f64> {
        let np = self.pgrid.len();
        self.values
            .chunks(np)
            .map(|row| row.iter().enumerate().map(|(j, v)| self.pgrid.weight(j) * v).sum())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Bilinear interpolation; zero outside the grid.
    pub fn interpolate(&self, q: f64, p: f64) -> f64 {
        let (Some((i, a)), Some((j, b))) = (self.qgrid.locate(q), self.pgrid.locate(p)) else {
            return 0.0;
        };
        let f00 = self.get(i, j);
        let f01 = self.get(i, j + 1);
        let f10 = self.get(i + 1, j);
        let f11 = self.get(i + 1, j + 1);
        (1.0 - a) * ((1.0 - b) * f00 + b * f01) + a * ((1.0 - b) * f10 + b * f11)
    }

    /// Checks nonnegativity (to [`EPS_NEG`]) and unit mass (to [`NORM_TOL`])
    /// and flags the field as a classical distribution.
    pub fn certify_classical(mut self) -> Result<Self> {
        let min = self.values.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -EPS_NEG {
            return Err(Error::InvalidArgument(format!("field takes negative value {min:e}")));
        }
        let mass = self.integral();
        if (mass - 1.0).abs() > NORM_TOL {
            return Err(Error::Normalization(mass));
        }
        self.classical = true;
        Ok(self)
    }
}

impl PhaseDensity for PhaseSpaceField {
    fn density(&self, q: f64, p: f64) -> f64 {
        self.interpolate(q, p)
    }

    /// Largest magnitude along the momentum edges, the direction the
    /// density-matrix transform integrates over.
    fn edge_max(&self) -> f64 {
        let last = self.pgrid.len() - 1;
        (0..self.qgrid.len()).fold(0.0, |m: f64, i| m.max(self.get(i, 0).abs()).max(self.get(i, last).abs()))
    }

    fn time(&self) -> f64 {
        self.time
    }
}

/// Samples of `rho(x, x')` at a fixed time, row-major with `x'` fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrixField {
    pub xgrid: UniformGrid1D,
    pub values: Vec<Complex64>,
    pub time: f64,
}

impl DensityMatrixField {
    pub fn new(xgrid: UniformGrid1D, values: Vec<Complex64>, time: f64) -> Result<Self> {
        let n = xgrid.len();
        if values.len() != n * n {
            return Err(Error::GridMismatch(format!("{} values for a {n}x{n} matrix", values.len())));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite density matrix entry".into()));
        }
        Ok(Self { xgrid, values, time })
    }

    pub fn dim(&self) -> usize {
        self.xgrid.len()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.dim() + j]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// Largest `|rho_ij - conj(rho_ji)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut err: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                err = err.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        err
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim()).map(|i| self.get(i, i)).collect()
    }

    /// Trapezoidal `int rho(x, x) dx`; real part only.
    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.xgrid.weight(i) * self.get(i, i).re).sum()
    }

    /// Checks Hermiticity, a real nonnegative diagonal and unit trace.
    pub fn validate(&self) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(Error::NonHermitian(herm));
        }
        for d in self.diagonal() {
            if d.im.abs() > HERMITIAN_TOL || d.re < -HERMITIAN_TOL {
                return Err(Error::InvalidArgument(format!("diagonal entry {d} is not real nonnegative")));
            }
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > NORM_TOL {
            return Err(Error::Normalization(tr));
        }
        Ok(())
    }

    /// Bilinear interpolation of real and imaginary parts; zero outside the grid.
    pub fn interpolate(&self, x: f64, xp: f64) -> Complex64 {
        let (Some((i, a)), Some((j, b))) = (self.xgrid.locate(x), self.xgrid.locate(xp)) else {
            return Complex64::new(0.0, 0.0);
        };
        let r00 = self.get(i, j);
        let r01 = self.get(i, j + 1);
        let r10 = self.get(i + 1, j);
        let r11 = self.get(i + 1, j + 1);
        (r00 * (1.0 - b) + r01 * b) * (1.0 - a) + (r10 * (1.0 - b) + r11 * b) * a
    }
}

impl DensityKernel for DensityMatrixField {
    fn element(&self, x: f64, xp: f64) -> Complex64 {
        self.interpolate(x, xp)
    }

    fn edge_max(&self) -> f64 {
        let n = self.dim();
        let mut m: f64 = 0.0;
        for k in 0..n {
            for v in [self.get(0, k), self.get(n - 1, k), self.get(k, 0), self.get(k, n - 1)] {
                m = m.max(v.norm());
            }
        }
        m
    }

    fn time(&self) -> f64 {
        self.time
    }
}

/// Samples of a classical wave function `Psi(x)` at a fixed time.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunctionField {
    pub xgrid: UniformGrid1D,
    pub values: Vec<Complex64>,
    pub time: f64,
    /// Sample whose value has been made real and positive. `None` when the
    /// global phase is left as produced, e.g. by propagation.
    pub gauge_anchor: Option<usize>,
}

impl WaveFunctionField {
    pub fn new(xgrid: UniformGrid1D, values: Vec<Complex64>, time: f64, gauge_anchor: Option<usize>) -> Result<Self> {
        if values.len() != xgrid.len() {
            return Err(Error::GridMismatch(format!("{} values for {} grid points", values.len(), xgrid.len())));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite wave function sample".into()));
        }
        if let Some(a) = gauge_anchor {
            if a >= values.len() {
                return Err(Error::InvalidArgument(format!("gauge anchor {a} out of range")));
            }
        }
        Ok(Self { xgrid, values, time, gauge_anchor })
    }

    pub fn from_fn(xgrid: UniformGrid1D, time: f64, psi: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = xgrid.points().map(psi).collect();
        Self::new(xgrid, values, time, None)
    }

    /// Trapezoidal `int |Psi|^2 dx`.
    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().enumerate().map(|(i, v)| self.xgrid.weight(i) * v.norm_sqr()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// Multiplies by a global phase so that sample `anchor` is real and positive.
    pub fn fix_gauge_at(mut self, anchor: usize) -> Result<Self> {
        let v = *self
            .values
            .get(anchor)
            .ok_or_else(|| Error::InvalidArgument(format!("gauge anchor {anchor} out of range")))?;
        if v.norm() == 0.0 {
            return Err(Error::InvalidArgument("cannot anchor the gauge at a zero sample".into()));
        }
        let rot = v.conj() / v.norm();
        for x in &mut self.values {
            *x *= rot;
        }
        self.values[anchor] = Complex64::new(self.values[anchor].re, 0.0);
        self.gauge_anchor = Some(anchor);
        Ok(self)
    }

    /// Checks unit norm and, when anchored, a real positive anchor sample.
    pub fn validate(&self) -> Result<()> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::Normalization(n));
        }
        if let Some(a) = self.gauge_anchor {
            let v = self.values[a];
            if v.im.abs() > 1e-12 || v.re <= 0.0 {
                return Err(Error::InvalidArgument(format!("anchor sample {v} is not real positive")));
            }
        }
        Ok(())
    }

    /// Linear interpolation; zero outside the grid.
    pub fn interpolate(&self, x: f64) -> Complex64 {
        match self.xgrid.locate(x) {
            Some((i, a)) => self.values[i] * (1.0 - a) + self.values[i + 1] * a,
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// The factorized matrix `Psi(x) Psi*(x')` on the same grid.
    pub fn outer(&self) -> DensityMatrixField {
        let values = self
            .values
            .iter()
            .flat_map(|a| self.values.iter().map(move |b| a * b.conj()))
            .collect();
        DensityMatrixField { xgrid: self.xgrid, values, time: self.time }
    }
}

/// The rank-one kernel `Psi(x) Psi*(x')` of a sampled wave function,
/// evaluated without forming the matrix.
#[derive(Debug, Clone, Copy)]
pub struct RankOne<'a>(pub &'a WaveFunctionField);

impl DensityKernel for RankOne<'_> {
    fn element(&self, x: f64, xp: f64) -> Complex64 {
        self.0.interpolate(x) * self.0.interpolate(xp).conj()
    }

    fn edge_max(&self) -> f64 {
        let v = &self.0.values;
        let edge = v[0].norm().max(v[v.len() - 1].norm());
        edge * self.0.max_abs()
    }

    fn time(&self) -> f64 {
        self.0.time
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(a: f64, b: f64, n: usize) -> UniformGrid1D {
        UniformGrid1D::new(a, b, n).unwrap()
    }

    #[test]
    fn bilinear_is_exact_on_bilinear_functions() {
        let f = PhaseSpaceField::sample(&|q: f64, p: f64| 1.0 + 2.0 * q - p + 0.5 * q * p, grid(-1.0, 1.0, 5), grid(-2.0, 2.0, 9))
            .unwrap();
        let v = f.interpolate(0.3, -0.7);
        assert!((v - (1.0 + 0.6 + 0.7 - 0.105)).abs() < 1e-14);
        assert_eq!(f.interpolate(1.5, 0.0), 0.0);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let g = grid(0.0, 1.0, 3);
        assert!(matches!(PhaseSpaceField::new(g, g, vec![0.0; 8], 0.0), Err(Error::GridMismatch(_))));
        assert!(matches!(DensityMatrixField::new(g, vec![Complex64::new(0.0, 0.0); 3], 0.0), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn gauge_fix_makes_anchor_real_positive() {
        let g = grid(-1.0, 1.0, 3);
        let psi = WaveFunctionField::new(
            g,
            vec![Complex64::new(0.0, 1.0), Complex64::new(-1.0, 1.0), Complex64::new(0.5, 0.0)],
            0.0,
            None,
        )
        .unwrap()
        .fix_gauge_at(1)
        .unwrap();
        assert_eq!(psi.values[1].im, 0.0);
        assert!(psi.values[1].re > 0.0);
        assert!((psi.values[1].re - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn certify_rejects_negative_fields() {
        let g = grid(-8.0, 8.0, 161);
        let neg = PhaseSpaceField::sample(&|q: f64, p: f64| -(-q * q - p * p).exp() / std::f64::consts::PI, g, g).unwrap();
        assert!(neg.certify_classical().is_err());
        let pos = PhaseSpaceField::sample(&|q: f64, p: f64| (-q * q - p * p).exp() / std::f64::consts::PI, g, g).unwrap();
        assert!(pos.certify_classical().unwrap().classical);
    }
}
