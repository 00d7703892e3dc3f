//! Uniform one-dimensional grids and the composite trapezoidal rule.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Uniform grid on `[min, max]` with `n` points, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid1D {
    min: f64,
    max: f64,
    n: usize,
}

impl UniformGrid1D {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self> {
        if !min.is_finite() || !max.is_finite() {
            return Err(Error::InvalidGrid(format!("non-finite bounds [{min}, {max}]")));
        }
        if max <= min {
            return Err(Error::InvalidGrid(format!("max {max} must exceed min {min}")));
        }
        if n < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points, got {n}")));
        }
        Ok(Self { min, max, n })
    }

    /// Symmetric grid on `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, n: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n)
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.n - 1) as f64
    }

    /// Largest absolute coordinate on the grid.
    pub fn max_abs(&self) -> f64 {
        self.min.abs().max(self.max.abs())
    }

    pub fn is_symmetric(&self) -> bool {
        (self.min + self.max).abs() <= 1e-12 * self.max_abs()
    }

    /// Coordinate of sample `i`; the last sample is exactly `max`.
    pub fn point(&self, i: usize) -> f64 {
        debug_assert!(i < self.n);
        if i + 1 == self.n {
            self.max
        } else {
            self.min + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.point(i))
    }

    /// Trapezoidal weight of sample `i`.
    pub fn weight(&self, i: usize) -> f64 {
        let h = self.spacing();
        if i == 0 || i + 1 == self.n {
            0.5 * h
        } else {
            h
        }
    }

    pub fn weights(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.weight(i)).collect()
    }

    /// Cell index and fractional offset of `x`, or `None` outside `[min, max]`.
    pub fn locate(&self, x: f64) -> Option<(usize, f64)> {
        if !(x >= self.min && x <= self.max) {
            return None;
        }
        let s = (x - self.min) / self.spacing();
        let i = (s.floor() as usize).min(self.n - 2);
        Some((i, s - i as f64))
    }

    /// Index of the sample nearest to `x`, clamped to the grid.
    pub fn nearest(&self, x: f64) -> usize {
        let s = ((x - self.min) / self.spacing()).round();
        s.clamp(0.0, (self.n - 1) as f64) as usize
    }

    /// True when both grids place samples at the same coordinates.
    pub fn same_as(&self, other: &UniformGrid1D) -> bool {
        let tol = 1e-12 * self.max_abs().max(other.max_abs()).max(1.0);
        self.n == other.n && (self.min - other.min).abs() <= tol && (self.max - other.max).abs() <= tol
    }
}

pub fn trapezoid(grid: &UniformGrid1D, values: &[f64]) -> f64 {
    debug_assert_eq!(values.len(), grid.len());
    values.iter().enumerate().map(|(i, v)| grid.weight(i) * v).sum()
}

pub fn trapezoid_complex(grid: &UniformGrid1D, values: &[Complex64]) -> Complex64 {
    debug_assert_eq!(values.len(), grid.len());
    values
        .iter()
        .enumerate()
        .map(|(i, v)| v * grid.weight(i))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(UniformGrid1D::new(1.0, 1.0, 5).is_err());
        assert!(UniformGrid1D::new(0.0, 1.0, 1).is_err());
        assert!(UniformGrid1D::new(f64::NAN, 1.0, 3).is_err());
    }

    #[test]
    fn endpoints_and_spacing() {
        let g = UniformGrid1D::new(-6.0, 6.0, 257).unwrap();
        assert_eq!(g.point(0), -6.0);
        assert_eq!(g.point(256), 6.0);
        assert_eq!(g.spacing(), 12.0 / 256.0);
        assert_eq!(g.point(128), 0.0);
    }

    #[test]
    fn trapezoid_is_exact_for_linear() {
        let g = UniformGrid1D::new(0.0, 2.0, 11).unwrap();
        let v: Vec<f64> = g.points().map(|x| 3.0 * x + 1.0).collect();
        assert!((trapezoid(&g, &v) - 8.0).abs() < 1e-14);
    }

    #[test]
    fn locate_inside_and_outside() {
        let g = UniformGrid1D::new(0.0, 1.0, 5).unwrap();
        assert_eq!(g.locate(1.0), Some((3, 1.0)));
        let (i, f) = g.locate(0.3).unwrap();
        assert_eq!(i, 1);
        assert!((f - 0.2).abs() < 1e-12);
        assert!(g.locate(-0.01).is_none());
        assert!(g.locate(1.01).is_none());
    }
}
