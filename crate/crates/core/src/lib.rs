//! Phase-space and Hilbert-space descriptions of a classical particle in the
//! linear potential `V = q`.
//!
//! - [`phase_flow`]: characteristics, Gaussian states, Liouville transport.
//! - [`duality_maps`]: distribution to density matrix and back, purity,
//!   rank-one factorization.
//! - [`schrodinger_like`]: the classical wave function, its gauge phase, the
//!   Green kernel and wave-function propagation.
//! - [`oracles`]: independent brute-force checks.
//! - [`fieldfile`] and [`cli`]: the text field format and the command line.
//! - [`verify`]: the named verification suites.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod duality_maps;
pub mod error;
pub mod field;
pub mod fieldfile;
pub mod grid;
pub mod oracles;
pub mod phase_flow;
pub mod schrodinger_like;
pub mod verify;

pub use error::{Error, Result};
pub use field::{DensityMatrixField, PhaseSpaceField, WaveFunctionField};
pub use grid::UniformGrid1D;
pub use num_complex::Complex64;
