//! Spectra of random Gaussian monic matrix polynomials.
//!
//! The crate samples `n × n` monic polynomials of degree `k` with i.i.d.
//! standard complex Gaussian coefficients, linearizes them through the block
//! companion matrix, and measures how their empirical spectral distributions
//! approach the two limit laws:
//!
//! * `n → ∞`, `k` fixed, eigenvalues scaled by `n^{-1/2}`: an atom of mass
//!   `(k−1)/k` at the origin plus mass `1/k` spread uniformly on the unit disc;
//! * `k → ∞`, `n` fixed, unscaled: the uniform measure on the unit circle.
//!
//! It also checks, numerically, the singular-value inequalities the
//! convergence arguments rely on ([`verify`]).
//!
//! Modules, bottom-up: [`linalg`] (dense complex kernel), [`matpoly`]
//! (polynomials and splittings), [`esd`] (distributions and distances),
//! [`verify`] (theorem and bound checks), [`harness`] (experiments, export,
//! plotting, CLI support).

// `!(x > 0.0)` style checks reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod esd;
pub mod harness;
pub mod linalg;
pub mod matpoly;
pub mod rng;
pub mod tolerances;
pub mod verify;

pub use esd::{DistanceReport, EmpiricalSpectralDistribution, LimitLaw};
pub use linalg::{ComplexScalar, DenseMatrix, LinalgError, Spectrum, SvdResult};
pub use matpoly::{CompanionSplitK, CompanionSplitN, MatrixPolynomial};
pub use rng::RngStream;
pub use tolerances::{Tolerances, TOLERANCES};
pub use verify::{LemmaCheckConfig, LemmaReport};
