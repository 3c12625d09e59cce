//! Numerical laboratory for generalised principal eigenvalues and criticality
//! of one-dimensional elliptic operators built on a limit-periodic drift.
//!
//! The crate is organised bottom-up:
//!
//! - [`limit_periodic`]: the recursive step function σ, the drift
//!   `b = σ·sin⁴(πx)`, its exact antiderivative, translates `b(·+3ⁿ)` and
//!   the limit field `b_∞`.
//! - [`operator`]: 1D operators in drift or self-adjoint form, gauge
//!   transforms and the named preset registry.
//! - [`spectral`]: Dirichlet principal eigenvalues on truncated intervals,
//!   domain sweeps, RK4 initial value problems and Rayleigh quotients.
//! - [`criticality`]: the second-solution integral test, liminf
//!   certificates, Wronskians and subsolution certificates.
//! - [`verification`]: registered inequality checks and the two end-to-end
//!   counter-example pipelines.
//! - [`output`]: CSV and SVG emission.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod criticality;
pub mod error;
pub mod field;
pub mod limit_periodic;
pub mod operator;
pub mod output;
pub mod quadrature;
pub mod spectral;
pub mod verification;

pub use error::{Error, Result};
pub use field::{Field, PositiveSolution};
