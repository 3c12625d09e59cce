//! The recursive step function σ, the limit-periodic drift `b = σ·sin⁴(πx)`,
//! its translates and the limit field `b_∞`.
//!
//! Positions are handled as an exact integer cell plus a fractional offset
//! ([`Point`]) so that translates by `3ⁿ` up to `n = 40` stay exact even
//! though `3⁴⁰` is far outside the integer range of an `f64`.

mod averages;
pub(crate) mod drift;
mod limit;
mod sigma;

use std::sync::Arc;

pub use averages::{almost_period_defect, mean_value};
pub use drift::{
    b_antiderivative, b_deriv_eval, b_eval, translated_deriv_eval, translated_eval, unit_sin4_integral, Antiderivative,
    DriftDerivative, DriftField, SIN4_MEAN,
};
pub use limit::{limit_field_eval, LimitDerivative, LimitField, LimitSample};
pub use sigma::{cell_prefix_sum, pow3, sigma_cell, sigma_eval, zeta2_tail, Point, SigmaField, MAX_LEVEL};

use crate::field::FieldRegistry;
use crate::Result;

/// Registry of the sampleable fields: `sigma`, `b`, `b-prime`, `B`, `b-inf`,
/// `b-inf-prime`.
pub fn field_registry(limit_tol: f64) -> Result<FieldRegistry> {
    let limit = Arc::new(LimitField::new(limit_tol)?);
    let mut r = FieldRegistry::default();
    r.register("sigma", "recursive step function σ", Arc::new(SigmaField));
    r.register("b", "drift b = σ·sin⁴(πx)", Arc::new(DriftField));
    r.register("b-prime", "derivative b′", Arc::new(DriftDerivative));
    r.register("B", "antiderivative B(x) = ∫₀ˣ b", Arc::new(Antiderivative));
    r.register("b-inf", "limit field b_∞ = lim b(·+3ⁿ)", limit.clone());
    r.register("b-inf-prime", "derivative of the limit field", Arc::new(LimitDerivative(limit)));
    Ok(r)
}
