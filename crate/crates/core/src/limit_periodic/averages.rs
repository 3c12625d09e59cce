use rayon::prelude::*;

use crate::error::Error;
use crate::field::{integrate, Field};
use crate::Result;

/// `(1/h) ∫_{x0}^{x0+h} field`.
pub fn mean_value(field: &dyn Field, x0: f64, h: f64) -> Result<f64> {
    if h == 0.0 || !h.is_finite() {
        return Err(Error::invalid(format!("window length must be non-zero and finite, got {h}")));
    }
    Ok(integrate(field, x0, x0 + h) / h)
}

/// `max |field(x + p) − field(x)|` over `x = lo, lo + step, …, ≤ hi`.
///
/// A sampled lower bound for the sup-norm defect of `p` as an almost period.
pub fn almost_period_defect(field: &dyn Field, p: f64, window: (f64, f64), step: f64) -> Result<f64> {
    if !(step > 0.0) {
        return Err(Error::invalid(format!("step must be positive, got {step}")));
    }
    let (lo, hi) = window;
    if !(hi > lo) {
        return Err(Error::invalid(format!("degenerate window [{lo}, {hi}]")));
    }
    let n = ((hi - lo) / step).floor() as usize;
    Ok((0..=n)
        .into_par_iter()
        .map(|i| {
            let x = lo + i as f64 * step;
            (field.value(x + p) - field.value(x)).abs()
        })
        .reduce(|| 0.0, f64::max))
}
