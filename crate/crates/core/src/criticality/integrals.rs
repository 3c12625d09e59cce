use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::field::{integrate, Field, FnField, PositiveSolution};
use crate::operator::{Form, Operator1D};
use crate::quadrature::integrate_unit_pieces;
use crate::Result;

/// Relative tolerance of every second-solution quadrature.
pub const QUAD_REL_TOL: f64 = 1e-8;
/// `ln` of the integrand above which the sample counts as overflow.
pub const LN_OVERFLOW: f64 = 700.0;
/// Unit pieces per parallel work item.
const CHUNK: f64 = 256.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirectionalIntegral {
    #[serde(rename = "R")]
    pub radius: f64,
    /// `∫_0^R`; `None` once the integrand overflowed.
    pub forward: Option<f64>,
    /// `∫_{−R}^0`; `None` once the integrand overflowed.
    pub backward: Option<f64>,
}

/// `φ / φ(0)`.
#[derive(Clone, Copy)]
pub struct Normalized<'a> {
    inner: &'a dyn PositiveSolution,
    ln_at_zero: f64,
}

impl<'a> Normalized<'a> {
    pub fn new(inner: &'a dyn PositiveSolution) -> Result<Self> {
        let ln_at_zero = inner.ln_value(0.0);
        if !ln_at_zero.is_finite() {
            return Err(Error::invalid("phi(0) must be positive and finite"));
        }
        Ok(Normalized { inner, ln_at_zero })
    }
}

impl PositiveSolution for Normalized<'_> {
    fn ln_value(&self, x: f64) -> f64 {
        self.inner.ln_value(x) - self.ln_at_zero
    }
    fn log_derivative(&self, x: f64) -> f64 {
        self.inner.log_derivative(x)
    }
}

/// `ln` of the second-solution density `w/(Aφ²)`, where `w = exp(−∫₀ˣ d/A)`
/// accounts for a first-order term (`w ≡ 1` in self-adjoint form).
pub(crate) fn ln_density<'a, P: PositiveSolution + 'a>(
    op: &'a Operator1D,
    phi: P,
) -> Box<dyn Fn(f64) -> f64 + Send + Sync + 'a> {
    let a = op.diffusion_field();
    if op.form() == Form::SelfAdjoint {
        return Box::new(move |x| -2.0 * phi.ln_value(x) - a.value(x).ln());
    }
    let rate: std::sync::Arc<dyn Field> = if op.is_unit_diffusion() {
        op.drift_field()
    } else {
        let (d, a) = (op.drift_field(), a.clone());
        std::sync::Arc::new(FnField::new("d/A", move |x| d.value(x) / a.value(x)))
    };
    Box::new(move |x| -integrate(rate.as_ref(), 0.0, x) - 2.0 * phi.ln_value(x) - a.value(x).ln())
}

struct Window {
    value: f64,
    overflow: bool,
}

fn window_integral(ln_f: &(dyn Fn(f64) -> f64 + Sync), lo: f64, hi: f64, invalid: &AtomicBool) -> Window {
    let overflow = AtomicBool::new(false);
    let f = |x: f64| {
        let l = ln_f(x);
        if l.is_nan() {
            invalid.store(true, Ordering::Relaxed);
            return 0.0;
        }
        if l > LN_OVERFLOW {
            overflow.store(true, Ordering::Relaxed);
            return 0.0;
        }
        l.exp()
    };
    let chunks = ((hi - lo) / CHUNK).ceil().max(1.0) as usize;
    let parts: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let a = lo + i as f64 * CHUNK;
            let b = (a + CHUNK).min(hi);
            integrate_unit_pieces(&f, a, b, QUAD_REL_TOL)
        })
        .collect();
    Window { value: parts.iter().sum(), overflow: overflow.load(Ordering::Relaxed) }
}

/// Cumulative `∫_0^R exp(ln_f)` at each radius. Windows between consecutive radii are
/// integrated separately, so the sequence is nondecreasing by construction.
pub(crate) fn cumulative(
    ln_f: &(dyn Fn(f64) -> f64 + Sync),
    radii: &[f64],
) -> Result<Vec<Option<f64>>> {
    let invalid = AtomicBool::new(false);
    let mut out = Vec::with_capacity(radii.len());
    let mut total = Some(0.0);
    let mut prev = 0.0;
    for &r in radii {
        if let Some(t) = total {
            let w = window_integral(ln_f, prev, r, &invalid);
            if invalid.load(Ordering::Relaxed) {
                return Err(Error::invalid("phi is not positive on the integration range"));
            }
            total = if w.overflow { None } else { Some(t + w.value) };
        }
        prev = r;
        out.push(total);
    }
    Ok(out)
}

pub(crate) fn validate_radii(radii: &[f64]) -> Result<()> {
    if radii.is_empty() || !(radii[0] > 0.0) || radii.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("radii must be positive and strictly increasing"));
    }
    if radii.iter().any(|r| !r.is_finite()) {
        return Err(Error::invalid("radii must be finite"));
    }
    Ok(())
}

pub(crate) fn both_directions(
    ln_f: &(dyn Fn(f64) -> f64 + Sync),
    radii: &[f64],
) -> Result<Vec<DirectionalIntegral>> {
    validate_radii(radii)?;
    // ∫_{−R}^0 f = ∫_0^R f(−x)
    let mirrored = |x: f64| ln_f(-x);
    let (fwd, bwd) = rayon::join(|| cumulative(ln_f, radii), || cumulative(&mirrored, radii));
    let (fwd, bwd) = (fwd?, bwd?);
    Ok(radii
        .iter()
        .zip(fwd.into_iter().zip(bwd))
        .map(|(&radius, (forward, backward))| DirectionalIntegral { radius, forward, backward })
        .collect())
}

/// `∫_0^R 1/(Aφ²)` and `∫_{−R}^0 1/(Aφ²)` at each radius.
pub fn second_solution_integrals(
    a: &dyn Field,
    phi: &dyn PositiveSolution,
    radii: &[f64],
) -> Result<Vec<DirectionalIntegral>> {
    let ln_f = |x: f64| {
        let ax = a.value(x);
        if !(ax > 0.0) {
            return f64::NAN;
        }
        -2.0 * phi.ln_value(x) - ax.ln()
    };
    both_directions(&ln_f, radii)
}
