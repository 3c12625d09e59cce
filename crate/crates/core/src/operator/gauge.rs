use std::sync::Arc;

use super::Operator1D;
use crate::error::Error;
use crate::field::{fn_field, Constant, Field};
use crate::Result;

/// Substitution `v = e^{G} u` with `g = G′`.
#[derive(Clone)]
pub struct Gauge {
    pub exponent: Arc<dyn Field>,
    pub rate: Arc<dyn Field>,
    pub rate_derivative: Arc<dyn Field>,
}

impl Gauge {
    pub fn identity() -> Self {
        let zero: Arc<dyn Field> = Arc::new(Constant(0.0));
        Gauge { exponent: zero.clone(), rate: zero.clone(), rate_derivative: zero }
    }

    pub fn new(exponent: Arc<dyn Field>, rate: Arc<dyn Field>, rate_derivative: Arc<dyn Field>) -> Self {
        Gauge { exponent, rate, rate_derivative }
    }

    /// `G = sign·∫₀ˣ f`, given `f` and `f′`.
    pub fn from_rate(f: Arc<dyn Field>, f_prime: Arc<dyn Field>, sign: f64) -> Self {
        let (f1, f2) = (f.clone(), f.clone());
        Gauge {
            exponent: fn_field("G", move |x| sign * crate::field::integrate(f1.as_ref(), 0.0, x)),
            rate: fn_field("g", move |x| sign * f2.value(x)),
            rate_derivative: fn_field("g'", move |x| sign * f_prime.value(x)),
        }
    }
}

// Points where the residual drift d − 2g is probed to decide the form tag.
fn probe_points() -> impl Iterator<Item = f64> {
    (0..=400).map(|i| -50.0 + 0.25 * i as f64 + 0.0371)
}

/// Conjugates `Lu = u″ + d u′ + c u` by `v = e^{G} u`:
/// `e^{G} L(e^{-G} v) = v″ + (d − 2g) v′ + (c − g′ + g² − d g) v`.
///
/// With `g = d/2` the drift disappears and the result is tagged
/// self-adjoint with potential `c − g′ − g²`.
pub fn gauge_transform(op: &Operator1D, gauge: &Gauge) -> Result<Operator1D> {
    if !op.is_unit_diffusion() {
        return Err(Error::UnsupportedOperator(format!(
            "gauge transform of {} needs unit diffusion",
            op.name()
        )));
    }
    let (d, c) = (op.drift_field(), op.potential_field());
    let (g, gp) = (gauge.rate.clone(), gauge.rate_derivative.clone());

    let eliminated = probe_points().all(|x| {
        let r = d.value(x) - 2.0 * g.value(x);
        r.abs() <= 1e-14 * (1.0 + d.value(x).abs())
    });

    let potential = {
        let (d, g) = (d.clone(), g.clone());
        fn_field("gauged potential", move |x| {
            let gx = g.value(x);
            c.value(x) - gp.value(x) + gx * gx - d.value(x) * gx
        })
    };
    let name = format!("gauge({})", op.name());
    if eliminated {
        Ok(Operator1D::self_adjoint(name, potential))
    } else {
        let drift = fn_field("gauged drift", move |x| d.value(x) - 2.0 * g.value(x));
        Ok(Operator1D::drift_form(name, drift, potential))
    }
}
