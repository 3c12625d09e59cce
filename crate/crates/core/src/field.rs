//! Evaluable scalar fields and positive solutions.

use std::sync::Arc;

use crate::quadrature;

/// A real function of one variable that can be sampled anywhere.
pub trait Field: Send + Sync {
    fn value(&self, x: f64) -> f64;

    /// `∫_a^b` in closed form, when the field knows one.
    fn integral(&self, _a: f64, _b: f64) -> Option<f64> {
        None
    }

    fn label(&self) -> &str {
        "field"
    }
}

impl<T: Field + ?Sized> Field for Arc<T> {
    fn value(&self, x: f64) -> f64 {
        (**self).value(x)
    }
    fn integral(&self, a: f64, b: f64) -> Option<f64> {
        (**self).integral(a, b)
    }
    fn label(&self) -> &str {
        (**self).label()
    }
}

/// `∫_a^b field`, through the closed form when available and adaptive
/// Simpson (absolute tolerance 1e-10 per unit piece) otherwise.
pub fn integrate(field: &dyn Field, a: f64, b: f64) -> f64 {
    field.integral(a, b).unwrap_or_else(|| {
        quadrature::integrate_unit_pieces_abs(&|x| field.value(x), a, b, quadrature::DEFAULT_ABS_TOL)
    })
}

pub struct Constant(pub f64);

impl Field for Constant {
    fn value(&self, _x: f64) -> f64 {
        self.0
    }
    fn integral(&self, a: f64, b: f64) -> Option<f64> {
        Some(self.0 * (b - a))
    }
    fn label(&self) -> &str {
        "constant"
    }
}

/// Wraps a closure as a [`Field`].
pub struct FnField<F> {
    label: String,
    f: F,
}

impl<F: Fn(f64) -> f64 + Send + Sync> FnField<F> {
    pub fn new(label: impl Into<String>, f: F) -> Self {
        FnField { label: label.into(), f }
    }
}

impl<F: Fn(f64) -> f64 + Send + Sync> Field for FnField<F> {
    fn value(&self, x: f64) -> f64 {
        (self.f)(x)
    }
    fn label(&self) -> &str {
        &self.label
    }
}

pub fn fn_field<F: Fn(f64) -> f64 + Send + Sync + 'static>(label: &str, f: F) -> Arc<dyn Field> {
    Arc::new(FnField::new(label, f))
}

/// `x ↦ field(x + shift)`.
pub struct Shifted {
    pub inner: Arc<dyn Field>,
    pub shift: f64,
}

impl Field for Shifted {
    fn value(&self, x: f64) -> f64 {
        self.inner.value(x + self.shift)
    }
    fn integral(&self, a: f64, b: f64) -> Option<f64> {
        self.inner.integral(a + self.shift, b + self.shift)
    }
    fn label(&self) -> &str {
        self.inner.label()
    }
}

/// A positive function together with its logarithmic derivative.
///
/// Working in log space keeps `1/φ²` representable for the fast-growing
/// and fast-decaying solutions that the criticality tests integrate.
pub trait PositiveSolution: Send + Sync {
    fn ln_value(&self, x: f64) -> f64;

    /// `φ′/φ`.
    fn log_derivative(&self, x: f64) -> f64;

    fn value(&self, x: f64) -> f64 {
        self.ln_value(x).exp()
    }

    fn derivative(&self, x: f64) -> f64 {
        self.value(x) * self.log_derivative(x)
    }
}

/// `φ(x) = scale · exp(sign · ∫_0^x rate)`.
pub struct ExpSolution {
    rate: Arc<dyn Field>,
    sign: f64,
    ln_scale: f64,
}

impl ExpSolution {
    pub fn new(rate: Arc<dyn Field>, sign: f64) -> Self {
        ExpSolution { rate, sign, ln_scale: 0.0 }
    }

    pub fn scaled(mut self, factor: f64) -> Self {
        self.ln_scale += factor.ln();
        self
    }
}

impl PositiveSolution for ExpSolution {
    fn ln_value(&self, x: f64) -> f64 {
        self.ln_scale + self.sign * integrate(self.rate.as_ref(), 0.0, x)
    }
    fn log_derivative(&self, x: f64) -> f64 {
        self.sign * self.rate.value(x)
    }
}

/// Positive solution given by explicit closures for `φ` and `φ′`.
pub struct FnSolution<F, D> {
    value: F,
    derivative: D,
}

impl<F, D> FnSolution<F, D>
where
    F: Fn(f64) -> f64 + Send + Sync,
    D: Fn(f64) -> f64 + Send + Sync,
{
    pub fn new(value: F, derivative: D) -> Self {
        FnSolution { value, derivative }
    }
}

impl<F, D> PositiveSolution for FnSolution<F, D>
where
    F: Fn(f64) -> f64 + Send + Sync,
    D: Fn(f64) -> f64 + Send + Sync,
{
    fn ln_value(&self, x: f64) -> f64 {
        (self.value)(x).ln()
    }
    fn log_derivative(&self, x: f64) -> f64 {
        (self.derivative)(x) / (self.value)(x)
    }
    fn value(&self, x: f64) -> f64 {
        (self.value)(x)
    }
    fn derivative(&self, x: f64) -> f64 {
        (self.derivative)(x)
    }
}

/// Named fields selectable at runtime (e.g. by `field eval --which`).
#[derive(Default, Clone)]
pub struct FieldRegistry {
    entries: Vec<(&'static str, &'static str, Arc<dyn Field>)>,
}

impl FieldRegistry {
    pub fn register(&mut self, name: &'static str, description: &'static str, field: Arc<dyn Field>) {
        self.entries.retain(|(n, _, _)| *n != name);
        self.entries.push((name, description, field));
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn Field>> {
        self.entries.iter().find(|(n, _, _)| *n == name).map(|(_, _, f)| f.clone())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|(n, _, _)| *n).collect()
    }

    pub fn describe(&self) -> Vec<(&'static str, &'static str)> {
        self.entries.iter().map(|(n, d, _)| (*n, *d)).collect()
    }
}
