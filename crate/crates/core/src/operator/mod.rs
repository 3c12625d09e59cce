//! One-dimensional elliptic operators
//! `ℒu = (A u′)′ + d(x) u′ + c(x) u` in drift or self-adjoint form.

mod gauge;
mod presets;

use std::sync::Arc;

use serde::Serialize;

use crate::error::Error;
use crate::field::{Constant, Field, Shifted};
use crate::Result;

pub use gauge::{gauge_transform, Gauge};
pub use presets::{
    limit_operator, OperatorPreset, PresetRegistry, CE1_DRIFT, CE1_SA, CE2_DRIFT, CE2_SA, LIMIT_SA,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Form {
    Drift,
    SelfAdjoint,
}

#[derive(Clone)]
pub enum Diffusion {
    Unit,
    Variable {
        value: Arc<dyn Field>,
        derivative: Arc<dyn Field>,
        ellipticity: f64,
    },
}

#[derive(Clone)]
pub struct Operator1D {
    name: String,
    diffusion: Diffusion,
    drift: Arc<dyn Field>,
    potential: Arc<dyn Field>,
    form: Form,
}

impl std::fmt::Debug for Operator1D {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Operator1D")
            .field("name", &self.name)
            .field("form", &self.form)
            .field("unit_diffusion", &self.is_unit_diffusion())
            .finish()
    }
}

impl Operator1D {
    /// `v″ + c v`.
    pub fn self_adjoint(name: impl Into<String>, potential: Arc<dyn Field>) -> Self {
        Operator1D {
            name: name.into(),
            diffusion: Diffusion::Unit,
            drift: Arc::new(Constant(0.0)),
            potential,
            form: Form::SelfAdjoint,
        }
    }

    /// `u″ + d u′ + c u`.
    pub fn drift_form(name: impl Into<String>, drift: Arc<dyn Field>, potential: Arc<dyn Field>) -> Self {
        Operator1D { name: name.into(), diffusion: Diffusion::Unit, drift, potential, form: Form::Drift }
    }

    /// Replaces the unit diffusion by `A`, checking `A ≥ ellipticity` on
    /// `probe` points.
    pub fn with_diffusion(
        mut self,
        value: Arc<dyn Field>,
        derivative: Arc<dyn Field>,
        ellipticity: f64,
        probe: &[f64],
    ) -> Result<Self> {
        if !(ellipticity > 0.0) {
            return Err(Error::invalid("ellipticity constant must be positive"));
        }
        if let Some(&x) = probe.iter().find(|&&x| !(value.value(x) >= ellipticity)) {
            return Err(Error::invalid(format!("diffusion below ellipticity constant at x = {x}")));
        }
        self.diffusion = Diffusion::Variable { value, derivative, ellipticity };
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn is_unit_diffusion(&self) -> bool {
        matches!(self.diffusion, Diffusion::Unit)
    }

    pub fn diffusion(&self, x: f64) -> f64 {
        match &self.diffusion {
            Diffusion::Unit => 1.0,
            Diffusion::Variable { value, .. } => value.value(x),
        }
    }

    pub fn diffusion_derivative(&self, x: f64) -> f64 {
        match &self.diffusion {
            Diffusion::Unit => 0.0,
            Diffusion::Variable { derivative, .. } => derivative.value(x),
        }
    }

    pub fn diffusion_field(&self) -> Arc<dyn Field> {
        match &self.diffusion {
            Diffusion::Unit => Arc::new(Constant(1.0)),
            Diffusion::Variable { value, .. } => value.clone(),
        }
    }

    pub fn drift(&self, x: f64) -> f64 {
        self.drift.value(x)
    }

    pub fn potential(&self, x: f64) -> f64 {
        self.potential.value(x)
    }

    pub fn drift_field(&self) -> Arc<dyn Field> {
        self.drift.clone()
    }

    pub fn potential_field(&self) -> Arc<dyn Field> {
        self.potential.clone()
    }

    /// `(ℒu)(x)` from pointwise values of `u`, `u′`, `u″`.
    pub fn apply(&self, x: f64, u: f64, du: f64, d2u: f64) -> f64 {
        self.diffusion(x) * d2u + (self.diffusion_derivative(x) + self.drift(x)) * du + self.potential(x) * u
    }

    /// Requires the unit-diffusion self-adjoint form used by the solvers.
    pub(crate) fn require_unit_self_adjoint(&self) -> Result<()> {
        if self.form != Form::SelfAdjoint {
            return Err(Error::UnsupportedOperator(format!(
                "{} is in drift form; gauge-transform it to self-adjoint form first",
                self.name
            )));
        }
        if !self.is_unit_diffusion() {
            return Err(Error::UnsupportedOperator(format!("{} has non-unit diffusion", self.name)));
        }
        Ok(())
    }
}

/// All coefficients evaluated at `x + s`.
pub fn translate_operator(op: &Operator1D, s: f64) -> Operator1D {
    let shift = |f: &Arc<dyn Field>| -> Arc<dyn Field> { Arc::new(Shifted { inner: f.clone(), shift: s }) };
    let diffusion = match &op.diffusion {
        Diffusion::Unit => Diffusion::Unit,
        Diffusion::Variable { value, derivative, ellipticity } => Diffusion::Variable {
            value: shift(value),
            derivative: shift(derivative),
            ellipticity: *ellipticity,
        },
    };
    Operator1D {
        name: format!("{}(x{:+})", op.name, s),
        diffusion,
        drift: shift(&op.drift),
        potential: shift(&op.potential),
        form: op.form,
    }
}
