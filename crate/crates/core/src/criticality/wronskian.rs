use serde::Serialize;

use crate::error::Error;
use crate::field::Field;
use crate::operator::{Form, Operator1D};
use crate::spectral::IvpSolution;
use crate::Result;

/// Below this `|W(x₀)|` the two solutions are treated as proportional.
pub const DEGENERATE_WRONSKIAN: f64 = 1e-14;

/// `A(x)·(u′v − v′u)`.
pub fn wronskian(a: &dyn Field, x: f64, u: f64, du: f64, v: f64, dv: f64) -> f64 {
    a.value(x) * (du * v - dv * u)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct WronskianProfile {
    pub initial: f64,
    /// `max |W(x) − W(x₀)| / |W(x₀)|`.
    pub max_deviation: f64,
    pub worst_at: f64,
    pub min_abs: f64,
}

/// Tracks the Wronskian of two sampled solutions of the same self-adjoint
/// equation along their common abscissae.
pub fn wronskian_constancy(op: &Operator1D, u: &IvpSolution, v: &IvpSolution) -> Result<WronskianProfile> {
    if op.form() != Form::SelfAdjoint {
        return Err(Error::UnsupportedOperator(format!(
            "{}: the Wronskian is constant only in self-adjoint form",
            op.name()
        )));
    }
    if u.x.len() != v.x.len() || u.x.iter().zip(&v.x).any(|(a, b)| a != b) || u.x.is_empty() {
        return Err(Error::invalid("solutions must be sampled on the same abscissae"));
    }
    let a = op.diffusion_field();
    let w = |i: usize| wronskian(a.as_ref(), u.x[i], u.u[i], u.du[i], v.u[i], v.du[i]);
    let initial = w(0);
    if initial.abs() < DEGENERATE_WRONSKIAN {
        return Err(Error::DegeneratePair(initial));
    }
    let mut profile = WronskianProfile { initial, max_deviation: 0.0, worst_at: u.x[0], min_abs: initial.abs() };
    for i in 0..u.x.len() {
        let wi = w(i);
        let dev = (wi - initial).abs() / initial.abs();
        if dev > profile.max_deviation {
            profile.max_deviation = dev;
            profile.worst_at = u.x[i];
        }
        profile.min_abs = profile.min_abs.min(wi.abs());
    }
    Ok(profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Constant;
    use crate::spectral::solve_ivp;
    use std::sync::Arc;

    #[test]
    fn linear_pair() {
        assert_eq!(wronskian(&Constant(1.0), 3.0, 1.0, 0.0, 3.0, 1.0), -1.0);
        let op = Operator1D::self_adjoint("lap", Arc::new(Constant(0.0)));
        let u = solve_ivp(&op, 0.0, 0.0, 1.0, 0.0, 4.0, 1e-3).unwrap();
        let v = solve_ivp(&op, 0.0, 0.0, 0.0, 1.0, 4.0, 1e-3).unwrap();
        let p = wronskian_constancy(&op, &v, &u).unwrap();
        assert_eq!(p.initial, 1.0);
        assert!(p.max_deviation < 1e-12);
    }

    #[test]
    fn trig_pair() {
        let op = Operator1D::self_adjoint("u''+u", Arc::new(Constant(1.0)));
        let c = solve_ivp(&op, 0.0, 0.0, 1.0, 0.0, 10.0, 1e-3).unwrap();
        let s = solve_ivp(&op, 0.0, 0.0, 0.0, 1.0, 10.0, 1e-3).unwrap();
        // W = cos·cos − (−sin)·sin = 1 with (u, v) = (sin, cos)
        let p = wronskian_constancy(&op, &s, &c).unwrap();
        assert!((p.initial - 1.0).abs() < 1e-15);
        assert!(p.max_deviation < 1e-10);
    }

    #[test]
    fn proportional_pair_is_degenerate() {
        let op = Operator1D::self_adjoint("u''+u", Arc::new(Constant(1.0)));
        let c = solve_ivp(&op, 0.0, 0.0, 1.0, 0.0, 1.0, 1e-2).unwrap();
        assert!(matches!(wronskian_constancy(&op, &c, &c), Err(Error::DegeneratePair(_))));
    }
}
