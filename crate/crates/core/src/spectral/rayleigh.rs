use super::eigen::assemble;
use super::grid::Grid;
use crate::error::Error;
use crate::field::Field;
use crate::operator::Operator1D;
use crate::quadrature::composite_simpson;
use crate::Result;

/// `(∫ A·w′² − c·w²) / ∫ w²` over `interval` by composite Simpson with step
/// about `h`. `w` must vanish at both endpoints.
pub fn rayleigh_quotient(
    op: &Operator1D,
    test: &dyn Field,
    test_prime: &dyn Field,
    interval: (f64, f64),
    h: f64,
) -> Result<f64> {
    op.require_unit_self_adjoint()?;
    let (a, b) = interval;
    if !(b > a) || !(h > 0.0) {
        return Err(Error::invalid("need a non-degenerate interval and positive step"));
    }
    for end in [a, b] {
        if test.value(end).abs() > 1e-8 {
            return Err(Error::invalid(format!("test function does not vanish at x = {end}")));
        }
    }
    let n = ((b - a) / h).ceil() as usize;
    let den = composite_simpson(|x| test.value(x).powi(2), a, b, n);
    if den.sqrt() < 1e-12 {
        return Err(Error::invalid("test function has (numerically) zero norm"));
    }
    let num = composite_simpson(
        |x| {
            let (w, dw) = (test.value(x), test_prime.value(x));
            op.diffusion(x) * dw * dw - op.potential(x) * w * w
        },
        a,
        b,
        n,
    );
    Ok(num / den)
}

/// `vᵀ T v / vᵀ v` for the discretized `−ℒ` on `grid`'s interior nodes.
pub fn discrete_rayleigh_quotient(op: &Operator1D, grid: &Grid, v: &[f64]) -> Result<f64> {
    op.require_unit_self_adjoint()?;
    if v.len() != grid.interior_len() {
        return Err(Error::invalid("vector length does not match the interior grid"));
    }
    let (_, diag, off) = assemble(op, grid);
    let n = v.len();
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..n {
        let mut tv = diag[i] * v[i];
        if i > 0 {
            tv += off * v[i - 1];
        }
        if i + 1 < n {
            tv += off * v[i + 1];
        }
        num += v[i] * tv;
        den += v[i] * v[i];
    }
    if den.sqrt() < 1e-12 {
        return Err(Error::invalid("zero vector"));
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Constant, FnField};
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn lap() -> Operator1D {
        Operator1D::self_adjoint("lap", Arc::new(Constant(0.0)))
    }

    #[test]
    fn sine_quotient() {
        let w = FnField::new("sin", |x: f64| (PI * x).sin());
        let dw = FnField::new("cos", |x: f64| PI * (PI * x).cos());
        let q = rayleigh_quotient(&lap(), &w, &dw, (0.0, 1.0), 1e-3).unwrap();
        assert!((q - PI * PI).abs() < 1e-6);
    }

    #[test]
    fn polynomial_quotient() {
        let w = FnField::new("x(1-x)", |x: f64| x * (1.0 - x));
        let dw = FnField::new("1-2x", |x: f64| 1.0 - 2.0 * x);
        let q = rayleigh_quotient(&lap(), &w, &dw, (0.0, 1.0), 1e-3).unwrap();
        assert!((q - 10.0).abs() < 1e-6);
    }

    #[test]
    fn endpoint_and_norm_checks() {
        let one = Constant(1.0);
        let zero = Constant(0.0);
        assert!(rayleigh_quotient(&lap(), &one, &zero, (0.0, 1.0), 1e-2).is_err());
        assert!(rayleigh_quotient(&lap(), &zero, &zero, (0.0, 1.0), 1e-2).is_err());
    }
}
