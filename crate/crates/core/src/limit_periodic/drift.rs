use std::f64::consts::PI;

use super::sigma::{cell_prefix_sum, pow3, sigma_at, sigma_cell, Point};
use crate::field::Field;
use crate::Result;

/// `∫₀¹ sin⁴(πx) dx`.
pub const SIN4_MEAN: f64 = 0.375;

/// `∫₀ᵗ sin⁴(πs) ds = 3t/8 − sin(2πt)/(4π) + sin(4πt)/(32π)`.
pub fn unit_sin4_integral(t: f64) -> f64 {
    3.0 * t / 8.0 - (2.0 * PI * t).sin() / (4.0 * PI) + (4.0 * PI * t).sin() / (32.0 * PI)
}

// sin(π(k+f)) = ±sin(πf); the sign drops out of every even power.
fn sin_cos_frac(p: Point) -> (f64, f64) {
    (PI * p.frac).sin_cos()
}

pub(crate) fn b_at(p: Point) -> f64 {
    let (s, _) = sin_cos_frac(p);
    let s2 = s * s;
    sigma_at(p) * s2 * s2
}

pub(crate) fn b_prime_at(p: Point) -> f64 {
    let (s, c) = sin_cos_frac(p);
    sigma_at(p) * 4.0 * PI * s * s * s * c
}

/// `(b, b′)` sharing one σ evaluation.
pub(crate) fn b_and_prime_at(p: Point) -> (f64, f64) {
    let (s, c) = sin_cos_frac(p);
    let sg = sigma_at(p);
    let s3 = s * s * s;
    (sg * s3 * s, sg * 4.0 * PI * s3 * c)
}

pub fn b_eval(x: f64) -> Result<f64> {
    Ok(b_at(Point::new(x)?))
}

pub fn b_deriv_eval(x: f64) -> Result<f64> {
    Ok(b_prime_at(Point::new(x)?))
}

/// `B(x) = ∫₀ˣ b` in closed form; `O(log |x|)`.
pub fn b_antiderivative(x: f64) -> Result<f64> {
    let p = Point::new(x.abs())?;
    Ok(SIN4_MEAN * cell_prefix_sum(p.cell) + sigma_cell(p.cell) * unit_sin4_integral(p.frac))
}

/// `b(x + 3ⁿ)`, exact in the integer part of the shift.
pub fn translated_eval(x: f64, n: u32) -> Result<f64> {
    let shift = pow3(n)?;
    Ok(b_at(Point::new(x)?.shifted(shift)))
}

/// Derivative of the translate, `b′(x + 3ⁿ)`.
pub fn translated_deriv_eval(x: f64, n: u32) -> Result<f64> {
    let shift = pow3(n)?;
    Ok(b_prime_at(Point::new(x)?.shifted(shift)))
}

/// The drift `b(x) = σ(x)·sin⁴(πx)`: odd, limit periodic, `C³`.
#[derive(Debug, Clone, Copy, Default)]
pub struct DriftField;

impl DriftField {
    pub fn eval(&self, x: f64) -> Result<f64> {
        b_eval(x)
    }
    pub fn derivative(&self, x: f64) -> Result<f64> {
        b_deriv_eval(x)
    }
    pub fn antiderivative(&self, x: f64) -> Result<f64> {
        b_antiderivative(x)
    }
}

impl Field for DriftField {
    fn value(&self, x: f64) -> f64 {
        b_eval(x).unwrap_or(f64::NAN)
    }
    fn integral(&self, a: f64, b: f64) -> Option<f64> {
        Some(b_antiderivative(b).ok()? - b_antiderivative(a).ok()?)
    }
    fn label(&self) -> &str {
        "b"
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DriftDerivative;

impl Field for DriftDerivative {
    fn value(&self, x: f64) -> f64 {
        b_deriv_eval(x).unwrap_or(f64::NAN)
    }
    fn integral(&self, a: f64, b: f64) -> Option<f64> {
        Some(b_eval(b).ok()? - b_eval(a).ok()?)
    }
    fn label(&self) -> &str {
        "b-prime"
    }
}

/// `B` itself as a sampleable field.
#[derive(Debug, Clone, Copy, Default)]
pub struct Antiderivative;

impl Field for Antiderivative {
    fn value(&self, x: f64) -> f64 {
        b_antiderivative(x).unwrap_or(f64::NAN)
    }
    fn label(&self) -> &str {
        "B"
    }
}
