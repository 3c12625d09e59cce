use rayon::prelude::*;
use serde_json::json;

use super::{Timer, VerificationRecord, WorstCase};
use crate::error::Error;
use crate::field::Field;
use crate::limit_periodic::{b_antiderivative, DriftField, LimitField, SIN4_MEAN};
use crate::quadrature::integrate_unit_pieces_abs;
use crate::Result;

pub const KN_TOL: f64 = 1e-10;
pub const KN_MAX: u32 = 9;
pub const GLOBAL_BOUND_TOL: f64 = 1e-10;
pub const LIMIT_K_MAX: u32 = 6;
const FIXED_POINT_MAX: usize = 200;

fn integral(field: &dyn Field, a: f64, b: f64, abs_tol: f64) -> f64 {
    field.integral(a, b).unwrap_or_else(|| integrate_unit_pieces_abs(&|x| field.value(x), a, b, abs_tol))
}

fn pairs(n_max: u32) -> Vec<(u32, u32)> {
    (0..=n_max).flat_map(|n| (0..=n).map(move |k| (n, k))).collect()
}

fn kn_record(
    name: &str,
    field: &dyn Field,
    n_max: u32,
    margin: impl Fn(f64, f64, f64) -> f64 + Sync,
) -> Result<VerificationRecord> {
    if n_max > KN_MAX {
        return Err(Error::Range(format!("n_max must be at most {KN_MAX}, got {n_max}")));
    }
    let timer = Timer::start();
    let margins: Vec<((u32, u32), f64)> = pairs(n_max)
        .into_par_iter()
        .map(|(n, k)| {
            let (p3n, p3k) = (3f64.powi(n as i32), 3f64.powi(k as i32));
            ((n, k), margin(p3n, p3k, (n + 1) as f64))
        })
        .collect();
    let mut worst = margins[0];
    for m in &margins {
        if !(m.1 >= worst.1) {
            worst = *m;
        }
    }
    let ((n, k), m) = worst;
    Ok(VerificationRecord::new(
        name,
        json!({ "n_max": n_max, "field": field.label() }),
        KN_TOL,
        WorstCase { location: json!({ "k": k, "n": n }), margin: m },
        margins.len(),
        timer,
    ))
}

/// `∫_{3ⁿ−3ᵏ}^{3ⁿ} b ≥ 0` for all `0 ≤ k ≤ n ≤ n_max`.
pub fn verify_kn_lower(n_max: u32) -> Result<VerificationRecord> {
    verify_kn_lower_for(&DriftField, n_max)
}

pub fn verify_kn_lower_for(field: &dyn Field, n_max: u32) -> Result<VerificationRecord> {
    kn_record("kn-lower", field, n_max, |p3n, p3k, _| integral(field, p3n - p3k, p3n, 1e-12))
}

/// `∫_{3ⁿ}^{3ⁿ+3ᵏ} b ≤ C·3ᵏ/(n+1)²` with `C = ∫₀¹ sin⁴(πx) dx = 3/8`.
pub fn verify_kn_upper(n_max: u32) -> Result<VerificationRecord> {
    verify_kn_upper_for(&DriftField, n_max)
}

pub fn verify_kn_upper_for(field: &dyn Field, n_max: u32) -> Result<VerificationRecord> {
    kn_record("kn-upper", field, n_max, |p3n, p3k, n1| {
        SIN4_MEAN * p3k / (n1 * n1) - integral(field, p3n, p3n + p3k, 1e-12)
    })
}

/// Finds `K > 0` with `B(x) ≥ K|x|/(log₃|x| + 1)² − K` on the sampled
/// `1 ≤ |x| ≤ x_max` and verifies it there.
///
/// `K` is the fixed point of `K ↦ min (B + K)(log₃|x| + 1)²/|x|`, started
/// from `K = 1`; every iterate is admissible for the next, so the limit is
/// the largest constant the samples allow.
pub fn find_k_and_verify_lower_bound(x_max: f64, step: f64) -> Result<(f64, VerificationRecord)> {
    if !(x_max >= 3.0) || !(step > 0.0) {
        return Err(Error::invalid("need x_max >= 3 and step > 0"));
    }
    let timer = Timer::start();
    let n = ((x_max - 1.0) / step).floor() as usize;
    let xs: Vec<f64> = (0..=n).map(|i| 1.0 + i as f64 * step).collect();
    // (B(x), B(−x), (log₃x + 1)²/x)
    let table: Vec<(f64, f64, f64)> = xs
        .par_iter()
        .map(|&x| {
            let l = x.log(3.0) + 1.0;
            Ok((b_antiderivative(x)?, b_antiderivative(-x)?, l * l / x))
        })
        .collect::<Result<_>>()?;

    let next = |k: f64| table.iter().map(|&(b, _, w)| (b + k) * w).fold(f64::INFINITY, f64::min);
    let mut k = 1.0;
    let mut iterations = 0;
    for _ in 0..FIXED_POINT_MAX {
        iterations += 1;
        let k1 = next(k);
        let done = (k1 - k).abs() <= 1e-15 * k.abs().max(1.0);
        k = k1;
        if done {
            break;
        }
    }

    let mut worst = WorstCase { location: json!(xs[0]), margin: f64::INFINITY };
    for (&x, &(bp, bm, w)) in xs.iter().zip(&table) {
        let bound = k / w - k;
        for (loc, b) in [(x, bp), (-x, bm)] {
            let m = b - bound;
            if m < worst.margin {
                worst = WorstCase { location: json!(loc), margin: m };
            }
        }
    }
    let mut rec = VerificationRecord::new(
        "global-bound",
        json!({ "x_max": x_max, "step": step, "K": k, "fixed_point_iterations": iterations }),
        GLOBAL_BOUND_TOL,
        worst,
        2 * xs.len(),
        timer,
    );
    if !(k > 0.0) {
        rec.pass = false;
        rec.notes.push(format!("K = {k} is not positive"));
    }
    rec.notes.push("K is derived from the samples, not a published constant".into());
    Ok((k, rec))
}

/// `∫_{−3ᵏ}^0 b_∞ ≥ 0` and `∫_0^{3ᵏ} b_∞ ≤ 0` for `k ≤ k_max`.
pub fn verify_limit_averages(k_max: u32, tol: f64) -> Result<VerificationRecord> {
    let field = LimitField::new(tol)?;
    let gap = field.certified_gap()?;
    verify_limit_averages_for(&field, k_max, tol, gap)
}

/// Same families for an arbitrary field whose pointwise error is at most
/// `eval_tol`; the allowed slack at scale `3ᵏ` is `tol + eval_tol·3ᵏ`.
pub fn verify_limit_averages_for(
    field: &dyn Field,
    k_max: u32,
    tol: f64,
    eval_tol: f64,
) -> Result<VerificationRecord> {
    if k_max > LIMIT_K_MAX {
        return Err(Error::Range(format!("k_max must be at most {LIMIT_K_MAX}, got {k_max}")));
    }
    if !(tol > 0.0) || !(eval_tol >= 0.0) {
        return Err(Error::invalid("tolerances must be positive"));
    }
    let timer = Timer::start();
    let mut worst = WorstCase { location: json!(null), margin: f64::INFINITY };
    let mut checked = 0;
    let mut minus = Vec::new();
    let mut plus = Vec::new();
    for k in 0..=k_max {
        let r = 3f64.powi(k as i32);
        let slack = tol + eval_tol * r;
        let left = integral(field, -r, 0.0, tol);
        let right = integral(field, 0.0, r, tol);
        minus.push(left);
        plus.push(right);
        // margins normalized by the allowed slack so both families share one tolerance
        for (family, m) in [("left", left), ("right", -right)] {
            let scaled = m / slack;
            checked += 1;
            if scaled < worst.margin {
                let value = if family == "left" { left } else { right };
                worst = WorstCase { location: json!({ "k": k, "family": family, "integral": value }), margin: scaled };
            }
        }
    }
    let mut rec = VerificationRecord::new(
        "limit-averages",
        json!({ "k_max": k_max, "tol": tol, "eval_tol": eval_tol, "field": field.label() }),
        1.0,
        worst,
        checked,
        timer,
    );
    rec.notes.push(format!("left integrals: {minus:?}"));
    rec.notes.push(format!("right integrals: {plus:?}"));
    rec.notes.push("margin is in units of the allowed slack tol + eval_tol*3^k".into());
    Ok(rec)
}
