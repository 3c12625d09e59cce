#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let fm = f(m);
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, fa, m, fm, left, 0.5 * tol, depth - 1) + simpson_step(f, m, fm, b, fb, right, 0.5 * tol, depth - 1)
}

/// Plain recursive adaptive Simpson, kept independent of the library's.
pub fn oracle_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, fa, b, fb, whole, tol, 50)
}

/// `∫₀ˣ f` split at the integers.
pub fn oracle_integral<F: Fn(f64) -> f64>(f: &F, x: f64, tol_per_unit: f64) -> f64 {
    let (lo, hi, sign) = if x >= 0.0 { (0.0, x, 1.0) } else { (x, 0.0, -1.0) };
    let mut total = 0.0;
    let mut a = lo;
    while a < hi {
        let b = (a.floor() + 1.0).min(hi);
        total += oracle_simpson(f, a, b, tol_per_unit);
        a = b;
    }
    sign * total
}

/// `c(x) = a₀ + Σ_{j≤d} (a_j cos(jx) + b_j sin(jx))` with coefficients in `[−1, 1]`.
pub struct TrigPoly {
    pub a0: f64,
    pub terms: Vec<(f64, f64)>,
}

impl TrigPoly {
    pub fn random(rng: &mut impl Rng, max_degree: usize) -> Self {
        let d = rng.gen_range(0..=max_degree);
        TrigPoly {
            a0: rng.gen_range(-1.0..=1.0),
            terms: (0..d).map(|_| (rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))).collect(),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.terms.iter().enumerate().fold(self.a0, |s, (j, &(a, b))| {
            let k = (j + 1) as f64;
            s + a * (k * x).cos() + b * (k * x).sin()
        })
    }
}
