use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{ensure_finite, Error};
use crate::field::Field;
use crate::Result;

/// Largest translation exponent supported by the exact cell arithmetic.
pub const MAX_LEVEL: u32 = 40;

const fn pow3_table() -> [i128; 42] {
    let mut t = [1i128; 42];
    let mut i = 1;
    while i < 42 {
        t[i] = t[i - 1] * 3;
        i += 1;
    }
    t
}

static POW3: [i128; 42] = pow3_table();

pub fn pow3(n: u32) -> Result<i128> {
    (n <= MAX_LEVEL)
        .then(|| POW3[n as usize])
        .ok_or_else(|| Error::Range(format!("3^{n} exceeds the supported level {MAX_LEVEL}")))
}

/// Largest `n` with `3ⁿ ≤ m`, for `m ≥ 1`.
fn level_floor(m: i128) -> u32 {
    debug_assert!(m >= 1);
    let mut n = 0;
    while (n + 1) < POW3.len() && POW3[n + 1] <= m {
        n += 1;
    }
    n as u32
}

pub(crate) fn level_step(n: u32) -> f64 {
    let j = (n + 1) as f64;
    1.0 / (j * j)
}

/// `Σ_{j>n} 1/j²`.
pub fn zeta2_tail(n: u32) -> f64 {
    static TAILS: OnceLock<Vec<f64>> = OnceLock::new();
    let tails = TAILS.get_or_init(|| {
        let mut partial = 0.0;
        let mut out = Vec::with_capacity(64);
        out.push(PI * PI / 6.0);
        for j in 1..64u32 {
            partial += 1.0 / (j as f64 * j as f64);
            out.push(PI * PI / 6.0 - partial);
        }
        out
    });
    match tails.get(n as usize) {
        Some(t) => *t,
        None => {
            // Euler–Maclaurin beyond the table.
            let n = n as f64;
            1.0 / n - 0.5 / (n * n) + 1.0 / (6.0 * n * n * n)
        }
    }
}

/// A real position split as `cell + frac` with `frac ∈ [0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub cell: i128,
    pub frac: f64,
}

impl Point {
    pub fn new(x: f64) -> Result<Point> {
        ensure_finite(x, "x")?;
        let cell = x.floor();
        Ok(Point { cell: cell as i128, frac: x - cell })
    }

    pub fn shifted(self, by: i128) -> Point {
        Point { cell: self.cell + by, frac: self.frac }
    }

    pub fn is_integer(&self) -> bool {
        self.frac == 0.0
    }

    pub fn to_f64(self) -> f64 {
        self.cell as f64 + self.frac
    }
}

/// σ at an exact position, unrolling the recursion
/// `σ(x) = σ(x ∓ 2·3ⁿ) ± 1/(n+1)²` down to the base intervals
/// `[-1, 0)` and `[0, 1]`.
pub(crate) fn sigma_at(p: Point) -> f64 {
    let on_integer = p.is_integer();
    let mut k = p.cell;
    let mut acc = 0.0;
    loop {
        if k == 0 || (on_integer && k == 1) {
            return acc + 1.0;
        }
        if k == -1 {
            return acc - 1.0;
        }
        if k > 0 {
            // x ∈ (3ⁿ, 3ⁿ⁺¹]
            let n = if on_integer { level_floor(k - 1) } else { level_floor(k) };
            k -= 2 * POW3[n as usize];
            acc += level_step(n);
        } else {
            // x ∈ [-3ⁿ⁺¹, -3ⁿ)
            let n = level_floor(-k - 1);
            k += 2 * POW3[n as usize];
            acc -= level_step(n);
        }
    }
}

/// Value of σ on the open cell `(k, k+1)`.
pub fn sigma_cell(k: i128) -> f64 {
    sigma_at(Point { cell: k, frac: 0.5 })
}

/// `Σ_{j=0}^{|k|-1} σ(j + ½)`, in `O(log |k|)` through
/// `P(k) = (k - 3ⁿ)/(n+1)² + P(|k - 2·3ⁿ|)` for `3ⁿ < k ≤ 3ⁿ⁺¹`.
pub fn cell_prefix_sum(k: i128) -> f64 {
    let mut k = k.abs();
    let mut acc = 0.0;
    loop {
        if k <= 1 {
            return acc + k as f64;
        }
        let n = level_floor(k - 1);
        let base = POW3[n as usize];
        acc += (k - base) as f64 * level_step(n);
        k = (k - 2 * base).abs();
    }
}

pub fn sigma_eval(x: f64) -> Result<f64> {
    Ok(sigma_at(Point::new(x)?))
}

/// Stateless evaluator for σ.
#[derive(Debug, Clone, Copy, Default)]
pub struct SigmaField;

impl SigmaField {
    /// `sup σ = 1 + π²/6`, not attained.
    pub const SUP: f64 = 1.0 + PI * PI / 6.0;
}

impl Field for SigmaField {
    fn value(&self, x: f64) -> f64 {
        sigma_eval(x).unwrap_or(f64::NAN)
    }
    fn label(&self) -> &str {
        "sigma"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_cases() {
        assert_eq!(sigma_eval(0.5).unwrap(), 1.0);
        assert_eq!(sigma_eval(-0.5).unwrap(), -1.0);
        assert_eq!(sigma_eval(0.0).unwrap(), 1.0);
        assert_eq!(sigma_eval(1.0).unwrap(), 1.0);
        assert_eq!(sigma_eval(-1.0).unwrap(), -1.0);
    }

    #[test]
    fn hand_unrolled_values() {
        assert_eq!(sigma_eval(2.0).unwrap(), 2.0);
        assert_eq!(sigma_eval(4.0).unwrap(), 0.25);
        assert_eq!(sigma_eval(1.5).unwrap(), 0.0);
        assert_eq!(sigma_eval(3.25).unwrap(), -1.75);
        assert_eq!(sigma_eval(3.0).unwrap(), 2.0);
        assert_eq!(sigma_eval(-3.0).unwrap(), -2.0);
    }

    #[test]
    fn non_finite_rejected() {
        assert!(matches!(sigma_eval(f64::NAN), Err(Error::InvalidArgument(_))));
        assert!(sigma_eval(f64::INFINITY).is_err());
    }

    #[test]
    fn odd_off_the_lattice() {
        for k in -800i128..800 {
            assert_eq!(sigma_cell(k), -sigma_cell(-k - 1), "cell {k}");
        }
    }

    #[test]
    fn prefix_sum_matches_direct_sum() {
        let mut acc = 0.0;
        for k in 0..3000i128 {
            assert!((cell_prefix_sum(k) - acc).abs() < 1e-9, "k={k}");
            acc += sigma_cell(k);
        }
    }

    #[test]
    fn recursion_rule_holds_on_each_level() {
        for n in 0..7u32 {
            let p = POW3[n as usize];
            for k in p..3 * p {
                let lhs = sigma_cell(k);
                let rhs = sigma_cell(k - 2 * p) + level_step(n);
                assert!((lhs - rhs).abs() < 1e-14, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn stays_below_supremum() {
        let max = (-3i128.pow(9)..3i128.pow(9)).map(sigma_cell).fold(f64::MIN, f64::max);
        assert!(max < SigmaField::SUP);
        assert!(max > SigmaField::SUP - zeta2_tail(9) - 1e-12);
    }

    #[test]
    fn tail_sums() {
        assert!((zeta2_tail(0) - PI * PI / 6.0).abs() < 1e-15);
        assert!((zeta2_tail(4) - 0.2213229557371153).abs() < 1e-12);
        assert!(zeta2_tail(80) < 1.0 / 80.0);
        assert!(pow3(40).is_ok());
        assert!(matches!(pow3(42), Err(Error::Range(_))));
    }
}
