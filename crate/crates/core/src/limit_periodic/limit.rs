use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use super::drift::{unit_sin4_integral, SIN4_MEAN};
use super::sigma::{level_step, pow3, sigma_cell, zeta2_tail, Point, MAX_LEVEL};
use crate::error::{ensure_finite, Error};
use crate::field::Field;
use crate::Result;

/// Consecutive stationary estimates required before accepting a limit.
const WINDOW: usize = 3;

/// Cells `[-3⁹, 3⁹)` are tabulated for the closed-form antiderivative.
const TABLE_RADIUS: i128 = 19_683;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitSample {
    pub value: f64,
    pub derivative: f64,
    /// `lim σ(x + 3ⁿ)` on the cell containing `x`.
    pub sigma: f64,
    /// Translation exponents over which the estimate was stationary.
    pub levels: (u32, u32),
    /// Spread of the estimates inside the accepting window.
    pub cauchy_gap: f64,
}

#[derive(Debug, Clone, Copy)]
struct CellLimit {
    sigma: f64,
    levels: (u32, u32),
    gap: f64,
}

/// `lim_n σ(k + ½ + 3ⁿ)`.
///
/// The raw translates converge like `1/n`, far too slowly to certify small
/// tolerances by themselves. Each raw value is therefore corrected by the
/// telescoping tail `Σ_{j>n} 1/j²` that the recursion still has to add
/// (cells `k < 0`) or subtract (cells `k ≥ 0`, which also owe the current
/// level's `1/(n+1)²`). Once `3ⁿ` dominates `|k|` the corrected sequence is
/// stationary; that is detected over a window, never assumed.
fn cell_limit(k: i128, tol: f64) -> Result<CellLimit> {
    let reach = k.unsigned_abs() as i128 + 1;
    let start = (0..=MAX_LEVEL).find(|&n| pow3(n).is_ok_and(|p| p > reach)).ok_or_else(|| {
        Error::Range(format!("cell {k} is beyond the largest supported translation"))
    })?;
    let mut window: Vec<f64> = Vec::with_capacity(MAX_LEVEL as usize);
    for n in start..=MAX_LEVEL {
        let raw = sigma_cell(k + pow3(n)?);
        let estimate = if k >= 0 {
            raw - level_step(n) - zeta2_tail(n)
        } else {
            raw + zeta2_tail(n)
        };
        window.push(estimate);
        if window.len() >= WINDOW {
            let recent = &window[window.len() - WINDOW..];
            let hi = recent.iter().cloned().fold(f64::MIN, f64::max);
            let lo = recent.iter().cloned().fold(f64::MAX, f64::min);
            if hi - lo <= tol {
                return Ok(CellLimit {
                    sigma: estimate,
                    levels: (n + 1 - WINDOW as u32, n),
                    gap: hi - lo,
                });
            }
        }
    }
    Err(Error::Convergence(format!(
        "translates of b at cell {k} not Cauchy to {tol:e} for n ≤ {MAX_LEVEL}"
    )))
}

fn sample_from(p: Point, cell: CellLimit) -> LimitSample {
    if p.is_integer() {
        return LimitSample { value: 0.0, derivative: 0.0, sigma: cell.sigma, levels: cell.levels, cauchy_gap: cell.gap };
    }
    let (s, c) = (PI * p.frac).sin_cos();
    LimitSample {
        value: cell.sigma * s * s * s * s,
        derivative: cell.sigma * 4.0 * PI * s * s * s * c,
        sigma: cell.sigma,
        levels: cell.levels,
        cauchy_gap: cell.gap,
    }
}

/// `b_∞(x)` to within `tol`, where `b_∞ = lim b(· + 3ⁿ)`.
pub fn limit_field_eval(x: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    let p = Point::new(x)?;
    if p.is_integer() {
        return Ok(0.0);
    }
    Ok(sample_from(p, cell_limit(p.cell, tol)?).value)
}

struct CellTable {
    sigma: Vec<f64>,
    // prefix[i] = ∫₀^{i - R} of the cell-wise σ_∞, in units of SIN4_MEAN
    prefix: Vec<f64>,
    worst_gap: f64,
}

/// The limit field `b_∞` with a fixed evaluation tolerance.
///
/// Cell limits over `[-3⁹, 3⁹)` are tabulated on first use of
/// [`Field::integral`] (thread-safe, one-time) so the antiderivative costs
/// `O(1)` there.
pub struct LimitField {
    tol: f64,
    table: OnceLock<std::result::Result<CellTable, Error>>,
}

impl std::fmt::Debug for LimitField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LimitField").field("tol", &self.tol).finish()
    }
}

impl LimitField {
    pub fn new(tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
        }
        Ok(LimitField { tol, table: OnceLock::new() })
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    fn table(&self) -> Result<&CellTable> {
        self.table
            .get_or_init(|| {
                let cells: Vec<CellLimit> = (-TABLE_RADIUS..TABLE_RADIUS)
                    .into_par_iter()
                    .map(|k| cell_limit(k, self.tol))
                    .collect::<Result<_>>()?;
                let mut prefix = vec![0.0; cells.len() + 1];
                let r = TABLE_RADIUS as usize;
                for i in r..cells.len() {
                    prefix[i + 1] = prefix[i] + cells[i].sigma;
                }
                for i in (0..r).rev() {
                    prefix[i] = prefix[i + 1] - cells[i].sigma;
                }
                let worst_gap = cells.iter().map(|c| c.gap).fold(0.0, f64::max);
                Ok(CellTable { sigma: cells.iter().map(|c| c.sigma).collect(), prefix, worst_gap })
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    fn cell(&self, k: i128) -> Result<CellLimit> {
        if (-TABLE_RADIUS..TABLE_RADIUS).contains(&k) {
            if let Some(Ok(t)) = self.table.get() {
                let sigma = t.sigma[(k + TABLE_RADIUS) as usize];
                return Ok(CellLimit { sigma, levels: (0, 0), gap: t.worst_gap });
            }
        }
        cell_limit(k, self.tol)
    }

    pub fn eval(&self, x: f64) -> Result<LimitSample> {
        let p = Point::new(x)?;
        Ok(sample_from(p, cell_limit(p.cell, self.tol)?))
    }

    /// Like [`LimitField::eval`] but served from the cell table when it is
    /// already built; window diagnostics are then the table-wide ones.
    pub fn sample(&self, x: f64) -> Result<LimitSample> {
        let p = Point::new(x)?;
        Ok(sample_from(p, self.cell(p.cell)?))
    }

    /// Largest Cauchy gap over the tabulated cells.
    pub fn certified_gap(&self) -> Result<f64> {
        Ok(self.table()?.worst_gap)
    }

    /// `∫₀ˣ b_∞` from the cell limits and the exact `sin⁴` antiderivative.
    pub fn antiderivative(&self, x: f64) -> Result<f64> {
        ensure_finite(x, "x")?;
        let p = Point::new(x)?;
        let whole = if (-TABLE_RADIUS..=TABLE_RADIUS).contains(&p.cell) {
            self.table()?.prefix[(p.cell + TABLE_RADIUS) as usize]
        } else {
            let mut s = 0.0;
            if p.cell >= 0 {
                for k in 0..p.cell {
                    s += self.cell(k)?.sigma;
                }
            } else {
                for k in p.cell..0 {
                    s -= self.cell(k)?.sigma;
                }
            }
            s
        };
        let partial = if p.frac > 0.0 { self.cell(p.cell)?.sigma * unit_sin4_integral(p.frac) } else { 0.0 };
        Ok(SIN4_MEAN * whole + partial)
    }
}

impl Field for LimitField {
    fn value(&self, x: f64) -> f64 {
        match Point::new(x) {
            Ok(p) if p.is_integer() => 0.0,
            Ok(p) => self.cell(p.cell).map(|c| sample_from(p, c).value).unwrap_or(f64::NAN),
            Err(_) => f64::NAN,
        }
    }
    fn integral(&self, a: f64, b: f64) -> Option<f64> {
        Some(self.antiderivative(b).ok()? - self.antiderivative(a).ok()?)
    }
    fn label(&self) -> &str {
        "b-inf"
    }
}

/// `b_∞′`, the uniform limit of `b′(· + 3ⁿ)`.
pub struct LimitDerivative(pub Arc<LimitField>);

impl Field for LimitDerivative {
    fn value(&self, x: f64) -> f64 {
        match Point::new(x) {
            Ok(p) => self.0.cell(p.cell).map(|c| sample_from(p, c).derivative).unwrap_or(f64::NAN),
            Err(_) => f64::NAN,
        }
    }
    fn integral(&self, a: f64, b: f64) -> Option<f64> {
        Some(self.0.value(b) - self.0.value(a))
    }
    fn label(&self) -> &str {
        "b-inf-prime"
    }
}
