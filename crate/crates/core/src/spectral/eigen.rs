use rayon::prelude::*;
use serde::Serialize;

use super::grid::Grid;
use super::tridiag::{residual_sup, shifted_solve, smallest_eigenvalue_bracket};
use crate::error::Error;
use crate::operator::Operator1D;
use crate::Result;

pub const BISECTION_TOL: f64 = 1e-10;
pub const INVERSE_ITERATION_MAX: usize = 50;
pub const INVERSE_ITERATION_TOL: f64 = 1e-10;
/// Bound on `‖(T − λ)v‖∞ / ‖T‖∞` for an accepted eigenpair.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Slack allowed when checking that sweep eigenvalues decrease.
pub const MONOTONE_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct EigenResult {
    pub lambda: f64,
    pub h: f64,
    /// Interior nodes.
    pub nodes: Vec<f64>,
    /// Eigenfunction on the interior nodes, normalized to `max = 1`.
    pub eigenfunction: Vec<f64>,
    /// Normalized backward error `‖(T − λ)v‖∞ / ‖T‖∞`.
    pub residual: f64,
    pub positive: bool,
    pub iterations: usize,
}

/// Default spacing: 0.005 up to `R = 81`, 0.02 beyond.
pub fn default_spacing(radius: f64) -> f64 {
    if radius <= 81.0 {
        0.005
    } else {
        0.02
    }
}

pub(crate) fn assemble(op: &Operator1D, grid: &Grid) -> (Vec<f64>, Vec<f64>, f64) {
    let h = grid.spacing();
    let inv_h2 = 1.0 / (h * h);
    let nodes: Vec<f64> = grid.interior().collect();
    let diag: Vec<f64> = nodes.par_iter().map(|&x| 2.0 * inv_h2 - op.potential(x)).collect();
    (nodes, diag, -inv_h2)
}

/// Smallest eigenvalue of the central-difference discretization of `−ℒ`
/// with Dirichlet conditions at both ends of `grid`.
///
/// The eigenvalue comes from Sturm-sequence bisection; the eigenvector from
/// inverse iteration shifted at the lower end of the final bracket, where
/// `T − σI` is still positive definite.
pub fn dirichlet_principal_eigenvalue(op: &Operator1D, grid: &Grid) -> Result<EigenResult> {
    op.require_unit_self_adjoint()?;
    let (nodes, diag, off) = assemble(op, grid);
    if let Some(i) = diag.iter().position(|d| !d.is_finite()) {
        return Err(Error::invalid(format!("potential is not finite at x = {}", nodes[i])));
    }
    let (lo, hi) = smallest_eigenvalue_bracket(&diag, off, BISECTION_TOL);
    let lambda = 0.5 * (lo + hi);

    let mut v = vec![1.0; diag.len()];
    let mut log = Vec::new();
    let mut converged = false;
    for _ in 0..INVERSE_ITERATION_MAX {
        let mut y = shifted_solve(&diag, off, lo, &v);
        let pivot = y.iter().cloned().fold(0.0f64, |m, t| if t.abs() > m.abs() { t } else { m });
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::Numerical { message: "inverse iteration collapsed".into(), log });
        }
        y.iter_mut().for_each(|t| *t /= pivot);
        let change = y.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        log.push(change);
        v = y;
        if change <= INVERSE_ITERATION_TOL {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical {
            message: format!("inverse iteration did not converge in {INVERSE_ITERATION_MAX} steps"),
            log,
        });
    }

    let norm = diag.iter().map(|d| d.abs()).fold(0.0, f64::max) + 2.0 * off.abs();
    let residual = residual_sup(&diag, off, lambda, &v) / norm;
    if residual > RESIDUAL_TOL {
        return Err(Error::Numerical { message: format!("eigenpair residual {residual:e} too large"), log });
    }
    Ok(EigenResult {
        lambda,
        h: grid.spacing(),
        positive: v.iter().all(|&t| t > 0.0),
        nodes,
        eigenfunction: v,
        residual,
        iterations: log.len(),
    })
}

/// Richardson extrapolation `(4λ(h/2) − λ(h))/3` of the principal
/// eigenvalue on `[−R, R]`, removing the leading `O(h²)` bias.
pub fn extrapolated_eigenvalue(op: &Operator1D, radius: f64, h: f64) -> Result<f64> {
    let (coarse, fine) = rayon::join(
        || Grid::with_spacing(-radius, radius, h).and_then(|g| dirichlet_principal_eigenvalue(op, &g)),
        || Grid::with_spacing(-radius, radius, 0.5 * h).and_then(|g| dirichlet_principal_eigenvalue(op, &g)),
    );
    Ok((4.0 * fine?.lambda - coarse?.lambda) / 3.0)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepPoint {
    #[serde(rename = "R")]
    pub radius: f64,
    pub lambda: f64,
    pub residual: f64,
    pub h: f64,
    pub positive: bool,
}

/// `λ₁([−R, R])` for each radius; the radii run concurrently and are merged
/// back in radius order.
pub fn eigenvalue_sweep(op: &Operator1D, radii: &[f64], h: f64) -> Result<Vec<SweepPoint>> {
    if !(h > 0.0) {
        return Err(Error::invalid(format!("spacing must be positive, got {h}")));
    }
    if radii.is_empty() || radii.windows(2).any(|w| !(w[1] > w[0])) || !(radii[0] > 0.0) {
        return Err(Error::invalid("radii must be positive and strictly increasing"));
    }
    let points: Vec<SweepPoint> = radii
        .par_iter()
        .map(|&r| {
            let grid = Grid::with_spacing(-r, r, h)?;
            let e = dirichlet_principal_eigenvalue(op, &grid)?;
            Ok(SweepPoint { radius: r, lambda: e.lambda, residual: e.residual, h: e.h, positive: e.positive })
        })
        .collect::<Result<_>>()?;
    for w in points.windows(2) {
        if w[1].lambda > w[0].lambda + MONOTONE_SLACK {
            return Err(Error::Discretization(format!(
                "λ₁ increased from {:e} (R = {}) to {:e} (R = {}); refine h below {h}",
                w[0].lambda, w[0].radius, w[1].lambda, w[1].radius
            )));
        }
    }
    Ok(points)
}
