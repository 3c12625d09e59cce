use rayon::prelude::*;
use serde::Serialize;

use super::integrals::{ln_density, Normalized, LN_OVERFLOW, QUAD_REL_TOL};
use crate::error::Error;
use crate::field::{integrate, Field, PositiveSolution};
use crate::operator::{Form, Operator1D};
use crate::quadrature::adaptive_simpson_rel;
use crate::spectral::Grid;
use crate::Result;

/// Default bound on `φ(±3ᵏ)` for the liminf certificate.
pub const LIMINF_BOUND: f64 = 1.0 + 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct LiminfCertificate {
    /// Largest `k` sampled; samples are `φ(±3ʲ)` for `j = 0..=k`.
    pub k: u32,
    pub phi_plus: Vec<f64>,
    pub phi_minus: Vec<f64>,
    pub bound: f64,
    pub min_plus: f64,
    pub min_minus: f64,
    pub max_plus: f64,
    pub max_minus: f64,
    pub holds: bool,
}

/// Certifies a finite liminf of `φ` at both infinities from the samples
/// `φ(±3ᵏ)`. Every sample in each direction must stay below `bound`; a
/// single small sample would say nothing about the tail.
pub fn liminf_certificate(phi_plus: &[f64], phi_minus: &[f64], bound: f64) -> Result<LiminfCertificate> {
    if phi_plus.is_empty() || phi_plus.len() != phi_minus.len() {
        return Err(Error::invalid("need the same nonzero number of samples in both directions"));
    }
    if phi_plus.iter().chain(phi_minus).any(|&v| !(v > 0.0)) {
        return Err(Error::invalid("liminf samples must be positive"));
    }
    let min = |s: &[f64]| s.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = |s: &[f64]| s.iter().cloned().fold(0.0, f64::max);
    let (max_plus, max_minus) = (max(phi_plus), max(phi_minus));
    Ok(LiminfCertificate {
        k: phi_plus.len() as u32 - 1,
        phi_plus: phi_plus.to_vec(),
        phi_minus: phi_minus.to_vec(),
        bound,
        min_plus: min(phi_plus),
        min_minus: min(phi_minus),
        max_plus,
        max_minus,
        holds: max_plus <= bound && max_minus <= bound,
    })
}

/// Samples `φ(±3ᵏ)/φ(0)` for `k = 0..=k_max` and certifies them.
pub fn liminf_for(phi: &dyn PositiveSolution, k_max: u32, bound: f64) -> Result<LiminfCertificate> {
    let phi = Normalized::new(phi)?;
    let xs: Vec<f64> = (0..=k_max).map(|k| 3f64.powi(k as i32)).collect();
    let plus: Vec<f64> = xs.iter().map(|&x| phi.value(x)).collect();
    let minus: Vec<f64> = xs.iter().map(|&x| phi.value(-x)).collect();
    liminf_certificate(&plus, &minus, bound)
}

/// `ψ = φ·(1 + ∫₀ˣ w/(Aφ²))` on `[−R, R]`, the second solution with
/// `ψ(0) = φ(0) = 1` and `(ψ − φ)′(0) = 1/A(0)`.
pub struct SecondSolution<'a> {
    phi: Normalized<'a>,
    ln_density: Box<dyn Fn(f64) -> f64 + Send + Sync + 'a>,
    radius: i64,
    /// `∫₀ᵏ` at integers `k = −R..=R`.
    nodes: Vec<f64>,
}

impl<'a> SecondSolution<'a> {
    pub fn new(op: &'a Operator1D, phi: &'a dyn PositiveSolution, radius: u32) -> Result<Self> {
        if op.form() != Form::SelfAdjoint {
            return Err(Error::UnsupportedOperator(format!("{}: expected self-adjoint form", op.name())));
        }
        let phi = Normalized::new(phi)?;
        let r = radius as i64;
        let ln_f = ln_density(op, phi);
        let pieces: Vec<f64> = (-r..r)
            .into_par_iter()
            .map(|k| {
                let (a, b) = (k as f64, k as f64 + 1.0);
                adaptive_simpson_rel(|x| ln_f(x).exp(), a, b, QUAD_REL_TOL)
            })
            .collect();
        let mut nodes = vec![0.0; (2 * r + 1) as usize];
        for k in 1..=r as usize {
            nodes[r as usize + k] = nodes[r as usize + k - 1] + pieces[r as usize + k - 1];
            nodes[r as usize - k] = nodes[r as usize - k + 1] - pieces[r as usize - k];
        }
        if nodes.iter().any(|v| !v.is_finite()) || ln_f(r as f64) > LN_OVERFLOW || ln_f(-(r as f64)) > LN_OVERFLOW {
            return Err(Error::Range(format!("1/phi^2 overflows on [-{r}, {r}]")));
        }
        Ok(SecondSolution { phi, ln_density: ln_f, radius: r, nodes })
    }

    /// `ψ/φ − 1 = ∫₀ˣ w/(Aφ²)`.
    pub fn integral(&self, x: f64) -> f64 {
        let r = self.radius as f64;
        let x = x.clamp(-r, r);
        let k = x.trunc();
        let base = self.nodes[(k as i64 + self.radius) as usize];
        base + adaptive_simpson_rel(|t| (self.ln_density)(t).exp(), k, x, QUAD_REL_TOL)
    }

    pub fn ratio(&self, x: f64) -> f64 {
        1.0 + self.integral(x)
    }

    pub fn value(&self, x: f64) -> f64 {
        self.phi.value(x) * self.ratio(x)
    }

    /// `ψ′ = φ′·ψ/φ + φ·w/(Aφ²)`.
    pub fn derivative(&self, x: f64) -> f64 {
        self.phi.derivative(x) * self.ratio(x) + self.phi.value(x) * (self.ln_density)(x).exp()
    }

    pub fn phi(&self) -> &dyn PositiveSolution {
        &self.phi
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RatioDivergence {
    /// `(ψ/φ)(x_{n−1}) − (ψ/φ)(x_n)` at `x_n = −3ⁿ`, `n = 1..=n_max`.
    pub decrements: Vec<f64>,
    pub floor: f64,
    pub monotone: bool,
    pub unbounded: bool,
}

type Eval<'a> = &'a (dyn Fn(f64) -> f64 + Sync);

/// Checks that `ψ/φ` increases strictly on `[−3^{n_max}, 0]` (sampled at
/// `step`) and that it drops by a uniform positive amount between
/// consecutive points `−3ⁿ`, so `(ψ/φ)(−3ⁿ) → −∞`.
pub fn ratio_divergence_check(
    phi: Eval,
    dphi: Eval,
    psi: Eval,
    dpsi: Eval,
    n_max: u32,
    step: f64,
) -> Result<RatioDivergence> {
    if n_max == 0 || !(step > 0.0) {
        return Err(Error::invalid("need n_max >= 1 and a positive step"));
    }
    if (phi(0.0) - 1.0).abs() > 1e-9 || (psi(0.0) - 1.0).abs() > 1e-9 {
        return Err(Error::invalid("phi and psi must be normalized to 1 at x = 0"));
    }
    let gap = dpsi(0.0) - dphi(0.0);
    if gap.abs() < super::wronskian::DEGENERATE_WRONSKIAN {
        return Err(Error::DegeneratePair(gap));
    }
    if gap < 0.0 {
        return Err(Error::invalid("(psi' - phi')(0) must be positive"));
    }
    let ratio = |x: f64| psi(x) / phi(x);
    let left = -3f64.powi(n_max as i32);
    let n = (-left / step).ceil() as usize;
    let samples: Vec<f64> = (0..=n).into_par_iter().map(|i| ratio((left + i as f64 * step).min(0.0))).collect();
    let monotone = samples.windows(2).all(|w| w[1] > w[0]);
    let decrements: Vec<f64> = (1..=n_max)
        .map(|k| ratio(-3f64.powi(k as i32 - 1)) - ratio(-3f64.powi(k as i32)))
        .collect();
    let floor = decrements.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(RatioDivergence { unbounded: monotone && floor > 0.0, decrements, floor, monotone })
}

#[derive(Debug, Clone, Serialize)]
pub struct SubsolutionCertificate {
    pub lambda: f64,
    /// `γ(x) = ε·tanh(x)`.
    pub epsilon: f64,
    pub sup_b: f64,
    pub grid: (f64, f64),
    pub step: f64,
    /// `min (γ² − 2bγ − γ′ + λ)` over the grid.
    pub min_slack: f64,
    pub min_slack_at: f64,
    /// `ψ = exp ∫₀ˣ (b − γ)` at the left and right grid ends; `ψ(0) = 1`.
    pub psi_boundary_values: [f64; 2],
    pub ln_psi_boundary: [f64; 2],
    pub pass: bool,
    pub violation: Option<f64>,
}

fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// Builds `γ = ε·tanh(x)` with `ε = λ/(2 sup|b| + 2)` and checks the
/// pointwise slack of `−ℒψ ≤ λψ` for `ψ = exp ∫(b − γ)` on `grid`, plus decay
/// of `ψ` at both grid ends.
pub fn subsolution_certificate(b: &dyn Field, lambda: f64, grid: &Grid) -> Result<SubsolutionCertificate> {
    if !(lambda > 0.0) {
        return Err(Error::invalid(format!("lambda must be positive, got {lambda}")));
    }
    let (lo, hi) = grid.interval();
    let xs: Vec<f64> = (0..grid.n_points()).map(|i| grid.node(i)).collect();
    let bs: Vec<f64> = xs.par_iter().map(|&x| b.value(x)).collect();
    if bs.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("b is not finite on the grid"));
    }
    let sup_b = bs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let eps = lambda / (2.0 * sup_b + 2.0);
    let slack: Vec<f64> = xs
        .par_iter()
        .zip(&bs)
        .map(|(&x, &bx)| {
            let g = eps * x.tanh();
            let dg = eps / x.cosh().powi(2);
            g * g - 2.0 * bx * g - dg + lambda
        })
        .collect();
    let (mut min_slack, mut at) = (f64::INFINITY, lo);
    for (s, &x) in slack.iter().zip(&xs) {
        if *s < min_slack {
            min_slack = *s;
            at = x;
        }
    }
    let ln_psi = |x: f64| integrate(b, 0.0, x) - eps * ln_cosh(x);
    let ln_psi_boundary = [ln_psi(lo), ln_psi(hi)];
    let decays = ln_psi_boundary.iter().all(|&l| l < 0.0);
    Ok(SubsolutionCertificate {
        lambda,
        epsilon: eps,
        sup_b,
        grid: (lo, hi),
        step: grid.spacing(),
        min_slack,
        min_slack_at: at,
        psi_boundary_values: ln_psi_boundary.map(f64::exp),
        ln_psi_boundary,
        pass: min_slack >= 0.0 && decays,
        violation: (min_slack < 0.0).then_some(at),
    })
}
