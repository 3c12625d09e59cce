//! Critical / subcritical / supercritical classification in one dimension.
//!
//! The main test integrates the second-solution density `1/(Aφ²)` outward in
//! both directions: a positive solution is unique up to scaling exactly when
//! both integrals diverge.

mod certificates;
mod integrals;
mod wronskian;

pub use certificates::{
    liminf_certificate, liminf_for, ratio_divergence_check, subsolution_certificate, LiminfCertificate,
    RatioDivergence, SecondSolution, SubsolutionCertificate, LIMINF_BOUND,
};
pub use integrals::{second_solution_integrals, DirectionalIntegral, Normalized, LN_OVERFLOW, QUAD_REL_TOL};
pub use wronskian::{wronskian, wronskian_constancy, WronskianProfile, DEGENERATE_WRONSKIAN};

use serde::Serialize;

use crate::error::Error;
use crate::field::PositiveSolution;
use crate::operator::{Form, Operator1D};
use crate::Result;

pub const DEFAULT_THRESHOLD: f64 = 1e6;
pub const CONVERGENCE_TOL: f64 = 1e-9;
pub const RESIDUAL_TOL: f64 = 1e-6;
/// `λ₁` estimates above `−SUPERCRITICAL_SLACK` are read as discretization
/// noise around a nonnegative value.
pub const SUPERCRITICAL_SLACK: f64 = 1e-6;
/// Trailing windows whose mean density must keep pace with the running mean
/// for a linear-growth divergence verdict.
pub const GROWTH_WINDOWS: usize = 3;
const GROWTH_RATIO: f64 = 0.5;
const RESIDUAL_SPAN: f64 = 10.0;
const RESIDUAL_POINTS: usize = 401;
const DERIVATIVE_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Supercritical,
    Critical,
    Subcritical,
    Inconclusive,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Classification::Supercritical => "supercritical",
            Classification::Critical => "critical",
            Classification::Subcritical => "subcritical",
            Classification::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DivergenceEvidence {
    Threshold,
    Overflow,
    /// The density does not decay on average; projected past the threshold.
    LinearGrowth,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum DirectionVerdict {
    Diverges {
        #[serde(rename = "R")]
        radius: f64,
        evidence: DivergenceEvidence,
        /// Radius at which a linear extrapolation reaches the threshold.
        projected_radius: Option<f64>,
    },
    Converges {
        #[serde(rename = "R")]
        radius: f64,
        relative_increment: f64,
    },
    Undetermined,
}

impl DirectionVerdict {
    pub fn diverges(&self) -> bool {
        matches!(self, DirectionVerdict::Diverges { .. })
    }
    pub fn converges(&self) -> bool {
        matches!(self, DirectionVerdict::Converges { .. })
    }
}

#[derive(Debug, Clone)]
pub struct ClassifyOptions {
    pub threshold: f64,
    pub radii: Vec<f64>,
    pub convergence_tol: f64,
    /// From a spectral sweep; the only route to a supercritical verdict.
    pub lambda1_estimate: Option<f64>,
    /// Sample `φ(±3ᵏ)` for `k ≤ liminf_k` and upgrade on a liminf certificate.
    pub liminf_k: Option<u32>,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            threshold: DEFAULT_THRESHOLD,
            radii: (0..=9).map(|k| 3f64.powi(k)).collect(),
            convergence_tol: CONVERGENCE_TOL,
            lambda1_estimate: None,
            liminf_k: Some(6),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriticalityReport {
    pub operator: String,
    pub classification: Classification,
    pub lambda1_estimate: Option<f64>,
    pub threshold: f64,
    /// Largest `|ℒφ/φ|` on the spot-check grid.
    pub residual: f64,
    pub integrals: Vec<DirectionalIntegral>,
    pub forward: DirectionVerdict,
    pub backward: DirectionVerdict,
    pub liminf: Option<LiminfCertificate>,
    pub notes: Vec<String>,
}

/// `max |ℒφ/φ|` over `RESIDUAL_POINTS` points of `[−10, 10]`, with `φ″/φ`
/// from a central difference of `φ′/φ`. Returns the value and its location.
pub fn solution_residual(op: &Operator1D, phi: &dyn PositiveSolution) -> (f64, f64) {
    let mut worst = (0.0, 0.0);
    for i in 0..RESIDUAL_POINTS {
        // offset keeps the sample points off the integer lattice
        let x = -RESIDUAL_SPAN + 2.0 * RESIDUAL_SPAN * i as f64 / (RESIDUAL_POINTS - 1) as f64 + 0.0137;
        let q = phi.log_derivative(x);
        let dq = (phi.log_derivative(x + DERIVATIVE_STEP) - phi.log_derivative(x - DERIVATIVE_STEP))
            / (2.0 * DERIVATIVE_STEP);
        let r = op.apply(x, 1.0, q, dq + q * q).abs();
        if !(r <= worst.0) {
            worst = (r, x);
        }
    }
    worst
}

fn verdict(integrals: &[Option<f64>], radii: &[f64], threshold: f64, tol: f64) -> DirectionVerdict {
    for (i, (value, &r)) in integrals.iter().zip(radii).enumerate() {
        let Some(v) = *value else {
            return DirectionVerdict::Diverges { radius: r, evidence: DivergenceEvidence::Overflow, projected_radius: None };
        };
        if v > threshold {
            return DirectionVerdict::Diverges { radius: r, evidence: DivergenceEvidence::Threshold, projected_radius: None };
        }
        if i > 0 {
            let prev = integrals[i - 1].unwrap_or(0.0);
            let inc = (v - prev) / v;
            if inc < tol {
                return DirectionVerdict::Converges { radius: r, relative_increment: inc };
            }
        }
    }
    // mean density on each trailing window against the running mean
    let n = radii.len();
    if n > GROWTH_WINDOWS {
        let vals: Vec<f64> = integrals.iter().map(|v| v.unwrap_or(0.0)).collect();
        let keeps_pace = (n - GROWTH_WINDOWS..n).all(|i| {
            let window = (vals[i] - vals[i - 1]) / (radii[i] - radii[i - 1]);
            window >= GROWTH_RATIO * vals[i] / radii[i]
        });
        if keeps_pace {
            let rate = (vals[n - 1] - vals[n - 2]) / (radii[n - 1] - radii[n - 2]);
            return DirectionVerdict::Diverges {
                radius: radii[n - 1],
                evidence: DivergenceEvidence::LinearGrowth,
                projected_radius: Some(radii[n - 1] + (threshold - vals[n - 1]) / rate),
            };
        }
    }
    DirectionVerdict::Undetermined
}

/// Classifies `op` given a positive solution `φ` of `ℒφ = 0`.
///
/// `φ` is normalized to `φ(0) = 1` first, so the verdict does not depend on
/// its scale.
pub fn classify(op: &Operator1D, phi: &dyn PositiveSolution, opts: &ClassifyOptions) -> Result<CriticalityReport> {
    if !(opts.threshold > 0.0) || !(opts.convergence_tol > 0.0) {
        return Err(Error::invalid("threshold and convergence tolerance must be positive"));
    }
    let (residual, at) = solution_residual(op, phi);
    if !(residual <= RESIDUAL_TOL) {
        return Err(Error::invalid(format!(
            "phi is not a solution of {}: |L phi / phi| = {residual:e} at x = {at}",
            op.name()
        )));
    }
    let phi = Normalized::new(phi)?;
    let ln_f = integrals::ln_density(op, phi);
    let integrals = integrals::both_directions(ln_f.as_ref(), &opts.radii)?;
    let fwd: Vec<Option<f64>> = integrals.iter().map(|d| d.forward).collect();
    let bwd: Vec<Option<f64>> = integrals.iter().map(|d| d.backward).collect();
    let forward = verdict(&fwd, &opts.radii, opts.threshold, opts.convergence_tol);
    let backward = verdict(&bwd, &opts.radii, opts.threshold, opts.convergence_tol);
    let liminf = opts.liminf_k.map(|k| liminf_for(&phi, k, LIMINF_BOUND)).transpose()?;

    let mut notes = Vec::new();
    // the liminf criterion needs the symmetric form; a drift can keep φ bounded in a subcritical operator
    let self_adjoint = op.form() == Form::SelfAdjoint;
    if !self_adjoint && liminf.is_some() {
        notes.push("liminf certificate reported only: operator is in drift form".into());
    }
    let classification = match opts.lambda1_estimate {
        Some(l) if l < -SUPERCRITICAL_SLACK => {
            notes.push(format!("lambda1 estimate {l:e} is negative"));
            Classification::Supercritical
        }
        _ if self_adjoint && liminf.as_ref().is_some_and(|c| c.holds) => {
            notes.push("phi(+-3^k) bounded: liminf certificate holds".into());
            Classification::Critical
        }
        _ if forward.diverges() && backward.diverges() => {
            notes.push("second-solution integral diverges in both directions".into());
            Classification::Critical
        }
        _ if forward.converges() || backward.converges() => {
            notes.push("a convergent direction yields a second positive solution".into());
            Classification::Subcritical
        }
        _ => {
            notes.push("no direction resolved within the radius budget".into());
            Classification::Inconclusive
        }
    };
    for (side, v) in [("forward", &forward), ("backward", &backward)] {
        if let DirectionVerdict::Diverges { evidence: DivergenceEvidence::LinearGrowth, projected_radius, .. } = v {
            notes.push(format!(
                "{side} integral below threshold; linear growth projects it past {:e} at R = {:.4e}",
                opts.threshold,
                projected_radius.unwrap_or(f64::NAN)
            ));
        }
    }
    Ok(CriticalityReport {
        operator: op.name().to_string(),
        classification,
        lambda1_estimate: opts.lambda1_estimate,
        threshold: opts.threshold,
        residual,
        integrals,
        forward,
        backward,
        liminf,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Constant, FnSolution};
    use crate::spectral::Grid;
    use std::sync::Arc;

    fn laplacian() -> Operator1D {
        Operator1D::self_adjoint("lap", Arc::new(Constant(0.0)))
    }

    #[test]
    fn laplacian_is_critical() {
        let one = FnSolution::new(|_| 1.0, |_| 0.0);
        let opts = ClassifyOptions { liminf_k: None, ..Default::default() };
        let r = classify(&laplacian(), &one, &opts).unwrap();
        assert_eq!(r.classification, Classification::Critical);
        assert!(matches!(r.forward, DirectionVerdict::Diverges { evidence: DivergenceEvidence::LinearGrowth, .. }));
    }

    #[test]
    fn exponential_is_subcritical() {
        let op = Operator1D::self_adjoint("u''-u", Arc::new(Constant(-1.0)));
        let e = FnSolution::new(f64::exp, f64::exp);
        let r = classify(&op, &e, &ClassifyOptions::default()).unwrap();
        assert_eq!(r.classification, Classification::Subcritical);
        assert!(r.forward.converges());
        assert!(r.backward.diverges());
        assert!(!r.liminf.unwrap().holds);
    }

    #[test]
    fn non_solution_rejected() {
        let e = FnSolution::new(f64::exp, f64::exp);
        assert!(matches!(
            classify(&laplacian(), &e, &ClassifyOptions::default()),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn negative_lambda_is_supercritical() {
        let one = FnSolution::new(|_| 1.0, |_| 0.0);
        let opts = ClassifyOptions { lambda1_estimate: Some(-0.1), ..Default::default() };
        let r = classify(&laplacian(), &one, &opts).unwrap();
        assert_eq!(r.classification, Classification::Supercritical);
    }

    #[test]
    fn liminf_examples() {
        let one = FnSolution::new(|_| 1.0, |_| 0.0);
        assert!(liminf_for(&one, 6, LIMINF_BOUND).unwrap().holds);
        let e = FnSolution::new(f64::exp, f64::exp);
        assert!(!liminf_for(&e, 6, LIMINF_BOUND).unwrap().holds);
        assert!(liminf_certificate(&[1.0, -1.0], &[1.0, 1.0], 1.0).is_err());
    }

    #[test]
    fn linear_ratio_decrements() {
        let one = |_: f64| 1.0;
        let zero = |_: f64| 0.0;
        let psi = |x: f64| 1.0 + x;
        let r = ratio_divergence_check(&one, &zero, &psi, &one, 5, 0.5).unwrap();
        for (n, d) in (1..=5).zip(&r.decrements) {
            assert!((d - (3f64.powi(n) - 3f64.powi(n - 1))).abs() < 1e-12);
        }
        assert!(r.unbounded);
        assert!(matches!(ratio_divergence_check(&one, &zero, &one, &zero, 3, 0.5), Err(Error::DegeneratePair(_))));
    }

    #[test]
    fn flat_subsolution() {
        let g = Grid::with_spacing(-30.0, 30.0, 0.01).unwrap();
        let c = subsolution_certificate(&Constant(0.0), 0.1, &g).unwrap();
        assert!(c.pass, "{c:?}");
        assert!(c.min_slack > 0.0);
    }
}
