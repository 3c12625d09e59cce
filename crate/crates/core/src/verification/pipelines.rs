use std::sync::Arc;

use serde::Serialize;
use serde_json::json;

use super::{CheckParams, CheckRegistry, Timer, VerificationRecord, WorstCase};
use crate::criticality::{
    classify, liminf_for, second_solution_integrals, subsolution_certificate, wronskian_constancy, Classification,
    ClassifyOptions, CriticalityReport, DirectionVerdict, LIMINF_BOUND,
};
use crate::error::Error;
use crate::field::{Constant, ExpSolution, Field, PositiveSolution};
use crate::limit_periodic::{b_antiderivative, b_eval, DriftField, LimitField};
use crate::operator::{Operator1D, PresetRegistry, CE1_SA, CE2_SA, LIMIT_SA};
use crate::quadrature::integrate_unit_pieces;
use crate::spectral::{eigenvalue_sweep, solve_ivp, Grid, SweepPoint};
use crate::Result;

/// Radii and spacing of the CE1 sweep. The spacing is fine enough that the
/// `O(h²)` bias stays below `λ₁([−243, 243]) ≈ 2.6e−7`.
pub const CE1_SWEEP_RADII: [f64; 4] = [9.0, 27.0, 81.0, 243.0];
pub const CE1_SWEEP_H: f64 = 2.5e-4;
const CE2_SWEEP_RADII: [f64; 3] = [9.0, 27.0, 81.0];
const CE2_SWEEP_H: f64 = 0.005;
const LIMIT_TOL: f64 = 1e-9;
const RESIDUAL_POINTS: usize = 10_000;
const RESIDUAL_TOL: f64 = 1e-8;
const DECAY_THRESHOLD: f64 = 1e-12;
const WRONSKIAN_FLOOR: f64 = 0.9;
const WRONSKIAN_SPAN: f64 = 81.0;
const IVP_STEP: f64 = 1e-3;
const SWEEP_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct PipelineReport {
    pub name: String,
    pub pass: bool,
    pub stages: Vec<VerificationRecord>,
    pub sweep: Vec<SweepPoint>,
    pub criticality: Vec<CriticalityReport>,
    pub conclusion: String,
}

impl PipelineReport {
    fn new(name: &str) -> Self {
        PipelineReport {
            name: name.into(),
            pass: true,
            stages: Vec::new(),
            sweep: Vec::new(),
            criticality: Vec::new(),
            conclusion: String::new(),
        }
    }

    /// Appends a stage; false once a stage fails so the caller can stop.
    fn push(&mut self, rec: VerificationRecord) -> bool {
        let ok = rec.pass;
        if !ok {
            self.pass = false;
            self.conclusion = format!("aborted: stage {} failed", rec.name);
        }
        self.stages.push(rec);
        ok
    }
}

/// Deterministic low-discrepancy points in `[−r, r]`.
fn spread_points(r: f64, n: usize) -> Vec<f64> {
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    (0..n).map(|i| -r + 2.0 * r * (0.5 + i as f64 * golden).fract()).collect()
}

fn residual_stage(name: &str, op: &Operator1D, sign: f64) -> Result<VerificationRecord> {
    // φ = e^{sign·B}: φ′ = sign·b·φ, φ″ = (sign·b′ + b²)·φ
    let timer = Timer::start();
    let r = 243.0;
    let mut worst = WorstCase { location: json!(null), margin: 0.0 };
    for x in spread_points(r, RESIDUAL_POINTS) {
        let (b, bp) = (b_eval(x)?, crate::limit_periodic::b_deriv_eval(x)?);
        let phi = (sign * b_antiderivative(x)?).exp();
        let res = op.apply(x, phi, sign * b * phi, (sign * bp + b * b) * phi).abs();
        if -res < worst.margin {
            worst = WorstCase { location: json!(x), margin: -res };
        }
    }
    Ok(VerificationRecord::new(
        name,
        json!({ "operator": op.name(), "points": RESIDUAL_POINTS, "interval": [-r, r] }),
        RESIDUAL_TOL,
        worst,
        RESIDUAL_POINTS,
        timer,
    ))
}

fn sweep_stage(name: &str, op: &Operator1D, radii: &[f64], h: f64, floor: f64) -> Result<(VerificationRecord, Vec<SweepPoint>)> {
    let timer = Timer::start();
    let params = json!({ "operator": op.name(), "radii": radii, "h": h });
    let sweep = match eigenvalue_sweep(op, radii, h) {
        Ok(s) => s,
        Err(Error::Discretization(msg)) => {
            let rec = VerificationRecord::verdict(name, params, false, json!(null), timer).note(msg);
            return Ok((rec, Vec::new()));
        }
        Err(e) => return Err(e),
    };
    // worst of: the smallest λ (against −floor) and the smallest strict decrease
    let mut worst = WorstCase { location: json!(null), margin: f64::INFINITY };
    for (i, p) in sweep.iter().enumerate() {
        if p.lambda < worst.margin {
            worst = WorstCase { location: json!({ "R": p.radius, "kind": "lambda" }), margin: p.lambda };
        }
        if i > 0 {
            let drop = sweep[i - 1].lambda - p.lambda;
            if drop <= 0.0 && drop < worst.margin {
                worst = WorstCase { location: json!({ "R": p.radius, "kind": "not-decreasing" }), margin: -floor.max(1.0) };
            }
        }
    }
    let mut rec = VerificationRecord::new(name, params, floor, worst, sweep.len(), timer);
    if sweep.iter().any(|p| !p.positive) {
        rec.pass = false;
        rec.notes.push("principal eigenfunction not positive".into());
    }
    rec.notes.push(format!("lambda: {:?}", sweep.iter().map(|p| p.lambda).collect::<Vec<_>>()));
    Ok((rec, sweep))
}

fn classify_stage(
    name: &str,
    op: &Operator1D,
    phi: &dyn PositiveSolution,
    lambda1: Option<f64>,
    expect: Classification,
) -> Result<(VerificationRecord, CriticalityReport)> {
    let timer = Timer::start();
    let opts = ClassifyOptions { lambda1_estimate: lambda1, ..Default::default() };
    let report = classify(op, phi, &opts)?;
    let ok = report.classification == expect;
    let rec = VerificationRecord::verdict(
        name,
        json!({ "operator": op.name(), "threshold": opts.threshold, "radii": opts.radii, "expected": expect }),
        ok,
        json!({ "classification": report.classification }),
        timer,
    );
    Ok((rec, report))
}

/// End-to-end reproduction of the first counter-example: a critical
/// operator whose unique positive solution decays at both ends.
pub fn run_ce1() -> Result<PipelineReport> {
    let presets = PresetRegistry::with_defaults(LIMIT_TOL)?;
    let op = presets.build(CE1_SA)?;
    let mut report = PipelineReport::new("ce1");

    if !report.push(residual_stage("ce1-residual", &op, -1.0)?) {
        return Ok(report);
    }

    let timer = Timer::start();
    let phi: Vec<f64> = (1..=8).map(|n| b_antiderivative(3f64.powi(n)).map(|b| (-b).exp())).collect::<Result<_>>()?;
    let decreasing = phi[1..].windows(2).all(|w| w[1] < w[0]);
    let last = phi[7];
    let rec = VerificationRecord::verdict(
        "ce1-decay",
        json!({ "n": [2, 8], "threshold": DECAY_THRESHOLD }),
        decreasing && last < DECAY_THRESHOLD,
        json!({ "phi_3_8": last }),
        timer,
    )
    .note(format!("phi(3^n), n = 1..8: {phi:?}"));
    if !report.push(rec) {
        return Ok(report);
    }

    let (rec, sweep) = sweep_stage("ce1-sweep", &op, &CE1_SWEEP_RADII, CE1_SWEEP_H, 0.0)?;
    report.sweep = sweep;
    if !report.push(rec) {
        return Ok(report);
    }

    let ground = ExpSolution::new(Arc::new(DriftField), -1.0);
    let lambda1 = report.sweep.last().map(|p| p.lambda);
    let (mut rec, crit) = classify_stage("ce1-classify", &op, &ground, lambda1, Classification::Critical)?;
    let at_729 = crit.integrals.iter().find(|d| d.radius == 729.0);
    let big = at_729.is_some_and(|d| d.forward.is_none_or(|v| v > 1e6) && d.backward.is_none_or(|v| v > 1e6));
    if !big {
        rec.pass = false;
        rec.notes.push("integrals do not exceed 1e6 by R = 729".into());
    }
    report.criticality.push(crit);
    if !report.push(rec) {
        return Ok(report);
    }

    let timer = Timer::start();
    report.push(
        VerificationRecord::verdict("ce1-conclusion", json!({}), true, json!(null), timer).note(
            "the positive solution is unique up to scaling and tends to 0, so no positive solution has a positive infimum",
        ),
    );
    report.conclusion =
        "critical, and the only positive solution decays: there is no positive almost periodic eigenfunction".into();
    Ok(report)
}

/// `sup |∫₀ˣ e^{−2B}|`, from the second-solution integrals of `e^{B}`.
fn ce2_sup_norm() -> Result<f64> {
    let phi = ExpSolution::new(Arc::new(DriftField), 1.0);
    let radii: Vec<f64> = (0..=9).map(|k| 3f64.powi(k)).collect();
    let ints = second_solution_integrals(&Constant(1.0), &phi, &radii)?;
    let last = ints.last().expect("nonempty radii");
    match (last.forward, last.backward) {
        (Some(f), Some(b)) => Ok(f.max(b)),
        _ => Err(Error::Range("e^{-2B} integral overflowed".into())),
    }
}

fn two_solutions_stage(op: &Operator1D) -> Result<VerificationRecord> {
    let timer = Timer::start();
    let norm = ce2_sup_norm()?;
    // v = e^{B}u for u₁ ≡ 1 and u₂ = ∫₀ˣ e^{−2B} + ‖u‖: v₁(0) = 1, v₁′(0) = 0; v₂(0) = ‖u‖, v₂′(0) = 1
    let mut worst = WorstCase { location: json!(null), margin: f64::INFINITY };
    let mut positive = true;
    let mut match_err: f64 = 0.0;
    for end in [WRONSKIAN_SPAN, -WRONSKIAN_SPAN] {
        let v1 = solve_ivp(op, 0.0, 0.0, 1.0, 0.0, end, IVP_STEP)?;
        let v2 = solve_ivp(op, 0.0, 0.0, norm, 1.0, end, IVP_STEP)?;
        let w = wronskian_constancy(op, &v1, &v2)?;
        if w.min_abs - WRONSKIAN_FLOOR < worst.margin {
            worst = WorstCase { location: json!({ "end": end, "W0": w.initial }), margin: w.min_abs - WRONSKIAN_FLOOR };
        }
        positive &= v1.u.iter().chain(&v2.u).all(|&v| v > 0.0);
        // the RK4 values must reproduce u₂ = ∫₀ˣ e^{−2B} + ‖u‖ after undoing the gauge
        for k in 0..=4 {
            let x = end.signum() * 3f64.powi(k);
            let i = ((x / end) * (v2.x.len() - 1) as f64).round() as usize;
            let exact = integrate_unit_pieces(&|t| (-2.0 * b_antiderivative(t).unwrap_or(f64::NAN)).exp(), 0.0, x, 1e-10) + norm;
            let rk = (-b_antiderivative(v2.x[i])?).exp() * v2.u[i];
            match_err = match_err.max((rk / exact - 1.0).abs());
        }
    }
    let mut rec = VerificationRecord::new(
        "ce2-two-solutions",
        json!({ "interval": [-WRONSKIAN_SPAN, WRONSKIAN_SPAN], "h": IVP_STEP, "sup_u": norm, "floor": WRONSKIAN_FLOOR }),
        0.0,
        worst,
        2,
        timer,
    );
    if !positive {
        rec.pass = false;
        rec.notes.push("a solution changed sign".into());
    }
    if !(match_err <= 1e-6) {
        rec.pass = false;
    }
    rec.notes.push(format!("u1 = 1 and u2 = int_0^x e^(-2B) + {norm:.10}; drift-form Wronskian at 0 is -u'(0) = -1"));
    rec.notes.push(format!("gauge round trip of u2 against quadrature: max relative error {match_err:.3e}"));
    Ok(rec)
}

fn subsolution_stage(lambda: f64, radius: f64, step: f64) -> Result<VerificationRecord> {
    let timer = Timer::start();
    let grid = Grid::with_spacing(-radius, radius, step)?;
    let cert = subsolution_certificate(&DriftField, lambda, &grid)?;
    let decay = -cert.ln_psi_boundary[0].max(cert.ln_psi_boundary[1]);
    let margin = cert.min_slack.min(decay);
    let loc = if cert.min_slack <= decay { json!({ "x": cert.min_slack_at, "kind": "slack" }) } else { json!({ "kind": "psi-decay" }) };
    let mut rec = VerificationRecord::new(
        &format!("ce2-subsolution-{lambda}"),
        json!({ "lambda": lambda, "interval": [-radius, radius], "step": step }),
        0.0,
        WorstCase { location: loc, margin },
        grid.n_points(),
        timer,
    );
    rec.pass = cert.pass;
    rec.notes.push(format!(
        "eps = {:.6e}, sup|b| = {:.6}, min slack = {:.6e}, ln psi at ends = {:?}",
        cert.epsilon, cert.sup_b, cert.min_slack, cert.ln_psi_boundary
    ));
    Ok(rec)
}

/// End-to-end reproduction of the second counter-example: a subcritical
/// operator with `λ₁ = 0` whose limit operator is critical.
pub fn run_ce2() -> Result<PipelineReport> {
    let presets = PresetRegistry::with_defaults(LIMIT_TOL)?;
    let op = presets.build(CE2_SA)?;
    let mut report = PipelineReport::new("ce2");

    if !report.push(residual_stage("ce2-residual", &op, 1.0)?) {
        return Ok(report);
    }
    if !report.push(two_solutions_stage(&op)?) {
        return Ok(report);
    }

    let (rec, sweep) = sweep_stage("ce2-sweep", &op, &CE2_SWEEP_RADII, CE2_SWEEP_H, SWEEP_FLOOR)?;
    report.sweep = sweep;
    if !report.push(rec) {
        return Ok(report);
    }

    let ground = ExpSolution::new(Arc::new(DriftField), 1.0);
    let lambda1 = report.sweep.last().map(|p| p.lambda);
    let (mut rec, crit) = classify_stage("ce2-classify", &op, &ground, lambda1, Classification::Subcritical)?;
    let converges_late = |v: &DirectionVerdict| matches!(v, DirectionVerdict::Converges { radius, .. } if *radius > 243.0);
    if !(converges_late(&crit.forward) || converges_late(&crit.backward)) {
        rec.pass = false;
        rec.notes.push("convergence not detected beyond R = 243".into());
    }
    report.criticality.push(crit);
    if !report.push(rec) {
        return Ok(report);
    }

    for (lambda, radius) in [(0.2, 729.0), (0.1, 2187.0)] {
        if !report.push(subsolution_stage(lambda, radius, 0.01)?) {
            return Ok(report);
        }
    }

    let timer = Timer::start();
    let field = Arc::new(LimitField::new(LIMIT_TOL)?);
    let star = ExpSolution::new(field.clone() as Arc<dyn Field>, 1.0);
    let cert = liminf_for(&star, 6, LIMINF_BOUND)?;
    let limit_op = presets.build(LIMIT_SA)?;
    let limit_report = classify(&limit_op, &star, &ClassifyOptions::default())?;
    let contrast = cert.holds && limit_report.classification == Classification::Critical;
    let rec = VerificationRecord::verdict(
        "ce2-limit",
        json!({ "operator": LIMIT_SA, "k_max": 6, "bound": LIMINF_BOUND, "b_inf_tol": LIMIT_TOL }),
        contrast,
        json!({ "max_plus": cert.max_plus, "max_minus": cert.max_minus }),
        timer,
    )
    .note(format!("phi*(3^k) = {:?}", cert.phi_plus))
    .note(format!("phi*(-3^k) = {:?}", cert.phi_minus));
    report.criticality.push(limit_report);
    if !report.push(rec) {
        return Ok(report);
    }
    report.conclusion =
        "subcritical with lambda1 = 0, while its limit operator along x + 3^n is critical".into();
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub pass: bool,
    pub checks: Vec<VerificationRecord>,
    pub ce1: PipelineReport,
    pub ce2: PipelineReport,
}

/// Every registered check with default parameters plus both pipelines.
pub fn run_full_suite() -> Result<SuiteReport> {
    let checks = CheckRegistry::with_defaults().run_all(&CheckParams::default())?;
    let (ce1, ce2) = rayon::join(run_ce1, run_ce2);
    let (ce1, ce2) = (ce1?, ce2?);
    Ok(SuiteReport { pass: checks.iter().all(|c| c.pass) && ce1.pass && ce2.pass, checks, ce1, ce2 })
}
