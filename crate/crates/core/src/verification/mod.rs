//! Checks of the inequalities behind both counter-examples, and the two
//! end-to-end reproduction pipelines.

mod inequalities;
mod pipelines;

pub use inequalities::{
    find_k_and_verify_lower_bound, verify_kn_lower, verify_kn_lower_for, verify_kn_upper, verify_kn_upper_for,
    verify_limit_averages, verify_limit_averages_for, GLOBAL_BOUND_TOL, KN_MAX, KN_TOL, LIMIT_K_MAX,
};
pub use pipelines::{run_ce1, run_ce2, run_full_suite, PipelineReport, SuiteReport, CE1_SWEEP_H, CE1_SWEEP_RADII};

use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::error::Error;
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorstCase {
    pub location: Value,
    pub margin: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationRecord {
    pub name: String,
    pub parameters: Value,
    pub pass: bool,
    pub tolerance: f64,
    pub worst_case: WorstCase,
    pub checked: usize,
    pub notes: Vec<String>,
    /// Wall time; left out of serialized reports so they stay reproducible.
    #[serde(skip)]
    pub runtime_ms: u128,
}

pub(crate) struct Timer(Instant);

impl Timer {
    pub(crate) fn start() -> Self {
        Timer(Instant::now())
    }
    fn elapsed_ms(&self) -> u128 {
        self.0.elapsed().as_millis()
    }
}

impl VerificationRecord {
    pub(crate) fn new(
        name: &str,
        parameters: Value,
        tolerance: f64,
        worst_case: WorstCase,
        checked: usize,
        timer: Timer,
    ) -> Self {
        VerificationRecord {
            name: name.to_string(),
            parameters,
            pass: worst_case.margin >= -tolerance,
            tolerance,
            worst_case,
            checked,
            notes: Vec::new(),
            runtime_ms: timer.elapsed_ms(),
        }
    }

    /// A record for a yes/no stage: margin 1 on success, −1 on failure.
    pub(crate) fn verdict(name: &str, parameters: Value, ok: bool, location: Value, timer: Timer) -> Self {
        let margin = if ok { 1.0 } else { -1.0 };
        Self::new(name, parameters, 0.0, WorstCase { location, margin }, 1, timer)
    }

    pub(crate) fn note(mut self, text: impl Into<String>) -> Self {
        self.notes.push(text.into());
        self
    }
}

/// Parameters shared by the registered checks.
#[derive(Debug, Clone, Serialize)]
pub struct CheckParams {
    pub n_max: u32,
    pub x_max: f64,
    pub step: f64,
    pub k_max: u32,
    pub tol: f64,
}

impl Default for CheckParams {
    fn default() -> Self {
        CheckParams { n_max: 8, x_max: 3f64.powi(8), step: 0.01, k_max: 4, tol: 1e-6 }
    }
}

/// A named verification selectable at runtime.
pub trait Check: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn run(&self, params: &CheckParams) -> Result<VerificationRecord>;
}

struct FnCheck {
    name: &'static str,
    description: &'static str,
    run: fn(&CheckParams) -> Result<VerificationRecord>,
}

impl Check for FnCheck {
    fn name(&self) -> &'static str {
        self.name
    }
    fn description(&self) -> &'static str {
        self.description
    }
    fn run(&self, params: &CheckParams) -> Result<VerificationRecord> {
        (self.run)(params)
    }
}

pub struct CheckRegistry {
    checks: Vec<Box<dyn Check>>,
}

impl CheckRegistry {
    pub fn empty() -> Self {
        CheckRegistry { checks: Vec::new() }
    }

    pub fn with_defaults() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(FnCheck {
            name: "kn-lower",
            description: "integral of b over [3^n - 3^k, 3^n] is nonnegative",
            run: |p| verify_kn_lower(p.n_max),
        }));
        r.register(Box::new(FnCheck {
            name: "kn-upper",
            description: "integral of b over [3^n, 3^n + 3^k] is at most (3/8) 3^k / (n+1)^2",
            run: |p| verify_kn_upper(p.n_max),
        }));
        r.register(Box::new(FnCheck {
            name: "global-bound",
            description: "B(x) >= K|x|/(log3|x| + 1)^2 - K with a fitted K > 0",
            run: |p| find_k_and_verify_lower_bound(p.x_max, p.step).map(|(_, rec)| rec),
        }));
        r.register(Box::new(FnCheck {
            name: "limit-averages",
            description: "b_inf has nonnegative left and nonpositive right averages over 3^k windows",
            run: |p| verify_limit_averages(p.k_max, p.tol),
        }));
        r
    }

    pub fn register(&mut self, check: Box<dyn Check>) {
        self.checks.retain(|c| c.name() != check.name());
        self.checks.push(check);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Check> {
        self.checks.iter().find(|c| c.name() == name).map(|c| c.as_ref()).ok_or_else(|| {
            Error::invalid(format!("unknown check '{name}' (known: {})", self.names().join(", ")))
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.checks.iter().map(|c| c.name()).collect()
    }

    pub fn run_all(&self, params: &CheckParams) -> Result<Vec<VerificationRecord>> {
        self.checks.iter().map(|c| c.run(params)).collect()
    }
}
