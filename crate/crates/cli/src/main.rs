#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use critlab::criticality::{classify, ClassifyOptions};
use critlab::limit_periodic::field_registry;
use critlab::operator::{Form, PresetRegistry};
use critlab::output::{self, Panel};
use critlab::spectral::{default_spacing, dirichlet_principal_eigenvalue, eigenvalue_sweep, extrapolated_eigenvalue, Grid};
use critlab::verification::{self, CheckParams, CheckRegistry, PipelineReport, VerificationRecord};
use critlab::Error;

const LIMIT_TOL: f64 = 1e-9;
const MAX_FIELD_SAMPLES: f64 = 1e7;

#[derive(Parser)]
#[command(name = "critlab", version, about = "Criticality of 1D elliptic operators with limit periodic drift")]
struct Cli {
    /// Directory receiving every output file.
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a named field to CSV (and SVG for `plot`).
    Field {
        #[arg(value_enum)]
        action: FieldAction,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Dirichlet principal eigenpair on [-R, R].
    Eig {
        #[arg(long, default_value = "ce1-sa")]
        preset: String,
        #[arg(long, default_value_t = 27.0)]
        radius: f64,
        /// Grid spacing; 0.005 up to R = 81 and 0.02 beyond when omitted.
        #[arg(long)]
        h: Option<f64>,
    },
    /// Principal eigenvalues over increasing radii.
    Sweep {
        #[arg(long, default_value = "ce1-sa")]
        preset: String,
        #[arg(long, value_delimiter = ',', default_value = "9,27,81")]
        radii: Vec<f64>,
        /// Grid spacing; chosen from the largest radius when omitted.
        #[arg(long)]
        h: Option<f64>,
    },
    /// Classify a preset from its built-in positive solution.
    Criticality {
        #[arg(long, default_value = "ce1-sa")]
        preset: String,
        /// Supplied λ₁ estimate; extrapolated from the Dirichlet problem on [-81, 81] when omitted.
        #[arg(long, allow_hyphen_values = true)]
        lambda1: Option<f64>,
    },
    /// Run one named inequality check.
    Verify {
        #[arg(value_parser = ["kn-lower", "kn-upper", "global-bound", "limit-averages"])]
        check: String,
        #[arg(long, default_value_t = 8)]
        nmax: u32,
        #[arg(long, default_value_t = 6561.0)]
        x_max: f64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[arg(long, default_value_t = 4)]
        kmax: u32,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// First counter-example pipeline.
    Ce1,
    /// Second counter-example pipeline.
    Ce2,
    /// Every check and both pipelines in one JSON report.
    Report {
        #[arg(long, default_value = "report.json")]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldAction {
    Eval,
    Plot,
}

#[derive(Args)]
struct Sampling {
    /// Comma-separated field names: sigma, b, b-prime, B, b-inf, b-inf-prime.
    #[arg(long, value_delimiter = ',', default_value = "b")]
    which: Vec<String>,
    /// Sampling interval `a:b`.
    #[arg(long, default_value = "-9:9", allow_hyphen_values = true)]
    range: String,
    #[arg(long, default_value_t = 0.01)]
    step: f64,
}

enum Outcome {
    Ok,
    Failed,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidArgument(_) | Error::Range(_) | Error::UnsupportedOperator(_) => 2,
        _ => 3,
    }
}

fn parse_range(s: &str) -> Result<(f64, f64), Error> {
    let bad = || Error::InvalidArgument(format!("range must look like a:b, got '{s}'"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let (a, b): (f64, f64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidArgument(format!("range needs a < b, got {a}:{b}")));
    }
    Ok((a, b))
}

fn write(out_dir: &Path, name: &str, contents: &str) -> Result<PathBuf, Error> {
    let path = out_dir.join(name);
    output::write_file(&path, contents)?;
    println!("wrote {}", path.display());
    Ok(path)
}

fn field_cmd(out_dir: &Path, action: FieldAction, s: &Sampling) -> Result<Outcome, Error> {
    let (a, b) = parse_range(&s.range)?;
    if !(s.step > 0.0) || (b - a) / s.step > MAX_FIELD_SAMPLES {
        return Err(Error::InvalidArgument(format!("step must be positive with at most 1e7 samples, got {}", s.step)));
    }
    let registry = field_registry(LIMIT_TOL)?;
    let n = ((b - a) / s.step).round() as usize;
    let xs: Vec<f64> = (0..=n).map(|i| (a + i as f64 * s.step).min(b)).collect();
    let mut columns = Vec::new();
    for name in &s.which {
        let field = registry.get(name).ok_or_else(|| {
            Error::InvalidArgument(format!("unknown field '{name}' (known: {})", registry.names().join(", ")))
        })?;
        let ys: Vec<f64> = xs.iter().map(|&x| field.value(x)).collect();
        if ys.iter().any(|y| !y.is_finite()) {
            return Err(Error::Range(format!("{name} could not be evaluated on {a}:{b}")));
        }
        write(out_dir, &format!("field-{name}.csv"), &output::samples_csv(&xs, &ys))?;
        columns.push((name.as_str(), ys));
    }
    if let FieldAction::Plot = action {
        let panels: Vec<Panel> = columns.iter().map(|(t, ys)| Panel { title: t, xs: &xs, ys }).collect();
        write(out_dir, &format!("field-{}.svg", s.which.join("-")), &output::svg_panels(&panels))?;
    }
    Ok(Outcome::Ok)
}

fn presets() -> Result<PresetRegistry, Error> {
    PresetRegistry::with_defaults(LIMIT_TOL)
}

fn check_radius(r: f64) -> Result<(), Error> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    Ok(())
}

fn eig_cmd(out_dir: &Path, preset: &str, radius: f64, h: Option<f64>) -> Result<Outcome, Error> {
    check_radius(radius)?;
    let op = presets()?.build(preset)?;
    let h = h.unwrap_or_else(|| default_spacing(radius));
    let grid = Grid::with_spacing(-radius, radius, h)?;
    let e = dirichlet_principal_eigenvalue(&op, &grid)?;
    println!("preset {preset}  R = {radius}  h = {h}");
    println!("lambda = {}  residual = {:.3e}  positive = {}", output::fmt_num(e.lambda), e.residual, e.positive);
    write(out_dir, &format!("eig-{preset}-R{radius}.csv"), &output::eigenfunction_csv(&e))?;
    let summary = json!({
        "preset": preset, "R": radius, "h": h, "lambda": e.lambda,
        "residual": e.residual, "positive": e.positive, "iterations": e.iterations,
    });
    write(out_dir, &format!("eig-{preset}-R{radius}.json"), &output::to_json(&summary)?)?;
    Ok(Outcome::Ok)
}

fn sweep_cmd(out_dir: &Path, preset: &str, radii: &[f64], h: Option<f64>) -> Result<Outcome, Error> {
    for &r in radii {
        check_radius(r)?;
    }
    let op = presets()?.build(preset)?;
    let h = h.unwrap_or_else(|| default_spacing(radii.iter().cloned().fold(0.0, f64::max)));
    let points = eigenvalue_sweep(&op, radii, h)?;
    println!("{:>10}  {:>20}  {:>10}", "R", "lambda", "residual");
    for p in &points {
        println!("{:>10}  {:>20}  {:>10.3e}", p.radius, output::fmt_num(p.lambda), p.residual);
    }
    write(out_dir, &format!("sweep-{preset}.csv"), &output::sweep_csv(&points))?;
    Ok(Outcome::Ok)
}

fn criticality_cmd(out_dir: &Path, preset: &str, lambda1: Option<f64>) -> Result<Outcome, Error> {
    let registry = presets()?;
    let p = registry.get(preset)?;
    let op = p.build()?;
    let phi = p
        .ground_state()
        .ok_or_else(|| Error::UnsupportedOperator(format!("{preset} has no built-in positive solution")))?;
    let lambda1 = match lambda1 {
        Some(l) => Some(l),
        None if op.form() == Form::SelfAdjoint => {
            Some(extrapolated_eigenvalue(&op, 81.0, 1e-3)?)
        }
        None => None,
    };
    let opts = ClassifyOptions { lambda1_estimate: lambda1, ..Default::default() };
    let report = classify(&op, phi.as_ref(), &opts)?;
    println!("{preset}: {}", report.classification);
    for n in &report.notes {
        println!("  {n}");
    }
    write(out_dir, &format!("criticality-{preset}.json"), &output::to_json(&report)?)?;
    Ok(Outcome::Ok)
}

fn print_records(records: &[VerificationRecord]) {
    println!("{:<22} {:>5} {:>16} {:>10}", "check", "pass", "margin", "tolerance");
    for r in records {
        let pass = if r.pass { "PASS" } else { "FAIL" };
        println!("{:<22} {:>5} {:>16.6e} {:>10.1e}", r.name, pass, r.worst_case.margin, r.tolerance);
    }
}

fn outcome(pass: bool) -> Outcome {
    if pass {
        Outcome::Ok
    } else {
        Outcome::Failed
    }
}

fn pipeline_cmd(out_dir: &Path, report: PipelineReport) -> Result<Outcome, Error> {
    print_records(&report.stages);
    println!("{}: {}", report.name, report.conclusion);
    write(out_dir, &format!("{}.json", report.name), &output::to_json(&report)?)?;
    Ok(outcome(report.pass))
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    let out = cli.out_dir.as_path();
    match cli.command {
        Command::Field { action, sampling } => field_cmd(out, action, &sampling),
        Command::Eig { preset, radius, h } => eig_cmd(out, &preset, radius, h),
        Command::Sweep { preset, radii, h } => sweep_cmd(out, &preset, &radii, h),
        Command::Criticality { preset, lambda1 } => criticality_cmd(out, &preset, lambda1),
        Command::Verify { check, nmax, x_max, step, kmax, tol } => {
            let params = CheckParams { n_max: nmax, x_max, step, k_max: kmax, tol };
            let rec = CheckRegistry::with_defaults().get(&check)?.run(&params)?;
            print_records(std::slice::from_ref(&rec));
            write(out, &format!("verify-{check}.json"), &output::to_json(&rec)?)?;
            Ok(outcome(rec.pass))
        }
        Command::Ce1 => pipeline_cmd(out, verification::run_ce1()?),
        Command::Ce2 => pipeline_cmd(out, verification::run_ce2()?),
        Command::Report { out: file } => {
            let suite = verification::run_full_suite()?;
            print_records(&suite.checks);
            print_records(&suite.ce1.stages);
            print_records(&suite.ce2.stages);
            write(out, &file.to_string_lossy(), &output::to_json(&suite)?)?;
            Ok(outcome(suite.pass))
        }
    }
}

fn configure_threads() -> Result<(), Error> {
    let Ok(v) = std::env::var("CRITLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::InvalidArgument(format!("CRITLAB_THREADS must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = configure_threads().and_then(|_| run(cli));
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
