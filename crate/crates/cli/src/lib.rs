//! `grover-lab`: command-line runner for the Grover search library.
//!
//! Results go to stdout (or `--out`), errors to stderr as
//! `{"error": code, "message": text}`. Exit status is 0 on success, 1 on a
//! runtime error and 2 on a usage error.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use grover_core::instance::classical_expected_queries_exact;
use grover_core::reduced::predicted_trace;
use grover_core::restart::first_order_seed;
use grover_core::{
    evolve, expected_cost, integer_stop_point, optimal_iterations, rng, simulate_restarts,
    AnglesSummary, GroverError, PlanMethod, SearchInstance, SimConfig, SpectralAngles64,
    DEFAULT_MEMORY_CAP,
};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_TRIALS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subcommand {
    Angles,
    Simulate,
    Optimal,
    RestartPlan,
    Montecarlo,
    Sweep,
    Baseline,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Parsed command line; serialized verbatim (after resolution) into every
/// JSON output as run metadata.
#[derive(Debug, Clone, Parser, Serialize)]
#[command(
    name = "grover-lab",
    version,
    about = "Multiobject Grover search experiments"
)]
pub struct RunConfig {
    #[arg(value_enum)]
    pub subcommand: Subcommand,

    /// Database size.
    #[arg(long)]
    pub n: Option<usize>,

    /// Number of marked items (random placement from --seed).
    #[arg(long, conflicts_with = "marked")]
    pub ell: Option<usize>,

    /// Explicit marked indices, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub marked: Option<Vec<usize>>,

    #[arg(long = "m-max")]
    pub m_max: Option<usize>,

    /// Restart stop point for `montecarlo`.
    #[arg(long)]
    pub j: Option<usize>,

    #[arg(long)]
    pub trials: Option<usize>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long = "format", value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,

    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long = "memory-cap", default_value_t = DEFAULT_MEMORY_CAP)]
    pub memory_cap: usize,

    /// Sweep database sizes, comma separated.
    #[arg(long = "grid-n", value_delimiter = ',')]
    pub grid_n: Vec<usize>,

    /// Sweep target counts: integers, or `N/k` for n/k of each row.
    #[arg(long = "grid-ell", value_delimiter = ',')]
    pub grid_ell: Vec<String>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Runtime(GroverError),
    Io(String),
}

impl From<GroverError> for CliError {
    fn from(e: GroverError) -> Self {
        CliError::Runtime(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) | CliError::Io(_) => 1,
        }
    }

    fn to_json(&self) -> Value {
        let (code, message) = match self {
            CliError::Usage(m) => ("usage", m.clone()),
            CliError::Runtime(e) => (e.code(), e.to_string()),
            CliError::Io(m) => ("io", m.clone()),
        };
        json!({ "error": code, "message": message })
    }
}

/// Rendered output of one run.
struct Output {
    json: Value,
    csv: String,
}

/// Runs the CLI with explicit streams; returns the process exit status.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let err = CliError::Usage(e.to_string().trim().to_owned());
            let _ = writeln!(stderr, "{}", err.to_json());
            return err.exit_code();
        }
    };
    match execute(&config).and_then(|out| emit(&config, out, stdout)) {
        Ok(()) => 0,
        Err(err) => {
            let _ = writeln!(stderr, "{}", err.to_json());
            err.exit_code()
        }
    }
}

fn emit(config: &RunConfig, out: Output, stdout: &mut dyn Write) -> Result<(), CliError> {
    let text = match config.format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&out.json).expect("serializable output");
            s.push('\n');
            s
        }
        OutputFormat::Csv => out.csv,
    };
    match &config.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn require_n(config: &RunConfig) -> Result<usize, CliError> {
    config
        .n
        .ok_or_else(|| CliError::Usage("--n is required for this subcommand".into()))
}

/// Target count from `--ell` or the size of `--marked`.
fn require_ell(config: &RunConfig, n: usize) -> Result<usize, CliError> {
    match (&config.ell, &config.marked) {
        (Some(ell), None) => Ok(*ell),
        (None, Some(_)) => Ok(resolve_instance(config, n)?.ell()),
        _ => Err(CliError::Usage(
            "exactly one of --ell or --marked is required".into(),
        )),
    }
}

fn resolve_instance(config: &RunConfig, n: usize) -> Result<SearchInstance, CliError> {
    match (&config.ell, &config.marked) {
        (Some(ell), None) => Ok(SearchInstance::random(n, *ell, config.seed)?),
        (None, Some(marked)) => Ok(SearchInstance::new(n, marked)?),
        _ => Err(CliError::Usage(
            "exactly one of --ell or --marked is required".into(),
        )),
    }
}

fn sim_config(config: &RunConfig) -> SimConfig {
    SimConfig {
        memory_cap: config.memory_cap,
    }
}

fn fmt(x: f64) -> String {
    grover_core::Scalar::to_shortest(x)
}

fn opt_fmt(x: Option<f64>) -> String {
    x.map(fmt).unwrap_or_default()
}

/// Wraps a result object with the schema version and resolved config.
fn envelope(config: &RunConfig, result: Value) -> Value {
    let mut map = match result {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("result".into(), other);
            m
        }
    };
    map.insert("schema_version".into(), json!(SCHEMA_VERSION));
    map.insert(
        "config".into(),
        serde_json::to_value(config).expect("config"),
    );
    map.insert("rng".into(), json!(rng::ALGORITHM));
    Value::Object(map)
}

fn execute(config: &RunConfig) -> Result<Output, CliError> {
    match config.subcommand {
        Subcommand::Angles => run_angles(config),
        Subcommand::Simulate => run_simulate(config),
        Subcommand::Optimal => run_optimal(config),
        Subcommand::RestartPlan => run_restart_plan(config),
        Subcommand::Montecarlo => run_montecarlo(config),
        Subcommand::Sweep => run_sweep(config),
        Subcommand::Baseline => run_baseline(config),
    }
}

fn run_angles(config: &RunConfig) -> Result<Output, CliError> {
    let n = require_n(config)?;
    let ell = require_ell(config, n)?;
    let summary = AnglesSummary::new(&SpectralAngles64::new(n, ell)?);
    let csv = format!(
        "n,ell,theta,alpha,m_opt,p_opt,m_asymptotic\n{},{},{},{},{},{},{}\n",
        summary.n,
        summary.ell,
        fmt(summary.theta),
        fmt(summary.alpha),
        summary.m_opt,
        fmt(summary.p_opt),
        fmt(summary.m_asymptotic)
    );
    let json = envelope(config, serde_json::to_value(summary).expect("summary"));
    Ok(Output { json, csv })
}

fn run_optimal(config: &RunConfig) -> Result<Output, CliError> {
    let n = require_n(config)?;
    let ell = require_ell(config, n)?;
    let angles = SpectralAngles64::new(n, ell)?;
    let (m_opt, p_opt) = optimal_iterations(&angles);
    let m_continuous = angles.peak();
    let m_asymptotic: f64 = grover_core::asymptotic_iterations(n, ell);
    let csv = format!(
        "n,ell,m_continuous,m_opt,p_opt,m_asymptotic\n{},{},{},{},{},{}\n",
        n,
        ell,
        fmt(m_continuous),
        m_opt,
        fmt(p_opt),
        fmt(m_asymptotic)
    );
    let json = envelope(
        config,
        json!({
            "n": n,
            "ell": ell,
            "m_continuous": m_continuous,
            "m_opt": m_opt,
            "p_opt": p_opt,
            "m_asymptotic": m_asymptotic,
        }),
    );
    Ok(Output { json, csv })
}

fn run_simulate(config: &RunConfig) -> Result<Output, CliError> {
    let n = require_n(config)?;
    let cfg = sim_config(config);
    // fail on the cap before building the marked bit array
    cfg.check(n)?;
    let inst = resolve_instance(config, n)?;
    let angles = SpectralAngles64::new(n, inst.ell())?;
    let m_max = config
        .m_max
        .unwrap_or_else(|| optimal_iterations(&angles).0);
    let trace = evolve::<f64>(&inst, m_max, false, &cfg)?;
    let predicted = predicted_trace(&angles, m_max);
    let deviation = trace
        .probabilities
        .iter()
        .zip(&predicted.probabilities)
        .fold(0.0f64, |w, (a, b)| w.max((a - b).abs()));
    let mut result = serde_json::to_value(&trace).expect("trace");
    let obj = result.as_object_mut().expect("object");
    obj.insert(
        "instance".into(),
        serde_json::to_value(&inst).expect("instance"),
    );
    obj.insert("closed_form_max_abs_diff".into(), json!(deviation));
    Ok(Output {
        json: envelope(config, result),
        csv: trace.to_csv(),
    })
}

fn run_restart_plan(config: &RunConfig) -> Result<Output, CliError> {
    let n = require_n(config)?;
    let ell = require_ell(config, n)?;
    let angles = SpectralAngles64::new(n, ell)?;
    let plan = integer_stop_point(&angles)?;
    let seed = first_order_seed(&angles).ok();
    let (m_opt, p_opt) = optimal_iterations(&angles);
    let single_shot_cost = if m_opt == 0 {
        0.0
    } else {
        m_opt as f64 / p_opt
    };
    let method = match plan.method {
        PlanMethod::FixedPoint => "fixed_point",
        PlanMethod::Boundary => "boundary",
    };
    let csv = format!(
        "n,ell,j_continuous,j_integer,expected_cost,success_probability_per_trial,residual,iterations_used,method,first_order_seed,m_opt,single_shot_cost\n{},{},{},{},{},{},{},{},{},{},{},{}\n",
        n,
        ell,
        fmt(plan.j_continuous),
        plan.j_integer,
        fmt(plan.expected_cost),
        fmt(plan.success_probability_per_trial),
        opt_fmt(plan.residual),
        plan.iterations_used,
        method,
        opt_fmt(seed),
        m_opt,
        fmt(single_shot_cost)
    );
    let mut result = serde_json::to_value(plan).expect("plan");
    let obj = result.as_object_mut().expect("object");
    obj.insert("n".into(), json!(n));
    obj.insert("ell".into(), json!(ell));
    obj.insert("first_order_seed".into(), json!(seed));
    obj.insert("m_opt".into(), json!(m_opt));
    obj.insert("single_shot_cost".into(), json!(single_shot_cost));
    Ok(Output {
        json: envelope(config, result),
        csv,
    })
}

fn run_montecarlo(config: &RunConfig) -> Result<Output, CliError> {
    let n = require_n(config)?;
    let cfg = sim_config(config);
    cfg.check(n)?;
    let inst = resolve_instance(config, n)?;
    let angles = SpectralAngles64::new(n, inst.ell())?;
    let j = match config.j {
        Some(0) => return Err(CliError::Usage("--j must be at least 1".into())),
        Some(j) => j,
        None => integer_stop_point(&angles)?.j_integer,
    };
    let trials = config.trials.unwrap_or(DEFAULT_TRIALS);
    if trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let report = simulate_restarts::<f64>(&inst, j, trials, config.seed, &cfg)?;
    let predicted = expected_cost(&angles, j as f64).ok();
    let csv = format!(
        "trials,j,mean_trials_to_success,mean_total_iterations,empirical_success_rate,simulated_success_probability,predicted_expected_cost,seed\n{},{},{},{},{},{},{},{}\n",
        report.trials,
        report.j,
        fmt(report.mean_trials_to_success),
        fmt(report.mean_total_iterations),
        fmt(report.empirical_success_rate),
        fmt(report.simulated_success_probability),
        opt_fmt(predicted),
        report.seed
    );
    let mut result = serde_json::to_value(report).expect("report");
    let obj = result.as_object_mut().expect("object");
    obj.insert(
        "instance".into(),
        serde_json::to_value(&inst).expect("instance"),
    );
    obj.insert("predicted_expected_cost".into(), json!(predicted));
    Ok(Output {
        json: envelope(config, result),
        csv,
    })
}

/// One row of a sweep table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub ell: usize,
    pub theta: f64,
    pub alpha: f64,
    pub m_opt: usize,
    pub p_opt: f64,
    pub m_asymptotic: f64,
    pub restart_j: Option<usize>,
    pub restart_cost: Option<f64>,
    /// `ell = n/2`: success probability is 1/2 at every iteration count.
    pub degenerate: bool,
}

fn parse_ell_token(token: &str, n: usize) -> Result<Option<usize>, CliError> {
    let token = token.trim();
    if let Some(div) = token
        .strip_prefix("N/")
        .or_else(|| token.strip_prefix("n/"))
    {
        let k: usize = div
            .parse()
            .map_err(|_| CliError::Usage(format!("bad --grid-ell entry `{token}`")))?;
        if k == 0 || !n.is_multiple_of(k) {
            return Ok(None);
        }
        return Ok(Some(n / k));
    }
    token
        .parse()
        .map(Some)
        .map_err(|_| CliError::Usage(format!("bad --grid-ell entry `{token}`")))
}

/// Grid cells in canonical order (n outer, ell inner), skipping `ell` outside `[1, n]`.
fn sweep_cells(config: &RunConfig) -> Result<Vec<(usize, usize)>, CliError> {
    let mut cells = Vec::new();
    for &n in &config.grid_n {
        for token in &config.grid_ell {
            if let Some(ell) = parse_ell_token(token, n)? {
                if ell >= 1 && ell <= n {
                    cells.push((n, ell));
                }
            }
        }
    }
    Ok(cells)
}

/// Rows for every grid cell, computed in parallel and returned in grid order.
pub fn sweep_rows(cells: &[(usize, usize)]) -> Result<Vec<SweepRow>, GroverError> {
    cells
        .par_iter()
        .map(|&(n, ell)| {
            let angles = SpectralAngles64::new(n, ell)?;
            let summary = AnglesSummary::new(&angles);
            let plan = integer_stop_point(&angles).ok();
            Ok(SweepRow {
                n,
                ell,
                theta: summary.theta,
                alpha: summary.alpha,
                m_opt: summary.m_opt,
                p_opt: summary.p_opt,
                m_asymptotic: summary.m_asymptotic,
                restart_j: plan.map(|p| p.j_integer),
                restart_cost: plan.map(|p| p.expected_cost),
                degenerate: 2 * ell == n,
            })
        })
        .collect()
}

/// Least-squares slope of `m_opt` against `sqrt(n/ell)` (with intercept).
pub fn fitted_slope(rows: &[SweepRow]) -> Option<f64> {
    if rows.len() < 2 {
        return None;
    }
    let xs: Vec<f64> = rows
        .iter()
        .map(|r| (r.n as f64 / r.ell as f64).sqrt())
        .collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.m_opt as f64).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn run_sweep(config: &RunConfig) -> Result<Output, CliError> {
    let cells = sweep_cells(config)?;
    let rows = sweep_rows(&cells)?;
    let mut csv = String::from(
        "n,ell,theta,alpha,m_opt,p_opt,m_asymptotic,restart_j,restart_cost,degenerate\n",
    );
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.n,
            r.ell,
            fmt(r.theta),
            fmt(r.alpha),
            r.m_opt,
            fmt(r.p_opt),
            fmt(r.m_asymptotic),
            r.restart_j.map(|j| j.to_string()).unwrap_or_default(),
            opt_fmt(r.restart_cost),
            r.degenerate
        ));
    }
    let json = envelope(
        config,
        json!({ "rows": rows, "m_opt_sqrt_slope": fitted_slope(&rows) }),
    );
    Ok(Output { json, csv })
}

fn run_baseline(config: &RunConfig) -> Result<Output, CliError> {
    let n = require_n(config)?;
    let ell = require_ell(config, n)?;
    let exact = classical_expected_queries_exact(n, ell)?;
    let classical = *exact.numer() as f64 / *exact.denom() as f64;
    let angles = SpectralAngles64::new(n, ell)?;
    let (m_opt, p_opt) = optimal_iterations(&angles);
    let plan = integer_stop_point(&angles)?;
    let csv = format!(
        "n,ell,classical_expected_queries,quantum_m_opt,quantum_p_opt,restart_j,restart_expected_cost\n{},{},{},{},{},{},{}\n",
        n,
        ell,
        fmt(classical),
        m_opt,
        fmt(p_opt),
        plan.j_integer,
        fmt(plan.expected_cost)
    );
    let json = envelope(
        config,
        json!({
            "n": n,
            "ell": ell,
            "classical_expected_queries": classical,
            "classical_expected_queries_exact": exact.to_string(),
            "quantum_m_opt": m_opt,
            "quantum_p_opt": p_opt,
            "restart_j": plan.j_integer,
            "restart_expected_cost": plan.expected_cost,
        }),
    );
    Ok(Output { json, csv })
}
