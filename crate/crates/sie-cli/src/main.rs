//! `sie`: solve coupled Cauchy singular integral equation systems from JSON
//! configs or the builtin catalog, reproduce the crack convergence table,
//! and export solution samples.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use sie_core::estimate::ErrorEstimate;
use sie_core::pipeline::{
    crack_functionals, estimate_error, sample_csv, solve_problem, table1_csv, table1_rows,
    SolveOptions, SolveOutcome,
};
use sie_core::problem::{builtin, Problem};
use sie_core::solution::Endpoint;
use sie_core::solver::SolveStatus;
use sie_core::{load_config, ChebyshevKind, NamedFunctional, QuadratureMode};

#[derive(Parser)]
#[command(
    name = "sie",
    about = "Spectral solver for systems of Cauchy singular integral equations on [-1, 1]",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem from a config file or the builtin catalog.
    Solve(SolveArgs),
    /// Solve a builtin problem (shorthand for `solve --builtin NAME`).
    Builtin {
        /// Catalog name: example1, example2 or crack.
        name: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Reproduce the crack-problem convergence table.
    Table1 {
        #[arg(long, value_enum, default_value_t = QuadratureArg::Safe)]
        quadrature: QuadratureArg,
        #[arg(long, value_enum, default_value_t = FormatArg::Table)]
        format: FormatArg,
        /// Write to this path instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve, then write (tau, phi_1..phi_N) samples on a uniform grid as CSV.
    Sample {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Number of grid points.
        #[arg(long, default_value_t = 401)]
        grid_points: usize,
        #[arg(long, default_value_t = -0.999)]
        grid_min: f64,
        #[arg(long, default_value_t = 0.999)]
        grid_max: f64,
    },
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct InputArgs {
    /// JSON problem description.
    #[arg(long, conflicts_with = "builtin")]
    config: Option<PathBuf>,
    /// Builtin problem name: example1, example2 or crack.
    #[arg(long)]
    builtin: Option<String>,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Parameter override, `name=value`; value may be `inf`. Repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
    /// Override the boundedness case (config input only).
    #[arg(long)]
    case: Option<u8>,
    /// Truncation degree (config input) or catalog M parameter (builtins).
    #[arg(long = "M", value_name = "N")]
    m: Option<usize>,
    #[arg(long, value_enum)]
    quadrature: Option<QuadratureArg>,
    /// Override the τ-side node count (safe mode).
    #[arg(long)]
    n_tau: Option<usize>,
    /// Override the t-side node count (safe mode).
    #[arg(long)]
    n_t: Option<usize>,
    #[arg(long, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,
    /// Write to this path instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Solve the companion error system and report its functionals.
    #[arg(long)]
    with_error_estimate: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum QuadratureArg {
    Safe,
    Paper,
}

impl From<QuadratureArg> for QuadratureMode {
    fn from(v: QuadratureArg) -> Self {
        match v {
            QuadratureArg::Safe => QuadratureMode::Safe,
            QuadratureArg::Paper => QuadratureMode::Paper,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Table,
    Csv,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Solve(args) => run_solve(&args.input, &args.common),
        Command::Builtin { name, common } => {
            let input = InputArgs {
                config: None,
                builtin: Some(name),
            };
            run_solve(&input, &common)
        }
        Command::Table1 {
            quadrature,
            format,
            out,
        } => run_table1(quadrature, format, out.as_deref()),
        Command::Sample {
            input,
            common,
            grid_points,
            grid_min,
            grid_max,
        } => run_sample(&input, &common, grid_points, grid_min, grid_max),
    }
}

fn parse_params(specs: &[String]) -> Result<BTreeMap<String, f64>> {
    let mut params = BTreeMap::new();
    for spec in specs {
        let (name, value) = spec
            .split_once('=')
            .ok_or_else(|| anyhow!("--param expects NAME=VALUE, got `{spec}`"))?;
        let value = match value {
            "inf" => f64::INFINITY,
            "-inf" => f64::NEG_INFINITY,
            other => other
                .parse::<f64>()
                .with_context(|| format!("parameter `{name}`: invalid number `{other}`"))?,
        };
        params.insert(name.trim().to_string(), value);
    }
    Ok(params)
}

/// Resolve the problem and base solve options from either input source.
fn load_problem(input: &InputArgs, common: &CommonArgs) -> Result<(Arc<Problem>, SolveOptions)> {
    let overrides = parse_params(&common.params)?;
    let (problem, mut options) = match (&input.config, &input.builtin) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read config `{}`", path.display()))?;
            let (mut problem, options) =
                load_config(&text).with_context(|| format!("in `{}`", path.display()))?;
            if let Some(case) = common.case {
                problem.case = ChebyshevKind::from_index(case)?;
            }
            if let Some(m) = common.m {
                problem.m = m;
            }
            problem.parameters.extend(overrides.clone());
            (problem, options)
        }
        (None, Some(name)) => {
            if common.case.is_some() {
                bail!("--case applies to config input only; builtins fix their own case");
            }
            let mut params = overrides.clone();
            if let Some(m) = common.m {
                params.insert("M".to_string(), m as f64);
            }
            let problem = builtin(name, &params)?;
            (problem, SolveOptions::default())
        }
        (None, None) => bail!("one of --config or --builtin is required"),
        (Some(_), Some(_)) => bail!("--config and --builtin are mutually exclusive"),
    };

    if let Some(q) = common.quadrature {
        options.mode = q.into();
    }
    if common.n_tau.is_some() {
        options.n_tau = common.n_tau;
    }
    if common.n_t.is_some() {
        options.n_t = common.n_t;
    }

    let diagnostics = problem.validate();
    if !diagnostics.is_empty() {
        for d in &diagnostics {
            eprintln!("config: {d}");
        }
        bail!("problem failed validation with {} diagnostic(s)", diagnostics.len());
    }
    Ok((Arc::new(problem), options))
}

fn functionals_for(problem: &Problem) -> Vec<NamedFunctional> {
    if problem.name.as_deref() == Some("crack") {
        return crack_functionals();
    }
    (0..problem.n)
        .map(|j| NamedFunctional::new(&format!("sif_plus_{}", j + 1), j, Endpoint::Plus))
        .collect()
}

fn run_solve(input: &InputArgs, common: &CommonArgs) -> Result<ExitCode> {
    let (problem, options) = load_problem(input, common)?;
    let outcome = solve_problem(&problem, &options)?;
    let estimate = if common.with_error_estimate {
        Some(estimate_error(
            &problem,
            &outcome,
            &options,
            &functionals_for(&problem),
        )?)
    } else {
        None
    };

    let text = match common.format {
        FormatArg::Table => solve_table_text(&problem, &outcome, estimate.as_ref()),
        FormatArg::Csv => solve_csv_text(&problem, &outcome, estimate.as_ref()),
        FormatArg::Json => {
            let mut value = serde_json::json!({
                "problem": {
                    "name": problem.name,
                    "n": problem.n,
                    "case": problem.case.index(),
                    "m": problem.m,
                },
                "report": outcome.report,
                "sif_plus": sif_values(&outcome, Endpoint::Plus),
                "sif_minus": sif_values(&outcome, Endpoint::Minus),
            });
            if let Some(est) = &estimate {
                value["error_estimate"] = serde_json::json!({
                    "sup_regular": est.sup_regular,
                    "per_functional": est.per_functional,
                    "beta": est.error_report.beta,
                });
            }
            format!("{}\n", serde_json::to_string_pretty(&value)?)
        }
    };
    emit(common.out.as_deref(), &text)?;

    Ok(exit_for(outcome.report.status))
}

fn exit_for(status: SolveStatus) -> ExitCode {
    match status {
        SolveStatus::Unique | SolveStatus::LeastSquares => ExitCode::from(0),
        SolveStatus::Inconsistent => ExitCode::from(2),
        SolveStatus::Underdetermined => ExitCode::from(3),
    }
}

fn sif_values(outcome: &SolveOutcome, endpoint: Endpoint) -> Vec<f64> {
    (0..outcome.solution.problem.n)
        .map(|j| outcome.solution.sif(j, endpoint))
        .collect()
}

/// 16 significant digits, the precision the convergence table is quoted at.
fn sig16(v: f64) -> String {
    format!("{v:.15e}")
}

fn solve_table_text(
    problem: &Problem,
    outcome: &SolveOutcome,
    estimate: Option<&ErrorEstimate>,
) -> String {
    let report = &outcome.report;
    let mut out = String::new();
    let name = problem.name.as_deref().unwrap_or("custom");
    out.push_str(&format!(
        "problem: {name} (N = {}, case {}, M = {})\n",
        problem.n,
        problem.case.index(),
        problem.m
    ));
    out.push_str(&format!(
        "status: {:?}   rank: {}   residual: {:.3e}   condition estimate: {:.3e}\n",
        report.status, report.rank, report.residual_norm, report.condition_estimate
    ));
    out.push_str("beta (rows = components, columns = degrees 0..M):\n");
    for (j, row) in report.beta.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|&v| sig16(v)).collect();
        out.push_str(&format!("  phi_{}: {}\n", j + 1, cells.join("  ")));
    }
    if !report.free_columns.is_empty() {
        let cells: Vec<String> = report
            .free_columns
            .iter()
            .map(|&(j, l)| format!("beta[{}][{l}]", j + 1))
            .collect();
        out.push_str(&format!("free coefficients (need pins): {}\n", cells.join(", ")));
    }
    if !report.violated_rows.is_empty() {
        out.push_str("violated rows:\n");
        for label in &report.violated_rows {
            out.push_str(&format!("  {label}\n"));
        }
    }
    out.push_str("endpoint intensity factors (limit of sqrt(1-tau^2) * phi):\n");
    for j in 0..problem.n {
        out.push_str(&format!(
            "  phi_{}: at +1: {}   at -1: {}\n",
            j + 1,
            sig16(outcome.solution.sif(j, Endpoint::Plus)),
            sig16(outcome.solution.sif(j, Endpoint::Minus)),
        ));
    }
    if let Some(est) = estimate {
        out.push_str(&format!(
            "error estimate: sup |regular part| = {:.3e}\n",
            est.sup_regular
        ));
        for (name, value) in &est.per_functional {
            out.push_str(&format!("  est err {name}: {:.3e}\n", value));
        }
    }
    out
}

fn solve_csv_text(
    problem: &Problem,
    outcome: &SolveOutcome,
    estimate: Option<&ErrorEstimate>,
) -> String {
    let mut out = String::from("quantity,component,degree,value\n");
    for (j, row) in outcome.report.beta.iter().enumerate() {
        for (l, &v) in row.iter().enumerate() {
            out.push_str(&format!("beta,{},{l},{v}\n", j + 1));
        }
    }
    for j in 0..problem.n {
        out.push_str(&format!(
            "sif_plus,{},,{}\n",
            j + 1,
            outcome.solution.sif(j, Endpoint::Plus)
        ));
        out.push_str(&format!(
            "sif_minus,{},,{}\n",
            j + 1,
            outcome.solution.sif(j, Endpoint::Minus)
        ));
    }
    out.push_str(&format!("residual,,,{}\n", outcome.report.residual_norm));
    if let Some(est) = estimate {
        out.push_str(&format!("sup_regular,,,{}\n", est.sup_regular));
        for (name, value) in &est.per_functional {
            out.push_str(&format!("est_err_{name},,,{value}\n"));
        }
    }
    out
}

fn run_table1(quadrature: QuadratureArg, format: FormatArg, out: Option<&Path>) -> Result<ExitCode> {
    let options = SolveOptions {
        mode: quadrature.into(),
        ..SolveOptions::default()
    };
    let rows = table1_rows(&options)?;
    let text = match format {
        FormatArg::Csv => table1_csv(&rows),
        FormatArg::Json => format!("{}\n", serde_json::to_string_pretty(&rows)?),
        FormatArg::Table => {
            let mut t = String::from(
                "     h   M                     k1       est.err k1                     k2       est.err k2\n",
            );
            for r in &rows {
                t.push_str(&format!(
                    "{:>6} {:>3} {:>22} {:>16.3e} {:>22} {:>16.3e}\n",
                    r.h,
                    r.m,
                    sig16(r.k1),
                    r.est_err_k1,
                    sig16(r.k2),
                    r.est_err_k2
                ));
            }
            t
        }
    };
    emit(out, &text)?;
    Ok(ExitCode::from(0))
}

fn run_sample(
    input: &InputArgs,
    common: &CommonArgs,
    grid_points: usize,
    grid_min: f64,
    grid_max: f64,
) -> Result<ExitCode> {
    let (problem, options) = load_problem(input, common)?;
    let outcome = solve_problem(&problem, &options)?;
    let csv = sample_csv(&outcome.solution, grid_points, grid_min, grid_max)?;
    emit(common.out.as_deref(), &csv)?;
    Ok(exit_for(outcome.report.status))
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        None => {
            print!("{text}");
            std::io::stdout().flush()?;
        }
        Some(path) => {
            std::fs::write(path, text)
                .with_context(|| format!("cannot write `{}`", path.display()))?;
        }
    }
    Ok(())
}
