//! End-to-end drivers: tensor construction with resolved node counts, the
//! solve itself, error estimation, the builtin convergence table of the
//! crack problem, and CSV emission.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::Result;
use crate::estimate::{
    error_solve, homogeneous_side_conditions, perturbation, ErrorEstimate, NamedFunctional,
};
use crate::problem::{builtin, Problem};
use crate::quadrature::{
    build_tensor, build_tensor_paper, CoefficientTensor, QuadratureMode,
};
use crate::solution::{Endpoint, SpectralSolution};
use crate::solver::{assemble, solve, AssembledSystem, SolveReport, SolveTolerances};

/// Default per-side node count: generous over-integration of smooth kernels.
pub fn default_nodes(m: usize) -> usize {
    (2 * m + 8).max(32)
}

/// How a problem is discretized and solved.
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub mode: QuadratureMode,
    /// τ-side node count; defaults to `default_nodes(M)`. Ignored in paper
    /// mode, which pins its own counts.
    pub n_tau: Option<usize>,
    /// t-side node count; same default.
    pub n_t: Option<usize>,
    pub tolerances: SolveTolerances,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            mode: QuadratureMode::Safe,
            n_tau: None,
            n_t: None,
            tolerances: SolveTolerances::default(),
        }
    }
}

impl SolveOptions {
    pub fn paper() -> Self {
        SolveOptions {
            mode: QuadratureMode::Paper,
            ..SolveOptions::default()
        }
    }

    fn resolved_nodes(&self, m: usize) -> (usize, usize) {
        match self.mode {
            QuadratureMode::Safe => (
                self.n_tau.unwrap_or_else(|| default_nodes(m)),
                self.n_t.unwrap_or_else(|| default_nodes(m)),
            ),
            QuadratureMode::Paper => (m + 1, m + 1),
        }
    }
}

/// Discretize the problem's kernels and right-hand sides.
pub fn build_problem_tensor(p: &Problem, opts: &SolveOptions) -> Result<CoefficientTensor> {
    let kernel = |i: usize, j: usize, t: f64, tau: f64| p.kernel_value(i, j, t, tau);
    let rhs = |i: usize, t: f64| p.rhs_value(i, t);
    match opts.mode {
        QuadratureMode::Safe => {
            let (n_tau, n_t) = opts.resolved_nodes(p.m);
            build_tensor(p.n, p.case, p.m, kernel, rhs, n_tau, n_t)
        }
        QuadratureMode::Paper => build_tensor_paper(p.n, p.case, p.m, kernel, rhs),
    }
}

/// Everything one solve produces.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub tensor: CoefficientTensor,
    pub system: AssembledSystem,
    pub report: SolveReport,
    pub solution: SpectralSolution,
}

/// Discretize, assemble and solve.
pub fn solve_problem(p: &Arc<Problem>, opts: &SolveOptions) -> Result<SolveOutcome> {
    let tensor = build_problem_tensor(p, opts)?;
    let system = assemble(p, &tensor)?;
    let report = solve(&system, &opts.tolerances);
    let solution = SpectralSolution::new(p.clone(), report.beta.clone());
    Ok(SolveOutcome {
        tensor,
        system,
        report,
        solution,
    })
}

/// Node count for residual projection: strictly finer than the solve's own
/// quadrature so discretization error stays visible.
pub fn perturbation_nodes(p: &Problem, opts: &SolveOptions) -> usize {
    let (n_tau, n_t) = opts.resolved_nodes(p.m);
    2 * n_tau.max(n_t) + 16
}

/// Run the a-posteriori estimator on a completed solve. Side conditions are
/// the primary ones with homogeneous values.
pub fn estimate_error(
    p: &Arc<Problem>,
    outcome: &SolveOutcome,
    opts: &SolveOptions,
    functionals: &[NamedFunctional],
) -> Result<ErrorEstimate> {
    let n_h = perturbation_nodes(p, opts);
    let h = perturbation(p, &outcome.solution, &outcome.tensor, n_h)?;
    let conditions = homogeneous_side_conditions(&p.side_conditions);
    error_solve(
        p,
        &outcome.tensor,
        h,
        &conditions,
        functionals,
        &opts.tolerances,
    )
}

/// The stress intensity factors of the crack problem: `k_1` is the endpoint
/// limit of the shear component `φ_2`, `k_2` of the opening component `φ_1`.
pub fn crack_functionals() -> Vec<NamedFunctional> {
    vec![
        NamedFunctional::new("k1", 1, Endpoint::Plus),
        NamedFunctional::new("k2", 0, Endpoint::Plus),
    ]
}

/// One row of the crack convergence table.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CrackRow {
    pub h: f64,
    pub m: usize,
    pub k1: f64,
    pub est_err_k1: f64,
    pub k2: f64,
    pub est_err_k2: f64,
}

/// The `(h, M)` pairs of the builtin convergence study, ending with the
/// uncoupled `h = ∞` closed form.
pub const TABLE1_CASES: &[(f64, usize)] = &[
    (0.2, 6),
    (0.2, 7),
    (0.2, 8),
    (0.4, 3),
    (0.4, 4),
    (0.4, 6),
    (0.6, 2),
    (0.6, 5),
    (0.8, 2),
    (0.8, 3),
    (1.0, 2),
    (1.0, 4),
    (1.2, 4),
    (1.5, 4),
    (2.0, 3),
    (3.0, 2),
    (10.0, 2),
    (f64::INFINITY, 1),
];

/// Solve the crack problem for one `(h, M)` pair and report both stress
/// intensity factors with their error estimates.
pub fn crack_row(h: f64, m: usize, opts: &SolveOptions) -> Result<CrackRow> {
    let mut params = BTreeMap::new();
    params.insert("h".to_string(), h);
    params.insert("M".to_string(), m as f64);
    let p = Arc::new(builtin("crack", &params)?);
    let outcome = solve_problem(&p, opts)?;
    let functionals = crack_functionals();
    let estimate = estimate_error(&p, &outcome, opts, &functionals)?;
    Ok(CrackRow {
        h,
        m,
        k1: outcome.solution.sif(1, Endpoint::Plus),
        est_err_k1: estimate.per_functional["k1"],
        k2: outcome.solution.sif(0, Endpoint::Plus),
        est_err_k2: estimate.per_functional["k2"],
    })
}

/// All rows of the builtin table, in declaration order.
pub fn table1_rows(opts: &SolveOptions) -> Result<Vec<CrackRow>> {
    TABLE1_CASES
        .iter()
        .map(|&(h, m)| crack_row(h, m, opts))
        .collect()
}

/// CSV of the table rows. Numbers use the shortest round-trip formatting, so
/// re-parsing reproduces the in-memory values exactly.
pub fn table1_csv(rows: &[CrackRow]) -> String {
    let mut out = String::from("h,M,k1,est_err_k1,k2,est_err_k2\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.h, r.m, r.k1, r.est_err_k1, r.k2, r.est_err_k2
        ));
    }
    out
}

/// CSV of `(τ, φ_1(τ), …, φ_N(τ))` samples on a uniform interior grid.
pub fn sample_csv(solution: &SpectralSolution, points: usize, lo: f64, hi: f64) -> Result<String> {
    let rows = solution.sample_rows(points, lo, hi)?;
    let mut out = String::from("tau");
    for j in 1..=solution.problem.n {
        out.push_str(&format!(",phi_{j}"));
    }
    out.push('\n');
    for row in rows {
        let fields: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Convenience accessor used by the CLI and tests.
pub fn builtin_problem(name: &str, params: &BTreeMap<String, f64>) -> Result<Arc<Problem>> {
    Ok(Arc::new(builtin(name, params)?))
}
