//! A-posteriori error estimation: the residual of the computed solution acts
//! as the right-hand side of an error system with the same operator, and the
//! chosen output functionals of that error solution are the reported figures.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::Result;
use crate::problem::{Problem, SideCondition};
use crate::quadrature::{project_fallible, CoefficientTensor, SeriesCoefficients};
use crate::solution::{Endpoint, SpectralSolution};
use crate::solver::{assemble_with, solve, SolveReport, SolveTolerances};

/// An output functional evaluated on the error solution, e.g. a stress
/// intensity factor.
#[derive(Debug, Clone)]
pub struct NamedFunctional {
    pub name: String,
    /// Zero-based component index.
    pub j: usize,
    pub endpoint: Endpoint,
}

impl NamedFunctional {
    pub fn new(name: &str, j: usize, endpoint: Endpoint) -> Self {
        NamedFunctional {
            name: name.to_string(),
            j,
            endpoint,
        }
    }
}

/// The perturbation coefficients, the solved error function and its scalar
/// summaries.
#[derive(Debug, Clone)]
pub struct ErrorEstimate {
    /// Per-equation projection of `operator(solution) - f` on the t-side
    /// basis.
    pub h_coeffs: Vec<SeriesCoefficients>,
    pub error_solution: SpectralSolution,
    pub error_report: SolveReport,
    /// Max of `|regular part of the error|` over a dense grid.
    pub sup_regular: f64,
    /// `name → |functional(error solution)|`.
    pub per_functional: BTreeMap<String, f64>,
}

/// Project the residual `H_i(t) = (L φ̄)_i(t) - f_i(t)` of a computed
/// solution onto the t-side basis. `n_nodes` should exceed the node count of
/// the solve that produced `s` so discretization error stays visible.
pub fn perturbation(
    p: &Problem,
    s: &SpectralSolution,
    tensor: &CoefficientTensor,
    n_nodes: usize,
) -> Result<Vec<SeriesCoefficients>> {
    let mut h = Vec::with_capacity(p.n);
    for i in 0..p.n {
        h.push(project_fallible(
            |t| Ok(s.apply_operator(i, t, n_nodes)? - p.rhs_value(i, t)?),
            tensor.t_kind,
            tensor.l_count.saturating_sub(1),
            n_nodes,
        )?);
    }
    Ok(h)
}

/// Side conditions for the error system: the primary pins with their values
/// zeroed (the error lives in the same affine family as the solution).
pub fn homogeneous_side_conditions(conditions: &[SideCondition]) -> Vec<SideCondition> {
    conditions
        .iter()
        .map(|sc| match *sc {
            SideCondition::Pin { j, l, .. } => SideCondition::Pin { j, l, value: 0.0 },
            SideCondition::Integral { j, .. } => SideCondition::Integral { j, value: 0.0 },
            SideCondition::Parity { j, parity } => SideCondition::Parity { j, parity },
        })
        .collect()
}

/// Solve the error system driven by the perturbation coefficients and
/// evaluate the requested functionals on the error solution.
pub fn error_solve(
    problem: &Arc<Problem>,
    tensor: &CoefficientTensor,
    h_coeffs: Vec<SeriesCoefficients>,
    side_conditions: &[SideCondition],
    functionals: &[NamedFunctional],
    tolerances: &SolveTolerances,
) -> Result<ErrorEstimate> {
    let rhs_rows: Vec<Vec<f64>> = h_coeffs
        .iter()
        .map(|series| series.coeffs.iter().map(|&v| v / PI).collect())
        .collect();
    let sys = assemble_with(problem, tensor, &rhs_rows, side_conditions)?;
    let error_report = solve(&sys, tolerances);
    let error_solution = SpectralSolution::new(problem.clone(), error_report.beta.clone());

    let mut sup_regular = 0.0_f64;
    for j in 0..problem.n {
        for idx in 0..=200 {
            let tau = -1.0 + idx as f64 / 100.0;
            sup_regular = sup_regular.max(error_solution.regular_part(j, tau).abs());
        }
    }

    let mut per_functional = BTreeMap::new();
    for f in functionals {
        per_functional.insert(f.name.clone(), error_solution.sif(f.j, f.endpoint).abs());
    }

    Ok(ErrorEstimate {
        h_coeffs,
        error_solution,
        error_report,
        sup_regular,
        per_functional,
    })
}
