//! Assembly of the case-specific linear system in the coefficients β and the
//! dense direct solve with rank diagnostics.
//!
//! One projection row exists per equation index i and t-side degree l; the
//! dominant part contributes a single shifted entry per case, the kernel part
//! couples through the tensor, and side conditions are appended as bordered
//! rows so row provenance survives into the diagnostics.

use std::f64::consts::PI;

use crate::chebyshev::{orthogonality_constant, ChebyshevKind};
use crate::error::{Error, Result};
use crate::linalg::{reduce, Mat};
use crate::problem::{weighted_basis_moment, Problem, SideCondition};
use crate::quadrature::CoefficientTensor;

/// Where a row of the assembled system came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowLabel {
    /// Coefficient of the t-side basis polynomial `l` in equation `i`
    /// (zero-based).
    Projection { equation: usize, degree: usize },
    /// The `index`-th declared side condition (parity restrictions expand to
    /// one row per excluded degree).
    SideCondition { index: usize, description: String },
}

impl std::fmt::Display for RowLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RowLabel::Projection { equation, degree } => {
                write!(f, "projection row (equation {}, degree {degree})", equation + 1)
            }
            RowLabel::SideCondition { index, description } => {
                write!(f, "side condition {index}: {description}")
            }
        }
    }
}

/// The assembled linear system over the flattened unknowns β.
#[derive(Debug, Clone)]
pub struct AssembledSystem {
    pub matrix: Mat,
    pub rhs: Vec<f64>,
    /// Column index → (component j, degree l), both zero-based.
    pub column_map: Vec<(usize, usize)>,
    pub row_labels: Vec<RowLabel>,
    pub n: usize,
    pub m: usize,
    pub case: ChebyshevKind,
}

impl AssembledSystem {
    pub fn column_of(&self, j: usize, l: usize) -> usize {
        j * (self.m + 1) + l
    }
}

/// Assemble the projection rows plus the problem's own side conditions, with
/// the right-hand side taken from the tensor.
pub fn assemble(p: &Problem, tensor: &CoefficientTensor) -> Result<AssembledSystem> {
    let rhs_rows: Vec<Vec<f64>> = (0..p.n)
        .map(|i| (0..tensor.l_count).map(|l| tensor.c(i, l)).collect())
        .collect();
    assemble_with(p, tensor, &rhs_rows, &p.side_conditions)
}

/// Assemble with explicit right-hand-side coefficients (already on the
/// t-side basis and divided by π) and an explicit side-condition list. The
/// error system reuses this with the perturbation coefficients.
pub fn assemble_with(
    p: &Problem,
    tensor: &CoefficientTensor,
    rhs_coeffs: &[Vec<f64>],
    side_conditions: &[SideCondition],
) -> Result<AssembledSystem> {
    if tensor.n != p.n || tensor.m != p.m {
        return Err(Error::ShapeMismatch(format!(
            "tensor built for (N, M) = ({}, {}), problem has ({}, {})",
            tensor.n, tensor.m, p.n, p.m
        )));
    }
    let expected = crate::quadrature::case_pairing(p.case);
    if (tensor.tau_kind, tensor.t_kind) != expected {
        return Err(Error::ShapeMismatch(format!(
            "tensor kinds ({:?}, {:?}) do not match case {:?}",
            tensor.tau_kind, tensor.t_kind, p.case
        )));
    }
    if rhs_coeffs.len() != p.n || rhs_coeffs.iter().any(|r| r.len() != tensor.l_count) {
        return Err(Error::ShapeMismatch(
            "right-hand-side coefficient rows must be N × (L+1)".to_string(),
        ));
    }

    let n = p.n;
    let m = p.m;
    let cols = n * (m + 1);
    let l_count = tensor.l_count;

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs = Vec::new();
    let mut row_labels = Vec::new();

    for i in 0..n {
        for l in 0..l_count {
            let mut row = vec![0.0; cols];
            for j in 0..n {
                let b = p.b_entry(i, j);
                let col_base = j * (m + 1);
                match p.case {
                    ChebyshevKind::First => row[col_base + l + 1] += b,
                    ChebyshevKind::Second => {
                        if l >= 1 {
                            row[col_base + l - 1] -= b;
                        }
                    }
                    ChebyshevKind::Third => row[col_base + l] += b,
                    ChebyshevKind::Fourth => row[col_base + l] -= b,
                }
                for k in 0..=m {
                    let weight = orthogonality_constant(tensor.tau_kind, k) / PI;
                    row[col_base + k] += weight * tensor.g(i, j, k, l);
                }
            }
            rows.push(row);
            rhs.push(rhs_coeffs[i][l]);
            row_labels.push(RowLabel::Projection { equation: i, degree: l });
        }
    }

    for (index, sc) in side_conditions.iter().enumerate() {
        match *sc {
            SideCondition::Pin { j, l, value } => {
                let mut row = vec![0.0; cols];
                row[j * (m + 1) + l] = 1.0;
                rows.push(row);
                rhs.push(value);
                row_labels.push(RowLabel::SideCondition {
                    index,
                    description: sc.to_string(),
                });
            }
            SideCondition::Integral { j, value } => {
                let mut row = vec![0.0; cols];
                for l in 0..=m {
                    row[j * (m + 1) + l] = weighted_basis_moment(p.case, l);
                }
                rows.push(row);
                rhs.push(value);
                row_labels.push(RowLabel::SideCondition {
                    index,
                    description: sc.to_string(),
                });
            }
            SideCondition::Parity { j, parity } => {
                for l in parity.excluded_degrees(m) {
                    let mut row = vec![0.0; cols];
                    row[j * (m + 1) + l] = 1.0;
                    rows.push(row);
                    rhs.push(0.0);
                    row_labels.push(RowLabel::SideCondition {
                        index,
                        description: format!("{sc} (excludes degree {l})"),
                    });
                }
            }
        }
    }

    let column_map = (0..cols).map(|c| (c / (m + 1), c % (m + 1))).collect();
    Ok(AssembledSystem {
        matrix: Mat::from_rows(rows),
        rhs,
        column_map,
        row_labels,
        n,
        m,
        case: p.case,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct SolveTolerances {
    /// Pivots below `pivot_rel · max|entry|` count as zero.
    pub pivot_rel: f64,
    /// Eliminated rows with residual right-hand side above
    /// `consistency_rel · scale` are reported as violated.
    pub consistency_rel: f64,
}

impl Default for SolveTolerances {
    fn default() -> Self {
        SolveTolerances {
            pivot_rel: 1e-12,
            consistency_rel: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub enum SolveStatus {
    Unique,
    Underdetermined,
    Inconsistent,
    LeastSquares,
}

/// Outcome of one dense solve.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SolveReport {
    /// N × (M+1) coefficient matrix.
    pub beta: Vec<Vec<f64>>,
    pub rank: usize,
    pub residual_norm: f64,
    pub condition_estimate: f64,
    pub status: SolveStatus,
    /// `(j, l)` pairs (zero-based) of coefficients the system leaves free;
    /// these are the pins still needed for uniqueness.
    pub free_columns: Vec<(usize, usize)>,
    /// Labels of rows that cannot be satisfied.
    pub violated_rows: Vec<String>,
}

/// Solve the assembled system. Pivot columns are tried from the highest
/// degree down, so in case 1 the coefficients the dominant part never touches
/// (the degree-0 ones) are the columns reported free.
pub fn solve(sys: &AssembledSystem, tolerances: &SolveTolerances) -> SolveReport {
    let mut col_order = Vec::with_capacity(sys.column_map.len());
    for l in (0..=sys.m).rev() {
        for j in 0..sys.n {
            col_order.push(sys.column_of(j, l));
        }
    }
    let red = reduce(
        &sys.matrix,
        &sys.rhs,
        &col_order,
        tolerances.pivot_rel,
        tolerances.consistency_rel,
    );

    let product = sys.matrix.mul_vec(&red.solution);
    let residual_norm = product
        .iter()
        .zip(&sys.rhs)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    let mut free_columns: Vec<(usize, usize)> =
        red.free_columns.iter().map(|&c| sys.column_map[c]).collect();
    free_columns.sort();
    let violated_rows: Vec<String> = red
        .inconsistent_rows
        .iter()
        .map(|&r| sys.row_labels[r].to_string())
        .collect();

    let status = if !violated_rows.is_empty() {
        SolveStatus::Inconsistent
    } else if !free_columns.is_empty() {
        SolveStatus::Underdetermined
    } else if sys.matrix.rows() > sys.matrix.cols() {
        SolveStatus::LeastSquares
    } else {
        SolveStatus::Unique
    };

    let beta = (0..sys.n)
        .map(|j| red.solution[j * (sys.m + 1)..(j + 1) * (sys.m + 1)].to_vec())
        .collect();

    SolveReport {
        beta,
        rank: red.rank,
        residual_norm,
        condition_estimate: red.condition_estimate,
        status,
        free_columns,
        violated_rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::builtin;
    use crate::quadrature::build_tensor;
    use std::collections::BTreeMap;

    fn tensor_for(p: &Problem, n_tau: usize, n_t: usize) -> CoefficientTensor {
        build_tensor(
            p.n,
            p.case,
            p.m,
            |i, j, t, tau| p.kernel_value(i, j, t, tau),
            |i, t| p.rhs_value(i, t),
            n_tau,
            n_t,
        )
        .unwrap()
    }

    #[test]
    fn example1_system_rows() {
        let p = builtin("example1", &BTreeMap::new()).unwrap();
        let tensor = tensor_for(&p, 32, 32);
        let sys = assemble(&p, &tensor).unwrap();
        assert_eq!(sys.matrix.cols(), 6);
        assert_eq!(sys.matrix.rows(), 6); // 4 projection + 2 pins

        let expect = [
            // (3/2)β_11 = 1
            (vec![0.0, 1.5, 0.0, 0.0, 0.0, 0.0], 1.0),
            // -(1/2)β_10 + β_12 + (1/2)β_20 = 0
            (vec![-0.5, 0.0, 1.0, 0.5, 0.0, 0.0], 0.0),
            // (1/2)β_11 + (3/2)β_21 = 0
            (vec![0.0, 0.5, 0.0, 0.0, 1.5, 0.0], 0.0),
            // (1/2)β_20 + β_22 = 1
            (vec![0.0, 0.0, 0.0, 0.5, 0.0, 1.0], 1.0),
        ];
        for (r, (coeffs, rhs)) in expect.iter().enumerate() {
            for (c, want) in coeffs.iter().enumerate() {
                assert!(
                    (sys.matrix.at(r, c) - want).abs() < 1e-12,
                    "row {r} col {c}: {} vs {want}",
                    sys.matrix.at(r, c)
                );
            }
            assert!((sys.rhs[r] - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn example1_solution_with_pins() {
        let p = builtin("example1", &BTreeMap::new()).unwrap();
        let tensor = tensor_for(&p, 32, 32);
        let sys = assemble(&p, &tensor).unwrap();
        let report = solve(&sys, &SolveTolerances::default());
        assert_eq!(report.status, SolveStatus::Unique);
        let expect = [[2.0, 2.0 / 3.0, 0.0], [2.0, -2.0 / 9.0, 0.0]];
        for j in 0..2 {
            for l in 0..3 {
                assert!(
                    (report.beta[j][l] - expect[j][l]).abs() < 1e-12,
                    "beta[{j}][{l}] = {}",
                    report.beta[j][l]
                );
            }
        }
        assert!(report.residual_norm <= 1e-12);
    }

    #[test]
    fn example1_without_pins_is_underdetermined() {
        let mut p = builtin("example1", &BTreeMap::new()).unwrap();
        p.side_conditions.clear();
        let tensor = tensor_for(&p, 32, 32);
        let sys = assemble(&p, &tensor).unwrap();
        let report = solve(&sys, &SolveTolerances::default());
        assert_eq!(report.status, SolveStatus::Underdetermined);
        assert_eq!(report.free_columns, vec![(0, 0), (1, 0)]);
    }

    #[test]
    fn example2_system_and_solution() {
        let p = builtin("example2", &BTreeMap::new()).unwrap();
        let tensor = tensor_for(&p, 32, 32);
        let sys = assemble(&p, &tensor).unwrap();
        assert_eq!(sys.matrix.rows(), 4);
        assert_eq!(sys.matrix.cols(), 4);

        let expect = [
            (vec![2.0, 0.5, -0.5, 0.0], 1.0),
            (vec![-0.5, 1.0, 0.5, 0.0], 0.0),
            (vec![0.5, 0.5, 1.0, 0.5], -1.0),
            (vec![0.0, 0.0, 0.5, 1.0], 1.0),
        ];
        for (r, (coeffs, rhs)) in expect.iter().enumerate() {
            for (c, want) in coeffs.iter().enumerate() {
                assert!(
                    (sys.matrix.at(r, c) - want).abs() < 1e-12,
                    "row {r} col {c}: {} vs {want}",
                    sys.matrix.at(r, c)
                );
            }
            assert!((sys.rhs[r] - rhs).abs() < 1e-12);
        }

        let report = solve(&sys, &SolveTolerances::default());
        assert_eq!(report.status, SolveStatus::Unique);
        let expect = [[-10.0 / 27.0, 28.0 / 27.0], [-22.0 / 9.0, 20.0 / 9.0]];
        for j in 0..2 {
            for l in 0..2 {
                assert!((report.beta[j][l] - expect[j][l]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_kernel_case3_is_diagonal() {
        use crate::problem::{Kernel, RhsFn};
        use std::sync::Arc;
        let p = Problem {
            n: 1,
            b: vec![1.0],
            kernels: vec![Kernel::Builtin(Arc::new(|_, _| 0.0))],
            rhs: vec![RhsFn::Builtin(Arc::new(|_t| PI))],
            case: ChebyshevKind::Third,
            m: 3,
            side_conditions: vec![],
            parameters: BTreeMap::new(),
            name: None,
        };
        let tensor = tensor_for(&p, 32, 32);
        let sys = assemble(&p, &tensor).unwrap();
        let report = solve(&sys, &SolveTolerances::default());
        assert_eq!(report.status, SolveStatus::Unique);
        // f/π = 1 = W_0, so β = (1, 0, 0, 0).
        assert!((report.beta[0][0] - 1.0).abs() < 1e-13);
        for l in 1..=3 {
            assert!(report.beta[0][l].abs() < 1e-13);
        }
    }

    #[test]
    fn case2_compatibility_violation_is_inconsistent() {
        use crate::problem::{Kernel, RhsFn};
        use std::sync::Arc;
        let p = Problem {
            n: 1,
            b: vec![1.0],
            kernels: vec![Kernel::Builtin(Arc::new(|_, _| 0.0))],
            rhs: vec![RhsFn::Builtin(Arc::new(|_t| PI))],
            case: ChebyshevKind::Second,
            m: 2,
            side_conditions: vec![],
            parameters: BTreeMap::new(),
            name: None,
        };
        let tensor = tensor_for(&p, 32, 32);
        let sys = assemble(&p, &tensor).unwrap();
        let report = solve(&sys, &SolveTolerances::default());
        assert_eq!(report.status, SolveStatus::Inconsistent);
        assert!(report.violated_rows[0].contains("degree 0"), "{:?}", report.violated_rows);
    }

    #[test]
    fn row_and_column_bookkeeping() {
        let mut p = builtin("example1", &BTreeMap::new()).unwrap();
        p.side_conditions.push(SideCondition::Parity {
            j: 0,
            parity: crate::problem::Parity::Even,
        });
        let tensor = tensor_for(&p, 32, 32);
        let sys = assemble(&p, &tensor).unwrap();

        // column_map is a bijection onto (j, l).
        let mut seen = std::collections::BTreeSet::new();
        for (c, &(j, l)) in sys.column_map.iter().enumerate() {
            assert_eq!(sys.column_of(j, l), c);
            assert!(seen.insert((j, l)));
        }
        assert_eq!(seen.len(), p.n * (p.m + 1));

        // every projection row appears exactly once, side conditions expand
        // in declaration order (parity contributes one row per excluded
        // degree).
        let mut projections = std::collections::BTreeSet::new();
        let mut side_rows = 0;
        for label in &sys.row_labels {
            match label {
                RowLabel::Projection { equation, degree } => {
                    assert!(projections.insert((*equation, *degree)));
                }
                RowLabel::SideCondition { .. } => side_rows += 1,
            }
        }
        assert_eq!(projections.len(), p.n * tensor.l_count);
        assert_eq!(side_rows, 2 + 1); // two pins + one excluded degree (l = 1)
    }

    #[test]
    fn integral_row_values() {
        let mut p = builtin("example1", &BTreeMap::new()).unwrap();
        p.side_conditions = vec![SideCondition::Integral { j: 0, value: 0.0 }];
        let tensor = tensor_for(&p, 32, 32);
        let sys = assemble(&p, &tensor).unwrap();
        let row = sys.matrix.rows() - 1;
        assert!((sys.matrix.at(row, sys.column_of(0, 0)) - PI).abs() < 1e-15);
        for l in 1..=p.m {
            assert_eq!(sys.matrix.at(row, sys.column_of(0, l)), 0.0);
        }
    }
}
