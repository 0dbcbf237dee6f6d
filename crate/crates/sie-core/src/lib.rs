//! Spectral solver for coupled systems of Cauchy-type singular integral
//! equations of the first kind on `[-1, 1]`.
//!
//! The unknowns are expanded as weighted Chebyshev series, with the family
//! chosen by the endpoint boundedness class of the solution (all four
//! classical kinds are supported). The singular part of the operator maps
//! through a closed-form transform, the regular kernels through
//! Gauss–Chebyshev quadrature, and the resulting dense linear system is
//! solved directly with rank diagnostics. An a-posteriori estimator solves
//! the companion error system driven by the residual of the computed
//! solution.
//!
//! The crate also ships a small expression language for defining kernels in
//! JSON config files, a catalog of builtin problems (two coupled polynomial
//! examples and a crack-parallel-to-boundary elasticity problem), and the
//! closed-form dominant-equation solutions used as an independent oracle in
//! the test suite.

pub mod analytic;
pub mod chebyshev;
pub mod config;
pub mod error;
pub mod estimate;
pub mod expr;
pub mod linalg;
pub mod pipeline;
pub mod problem;
pub mod quadrature;
pub mod solution;
pub mod solver;

pub use analytic::{consistency_residual, dominant_solve, DominantSolution};
pub use chebyshev::{
    eval_poly, eval_poly_unchecked, orthogonality_constant, pv_transform, roots, weight,
    ChebyshevKind, PvImage, WeightSpec,
};
pub use config::load_config;
pub use error::{Error, Result};
pub use estimate::{error_solve, perturbation, ErrorEstimate, NamedFunctional};
pub use expr::{Bindings, Expr};
pub use pipeline::{
    build_problem_tensor, crack_functionals, crack_row, default_nodes, estimate_error,
    sample_csv, solve_problem, table1_csv, table1_rows, CrackRow, SolveOptions, SolveOutcome,
    TABLE1_CASES,
};
pub use problem::{builtin, Kernel, Parity, Problem, RhsFn, SideCondition};
pub use quadrature::{
    build_tensor, build_tensor_paper, case_pairing, gauss_rule, kernel_gamma, project,
    project_fallible, t_side_len, CoefficientTensor, QuadratureMode, QuadratureRule,
    SeriesCoefficients,
};
pub use solution::{Endpoint, SpectralSolution};
pub use solver::{
    assemble, assemble_with, solve, AssembledSystem, RowLabel, SolveReport, SolveStatus,
    SolveTolerances,
};
