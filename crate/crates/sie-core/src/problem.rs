//! Problem definition: system size, dominant-part matrix, kernels,
//! right-hand sides, boundedness case, truncation degree and side
//! conditions, plus the builtin catalog.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::chebyshev::{orthogonality_constant, ChebyshevKind};
use crate::error::{Error, Result};
use crate::expr::{Bindings, Expr};
use crate::linalg::{det, Mat};

type BuiltinFn2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type BuiltinFn1 = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A bivariate kernel entry `K_ij(t, τ)`.
#[derive(Clone)]
pub enum Kernel {
    Expr(Expr),
    Builtin(BuiltinFn2),
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kernel::Expr(e) => write!(f, "Expr({e})"),
            Kernel::Builtin(_) => write!(f, "Builtin(..)"),
        }
    }
}

/// A univariate right-hand side `f_i(t)`.
#[derive(Clone)]
pub enum RhsFn {
    Expr(Expr),
    Builtin(BuiltinFn1),
}

impl fmt::Debug for RhsFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RhsFn::Expr(e) => write!(f, "Expr({e})"),
            RhsFn::Builtin(_) => write!(f, "Builtin(..)"),
        }
    }
}

/// Parity restriction of one component's regular part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// Basis degrees a component of this parity must not use.
    pub fn excluded_degrees(self, m: usize) -> Vec<usize> {
        (0..=m)
            .filter(|l| match self {
                Parity::Even => l % 2 == 1,
                Parity::Odd => l % 2 == 0,
            })
            .collect()
    }
}

/// Extra linear constraint on the coefficients. Component indices `j` are
/// zero-based.
#[derive(Debug, Clone, PartialEq)]
pub enum SideCondition {
    /// Fix `β_{jl} = value`.
    Pin { j: usize, l: usize, value: f64 },
    /// Require `∫ φ_j dτ = value`.
    Integral { j: usize, value: f64 },
    /// Restrict the regular part of `φ_j` to even or odd basis polynomials.
    Parity { j: usize, parity: Parity },
}

impl fmt::Display for SideCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SideCondition::Pin { j, l, value } => {
                write!(f, "pin beta[{}][{l}] = {value}", j + 1)
            }
            SideCondition::Integral { j, value } => {
                write!(f, "integral of phi_{} = {value}", j + 1)
            }
            SideCondition::Parity { j, parity } => {
                write!(f, "phi_{} {parity:?} parity", j + 1)
            }
        }
    }
}

/// One coupled system: `N` equations with constant dominant matrix `B`,
/// kernels `K_ij`, right-hand sides `f_i`, boundedness case ν and
/// truncation degree `M`.
#[derive(Debug, Clone)]
pub struct Problem {
    pub n: usize,
    /// Row-major `N×N` dominant-part matrix.
    pub b: Vec<f64>,
    /// Row-major `N×N` kernel matrix.
    pub kernels: Vec<Kernel>,
    pub rhs: Vec<RhsFn>,
    pub case: ChebyshevKind,
    pub m: usize,
    pub side_conditions: Vec<SideCondition>,
    pub parameters: BTreeMap<String, f64>,
    /// Catalog name when the problem came from `builtin`.
    pub name: Option<String>,
}

impl Problem {
    pub fn b_entry(&self, i: usize, j: usize) -> f64 {
        self.b[i * self.n + j]
    }

    /// Evaluate `K_ij(t, τ)`.
    pub fn kernel_value(&self, i: usize, j: usize, t: f64, tau: f64) -> Result<f64> {
        match &self.kernels[i * self.n + j] {
            Kernel::Builtin(f) => Ok(f(t, tau)),
            Kernel::Expr(e) => {
                let bindings = Bindings::new()
                    .with_t(t)
                    .with_tau(tau)
                    .with_params(&self.parameters);
                Ok(e.eval(&bindings)?)
            }
        }
    }

    /// Evaluate `f_i(t)`.
    pub fn rhs_value(&self, i: usize, t: f64) -> Result<f64> {
        match &self.rhs[i] {
            RhsFn::Builtin(f) => Ok(f(t)),
            RhsFn::Expr(e) => {
                let bindings = Bindings::new().with_t(t).with_params(&self.parameters);
                Ok(e.eval(&bindings)?)
            }
        }
    }

    /// Run every structural check and return the full list of diagnostics;
    /// an empty list means the problem is well-posed.
    pub fn validate(&self) -> Vec<String> {
        let mut diagnostics = Vec::new();
        if self.n == 0 {
            diagnostics.push("system size N must be at least 1".to_string());
            return diagnostics;
        }
        if self.b.len() != self.n * self.n {
            diagnostics.push(format!(
                "B must have {} entries (N×N), got {}",
                self.n * self.n,
                self.b.len()
            ));
        }
        if self.kernels.len() != self.n * self.n {
            diagnostics.push(format!(
                "kernel matrix must have {} entries (N×N), got {}",
                self.n * self.n,
                self.kernels.len()
            ));
        }
        if self.rhs.len() != self.n {
            diagnostics.push(format!(
                "right-hand side must have {} entries, got {}",
                self.n,
                self.rhs.len()
            ));
        }
        if self.b.len() == self.n * self.n {
            let mat = Mat::from_rows(
                (0..self.n)
                    .map(|i| self.b[i * self.n..(i + 1) * self.n].to_vec())
                    .collect(),
            );
            let scale = mat.max_abs();
            let threshold = 1e-12 * scale.powi(self.n as i32);
            if det(&mat).abs() <= threshold {
                diagnostics.push(
                    "B is singular; with a vanishing diagonal part the system is not solvable"
                        .to_string(),
                );
            }
        }
        for (idx, sc) in self.side_conditions.iter().enumerate() {
            match *sc {
                SideCondition::Pin { j, l, .. } => {
                    if j >= self.n {
                        diagnostics.push(format!(
                            "side condition {idx}: component index {} out of range (N = {})",
                            j + 1,
                            self.n
                        ));
                    }
                    if l > self.m {
                        diagnostics.push(format!(
                            "side condition {idx}: degree {l} out of range (M = {})",
                            self.m
                        ));
                    }
                }
                SideCondition::Integral { j, .. } => {
                    if j >= self.n {
                        diagnostics.push(format!(
                            "side condition {idx}: component index {} out of range (N = {})",
                            j + 1,
                            self.n
                        ));
                    }
                }
                SideCondition::Parity { j, .. } => {
                    if j >= self.n {
                        diagnostics.push(format!(
                            "side condition {idx}: component index {} out of range (N = {})",
                            j + 1,
                            self.n
                        ));
                    }
                    if matches!(self.case, ChebyshevKind::Third | ChebyshevKind::Fourth) {
                        diagnostics.push(format!(
                            "side condition {idx}: parity restriction needs a symmetric weight (case 1 or 2)"
                        ));
                    }
                }
            }
        }
        diagnostics
    }

    pub fn validated(self) -> Result<Self> {
        let diagnostics = self.validate();
        if diagnostics.is_empty() {
            Ok(self)
        } else {
            Err(Error::Invalid(diagnostics))
        }
    }
}

/// `∫ w_ν(τ) P_{ν,l}(τ) dτ`: the total weight mass for l = 0, zero otherwise
/// by orthogonality to `P_{ν,0} = 1`.
pub fn weighted_basis_moment(kind: ChebyshevKind, l: usize) -> f64 {
    if l == 0 {
        orthogonality_constant(kind, 0)
    } else {
        0.0
    }
}

fn require_integer_param(params: &BTreeMap<String, f64>, name: &str) -> Result<usize> {
    let v = *params.get(name).ok_or_else(|| Error::Parameter {
        name: name.to_string(),
        message: "missing".to_string(),
    })?;
    if !v.is_finite() || v < 0.0 || v.fract() != 0.0 {
        return Err(Error::Parameter {
            name: name.to_string(),
            message: format!("must be a non-negative integer, got {v}"),
        });
    }
    Ok(v as usize)
}

fn reject_unknown_params(params: &BTreeMap<String, f64>, allowed: &[&str]) -> Result<()> {
    for key in params.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(Error::Parameter {
                name: key.clone(),
                message: format!("unknown parameter (allowed: {})", allowed.join(", ")),
            });
        }
    }
    Ok(())
}

/// Construct one of the catalog problems: `example1`, `example2` or `crack`.
///
/// `example1`/`example2` take an optional `M` (truncation degree, defaults 2
/// and 1). `crack` needs `h > 0` (`inf` turns the kernels off) and `M`, the
/// count of symmetric basis functions per component; the underlying
/// truncation degree is `2M` so the even component reaches degree `2M` and
/// the odd one `2M-1`.
pub fn builtin(name: &str, params: &BTreeMap<String, f64>) -> Result<Problem> {
    match name {
        "example1" => {
            reject_unknown_params(params, &["M"])?;
            let m = if params.contains_key("M") {
                require_integer_param(params, "M")?
            } else {
                2
            };
            let mut p = coupled_polynomial_example(ChebyshevKind::First, m);
            p.side_conditions = vec![
                SideCondition::Pin { j: 0, l: 0, value: 2.0 },
                SideCondition::Pin { j: 1, l: 0, value: 2.0 },
            ];
            p.name = Some("example1".to_string());
            p.validated()
        }
        "example2" => {
            reject_unknown_params(params, &["M"])?;
            let m = if params.contains_key("M") {
                require_integer_param(params, "M")?
            } else {
                1
            };
            let mut p = coupled_polynomial_example(ChebyshevKind::Third, m);
            p.name = Some("example2".to_string());
            p.validated()
        }
        "crack" => {
            reject_unknown_params(params, &["h", "M"])?;
            let h = *params.get("h").ok_or_else(|| Error::Parameter {
                name: "h".to_string(),
                message: "missing".to_string(),
            })?;
            if h.is_nan() || h <= 0.0 {
                return Err(Error::Parameter {
                    name: "h".to_string(),
                    message: format!("crack distance must be positive (or inf), got {h}"),
                });
            }
            let m = require_integer_param(params, "M")?;
            if m == 0 {
                return Err(Error::Parameter {
                    name: "M".to_string(),
                    message: "crack problem needs M >= 1".to_string(),
                });
            }
            crack_problem(h, m)
        }
        other => Err(Error::UnknownBuiltin(other.to_string())),
    }
}

/// The shared coupled system of the two worked examples:
/// `K = [[τ-t, t], [τ, τ+t]]`, `f = (π, 2πt)`, `B = I`.
fn coupled_polynomial_example(case: ChebyshevKind, m: usize) -> Problem {
    let kernels = vec![
        Kernel::Builtin(Arc::new(|t: f64, tau: f64| tau - t)),
        Kernel::Builtin(Arc::new(|t: f64, _tau: f64| t)),
        Kernel::Builtin(Arc::new(|_t: f64, tau: f64| tau)),
        Kernel::Builtin(Arc::new(|t: f64, tau: f64| tau + t)),
    ];
    let rhs = vec![
        RhsFn::Builtin(Arc::new(|_t: f64| PI)),
        RhsFn::Builtin(Arc::new(|t: f64| 2.0 * PI * t)),
    ];
    Problem {
        n: 2,
        b: vec![1.0, 0.0, 0.0, 1.0],
        kernels,
        rhs,
        case,
        m,
        side_conditions: Vec::new(),
        parameters: BTreeMap::new(),
        name: None,
    }
}

/// Kernels of the crack-parallel-to-boundary problem at distance `h`.
/// `h = ∞` is encoded as identically-zero kernels.
pub fn crack_kernels(h: f64) -> [BuiltinFn2; 3] {
    if h.is_infinite() {
        let zero: BuiltinFn2 = Arc::new(|_, _| 0.0);
        return [zero.clone(), zero.clone(), zero];
    }
    let h2 = h * h;
    let k11: BuiltinFn2 = Arc::new(move |t: f64, tau: f64| {
        let u = tau - t;
        let d = u * u + 4.0 * h2;
        -u / d + 8.0 * h2 * u / (d * d) - 4.0 * h2 * u * (12.0 * h2 - u * u) / (d * d * d)
    });
    let k12: BuiltinFn2 = Arc::new(move |t: f64, tau: f64| {
        let u = tau - t;
        let d = u * u + 4.0 * h2;
        -8.0 * h2 * h * (4.0 * h2 - 3.0 * u * u) / (d * d * d)
    });
    let k22: BuiltinFn2 = Arc::new(move |t: f64, tau: f64| {
        let u = tau - t;
        let d = u * u + 4.0 * h2;
        -u / d - 8.0 * h2 * u / (d * d) - 4.0 * h2 * u * (12.0 * h2 - u * u) / (d * d * d)
    });
    [k11, k12, k22]
}

fn crack_problem(h: f64, m_pairs: usize) -> Result<Problem> {
    let [k11, k12, k22] = crack_kernels(h);
    let kernels = vec![
        Kernel::Builtin(k11),
        Kernel::Builtin(k12.clone()),
        Kernel::Builtin(k12),
        Kernel::Builtin(k22),
    ];
    let rhs = vec![
        RhsFn::Builtin(Arc::new(|_t: f64| 0.0)),
        RhsFn::Builtin(Arc::new(|_t: f64| PI)),
    ];
    let mut parameters = BTreeMap::new();
    parameters.insert("h".to_string(), h);
    parameters.insert("M".to_string(), m_pairs as f64);
    // The parity split plus the two vanishing-integral conditions already
    // determine the solution uniquely; see the catalog notes in the README.
    let side_conditions = vec![
        SideCondition::Parity { j: 0, parity: Parity::Even },
        SideCondition::Parity { j: 1, parity: Parity::Odd },
        SideCondition::Integral { j: 0, value: 0.0 },
        SideCondition::Integral { j: 1, value: 0.0 },
    ];
    Problem {
        n: 2,
        b: vec![1.0, 0.0, 0.0, 1.0],
        kernels,
        rhs,
        case: ChebyshevKind::First,
        m: 2 * m_pairs,
        side_conditions,
        parameters,
        name: Some("crack".to_string()),
    }
    .validated()
}
