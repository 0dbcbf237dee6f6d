//! JSON problem configuration.
//!
//! A config document carries the full problem definition plus optional
//! quadrature settings. Component indices `j` in side conditions are
//! one-based, matching the way the equations are written; unknown keys are
//! rejected. The value `"inf"` is accepted wherever a parameter is a number,
//! which is how kernel-free limits are spelled.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::chebyshev::ChebyshevKind;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::problem::{Kernel, Parity, Problem, RhsFn, SideCondition};
use crate::quadrature::QuadratureMode;
use crate::pipeline::SolveOptions;

/// A parameter value: a JSON number, or the strings `"inf"` / `"-inf"`.
#[derive(Debug, Clone, Copy)]
pub struct ParamValue(pub f64);

impl<'de> Deserialize<'de> for ParamValue {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Number(v) => Ok(ParamValue(v)),
            Raw::Text(s) => match s.as_str() {
                "inf" => Ok(ParamValue(f64::INFINITY)),
                "-inf" => Ok(ParamValue(f64::NEG_INFINITY)),
                other => Err(serde::de::Error::custom(format!(
                    "expected a number or \"inf\", got \"{other}\""
                ))),
            },
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum RawSideCondition {
    Pin { j: usize, l: usize, value: f64 },
    Integral { j: usize, value: f64 },
    Parity { j: usize, parity: Parity },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQuadrature {
    #[serde(default = "default_mode")]
    mode: QuadratureMode,
    #[serde(default)]
    n_tau: Option<usize>,
    #[serde(default)]
    n_t: Option<usize>,
}

fn default_mode() -> QuadratureMode {
    QuadratureMode::Safe
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(rename = "N")]
    n: usize,
    /// Row-major N×N matrix.
    #[serde(rename = "B")]
    b: Vec<f64>,
    /// Boundedness case, 1..=4.
    case: u8,
    #[serde(rename = "M")]
    m: usize,
    /// N×N expression strings in `t`, `tau` and parameters.
    kernels: Vec<Vec<String>>,
    /// N expression strings in `t` and parameters.
    f: Vec<String>,
    #[serde(default)]
    parameters: BTreeMap<String, ParamValue>,
    #[serde(default)]
    side_conditions: Vec<RawSideCondition>,
    #[serde(default)]
    quadrature: Option<RawQuadrature>,
}

/// Parse a JSON config document into a validated problem and the solve
/// options it requests.
pub fn load_config(text: &str) -> Result<(Problem, SolveOptions)> {
    let raw: RawConfig = serde_json::from_str(text)
        .map_err(|e| Error::Config(format!("line {}, column {}: {e}", e.line(), e.column())))?;

    if raw.case < 1 || raw.case > 4 {
        return Err(Error::Config(format!(
            "case must be 1..=4, got {}",
            raw.case
        )));
    }
    let case = ChebyshevKind::from_index(raw.case)?;

    if raw.kernels.len() != raw.n || raw.kernels.iter().any(|row| row.len() != raw.n) {
        return Err(Error::Config(format!(
            "kernels must be an {0}×{0} array of expressions",
            raw.n
        )));
    }
    if raw.f.len() != raw.n {
        return Err(Error::Config(format!(
            "f must list {} expressions, got {}",
            raw.n,
            raw.f.len()
        )));
    }

    let mut kernels = Vec::with_capacity(raw.n * raw.n);
    for (i, row) in raw.kernels.iter().enumerate() {
        for (j, source) in row.iter().enumerate() {
            let expr = Expr::parse(source).map_err(|e| {
                Error::Config(format!("kernels[{}][{}]: {e}", i + 1, j + 1))
            })?;
            kernels.push(Kernel::Expr(expr));
        }
    }
    let mut rhs = Vec::with_capacity(raw.n);
    for (i, source) in raw.f.iter().enumerate() {
        let expr = Expr::parse(source)
            .map_err(|e| Error::Config(format!("f[{}]: {e}", i + 1)))?;
        rhs.push(RhsFn::Expr(expr));
    }

    let mut side_conditions = Vec::with_capacity(raw.side_conditions.len());
    for (idx, sc) in raw.side_conditions.into_iter().enumerate() {
        let converted = match sc {
            RawSideCondition::Pin { j, l, value } => {
                SideCondition::Pin { j: one_based(j, idx)?, l, value }
            }
            RawSideCondition::Integral { j, value } => {
                SideCondition::Integral { j: one_based(j, idx)?, value }
            }
            RawSideCondition::Parity { j, parity } => {
                SideCondition::Parity { j: one_based(j, idx)?, parity }
            }
        };
        side_conditions.push(converted);
    }

    let parameters: BTreeMap<String, f64> =
        raw.parameters.into_iter().map(|(k, v)| (k, v.0)).collect();

    let problem = Problem {
        n: raw.n,
        b: raw.b,
        kernels,
        rhs,
        case,
        m: raw.m,
        side_conditions,
        parameters,
        name: None,
    }
    .validated()?;

    let mut options = SolveOptions::default();
    if let Some(q) = raw.quadrature {
        options.mode = q.mode;
        options.n_tau = q.n_tau;
        options.n_t = q.n_t;
    }
    Ok((problem, options))
}

fn one_based(j: usize, condition_index: usize) -> Result<usize> {
    j.checked_sub(1).ok_or_else(|| {
        Error::Config(format!(
            "side condition {condition_index}: component index j is one-based, got 0"
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::solve_problem;
    use std::sync::Arc;

    const EXAMPLE1_JSON: &str = r#"{
        "N": 2,
        "B": [1, 0, 0, 1],
        "case": 1,
        "M": 2,
        "kernels": [["tau - t", "t"], ["tau", "tau + t"]],
        "f": ["pi()", "2*pi()*t"],
        "side_conditions": [
            {"type": "pin", "j": 1, "l": 0, "value": 2.0},
            {"type": "pin", "j": 2, "l": 0, "value": 2.0}
        ]
    }"#;

    #[test]
    fn loads_and_solves_expression_config() {
        let (problem, options) = load_config(EXAMPLE1_JSON).unwrap();
        assert_eq!(problem.n, 2);
        assert_eq!(problem.case, ChebyshevKind::First);
        let outcome = solve_problem(&Arc::new(problem), &options).unwrap();
        assert!((outcome.report.beta[0][1] - 2.0 / 3.0).abs() < 1e-12);
        assert!((outcome.report.beta[1][1] + 2.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_unknown_keys() {
        let text = r#"{"N": 1, "B": [1], "case": 1, "M": 1,
                       "kernels": [["0"]], "f": ["t"], "bogus": 1}"#;
        assert!(matches!(load_config(text), Err(Error::Config(_))));
    }

    #[test]
    fn rejects_bad_expressions_with_location() {
        let text = r#"{"N": 1, "B": [1], "case": 1, "M": 1,
                       "kernels": [["1 + * 2"]], "f": ["t"]}"#;
        match load_config(text) {
            Err(Error::Config(msg)) => assert!(msg.contains("kernels[1][1]"), "{msg}"),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn parses_infinite_parameters() {
        let text = r#"{"N": 1, "B": [1], "case": 3, "M": 2,
                       "kernels": [["0 * h"]], "f": ["pi()"],
                       "parameters": {"h": "inf"},
                       "quadrature": {"mode": "paper"}}"#;
        let (problem, options) = load_config(text).unwrap();
        assert!(problem.parameters["h"].is_infinite());
        assert_eq!(options.mode, QuadratureMode::Paper);
    }

    #[test]
    fn zero_component_index_rejected() {
        let text = r#"{"N": 1, "B": [1], "case": 1, "M": 1,
                       "kernels": [["0"]], "f": ["t"],
                       "side_conditions": [{"type": "pin", "j": 0, "l": 0, "value": 1}]}"#;
        assert!(matches!(load_config(text), Err(Error::Config(_))));
    }
}
