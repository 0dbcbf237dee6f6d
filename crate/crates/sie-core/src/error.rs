//! Error type shared by the numerical modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("argument {value} outside the domain {domain}")]
    OutOfDomain { value: f64, domain: &'static str },

    #[error("non-finite value {value} evaluating {what} at node {node}")]
    EvalAtNode {
        what: &'static str,
        node: f64,
        value: f64,
    },

    #[error("kernel K[{i}][{j}] failed at (t, tau) = ({t}, {tau}): {source}")]
    KernelEval {
        i: usize,
        j: usize,
        t: f64,
        tau: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("solvability condition violated: weighted mean of the right-hand side is {residual}, expected 0")]
    ConsistencyViolation { residual: f64 },

    #[error("unknown builtin problem `{0}`")]
    UnknownBuiltin(String),

    #[error("parameter `{name}`: {message}")]
    Parameter { name: String, message: String },

    #[error("expression parse error: {0}")]
    Parse(#[from] crate::expr::ParseError),

    #[error("expression evaluation error: {0}")]
    Eval(#[from] crate::expr::EvalError),

    #[error("config error: {0}")]
    Config(String),

    #[error("problem validation failed:\n{}", .0.join("\n"))]
    Invalid(Vec<String>),
}

pub type Result<T> = std::result::Result<T, Error>;
