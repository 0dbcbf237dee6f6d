//! Closed-form solutions of the dominant equation
//! `∫ φ(τ)/(τ-t) dτ = f(t)` in all four boundedness cases, obtained by
//! inverting the principal-value transform term by term. Serves as the
//! independent oracle for the full spectral pipeline.

use std::f64::consts::PI;

use crate::chebyshev::{pv_transform, weight, ChebyshevKind};
use crate::error::{Error, Result};
use crate::quadrature::{case_pairing, gauss_rule, project, SeriesCoefficients};

/// Solution of the dominant equation: a coefficient vector on the case's
/// τ-side family. In case 1 the degree-0 coefficient is the free constant.
#[derive(Debug, Clone)]
pub struct DominantSolution {
    pub kind: ChebyshevKind,
    pub coeffs: Vec<f64>,
    /// The arbitrary constant, present exactly in case 1.
    pub a0: Option<f64>,
}

impl DominantSolution {
    pub fn regular_part(&self, tau: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(l, &c)| c * crate::chebyshev::eval_poly_unchecked(self.kind, l, tau))
            .sum()
    }

    pub fn evaluate(&self, tau: f64) -> Result<f64> {
        Ok(weight(self.kind, tau)? * self.regular_part(tau))
    }
}

/// `∫ f(t)/sqrt(1-t²) dt`, the left side of the case-2 solvability
/// condition, by first-kind Gauss–Chebyshev quadrature.
pub fn consistency_residual<F: Fn(f64) -> f64>(f: F, n_nodes: usize) -> Result<f64> {
    Ok(gauss_rule(ChebyshevKind::First, n_nodes)?.integrate(f))
}

/// Solve the dominant equation spectrally to output degree `l_max`.
///
/// `f/π` is expanded on the case's t-side family and each basis element is
/// pulled back through the inverse of the principal-value transform. `a0` is
/// required in case 1 (where the transform annihilates the constant term)
/// and rejected elsewhere. Case 2 demands the solvability condition; its
/// violation is reported with the residual attached.
pub fn dominant_solve<F>(
    case: ChebyshevKind,
    f: F,
    a0: Option<f64>,
    l_max: usize,
) -> Result<DominantSolution>
where
    F: Fn(f64) -> f64,
{
    let (_, t_kind) = case_pairing(case);
    let n_nodes = (2 * (l_max + 2) + 16).max(48);
    match case {
        ChebyshevKind::First => {
            let a0 = a0.ok_or_else(|| {
                Error::InvalidArgument("case 1 needs the free constant a0".to_string())
            })?;
            let mut coeffs = vec![a0];
            if l_max >= 1 {
                let d = project(|t| f(t) / PI, t_kind, l_max - 1, n_nodes)?;
                coeffs.extend_from_slice(&d.coeffs);
            }
            Ok(DominantSolution {
                kind: case,
                coeffs,
                a0: Some(a0),
            })
        }
        ChebyshevKind::Second => {
            reject_a0(a0)?;
            let residual = consistency_residual(&f, n_nodes)?;
            if residual.abs() > 1e-8 {
                return Err(Error::ConsistencyViolation { residual });
            }
            let d = project(|t| f(t) / PI, t_kind, l_max + 1, n_nodes)?;
            let coeffs = (0..=l_max).map(|l| -d.coeffs[l + 1]).collect();
            Ok(DominantSolution {
                kind: case,
                coeffs,
                a0: None,
            })
        }
        ChebyshevKind::Third => {
            reject_a0(a0)?;
            let d = project(|t| f(t) / PI, t_kind, l_max, n_nodes)?;
            Ok(DominantSolution {
                kind: case,
                coeffs: d.coeffs,
                a0: None,
            })
        }
        ChebyshevKind::Fourth => {
            reject_a0(a0)?;
            let d = project(|t| f(t) / PI, t_kind, l_max, n_nodes)?;
            Ok(DominantSolution {
                kind: case,
                coeffs: d.coeffs.iter().map(|&v| -v).collect(),
                a0: None,
            })
        }
    }
}

fn reject_a0(a0: Option<f64>) -> Result<()> {
    if a0.is_some() {
        return Err(Error::InvalidArgument(
            "the free constant a0 only exists in case 1".to_string(),
        ));
    }
    Ok(())
}

/// Coefficients of the dominant operator applied to a trial series: maps a
/// τ-side coefficient vector through the transform and re-expands on the
/// t-side family. Used by tests to confirm inverses.
pub fn forward_dominant(series: &SeriesCoefficients, t: f64) -> f64 {
    series
        .coeffs
        .iter()
        .enumerate()
        .map(|(l, &c)| c * pv_transform(series.kind, l).eval(t))
        .sum()
}
