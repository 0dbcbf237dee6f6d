//! The approximate solution vector: `φ_j(τ) = w_ν(τ) Σ_l β_{jl} P_{ν,l}(τ)`,
//! its endpoint intensity factors, and the exact application of the full
//! integral operator for residual checks.

use std::sync::Arc;

use crate::chebyshev::{eval_poly_unchecked, pv_transform, weight, ChebyshevKind};
use crate::error::{Error, Result};
use crate::problem::Problem;
use crate::quadrature::gauss_rule;

/// Which endpoint of the interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Endpoint {
    Plus,
    Minus,
}

impl Endpoint {
    pub fn value(self) -> f64 {
        match self {
            Endpoint::Plus => 1.0,
            Endpoint::Minus => -1.0,
        }
    }
}

/// A solved coefficient matrix together with the problem it solves.
#[derive(Debug, Clone)]
pub struct SpectralSolution {
    pub kind: ChebyshevKind,
    /// N × (M+1), plain series convention.
    pub beta: Vec<Vec<f64>>,
    pub problem: Arc<Problem>,
}

impl SpectralSolution {
    pub fn new(problem: Arc<Problem>, beta: Vec<Vec<f64>>) -> Self {
        SpectralSolution {
            kind: problem.case,
            beta,
            problem,
        }
    }

    /// The polynomial factor `ψ_j(τ) = Σ_l β_{jl} P_{ν,l}(τ)`, finite on the
    /// closed interval.
    pub fn regular_part(&self, j: usize, tau: f64) -> f64 {
        self.beta[j]
            .iter()
            .enumerate()
            .map(|(l, &c)| c * eval_poly_unchecked(self.kind, l, tau))
            .sum()
    }

    /// `φ_j(τ)` strictly inside the interval; endpoint values may diverge,
    /// use `regular_part` or `sif` there.
    pub fn evaluate(&self, j: usize, tau: f64) -> Result<f64> {
        let w = weight(self.kind, tau)?;
        Ok(w * self.regular_part(j, tau))
    }

    /// Endpoint limit of `sqrt(1-τ²)·φ_j(τ)`, computed from coefficient sums
    /// so the value is exact. Zero at any endpoint where the case forces the
    /// solution bounded.
    pub fn sif(&self, j: usize, endpoint: Endpoint) -> f64 {
        let x = endpoint.value();
        match (self.kind, endpoint) {
            // λ_1 = 1: the limit is ψ_j(±1) with T_l(±1) = (±1)^l.
            (ChebyshevKind::First, _) => self
                .beta[j]
                .iter()
                .enumerate()
                .map(|(l, &c)| c * if x < 0.0 && l % 2 == 1 { -1.0 } else { 1.0 })
                .sum(),
            (ChebyshevKind::Second, _) => 0.0,
            // λ_3 = 1+τ: sqrt(1-τ²)·φ = (1+τ)ψ → 2ψ(1) at +1, 0 at -1.
            (ChebyshevKind::Third, Endpoint::Plus) => 2.0 * self.regular_part(j, 1.0),
            (ChebyshevKind::Third, Endpoint::Minus) => 0.0,
            (ChebyshevKind::Fourth, Endpoint::Minus) => 2.0 * self.regular_part(j, -1.0),
            (ChebyshevKind::Fourth, Endpoint::Plus) => 0.0,
        }
    }

    /// Left side of equation `i` at interior `t`: the dominant part goes
    /// through the closed-form principal-value transform, the kernel part
    /// through an n-node Gauss rule.
    pub fn apply_operator(&self, i: usize, t: f64, n_nodes: usize) -> Result<f64> {
        if t.abs() >= 1.0 {
            return Err(Error::OutOfDomain {
                value: t,
                domain: "(-1, 1)",
            });
        }
        let p = &self.problem;
        let mut dominant = 0.0;
        for j in 0..p.n {
            let b = p.b_entry(i, j);
            if b == 0.0 {
                continue;
            }
            let mut sum = 0.0;
            for (l, &c) in self.beta[j].iter().enumerate() {
                sum += c * pv_transform(self.kind, l).eval(t);
            }
            dominant += b * sum;
        }

        let rule = gauss_rule(self.kind, n_nodes)?;
        let mut kernel_part = 0.0;
        for j in 0..p.n {
            let mut sum = 0.0;
            for (&tau, &w) in rule.nodes.iter().zip(&rule.weights) {
                let k = p.kernel_value(i, j, t, tau)?;
                sum += w * k * self.regular_part(j, tau);
            }
            kernel_part += sum;
        }
        Ok(dominant + kernel_part)
    }

    /// `(τ, φ_1(τ), …, φ_N(τ))` on a uniform interior grid, for plotting.
    pub fn sample_rows(&self, points: usize, lo: f64, hi: f64) -> Result<Vec<Vec<f64>>> {
        if points == 0 || lo >= hi || lo <= -1.0 || hi >= 1.0 {
            return Err(Error::InvalidArgument(format!(
                "sampling grid must lie strictly inside (-1, 1) with lo < hi; got {points} points on [{lo}, {hi}]"
            )));
        }
        let mut rows = Vec::with_capacity(points);
        for idx in 0..points {
            let tau = if points == 1 {
                lo
            } else {
                lo + (hi - lo) * idx as f64 / (points - 1) as f64
            };
            let mut row = Vec::with_capacity(self.problem.n + 1);
            row.push(tau);
            for j in 0..self.problem.n {
                row.push(self.evaluate(j, tau)?);
            }
            rows.push(row);
        }
        Ok(rows)
    }
}
