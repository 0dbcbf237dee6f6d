//! The four Chebyshev families: evaluation, roots, endpoint values, weights,
//! orthogonality constants and the closed-form Cauchy principal-value transform.
//!
//! All four kinds share the recurrence `P_{j+1} = 2x P_j - P_{j-1}` and differ
//! only in the degree-one seed. Evaluation goes through the recurrence rather
//! than trig compositions so endpoint values are exact.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// One of the four classical Chebyshev families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum ChebyshevKind {
    /// `T_j(cos θ) = cos(jθ)`
    First,
    /// `U_j(cos θ) = sin((j+1)θ) / sin θ`
    Second,
    /// `V_j(cos θ) = cos((j+1/2)θ) / cos(θ/2)`
    Third,
    /// `W_j(cos θ) = sin((j+1/2)θ) / sin(θ/2)`
    Fourth,
}

impl ChebyshevKind {
    pub const ALL: [ChebyshevKind; 4] = [
        ChebyshevKind::First,
        ChebyshevKind::Second,
        ChebyshevKind::Third,
        ChebyshevKind::Fourth,
    ];

    /// Numeric label 1..=4 of the family.
    pub fn index(self) -> u8 {
        match self {
            ChebyshevKind::First => 1,
            ChebyshevKind::Second => 2,
            ChebyshevKind::Third => 3,
            ChebyshevKind::Fourth => 4,
        }
    }

    pub fn from_index(nu: u8) -> Result<Self> {
        match nu {
            1 => Ok(ChebyshevKind::First),
            2 => Ok(ChebyshevKind::Second),
            3 => Ok(ChebyshevKind::Third),
            4 => Ok(ChebyshevKind::Fourth),
            other => Err(Error::InvalidArgument(format!(
                "Chebyshev kind index must be 1..=4, got {other}"
            ))),
        }
    }

    /// Numerator of the weight attached to this family: one of
    /// `1`, `1-t^2`, `1+t`, `1-t`.
    pub fn weight_numerator(self, t: f64) -> f64 {
        match self {
            ChebyshevKind::First => 1.0,
            ChebyshevKind::Second => 1.0 - t * t,
            ChebyshevKind::Third => 1.0 + t,
            ChebyshevKind::Fourth => 1.0 - t,
        }
    }
}

/// Weight specification `λ_ν(t) / sqrt(1-t²)` for one family.
#[derive(Debug, Clone, Copy)]
pub struct WeightSpec {
    pub kind: ChebyshevKind,
}

impl WeightSpec {
    pub fn new(kind: ChebyshevKind) -> Self {
        WeightSpec { kind }
    }

    /// λ_ν(t), the polynomial numerator of the weight.
    pub fn numerator(&self, t: f64) -> f64 {
        self.kind.weight_numerator(t)
    }

    /// The full weight `λ_ν(t) / sqrt(1-t²)` on the open interval.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        weight(self.kind, t)
    }
}

/// Evaluate `P_{ν,degree}(x)` for `x` in `[-1, 1]`.
pub fn eval_poly(kind: ChebyshevKind, degree: usize, x: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::OutOfDomain {
            value: x,
            domain: "[-1, 1]",
        });
    }
    Ok(eval_poly_unchecked(kind, degree, x))
}

/// Recurrence evaluation without the domain check. Outside `[-1, 1]` this is
/// the polynomial extension, which quadrature and assembly never need.
pub fn eval_poly_unchecked(kind: ChebyshevKind, degree: usize, x: f64) -> f64 {
    let seed = match kind {
        ChebyshevKind::First => x,
        ChebyshevKind::Second => 2.0 * x,
        ChebyshevKind::Third => 2.0 * x - 1.0,
        ChebyshevKind::Fourth => 2.0 * x + 1.0,
    };
    match degree {
        0 => 1.0,
        1 => seed,
        _ => {
            let mut prev = 1.0;
            let mut cur = seed;
            for _ in 2..=degree {
                let next = 2.0 * x * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// Roots of `P_{ν,M+1}`, returned for n = 1..M+1 (strictly decreasing in x).
pub fn roots(kind: ChebyshevKind, m: usize) -> Vec<f64> {
    let count = m + 1;
    (1..=count)
        .map(|n| {
            let n = n as f64;
            let angle = match kind {
                ChebyshevKind::First => (2.0 * n - 1.0) * PI / (2.0 * count as f64),
                ChebyshevKind::Second => n * PI / (count as f64 + 1.0),
                ChebyshevKind::Third => (2.0 * n - 1.0) * PI / (2.0 * count as f64 + 1.0),
                ChebyshevKind::Fourth => 2.0 * n * PI / (2.0 * count as f64 + 1.0),
            };
            angle.cos()
        })
        .collect()
}

/// The weight `λ_ν(t) / sqrt(1-t²)`, valid strictly inside `(-1, 1)`.
pub fn weight(kind: ChebyshevKind, t: f64) -> Result<f64> {
    if t.abs() >= 1.0 {
        return Err(Error::OutOfDomain {
            value: t,
            domain: "(-1, 1)",
        });
    }
    Ok(kind.weight_numerator(t) / (1.0 - t * t).sqrt())
}

/// `h_{ν,j} = ∫ w_ν P_{ν,j}² dt`.
pub fn orthogonality_constant(kind: ChebyshevKind, degree: usize) -> f64 {
    match kind {
        ChebyshevKind::First => {
            if degree == 0 {
                PI
            } else {
                PI / 2.0
            }
        }
        ChebyshevKind::Second => PI / 2.0,
        ChebyshevKind::Third | ChebyshevKind::Fourth => PI,
    }
}

/// Closed-form image of a weighted Chebyshev polynomial under the Cauchy
/// principal-value integral: `∫ w_ν(τ) P_{ν,j}(τ)/(τ-t) dτ = sign·π·P_{μ,d}(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PvImage {
    pub target_kind: ChebyshevKind,
    /// `None` encodes the zero polynomial (arises only for ν=1, j=0).
    pub target_degree: Option<usize>,
    pub sign: f64,
    /// Always π; kept explicit so evaluation sites read like the transform.
    pub scale: f64,
}

impl PvImage {
    /// Value of the transform at `t`, including sign and π.
    pub fn eval(&self, t: f64) -> f64 {
        match self.target_degree {
            None => 0.0,
            Some(d) => self.sign * self.scale * eval_poly_unchecked(self.target_kind, d, t),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.target_degree.is_none()
    }
}

/// The principal-value transform of `w_ν P_{ν,j}`:
/// ν=1 → π U_{j-1}, ν=2 → -π T_{j+1}, ν=3 → π W_j, ν=4 → -π V_j.
pub fn pv_transform(kind: ChebyshevKind, degree: usize) -> PvImage {
    let (target_kind, target_degree, sign) = match kind {
        // U_{-1} ≡ 0, so the j = 0 image vanishes identically.
        ChebyshevKind::First => (
            ChebyshevKind::Second,
            degree.checked_sub(1),
            1.0,
        ),
        ChebyshevKind::Second => (ChebyshevKind::First, Some(degree + 1), -1.0),
        ChebyshevKind::Third => (ChebyshevKind::Fourth, Some(degree), 1.0),
        ChebyshevKind::Fourth => (ChebyshevKind::Third, Some(degree), -1.0),
    };
    PvImage {
        target_kind,
        target_degree,
        sign,
        scale: PI,
    }
}
