//! Shared oracles for the integration tests: adaptive quadrature and the
//! principal-value integral evaluated without the closed-form transform.
//!
//! Weighted integrals over [-1, 1] are computed in the θ = arccos τ variable
//! where every weight numerator is smooth, and the Cauchy pole is removed by
//! subtraction: `PV ∫ g(θ)/(cos θ - t) dθ = ∫ (g(θ) - g(θ_t))/(cos θ - t) dθ`
//! because the pure-pole integral over [0, π] vanishes.

#![allow(dead_code)]

use std::f64::consts::PI;

pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, m: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b))
    }
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let left = simpson(f, a, 0.5 * (a + m), m);
        let right = simpson(f, m, 0.5 * (m + b), b);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        recurse(f, a, m, left, tol / 2.0, depth - 1) + recurse(f, m, b, right, tol / 2.0, depth - 1)
    }
    let m = 0.5 * (a + b);
    recurse(f, a, b, simpson(f, a, m, b), tol, 28)
}

/// `PV ∫_0^π g(θ) / (cos θ - t) dθ` for smooth `g` and interior `t`.
pub fn pv_theta_integral<F: Fn(f64) -> f64>(g: &F, t: f64, tol: f64) -> f64 {
    assert!(t.abs() < 1.0);
    let theta_t = t.acos();
    let g_t = g(theta_t);
    let delta = 1e-6;
    let dg = (g(theta_t + delta) - g(theta_t - delta)) / (2.0 * delta);
    let integrand = |theta: f64| {
        if (theta - theta_t).abs() < 1e-7 {
            dg / (-theta_t.sin())
        } else {
            (g(theta) - g_t) / (theta.cos() - t)
        }
    };
    adaptive_simpson(&integrand, 0.0, PI, tol)
}

/// Trig closed form of `λ_ν(cos θ) · P_{ν,j}(cos θ)`, the weighted basis
/// polynomial expressed without any recurrence machinery.
pub fn weighted_basis_theta(nu: u8, j: usize, theta: f64) -> f64 {
    let jf = j as f64;
    match nu {
        1 => (jf * theta).cos(),
        2 => theta.sin() * ((jf + 1.0) * theta).sin(),
        3 => 2.0 * (theta / 2.0).cos() * ((jf + 0.5) * theta).cos(),
        4 => 2.0 * (theta / 2.0).sin() * ((jf + 0.5) * theta).sin(),
        _ => unreachable!(),
    }
}

/// The closed-form dominant-equation solutions evaluated by adaptive
/// principal-value quadrature (the direct route, independent of the spectral
/// inversion).
pub fn direct_dominant_solution<F: Fn(f64) -> f64>(
    nu: u8,
    f: &F,
    a0: f64,
    tau: f64,
    tol: f64,
) -> f64 {
    let s = (1.0 - tau * tau).sqrt();
    match nu {
        1 => {
            let pv = pv_theta_integral(&|th: f64| th.sin().powi(2) * f(th.cos()), tau, tol);
            a0 / s - pv / (PI * PI * s)
        }
        2 => {
            let pv = pv_theta_integral(&|th: f64| f(th.cos()), tau, tol);
            -s / (PI * PI) * pv
        }
        3 => {
            let pv = pv_theta_integral(
                &|th: f64| 2.0 * (th / 2.0).sin().powi(2) * f(th.cos()),
                tau,
                tol,
            );
            -((1.0 + tau) / (1.0 - tau)).sqrt() / (PI * PI) * pv
        }
        4 => {
            let pv = pv_theta_integral(
                &|th: f64| 2.0 * (th / 2.0).cos().powi(2) * f(th.cos()),
                tau,
                tol,
            );
            -((1.0 - tau) / (1.0 + tau)).sqrt() / (PI * PI) * pv
        }
        _ => unreachable!(),
    }
}

/// Evaluate a polynomial given by monomial coefficients (`c[0] + c[1] x + …`).
pub fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}
