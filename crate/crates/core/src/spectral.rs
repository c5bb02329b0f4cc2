//! Fourier-side analysis of the `H(θ)` automaton.
//!
//! With `X̃_n(ξ) = Σ_k e^{iξk} X_k(n)` the recurrence becomes the scalar
//! two-term recurrence
//!
//! ```text
//! X̃_{n+2}(ξ) = cos θ (e^{−iξ} − e^{iξ}) X̃_{n+1}(ξ) + X̃_n(ξ)
//! ```
//!
//! whose characteristic roots are `λ₊ = e^{iφ}` and `λ₋ = −e^{−iφ}` with
//! `cos φ = √(1 − cos²θ sin²ξ)` and `sin φ = −cos θ sin ξ`. Hence
//! `X̃_n = A λ₊ⁿ + B λ₋ⁿ`.
//!
//! [`closed_form_norm`] evaluates the exact split of `‖X(n)‖²` into an
//! `n`-independent part and a `(−1)ⁿ`-signed block of integrals over
//! `x ∈ [θ − π/2, 0]`. Those integrands carry a `1/√(cos²x − sin²θ)`
//! singularity at the left endpoint; substituting `sin x = −cos θ sin u`
//! gives `√(cos²x − sin²θ) = cos θ cos u` and
//! `dx / (cos x √(cos²x − sin²θ)) = du / cos²x`, so every integral becomes
//! a smooth integral over `u ∈ [0, π/2]`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::quadrature::{integrate, QuadratureOptions};
use crate::state::{Amplitude, InitialTriple};
use crate::{Error, Result, Theta};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralPoint {
    pub xi: f64,
    pub phi: f64,
    pub lambda_plus: Amplitude,
    pub lambda_minus: Amplitude,
}

impl SpectralPoint {
    pub fn cos_phi(&self) -> f64 {
        self.lambda_plus.re
    }
}

pub fn spectral_point(xi: f64, theta: Theta) -> SpectralPoint {
    let (sin_phi, cos_phi) = phi_parts(xi, theta);
    SpectralPoint {
        xi,
        phi: sin_phi.atan2(cos_phi),
        lambda_plus: Complex64::new(cos_phi, sin_phi),
        lambda_minus: Complex64::new(-cos_phi, sin_phi),
    }
}

/// `(sin φ, cos φ)`.
///
/// `cos²φ = (1 − c)(1 + c) + c² cos²ξ` with `c` the rounded `cos θ`, the same
/// `c` the automaton steps with. `1 − c` is exact and `cos ξ` keeps full
/// relative accuracy near `ξ = π/2`, where `sin ξ` does not, so `cos φ` stays
/// accurate as it approaches `sin θ`.
fn phi_parts(xi: f64, theta: Theta) -> (f64, f64) {
    let c = theta.cos();
    let (sx, cx) = xi.sin_cos();
    (-c * sx, ((1.0 - c) * (1.0 + c)).sqrt().hypot(c * cx))
}

/// `(X̃₀(ξ), X̃₁(ξ)) = (α, e^{−iξ}β + e^{iξ}γ)`.
pub fn fourier_initial(triple: &InitialTriple, xi: f64) -> (Amplitude, Amplitude) {
    let e = Complex64::from_polar(1.0, xi);
    (triple.alpha, e.conj() * triple.beta + e * triple.gamma)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierCoefficients {
    pub a: Amplitude,
    pub b: Amplitude,
}

/// `A(ξ)` and `B(ξ)` fixed by the two seed values.
pub fn fourier_coefficients(triple: &InitialTriple, theta: Theta, xi: f64) -> FourierCoefficients {
    let p = spectral_point(xi, theta);
    let (x0, x1) = fourier_initial(triple, xi);
    let e = p.lambda_plus;
    let denom = 2.0 * p.cos_phi();
    FourierCoefficients {
        a: (x0 * e.conj() + x1) / denom,
        b: (x0 * e - x1) / denom,
    }
}

/// `X̃_n(ξ) = A λ₊ⁿ + B λ₋ⁿ`.
///
/// Evaluated as `X̃₁ Sₙ + X̃₀ Sₙ₋₁` with `Sₙ = (λ₊ⁿ − λ₋ⁿ)/(λ₊ − λ₋)`. Near
/// `φ = ±π/2` the coefficients `A`, `B` blow up like `1/cos φ` and cancel, and
/// `nφ` sits next to a multiple of `π/2`; writing `Sₙ` through the distance
/// `δ = π/2 − |φ|` avoids both.
pub fn xt_closed(triple: &InitialTriple, theta: Theta, xi: f64, n: usize) -> Result<Amplitude> {
    let theta = theta.require_interior()?;
    let (x0, x1) = fourier_initial(triple, xi);
    if n == 0 {
        return Ok(x0);
    }
    let s = lucas_pair(xi, theta, n);
    Ok(x1 * s.0 + x0 * s.1)
}

/// `(Sₙ, Sₙ₋₁)` for `n ≥ 1`.
///
/// With `σ = sign sin φ`: `S₂ₘ = −iσ(−1)ᵐ sin(2mδ)/sin δ` and
/// `S₂ₘ₊₁ = (−1)ᵐ sin((2m+1)δ)/sin δ`.
fn lucas_pair(xi: f64, theta: Theta, n: usize) -> (Amplitude, Amplitude) {
    let (sin_phi, cos_phi) = phi_parts(xi, theta);
    let delta = cos_phi.atan2(sin_phi.abs());
    let sigma = if sin_phi < 0.0 { -1.0 } else { 1.0 };
    let s = |k: usize| {
        let r = (k as f64 * delta).sin() / cos_phi;
        let m = k / 2;
        let r = if m.is_multiple_of(2) { r } else { -r };
        if k.is_multiple_of(2) {
            Complex64::new(0.0, -sigma * r)
        } else {
            Complex64::new(r, 0.0)
        }
    };
    (s(n), s(n - 1))
}

/// `X̃_n(ξ)` by iterating the two-term recurrence from its seeds.
pub fn xt_recurrence(triple: &InitialTriple, theta: Theta, xi: f64, n: usize) -> Amplitude {
    let (mut prev, mut cur) = fourier_initial(triple, xi);
    if n == 0 {
        return prev;
    }
    let factor = Complex64::new(0.0, -2.0 * theta.cos() * xi.sin());
    for _ in 1..n {
        let next = factor * cur + prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Smallest power-of-two trapezoid grid that integrates `|X̃_n|²` exactly.
pub fn parseval_grid(n: usize) -> usize {
    (2 * n + 4).next_power_of_two()
}

/// `(1/2π) ∫ |X̃_n(ξ)|² dξ` by the trapezoid rule on `grid` equispaced nodes.
///
/// `|X̃_n|²` is a trigonometric polynomial of degree at most `2n`, so any
/// grid of at least `2n + 4` nodes is exact up to rounding.
pub fn parseval_norm(triple: &InitialTriple, theta: Theta, n: usize, grid: usize) -> Result<f64> {
    let theta = theta.require_interior()?;
    let required = 2 * n + 4;
    if grid < required {
        return Err(Error::GridTooCoarse {
            grid,
            step: n,
            required,
        });
    }
    let h = TAU / grid as f64;
    let mut sum = 0.0;
    for j in 0..grid {
        sum += xt_closed(triple, theta, h * j as f64, n)?.norm_sqr();
    }
    Ok(sum / grid as f64)
}

/// `(‖A‖*², ‖B‖*²)` where `‖f‖*² = (1/2π) ∫₀^{2π} |f|² dξ`.
///
/// The integrands are smooth and periodic, so the trapezoid rule is
/// refined by doubling until successive values agree to `tol`.
pub fn coefficient_norms(triple: &InitialTriple, theta: Theta, tol: f64) -> Result<(f64, f64)> {
    let theta = theta.require_interior()?;
    let rule = |grid: usize| {
        let h = TAU / grid as f64;
        let (mut sa, mut sb) = (0.0, 0.0);
        for j in 0..grid {
            let c = fourier_coefficients(triple, theta, h * j as f64);
            sa += c.a.norm_sqr();
            sb += c.b.norm_sqr();
        }
        (sa / grid as f64, sb / grid as f64)
    };
    let mut grid = 64;
    let mut prev = rule(grid);
    let mut change = f64::INFINITY;
    while grid < 1 << 22 {
        grid *= 2;
        let cur = rule(grid);
        change = (cur.0 - prev.0).abs().max((cur.1 - prev.1).abs());
        if change <= tol * cur.0.max(cur.1).max(1.0) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Quadrature {
        estimate: change,
        intervals: grid,
    })
}

/// `lim_{n→∞} ‖X(n)‖²`, the `n`-independent part of the exact norm.
pub fn norm_limit(triple: &InitialTriple, theta: Theta) -> Result<f64> {
    let theta = theta.require_interior()?;
    let (s, c) = theta.radians().sin_cos();
    let r = (1.0 - s) / c;
    let total = triple.alpha_sq() + triple.edge_sq();
    Ok((total - triple.alpha_cross_diff() * r - triple.edge_cross() * r * r) / (2.0 * s))
}

/// `‖X(n)‖² = steady + oscillatory`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormDecomposition {
    pub n: usize,
    pub steady: f64,
    /// Already carries the `(−1)ⁿ/π` factor.
    pub oscillatory: f64,
    /// Absolute error estimate of the quadrature, scaled like `oscillatory`.
    pub error_estimate: f64,
}

impl NormDecomposition {
    pub fn total(&self) -> f64 {
        self.steady + self.oscillatory
    }
}

/// Target absolute error of the oscillatory integrals.
pub const CLOSED_FORM_TOL: f64 = 1e-10;

pub fn closed_form_norm(
    triple: &InitialTriple,
    theta: Theta,
    n: usize,
) -> Result<NormDecomposition> {
    let theta = theta.require_interior()?;
    let steady = norm_limit(triple, theta)?;
    let c = theta.cos();
    let alpha_sq = triple.alpha_sq();
    let p = triple.alpha_cross_diff();
    let s = triple.edge_sq();
    let q = triple.edge_cross();
    let m = n as f64;

    // One integrand for all four kernels. With √(cos²x − sin²θ) = cos θ cos u
    // the βγ̄-weighted pair collapses to −q (2cos²u − 1) cos(2nx) / cos²x.
    let integrand = |u: f64| {
        let sin_u = u.sin();
        let sin_x = -c * sin_u;
        let cos_x_sq = 1.0 - sin_x * sin_x;
        let x = sin_x.asin();
        let cos_2u = 1.0 - 2.0 * sin_u * sin_u;
        let cos_2n = cos_mul(2.0 * m, x);
        (alpha_sq * cos_mul(2.0 * m - 2.0, x)
            - p / c * sin_x * sin_mul(2.0 * m - 1.0, x)
            - (s + q * cos_2u) * cos_2n)
            / cos_x_sq
    };
    let opts = QuadratureOptions {
        abs_tol: CLOSED_FORM_TOL,
        rel_tol: 0.0,
        initial_panels: (n / 2).max(2),
        max_intervals: 20_000,
    };
    let est = integrate(integrand, 0.0, FRAC_PI_2, &opts)?;
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(NormDecomposition {
        n,
        steady,
        oscillatory: sign * est.value / PI,
        error_estimate: est.error / PI,
    })
}

/// `h_n(x) = cos(2(n−1)x) − 2 sin x sin((2n−1)x) − cos(2nx)`.
pub fn h_n_value(x: f64, n: usize) -> f64 {
    let m = n as f64;
    cos_mul(2.0 * m - 2.0, x) - 2.0 * x.sin() * sin_mul(2.0 * m - 1.0, x) - cos_mul(2.0 * m, x)
}

/// `cos(k·x)` with the rounding error of the product `k·x` corrected to
/// first order; `k` must be an exactly representable integer.
fn cos_mul(k: f64, x: f64) -> f64 {
    let p = k * x;
    let e = k.mul_add(x, -p);
    p.cos() - p.sin() * e
}

fn sin_mul(k: f64, x: f64) -> f64 {
    let p = k * x;
    let e = k.mul_add(x, -p);
    p.sin() + p.cos() * e
}
