//! Initial-state classes of the `H(θ)` automaton.
//!
//! * The *symmetric* class is the union of three branches:
//!   `β + γ = 0`; or `|β| = |γ| > 0` with `α = 0`; or `|β| = |γ| > 0`,
//!   `α ≠ 0` and `θ_β + θ_γ − 2θ_α ≡ π (mod 2π)`. Triples in it, and only
//!   those, give `|X_k(n)| = |X_{−k}(n)|` and `m(n) = 0` for every `n`.
//! * The *conserving* class for `c ≥ 0` is cut out by `|α|² = c`,
//!   `|β|² + |γ|² = c`, `βγ̄ + β̄γ = 0` and
//!   `α(β̄ − γ̄) + ᾱ(β − γ) = 2c cos θ`. Triples in it, and only those, keep
//!   `‖X(n)‖² = c` for every `n`. The two classes never meet for `c > 0`.
//!
//! The checkers here compare these algebraic predicates against simulated
//! trajectories. A finite horizon suffices because violations always show
//! up by `n = 3` through the closed forms of `m(1..3)` and `‖X(0..3)‖²`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::rca::{self, RcaState};
use crate::state::{Amplitude, InitialTriple};
use crate::{Error, Result, Theta};

/// Tolerance of the algebraic membership equalities.
pub const MEMBERSHIP_TOL: f64 = 1e-12;
/// Tolerance of simulated symmetry/conservation over hundreds of steps.
pub const EMPIRICAL_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerpBranch {
    /// `β + γ = 0`
    AntisymmetricEdges,
    /// `|β| = |γ| > 0`, `α = 0`
    EmptyCenter,
    /// `|β| = |γ| > 0`, `α ≠ 0`, `θ_β + θ_γ − 2θ_α ≡ π`
    PhaseLocked,
}

/// First branch of the symmetric class that `triple` satisfies, if any.
pub fn phi_perp_branch(triple: &InitialTriple) -> Option<PerpBranch> {
    let tol = MEMBERSHIP_TOL;
    let InitialTriple { alpha, beta, gamma } = *triple;
    if (beta + gamma).norm() <= tol {
        return Some(PerpBranch::AntisymmetricEdges);
    }
    let (nb, ng, na) = (beta.norm(), gamma.norm(), alpha.norm());
    if (nb - ng).abs() > tol || nb <= tol {
        return None;
    }
    if na <= tol {
        return Some(PerpBranch::EmptyCenter);
    }
    // e^{i(θ_β + θ_γ − 2θ_α)} without extracting any argument
    let phase = beta * gamma * alpha.conj() * alpha.conj() / (nb * ng * na * na);
    ((phase + 1.0).norm() <= tol).then_some(PerpBranch::PhaseLocked)
}

pub fn in_phi_perp(triple: &InitialTriple) -> bool {
    phi_perp_branch(triple).is_some()
}

/// Residuals of the four defining equalities of the conserving class.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StarResiduals {
    pub center: f64,
    pub edges: f64,
    pub edge_cross: f64,
    pub phase: f64,
}

impl StarResiduals {
    pub fn max(&self) -> f64 {
        self.center
            .max(self.edges)
            .max(self.edge_cross)
            .max(self.phase)
    }
}

fn check_constant(c: f64) -> Result<f64> {
    if c.is_finite() && c >= 0.0 {
        Ok(c)
    } else {
        Err(Error::InvalidConstant(c))
    }
}

pub fn phi_star_residuals(triple: &InitialTriple, c: f64, theta: Theta) -> Result<StarResiduals> {
    let theta = theta.require_interior()?;
    let c = check_constant(c)?;
    Ok(StarResiduals {
        center: (triple.alpha_sq() - c).abs(),
        edges: (triple.edge_sq() - c).abs(),
        edge_cross: triple.edge_cross().abs(),
        phase: (triple.alpha_cross_diff() - 2.0 * c * theta.cos()).abs(),
    })
}

/// For `c = 0` this accepts exactly the zero triple.
pub fn in_phi_star(triple: &InitialTriple, c: f64, theta: Theta) -> Result<bool> {
    let residuals = phi_star_residuals(triple, c, theta)?;
    if c == 0.0 {
        return Ok(triple.is_zero(MEMBERSHIP_TOL));
    }
    Ok(residuals.max() <= MEMBERSHIP_TOL)
}

/// Outcome of checking a dynamical property over `n = 0..=steps_checked`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalCheck {
    pub holds: bool,
    pub max_violation: f64,
    pub steps_checked: usize,
}

fn empirical(
    triple: &InitialTriple,
    theta: Theta,
    n_max: usize,
    violation: impl Fn(&crate::AmplitudeRow) -> f64,
) -> EmpiricalCheck {
    let mut state = RcaState::initial(triple);
    let mut worst = violation(state.current());
    for _ in 0..n_max {
        worst = worst.max(violation(state.next()));
        state = state.step_theta(theta);
    }
    EmpiricalCheck {
        holds: worst < EMPIRICAL_TOL,
        max_violation: worst,
        steps_checked: n_max,
    }
}

/// `max_{n ≤ n_max, k} | |X_k(n)| − |X_{−k}(n)| |`
pub fn empirical_symmetric(triple: &InitialTriple, theta: Theta, n_max: usize) -> EmpiricalCheck {
    empirical(triple, theta, n_max, |row| {
        let reach = row.sites().start().abs().max(row.sites().end().abs());
        (0..=reach)
            .map(|k| (row.get(k).norm() - row.get(-k).norm()).abs())
            .fold(0.0, f64::max)
    })
}

/// `max_{n ≤ n_max} |m(n)|`
pub fn empirical_zero_moment(triple: &InitialTriple, theta: Theta, n_max: usize) -> EmpiricalCheck {
    empirical(triple, theta, n_max, |row| row.first_moment().abs())
}

/// `max_{n ≤ n_max} |‖X(n)‖² − c|`
pub fn empirical_conserved(
    triple: &InitialTriple,
    theta: Theta,
    c: f64,
    n_max: usize,
) -> EmpiricalCheck {
    empirical(triple, theta, n_max, |row| (row.norm_sq() - c).abs())
}

/// Largest of `|m(1)|, |m(2)|, |m(3)|` from their closed forms.
pub fn moment_witness(triple: &InitialTriple, theta: Theta) -> f64 {
    rca::closed_moments(triple, theta)
        .iter()
        .map(|m| m.abs())
        .fold(0.0, f64::max)
}

/// Largest of `|‖X(n)‖² − c|` over `n = 0..=3` from the closed forms.
pub fn norm_witness(triple: &InitialTriple, theta: Theta, c: f64) -> f64 {
    rca::small_n_norms(triple, theta)
        .iter()
        .map(|v| (v - c).abs())
        .fold(0.0, f64::max)
}

/// Deterministic per-sample generator: stream `index` of the ChaCha8 keyed by `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform point of the closed unit disc.
pub fn unit_disc<R: Rng + ?Sized>(rng: &mut R) -> Amplitude {
    let r: f64 = rng.random::<f64>().sqrt();
    Complex64::from_polar(r, rng.random_range(0.0..TAU))
}

/// Uniform point of the unit polydisc.
pub fn random_triple<R: Rng + ?Sized>(rng: &mut R) -> InitialTriple {
    InitialTriple {
        alpha: unit_disc(rng),
        beta: unit_disc(rng),
        gamma: unit_disc(rng),
    }
}

fn nonzero_disc<R: Rng + ?Sized>(rng: &mut R) -> Amplitude {
    loop {
        let z = unit_disc(rng);
        if z.norm() > 1e-3 {
            return z;
        }
    }
}

/// Draws from the symmetric class, picking each of the three branches with
/// probability 1/3.
pub fn sample_phi_perp<R: Rng + ?Sized>(rng: &mut R) -> InitialTriple {
    match rng.random_range(0..3) {
        0 => {
            let beta = unit_disc(rng);
            InitialTriple {
                alpha: unit_disc(rng),
                beta,
                gamma: -beta,
            }
        }
        1 => {
            let beta = nonzero_disc(rng);
            InitialTriple {
                alpha: Complex64::new(0.0, 0.0),
                beta,
                gamma: beta * Complex64::from_polar(1.0, rng.random_range(0.0..TAU)),
            }
        }
        _ => {
            let alpha = nonzero_disc(rng);
            let beta = nonzero_disc(rng);
            let gamma_arg = PI + 2.0 * alpha.arg() - beta.arg();
            InitialTriple {
                alpha,
                beta,
                gamma: Complex64::from_polar(beta.norm(), gamma_arg),
            }
        }
    }
}

/// Draws from the conserving class for `c > 0`.
///
/// `|β| = √c cos s`, `|γ| = √c sin s` with `arg γ = arg β ± π/2`, which makes
/// `βγ̄` imaginary and `|β − γ| = √c`. The phase of `α` then solves
/// `cos(θ_α − θ_{β−γ}) = c cos θ / (√c |β − γ|)`.
pub fn sample_phi_star<R: Rng + ?Sized>(
    c: f64,
    theta: Theta,
    rng: &mut R,
) -> Result<InitialTriple> {
    let theta = theta.require_interior()?;
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidConstant(c));
    }
    let root = c.sqrt();
    let split = rng.random_range(0.0..=std::f64::consts::FRAC_PI_2);
    let beta_arg = rng.random_range(0.0..TAU);
    let turn = if rng.random::<bool>() {
        0.5 * PI
    } else {
        -0.5 * PI
    };
    let beta = Complex64::from_polar(root * split.cos(), beta_arg);
    let gamma = Complex64::from_polar(root * split.sin(), beta_arg + turn);
    let diff = beta - gamma;
    let required = c * theta.cos() / (root * diff.norm());
    if required.is_nan() || required.abs() > 1.0 {
        return Err(Error::Unsatisfiable(format!(
            "phase cosine {required} outside [-1, 1]"
        )));
    }
    let offset = required.acos();
    let alpha_arg = diff.arg()
        + if rng.random::<bool>() {
            offset
        } else {
            -offset
        };
    Ok(InitialTriple {
        alpha: Complex64::from_polar(root, alpha_arg),
        beta,
        gamma,
    })
}

/// Uniform polydisc draw that `reject` does not flag.
pub fn sample_excluding<R: Rng + ?Sized>(
    rng: &mut R,
    reject: impl Fn(&InitialTriple) -> bool,
) -> InitialTriple {
    loop {
        let t = random_triple(rng);
        if !reject(&t) {
            return t;
        }
    }
}

/// Rescales `α` and `(β, γ)` separately to `|α|² = c` and `|β|² + |γ|² = c`.
/// Each branch of the symmetric class is invariant under these scalings.
pub fn match_norms(triple: &InitialTriple, c: f64) -> InitialTriple {
    let root = c.sqrt();
    let na = triple.alpha.norm();
    let ne = triple.edge_sq().sqrt();
    InitialTriple {
        alpha: if na > 0.0 {
            triple.alpha * (root / na)
        } else {
            triple.alpha
        },
        beta: if ne > 0.0 {
            triple.beta * (root / ne)
        } else {
            triple.beta
        },
        gamma: if ne > 0.0 {
            triple.gamma * (root / ne)
        } else {
            triple.gamma
        },
    }
}

/// One sampled triple checked against a theorem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    /// `[Re α, Im α, Re β, Im β, Re γ, Im γ]`
    pub triple: [f64; 6],
    pub predicted_member: bool,
    pub empirical_member: bool,
    pub max_violation: f64,
    pub steps_checked: usize,
    /// Largest gap between the small-`n` closed forms and simulation.
    pub closed_form_residual: f64,
    pub seed: u64,
    pub sample: u64,
}

impl TheoremReport {
    pub fn consistent(&self) -> bool {
        self.predicted_member == self.empirical_member
    }
}

fn simulated_moments(triple: &InitialTriple, theta: Theta) -> Vec<rca::MomentReport> {
    rca::moments(&rca::evolve(triple, theta, 3))
}

/// Symmetric-class samples (indices `0..num_samples`) followed by as many
/// uniform non-members, each checked for symmetry and zero first moment up to
/// `n_max`.
pub fn check_theorem2(
    theta: Theta,
    n_max: usize,
    num_samples: usize,
    seed: u64,
) -> Result<Vec<TheoremReport>> {
    let theta = theta.require_interior()?;
    let reports = (0..2 * num_samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i);
            let triple = if i < num_samples as u64 {
                sample_phi_perp(&mut rng)
            } else {
                sample_excluding(&mut rng, in_phi_perp)
            };
            let sym = empirical_symmetric(&triple, theta, n_max);
            let zero = empirical_zero_moment(&triple, theta, n_max);
            let sim = simulated_moments(&triple, theta);
            let closed = rca::closed_moments(&triple, theta);
            let closed_form_residual = (1..=3)
                .map(|n| (closed[n - 1] - sim[n].first_moment).abs())
                .fold(0.0, f64::max);
            TheoremReport {
                triple: triple.to_reals(),
                predicted_member: in_phi_perp(&triple),
                empirical_member: sym.holds && zero.holds,
                max_violation: sym.max_violation.max(zero.max_violation),
                steps_checked: n_max,
                closed_form_residual,
                seed,
                sample: i,
            }
        })
        .collect();
    Ok(reports)
}

/// Conserving-class samples followed by as many uniform non-members, each
/// checked for `‖X(n)‖² = c` up to `n_max`.
pub fn check_theorem3(
    theta: Theta,
    c: f64,
    n_max: usize,
    num_samples: usize,
    seed: u64,
) -> Result<Vec<TheoremReport>> {
    let theta = theta.require_interior()?;
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidConstant(c));
    }
    (0..2 * num_samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i);
            let triple = if i < num_samples as u64 {
                sample_phi_star(c, theta, &mut rng)?
            } else {
                sample_excluding(&mut rng, |t| in_phi_star(t, c, theta).unwrap_or(false))
            };
            let check = empirical_conserved(&triple, theta, c, n_max);
            let rows = rca::evolve(&triple, theta, 3);
            let closed = rca::small_n_norms(&triple, theta);
            let closed_form_residual = closed
                .iter()
                .zip(&rows)
                .map(|(v, row)| (v - row.norm_sq()).abs())
                .fold(0.0, f64::max);
            Ok(TheoremReport {
                triple: triple.to_reals(),
                predicted_member: in_phi_star(&triple, c, theta)?,
                empirical_member: check.holds,
                max_violation: check.max_violation,
                steps_checked: n_max,
                closed_form_residual,
                seed,
                sample: i,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisjointnessReport {
    pub c: f64,
    pub theta: f64,
    pub perp_samples: usize,
    pub star_samples: usize,
    /// Triples found in both classes.
    pub counterexamples: Vec<[f64; 6]>,
    pub seed: u64,
}

impl DisjointnessReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Tests sampled symmetric triples (rescaled to satisfy the two norm
/// equalities) against the conserving class, and sampled conserving triples
/// against the symmetric class.
pub fn check_corollary4(
    c: f64,
    theta: Theta,
    num_samples: usize,
    seed: u64,
) -> Result<DisjointnessReport> {
    let theta = theta.require_interior()?;
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidConstant(c));
    }
    let n = num_samples as u64;
    let found: Vec<Option<[f64; 6]>> = (0..2 * n)
        .into_par_iter()
        .map(|i| -> Result<Option<[f64; 6]>> {
            let mut rng = sample_rng(seed, i);
            let (triple, both) = if i < n {
                let t = match_norms(&sample_phi_perp(&mut rng), c);
                (t, in_phi_perp(&t) && in_phi_star(&t, c, theta)?)
            } else {
                let t = sample_phi_star(c, theta, &mut rng)?;
                (t, in_phi_perp(&t) && in_phi_star(&t, c, theta)?)
            };
            Ok(both.then(|| triple.to_reals()))
        })
        .collect::<Result<_>>()?;
    Ok(DisjointnessReport {
        c,
        theta: theta.radians(),
        perp_samples: num_samples,
        star_samples: num_samples,
        counterexamples: found.into_iter().flatten().collect(),
        seed,
    })
}
