//! Qubits, RCA initial triples, and dense lattice rows.

use std::ops::RangeInclusive;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type Amplitude = Complex64;

const ZERO: Amplitude = Complex64::new(0.0, 0.0);

/// Normalization tolerance for qubits.
pub const NORM_TOL: f64 = 1e-12;

/// Walker state at the origin at time zero, `(Ψ₀ᴸ(0), Ψ₀ᴿ(0))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[Amplitude; 2]", into = "[Amplitude; 2]")]
pub struct Qubit {
    alpha_l: Amplitude,
    alpha_r: Amplitude,
}

impl Qubit {
    /// Rejects inputs whose squared norm differs from one by more than
    /// [`NORM_TOL`]. Nothing is renormalized.
    pub fn new(alpha_l: Amplitude, alpha_r: Amplitude) -> Result<Self> {
        if !alpha_l.is_finite() || !alpha_r.is_finite() {
            return Err(Error::NonFinite);
        }
        let norm_sq = alpha_l.norm_sqr() + alpha_r.norm_sqr();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm_sq));
        }
        Ok(Qubit { alpha_l, alpha_r })
    }

    pub fn left() -> Self {
        Qubit {
            alpha_l: Complex64::new(1.0, 0.0),
            alpha_r: ZERO,
        }
    }

    pub fn right() -> Self {
        Qubit {
            alpha_l: ZERO,
            alpha_r: Complex64::new(1.0, 0.0),
        }
    }

    /// `e^{iξ}(1, i)/√2`, the state whose chirality norms stay at 1/2 for
    /// every `H(θ)` walk.
    pub fn balanced(phase: f64) -> Self {
        let w = Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, phase);
        Qubit {
            alpha_l: w,
            alpha_r: w * Complex64::i(),
        }
    }

    pub fn alpha_l(&self) -> Amplitude {
        self.alpha_l
    }

    pub fn alpha_r(&self) -> Amplitude {
        self.alpha_r
    }
}

impl TryFrom<[Amplitude; 2]> for Qubit {
    type Error = Error;

    fn try_from([l, r]: [Amplitude; 2]) -> Result<Self> {
        Qubit::new(l, r)
    }
}

impl From<Qubit> for [Amplitude; 2] {
    fn from(q: Qubit) -> Self {
        [q.alpha_l, q.alpha_r]
    }
}

/// RCA initial data `(α, β, γ) = (X₀(0), X₋₁(1), X₁(1))`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[Amplitude; 3]", into = "[Amplitude; 3]")]
pub struct InitialTriple {
    pub alpha: Amplitude,
    pub beta: Amplitude,
    pub gamma: Amplitude,
}

impl InitialTriple {
    pub fn new(alpha: Amplitude, beta: Amplitude, gamma: Amplitude) -> Result<Self> {
        if [alpha, beta, gamma].iter().all(|z| z.is_finite()) {
            Ok(InitialTriple { alpha, beta, gamma })
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn zero() -> Self {
        InitialTriple::default()
    }

    pub fn scale(&self, s: Amplitude) -> Self {
        InitialTriple {
            alpha: self.alpha * s,
            beta: self.beta * s,
            gamma: self.gamma * s,
        }
    }

    pub fn add(&self, other: &InitialTriple) -> Self {
        InitialTriple {
            alpha: self.alpha + other.alpha,
            beta: self.beta + other.beta,
            gamma: self.gamma + other.gamma,
        }
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        [self.alpha, self.beta, self.gamma]
            .iter()
            .all(|z| z.re.abs() <= tol && z.im.abs() <= tol)
    }

    /// `[Re α, Im α, Re β, Im β, Re γ, Im γ]`.
    pub fn to_reals(&self) -> [f64; 6] {
        [
            self.alpha.re,
            self.alpha.im,
            self.beta.re,
            self.beta.im,
            self.gamma.re,
            self.gamma.im,
        ]
    }

    /// `|α|²`
    pub fn alpha_sq(&self) -> f64 {
        self.alpha.norm_sqr()
    }

    /// `|β|² + |γ|²`
    pub fn edge_sq(&self) -> f64 {
        self.beta.norm_sqr() + self.gamma.norm_sqr()
    }

    /// `βγ̄ + β̄γ`
    pub fn edge_cross(&self) -> f64 {
        2.0 * (self.beta * self.gamma.conj()).re
    }

    /// `α(β̄ − γ̄) + ᾱ(β − γ)`
    pub fn alpha_cross_diff(&self) -> f64 {
        2.0 * (self.alpha * (self.beta - self.gamma).conj()).re
    }

    /// `α(β̄ + γ̄) + ᾱ(β + γ)`
    pub fn alpha_cross_sum(&self) -> f64 {
        2.0 * (self.alpha * (self.beta + self.gamma).conj()).re
    }
}

impl TryFrom<[Amplitude; 3]> for InitialTriple {
    type Error = Error;

    fn try_from([a, b, g]: [Amplitude; 3]) -> Result<Self> {
        InitialTriple::new(a, b, g)
    }
}

impl From<InitialTriple> for [Amplitude; 3] {
    fn from(t: InitialTriple) -> Self {
        [t.alpha, t.beta, t.gamma]
    }
}

/// Amplitudes on a contiguous window of lattice sites; zero elsewhere.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeRow {
    origin_offset: i64,
    values: Vec<Amplitude>,
}

impl AmplitudeRow {
    /// `values[i]` sits at site `origin_offset + i`.
    pub fn new(origin_offset: i64, values: Vec<Amplitude>) -> Self {
        AmplitudeRow {
            origin_offset,
            values,
        }
    }

    pub fn zeros(origin_offset: i64, len: usize) -> Self {
        AmplitudeRow::new(origin_offset, vec![ZERO; len])
    }

    pub fn single(site: i64, value: Amplitude) -> Self {
        AmplitudeRow::new(site, vec![value])
    }

    /// Builds the smallest window covering the given `(site, value)` pairs.
    pub fn from_sites(cells: &[(i64, Amplitude)]) -> Self {
        let Some(lo) = cells.iter().map(|c| c.0).min() else {
            return AmplitudeRow::default();
        };
        let hi = cells.iter().map(|c| c.0).max().unwrap();
        let mut row = AmplitudeRow::zeros(lo, (hi - lo + 1) as usize);
        for &(k, v) in cells {
            row.values[(k - lo) as usize] += v;
        }
        row
    }

    pub fn origin_offset(&self) -> i64 {
        self.origin_offset
    }

    pub fn values(&self) -> &[Amplitude] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sites covered by the stored window. Empty rows return an empty range.
    pub fn sites(&self) -> RangeInclusive<i64> {
        self.origin_offset..=self.origin_offset + self.values.len() as i64 - 1
    }

    pub fn get(&self, site: i64) -> Amplitude {
        let idx = site - self.origin_offset;
        if idx < 0 {
            return ZERO;
        }
        self.values.get(idx as usize).copied().unwrap_or(ZERO)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Amplitude)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.origin_offset + i as i64, v))
    }

    /// Window covering both rows, as `(first, last)`; `None` when both are empty.
    pub fn hull(&self, other: &AmplitudeRow) -> Option<(i64, i64)> {
        match (self.is_empty(), other.is_empty()) {
            (true, true) => None,
            (false, true) => Some((*self.sites().start(), *self.sites().end())),
            (true, false) => Some((*other.sites().start(), *other.sites().end())),
            (false, false) => Some((
                self.origin_offset.min(other.origin_offset),
                (*self.sites().end()).max(*other.sites().end()),
            )),
        }
    }

    pub fn add(&self, other: &AmplitudeRow) -> AmplitudeRow {
        let Some((lo, hi)) = self.hull(other) else {
            return AmplitudeRow::default();
        };
        let values = (lo..=hi).map(|k| self.get(k) + other.get(k)).collect();
        AmplitudeRow::new(lo, values)
    }

    pub fn scale(&self, s: Amplitude) -> AmplitudeRow {
        AmplitudeRow::new(
            self.origin_offset,
            self.values.iter().map(|&v| v * s).collect(),
        )
    }

    /// Largest componentwise difference over the union of both windows.
    pub fn max_abs_diff(&self, other: &AmplitudeRow) -> f64 {
        let Some((lo, hi)) = self.hull(other) else {
            return 0.0;
        };
        (lo..=hi)
            .map(|k| {
                let d = self.get(k) - other.get(k);
                d.re.abs().max(d.im.abs())
            })
            .fold(0.0, f64::max)
    }

    /// `Σ |X_k|²`, summed left to right.
    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    /// `Σ k |X_k|²`
    pub fn first_moment(&self) -> f64 {
        self.iter().map(|(k, v)| k as f64 * v.norm_sqr()).sum()
    }

    /// Per-site `|X_k|²` (not normalized).
    pub fn intensities(&self) -> Vec<(i64, f64)> {
        self.iter().map(|(k, v)| (k, v.norm_sqr())).collect()
    }
}
