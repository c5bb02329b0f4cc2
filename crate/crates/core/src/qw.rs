//! The coined discrete-time quantum walk on ℤ.
//!
//! One step maps
//!
//! ```text
//! Ψᴸ_k(n+1) = a Ψᴸ_{k+1}(n) + b Ψᴿ_{k+1}(n)
//! Ψᴿ_k(n+1) = c Ψᴸ_{k−1}(n) + d Ψᴿ_{k−1}(n)
//! ```
//!
//! so the left chirality moves one site left and the right chirality one
//! site right.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::state::{Amplitude, AmplitudeRow, InitialTriple, Qubit};
use crate::{Coin, Result, Theta};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chirality {
    Left,
    Right,
}

/// Walk amplitudes at one time step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QwState {
    time: usize,
    left: AmplitudeRow,
    right: AmplitudeRow,
}

/// `(‖Ψᴸ(n)‖², ‖Ψᴿ(n)‖²)`
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiralityNorms {
    pub left_sq: f64,
    pub right_sq: f64,
}

impl ChiralityNorms {
    pub fn total(&self) -> f64 {
        self.left_sq + self.right_sq
    }
}

impl QwState {
    pub fn initial(qubit: &Qubit) -> Self {
        QwState {
            time: 0,
            left: AmplitudeRow::single(0, qubit.alpha_l()),
            right: AmplitudeRow::single(0, qubit.alpha_r()),
        }
    }

    pub fn step(&self, coin: &Coin) -> Self {
        let (a, b, c, d) = (coin.a(), coin.b(), coin.c(), coin.d());
        let lo = self.left.origin_offset().min(self.right.origin_offset()) - 1;
        let hi = self.left.sites().end().max(self.right.sites().end()) + 1;
        let mut left = Vec::with_capacity((hi - lo + 1) as usize);
        let mut right = Vec::with_capacity((hi - lo + 1) as usize);
        for k in lo..=hi {
            left.push(a * self.left.get(k + 1) + b * self.right.get(k + 1));
            right.push(c * self.left.get(k - 1) + d * self.right.get(k - 1));
        }
        QwState {
            time: self.time + 1,
            left: AmplitudeRow::new(lo, left),
            right: AmplitudeRow::new(lo, right),
        }
    }

    pub fn evolve(qubit: &Qubit, coin: &Coin, steps: usize) -> Self {
        let mut state = QwState::initial(qubit);
        for _ in 0..steps {
            state = state.step(coin);
        }
        state
    }

    /// States at times `0, 1, 2, …` (unbounded).
    pub fn trajectory<'a>(qubit: &Qubit, coin: &'a Coin) -> impl Iterator<Item = QwState> + 'a {
        std::iter::successors(Some(QwState::initial(qubit)), move |s| Some(s.step(coin)))
    }

    pub fn time(&self) -> usize {
        self.time
    }

    pub fn left(&self) -> &AmplitudeRow {
        &self.left
    }

    pub fn right(&self) -> &AmplitudeRow {
        &self.right
    }

    pub fn chirality(&self, chirality: Chirality) -> &AmplitudeRow {
        match chirality {
            Chirality::Left => &self.left,
            Chirality::Right => &self.right,
        }
    }

    /// Site → `|Ψᴸ_k|² + |Ψᴿ_k|²`, over the stored window.
    pub fn distribution(&self) -> BTreeMap<i64, f64> {
        let lo = self.left.origin_offset().min(self.right.origin_offset());
        let hi = *self.left.sites().end().max(self.right.sites().end());
        (lo..=hi)
            .map(|k| {
                (
                    k,
                    self.left.get(k).norm_sqr() + self.right.get(k).norm_sqr(),
                )
            })
            .collect()
    }

    pub fn total_probability(&self) -> f64 {
        self.left.norm_sq() + self.right.norm_sq()
    }

    pub fn chirality_norms(&self) -> ChiralityNorms {
        ChiralityNorms {
            left_sq: self.left.norm_sq(),
            right_sq: self.right.norm_sq(),
        }
    }
}

/// RCA initial triple whose evolution reproduces one chirality row of the
/// walk started from `(alpha_l, alpha_r)`.
///
/// Left: `(αₗ, aαₗ + bαᵣ, 0)`. Right: `(αᵣ, 0, cαₗ + dαᵣ)`.
pub fn coupled_triple(
    alpha_l: Amplitude,
    alpha_r: Amplitude,
    coin: &Coin,
    chirality: Chirality,
) -> InitialTriple {
    let zero = Amplitude::new(0.0, 0.0);
    match chirality {
        Chirality::Left => InitialTriple {
            alpha: alpha_l,
            beta: coin.a() * alpha_l + coin.b() * alpha_r,
            gamma: zero,
        },
        Chirality::Right => InitialTriple {
            alpha: alpha_r,
            beta: zero,
            gamma: coin.c() * alpha_l + coin.d() * alpha_r,
        },
    }
}

impl Qubit {
    pub fn rca_triple(&self, coin: &Coin, chirality: Chirality) -> InitialTriple {
        coupled_triple(self.alpha_l(), self.alpha_r(), coin, chirality)
    }
}

/// Large-time limits of `‖Ψᴸ(n)‖²` and `‖Ψᴿ(n)‖²` for the `H(θ)` walk.
pub fn chirality_limits(qubit: &Qubit, theta: Theta) -> Result<ChiralityNorms> {
    let theta = theta.require_interior()?;
    let (s, c) = theta.radians().sin_cos();
    let l2 = qubit.alpha_l().norm_sqr();
    let r2 = qubit.alpha_r().norm_sqr();
    // αₗ ᾱᵣ + ᾱₗ αᵣ
    let cross = 2.0 * (qubit.alpha_l() * qubit.alpha_r().conj()).re;
    let ratio = (1.0 - s) / c;
    let left_sq = ((1.0 + c * c) * l2 + s * s * r2 + s * c * cross
        - (2.0 * c * l2 + s * cross) * ratio)
        / (2.0 * s);
    let right_sq =
        ((1.0 + c * c) * r2 + s * s * l2 - s * c * cross - (2.0 * c * r2 - s * cross) * ratio)
            / (2.0 * s);
    Ok(ChiralityNorms { left_sq, right_sq })
}

/// Mean of `‖Ψᴸ(n)‖²` over `n ∈ [start, start + window]`.
pub fn windowed_left_norm(qubit: &Qubit, coin: &Coin, start: usize, window: usize) -> f64 {
    let sum: f64 = QwState::trajectory(qubit, coin)
        .skip(start)
        .take(window + 1)
        .map(|s| s.chirality_norms().left_sq)
        .sum();
    sum / (window + 1) as f64
}
