//! The reversible cellular automaton obtained by uncoupling the walk's
//! chiralities.
//!
//! General form, for a coin with entries `a, d` and determinant `Δ`:
//!
//! ```text
//! X_k(n+2) = a X_{k+1}(n+1) + d X_{k−1}(n+1) − Δ X_k(n)
//! ```
//!
//! For `H(θ)` (`a = cos θ`, `d = −cos θ`, `Δ = −1`) this is
//! `X_k(n+2) = cos θ [X_{k+1}(n+1) − X_{k−1}(n+1)] + X_k(n)`, which can be
//! solved for `X_k(n)` as well, so two consecutive rows determine the whole
//! trajectory in both time directions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::state::{Amplitude, AmplitudeRow, InitialTriple};
use crate::{Coin, Theta};

/// Coefficients of the recurrence.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "lowercase")]
pub enum RcaCoefficients {
    /// Any `(a, d, Δ)`; unitarity is not required.
    General {
        a: Amplitude,
        d: Amplitude,
        delta: Amplitude,
    },
    Theta {
        theta: Theta,
    },
}

impl RcaCoefficients {
    pub fn from_coin(coin: &Coin) -> Self {
        RcaCoefficients::General {
            a: coin.a(),
            d: coin.d(),
            delta: coin.delta(),
        }
    }

    /// The `(a, d, Δ)` triple this recurrence uses.
    pub fn general_form(&self) -> (Amplitude, Amplitude, Amplitude) {
        match *self {
            RcaCoefficients::General { a, d, delta } => (a, d, delta),
            RcaCoefficients::Theta { theta } => {
                let c = theta.cos();
                (
                    Complex64::new(c, 0.0),
                    Complex64::new(-c, 0.0),
                    Complex64::new(-1.0, 0.0),
                )
            }
        }
    }
}

impl From<Theta> for RcaCoefficients {
    fn from(theta: Theta) -> Self {
        RcaCoefficients::Theta { theta }
    }
}

/// Two consecutive rows `X(n)` and `X(n+1)`.
///
/// `time` may go negative when stepping backwards past the initial rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RcaState {
    time: i64,
    current: AmplitudeRow,
    next: AmplitudeRow,
}

impl RcaState {
    /// Row 0 is `{0: α}`, row 1 is `{−1: β, 1: γ}`.
    pub fn initial(triple: &InitialTriple) -> Self {
        RcaState {
            time: 0,
            current: AmplitudeRow::single(0, triple.alpha),
            next: AmplitudeRow::new(
                -1,
                vec![triple.beta, Complex64::new(0.0, 0.0), triple.gamma],
            ),
        }
    }

    pub fn from_rows(time: i64, current: AmplitudeRow, next: AmplitudeRow) -> Self {
        RcaState {
            time,
            current,
            next,
        }
    }

    pub fn time(&self) -> i64 {
        self.time
    }

    /// `X(n)`
    pub fn current(&self) -> &AmplitudeRow {
        &self.current
    }

    /// `X(n+1)`
    pub fn next(&self) -> &AmplitudeRow {
        &self.next
    }

    pub fn step(&self, coeffs: &RcaCoefficients) -> Self {
        match *coeffs {
            RcaCoefficients::Theta { theta } => self.step_theta(theta),
            RcaCoefficients::General { a, d, delta } => self.step_general(a, d, delta),
        }
    }

    pub fn step_general(&self, a: Amplitude, d: Amplitude, delta: Amplitude) -> Self {
        let row = self.advance(|prev, right, left| a * right + d * left - delta * prev);
        self.shifted_forward(row)
    }

    pub fn step_theta(&self, theta: Theta) -> Self {
        let c = theta.cos();
        let row = self.advance(|prev, right, left| (right - left) * c + prev);
        self.shifted_forward(row)
    }

    /// Inverse of [`RcaState::step_theta`]:
    /// `X_k(n−1) = X_k(n+1) − cos θ [X_{k+1}(n) − X_{k−1}(n)]`.
    pub fn step_back(&self, theta: Theta) -> Self {
        let c = theta.cos();
        let Some((lo, hi)) = widened_hull(&self.current, &self.next) else {
            return RcaState::from_rows(
                self.time - 1,
                AmplitudeRow::default(),
                self.current.clone(),
            );
        };
        let values = (lo..=hi)
            .map(|k| self.next.get(k) - (self.current.get(k + 1) - self.current.get(k - 1)) * c)
            .collect();
        RcaState {
            time: self.time - 1,
            current: AmplitudeRow::new(lo, values),
            next: self.current.clone(),
        }
    }

    /// Builds `X(n+2)` cellwise from `(X_k(n), X_{k+1}(n+1), X_{k−1}(n+1))`.
    fn advance(&self, rule: impl Fn(Amplitude, Amplitude, Amplitude) -> Amplitude) -> AmplitudeRow {
        let Some((lo, hi)) = widened_hull(&self.next, &self.current) else {
            return AmplitudeRow::default();
        };
        let values = (lo..=hi)
            .map(|k| {
                rule(
                    self.current.get(k),
                    self.next.get(k + 1),
                    self.next.get(k - 1),
                )
            })
            .collect();
        AmplitudeRow::new(lo, values)
    }

    fn shifted_forward(&self, row: AmplitudeRow) -> Self {
        RcaState {
            time: self.time + 1,
            current: self.next.clone(),
            next: row,
        }
    }
}

/// Hull of `wide` grown by one cell per side, together with `other`.
fn widened_hull(wide: &AmplitudeRow, other: &AmplitudeRow) -> Option<(i64, i64)> {
    let grown = if wide.is_empty() {
        None
    } else {
        Some((wide.origin_offset() - 1, wide.sites().end() + 1))
    };
    let other = (!other.is_empty()).then(|| (other.origin_offset(), *other.sites().end()));
    match (grown, other) {
        (Some((a, b)), Some((c, d))) => Some((a.min(c), b.max(d))),
        (g, o) => g.or(o),
    }
}

/// Rows `X(0), X(1), …, X(steps)` of the `H(θ)` automaton.
pub fn evolve(triple: &InitialTriple, theta: Theta, steps: usize) -> Vec<AmplitudeRow> {
    evolve_with(triple, &RcaCoefficients::Theta { theta }, steps)
}

pub fn evolve_with(
    triple: &InitialTriple,
    coeffs: &RcaCoefficients,
    steps: usize,
) -> Vec<AmplitudeRow> {
    let mut state = RcaState::initial(triple);
    let mut rows = vec![state.current.clone()];
    for _ in 0..steps {
        rows.push(state.next.clone());
        state = state.step(coeffs);
    }
    rows
}

/// `‖X(n)‖²`
pub fn squared_norm(row: &AmplitudeRow) -> f64 {
    row.norm_sq()
}

/// `m(n) = Σ k |X_k(n)|²`
pub fn first_moment(row: &AmplitudeRow) -> f64 {
    row.first_moment()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub n: usize,
    pub norm_sq: f64,
    pub first_moment: f64,
}

pub fn moments(rows: &[AmplitudeRow]) -> Vec<MomentReport> {
    rows.iter()
        .enumerate()
        .map(|(n, row)| MomentReport {
            n,
            norm_sq: row.norm_sq(),
            first_moment: row.first_moment(),
        })
        .collect()
}

/// Closed forms of `m(1)`, `m(2)`, `m(3)`.
pub fn closed_moments(triple: &InitialTriple, theta: Theta) -> [f64; 3] {
    let imbalance = triple.gamma.norm_sqr() - triple.beta.norm_sqr();
    let c = theta.cos();
    let c2 = (2.0 * theta.radians()).cos();
    let m1 = imbalance;
    let m2 = 2.0 * c * c * imbalance;
    let m3 = 0.5 * (3.0 * c2 * c2 + 2.0 * c2 + 1.0) * imbalance
        - 0.5 * theta.sin() * (2.0 * theta.radians()).sin() * triple.alpha_cross_sum();
    [m1, m2, m3]
}

/// Closed forms of `‖X(0)‖²` through `‖X(3)‖²`.
pub fn small_n_norms(triple: &InitialTriple, theta: Theta) -> [f64; 4] {
    let c = theta.cos();
    let cc = c * c;
    let a = triple.alpha_sq();
    let s = triple.edge_sq();
    let q = triple.edge_cross();
    let p = triple.alpha_cross_diff();
    let one_minus = 1.0 - 2.0 * cc;
    [
        a,
        s,
        a + 2.0 * cc * s - cc * q - c * p,
        2.0 * cc * a
            + (2.0 * cc * cc + one_minus * one_minus) * s
            + 2.0 * cc * one_minus * q
            + c * (1.0 - 3.0 * cc) * p,
    ]
}
