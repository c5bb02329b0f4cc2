//! The full property suite behind `qwrca verify`.
//!
//! Every suite is seeded and order-stable, so the same seed always produces
//! byte-identical reports.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::classes::{self, sample_rng};
use crate::qw::{self, Chirality, QwState};
use crate::rca::{self, RcaState};
use crate::spectral;
use crate::state::{InitialTriple, Qubit};
use crate::{Coin, Result, Theta};

/// Result of one suite.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub max_violation: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

/// Problem sizes. [`VerifyConfig::full`] is the release gate;
/// [`VerifyConfig::quick`] shrinks every loop for smoke tests.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub qw_steps: usize,
    pub qw_thetas: usize,
    pub qw_qubits: usize,
    pub coupling_steps: usize,
    pub symmetry_samples: usize,
    pub symmetry_steps: usize,
    pub conservation_samples: usize,
    pub conservation_steps: usize,
    pub closed_form_triples: usize,
    pub closed_form_steps: usize,
    pub h_grid: usize,
    pub h_max_n: usize,
    pub parseval_steps: usize,
    pub limit_start: usize,
    pub disjoint_samples: usize,
    pub reversal_steps: usize,
}

impl VerifyConfig {
    pub fn full(seed: u64) -> Self {
        VerifyConfig {
            seed,
            qw_steps: 1000,
            qw_thetas: 10,
            qw_qubits: 20,
            coupling_steps: 100,
            symmetry_samples: 100,
            symmetry_steps: 100,
            conservation_samples: 50,
            conservation_steps: 500,
            closed_form_triples: 50,
            closed_form_steps: 50,
            h_grid: 10_000,
            h_max_n: 200,
            parseval_steps: 100,
            limit_start: 2000,
            disjoint_samples: 1000,
            reversal_steps: 100,
        }
    }

    pub fn quick(seed: u64) -> Self {
        VerifyConfig {
            seed,
            qw_steps: 100,
            qw_thetas: 3,
            qw_qubits: 3,
            coupling_steps: 30,
            symmetry_samples: 10,
            symmetry_steps: 30,
            conservation_samples: 5,
            conservation_steps: 60,
            closed_form_triples: 3,
            closed_form_steps: 10,
            h_grid: 500,
            h_max_n: 20,
            parseval_steps: 20,
            limit_start: 2000,
            disjoint_samples: 50,
            reversal_steps: 30,
        }
    }
}

/// `count` angles evenly spread over the open interval `(0, π/2)`.
pub fn theta_grid(count: usize) -> Vec<Theta> {
    (1..=count)
        .map(|i| {
            Theta::interior(FRAC_PI_2 * i as f64 / (count + 1) as f64)
                .expect("interior by construction")
        })
        .collect()
}

/// Random qubit, uniform on the unit sphere of ℂ².
pub fn random_qubit<R: Rng + ?Sized>(rng: &mut R) -> Qubit {
    loop {
        let l = classes::unit_disc(rng);
        let r = classes::unit_disc(rng);
        let n = (l.norm_sqr() + r.norm_sqr()).sqrt();
        if n > 1e-3 {
            if let Ok(q) = Qubit::new(l / n, r / n) {
                return q;
            }
        }
    }
}

struct Tally {
    cases: usize,
    worst: f64,
    failures: usize,
}

impl Tally {
    fn new() -> Self {
        Tally {
            cases: 0,
            worst: 0.0,
            failures: 0,
        }
    }

    fn record(&mut self, violation: f64, tol: f64) {
        self.cases += 1;
        if violation.is_nan() || violation >= tol {
            self.failures += 1;
        }
        if violation.is_nan() {
            self.worst = f64::NAN;
        } else if !self.worst.is_nan() {
            self.worst = self.worst.max(violation);
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.cases += other.cases;
        self.failures += other.failures;
        self.worst = if self.worst.is_nan() || other.worst.is_nan() {
            f64::NAN
        } else {
            self.worst.max(other.worst)
        };
        self
    }

    fn finish(self, name: &'static str, tolerance: f64, detail: impl Into<String>) -> SuiteReport {
        SuiteReport {
            name,
            passed: self.failures == 0 && self.cases > 0,
            cases: self.cases,
            max_violation: self.worst,
            tolerance,
            detail: detail.into(),
        }
    }
}

fn unitarity(cfg: &VerifyConfig) -> SuiteReport {
    const TOL: f64 = 1e-12;
    let thetas = theta_grid(cfg.qw_thetas);
    let tally = thetas
        .par_iter()
        .enumerate()
        .map(|(ti, &theta)| {
            let coin = Coin::theta(theta);
            let mut tally = Tally::new();
            for qi in 0..cfg.qw_qubits {
                let q = random_qubit(&mut sample_rng(cfg.seed, (ti * 1000 + qi) as u64));
                for s in QwState::trajectory(&q, &coin).take(cfg.qw_steps + 1) {
                    let dist_total: f64 = s.distribution().values().sum();
                    tally.record((dist_total - 1.0).abs(), TOL);
                    tally.record((s.chirality_norms().total() - 1.0).abs(), TOL);
                }
            }
            tally
        })
        .reduce(Tally::new, Tally::merge);
    tally.finish(
        "unitarity",
        TOL,
        "total probability and chirality-norm sum stay at 1",
    )
}

fn coupling(cfg: &VerifyConfig) -> SuiteReport {
    const TOL: f64 = 1e-12;
    let n = cfg.coupling_steps;
    let tally = (0..cfg.qw_qubits as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(cfg.seed ^ 0xC0, i);
            let q = random_qubit(&mut rng);
            let theta = Theta::new(rng.random_range(0.0..=FRAC_PI_2)).expect("in range");
            let coin = Coin::theta(theta);
            let walk: Vec<QwState> = QwState::trajectory(&q, &coin).take(n + 1).collect();
            let mut tally = Tally::new();
            for chirality in [Chirality::Left, Chirality::Right] {
                let rows = rca::evolve(&q.rca_triple(&coin, chirality), theta, n);
                for (row, s) in rows.iter().zip(&walk) {
                    tally.record(row.max_abs_diff(s.chirality(chirality)), TOL);
                }
            }
            tally
        })
        .reduce(Tally::new, Tally::merge);
    tally.finish(
        "chirality_coupling",
        TOL,
        "RCA rows equal the walk's chirality rows",
    )
}

fn hadamard(_: &VerifyConfig) -> SuiteReport {
    const TOL: f64 = 1e-15;
    let mut tally = Tally::new();
    let s = QwState::evolve(&Qubit::left(), &Coin::hadamard(), 2);
    let expected = [(-2, 0.25), (0, 0.5), (2, 0.25)];
    for (k, p) in s.distribution() {
        let want = expected.iter().find(|e| e.0 == k).map_or(0.0, |e| e.1);
        tally.record((p - want).abs(), TOL);
    }
    tally.finish("hadamard_two_steps", TOL, "{-2: 1/4, 0: 1/2, 2: 1/4}")
}

fn symmetry(cfg: &VerifyConfig) -> Result<Vec<SuiteReport>> {
    const TOL: f64 = 1e-10;
    let theta = Theta::interior(PI / 5.0)?;
    let reports =
        classes::check_theorem2(theta, cfg.symmetry_steps, cfg.symmetry_samples, cfg.seed)?;
    let mut members = Tally::new();
    let mut outsiders = Tally::new();
    let mut closed = Tally::new();
    for r in &reports {
        closed.record(r.closed_form_residual, 1e-12);
        if r.predicted_member {
            members.record(r.max_violation, TOL);
        } else {
            // a non-member passes only if some closed-form m(1..3) is visibly nonzero
            let t = triple_of(&r.triple);
            let witness = classes::moment_witness(&t, theta);
            outsiders.record(if witness > TOL { 0.0 } else { f64::INFINITY }, 1.0);
        }
    }
    Ok(vec![
        members.finish(
            "symmetric_class_members",
            TOL,
            "|X_k| = |X_-k| and m(n) = 0",
        ),
        outsiders.finish(
            "symmetric_class_outsiders",
            1.0,
            "closed-form m(1..3) witness nonzero",
        ),
        closed.finish(
            "closed_moments",
            1e-12,
            "m(1..3) closed forms vs simulation",
        ),
    ])
}

fn conservation(cfg: &VerifyConfig) -> Result<Vec<SuiteReport>> {
    const TOL: f64 = 1e-10;
    let mut members = Tally::new();
    let mut closed = Tally::new();
    for (i, theta) in theta_grid(5).into_iter().enumerate() {
        let reports = classes::check_theorem3(
            theta,
            0.5,
            cfg.conservation_steps,
            cfg.conservation_samples,
            cfg.seed + i as u64,
        )?;
        for r in &reports {
            closed.record(r.closed_form_residual, 1e-12);
            if r.predicted_member {
                members.record(r.max_violation, TOL);
            } else {
                let t = triple_of(&r.triple);
                let witness = classes::norm_witness(&t, theta, 0.5);
                members.record(
                    if witness > TOL && !r.empirical_member {
                        0.0
                    } else {
                        f64::INFINITY
                    },
                    TOL,
                );
            }
        }
    }
    Ok(vec![
        members.finish(
            "conserving_class",
            TOL,
            "||X(n)||^2 = 1/2 exactly on members",
        ),
        closed.finish(
            "small_n_norms",
            1e-12,
            "||X(0..3)||^2 closed forms vs simulation",
        ),
    ])
}

fn closed_form(cfg: &VerifyConfig) -> Result<Vec<SuiteReport>> {
    const TOL: f64 = 1e-8;
    let thetas = theta_grid(5);
    let cases: Vec<(usize, usize)> = (0..thetas.len())
        .flat_map(|t| (0..cfg.closed_form_triples).map(move |i| (t, i)))
        .collect();
    let totals = cases
        .par_iter()
        .map(|&(ti, i)| -> Result<Tally> {
            let theta = thetas[ti];
            let triple =
                classes::random_triple(&mut sample_rng(cfg.seed ^ 0x40, (ti * 10_000 + i) as u64));
            let rows = rca::evolve(&triple, theta, cfg.closed_form_steps);
            let mut tally = Tally::new();
            for (n, row) in rows.iter().enumerate() {
                let d = spectral::closed_form_norm(&triple, theta, n)?;
                tally.record((d.total() - row.norm_sq()).abs(), TOL);
            }
            Ok(tally)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(Tally::new(), Tally::merge);
    let oscillation = thetas
        .par_iter()
        .enumerate()
        .map(|(ti, &theta)| -> Result<Tally> {
            let mut tally = Tally::new();
            let mut rng = sample_rng(cfg.seed ^ 0x41, ti as u64);
            let triple = classes::sample_phi_star(0.5, theta, &mut rng)?;
            for n in 0..=cfg.closed_form_steps {
                let d = spectral::closed_form_norm(&triple, theta, n)?;
                tally.record(d.oscillatory.abs().max((d.steady - 0.5).abs()), TOL);
            }
            Ok(tally)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(Tally::new(), Tally::merge);
    Ok(vec![
        totals.finish(
            "exact_norm_formula",
            TOL,
            "steady + oscillatory = direct sum",
        ),
        oscillation.finish(
            "exact_norm_cancellation",
            TOL,
            "oscillatory part vanishes on the conserving class",
        ),
    ])
}

fn h_identity(cfg: &VerifyConfig) -> SuiteReport {
    const TOL: f64 = 1e-13;
    let grid = cfg.h_grid;
    let tally = (0..=cfg.h_max_n)
        .into_par_iter()
        .map(|n| {
            let mut tally = Tally::new();
            for i in 0..grid {
                let x = -FRAC_PI_2 * i as f64 / (grid - 1) as f64;
                tally.record(spectral::h_n_value(x, n).abs(), TOL);
            }
            tally
        })
        .reduce(Tally::new, Tally::merge);
    tally.finish(
        "h_identity",
        TOL,
        "cos(2(n-1)x) - 2 sin x sin((2n-1)x) - cos(2nx) = 0",
    )
}

fn parseval(cfg: &VerifyConfig) -> Result<SuiteReport> {
    const TOL: f64 = 1e-11;
    let mut tally = Tally::new();
    for (ti, theta) in theta_grid(3).into_iter().enumerate() {
        let triple = classes::random_triple(&mut sample_rng(cfg.seed ^ 0x50, ti as u64));
        let rows = rca::evolve(&triple, theta, cfg.parseval_steps);
        for (n, row) in rows.iter().enumerate() {
            let spectral = spectral::parseval_norm(&triple, theta, n, spectral::parseval_grid(n))?;
            tally.record((spectral - row.norm_sq()).abs(), TOL);
        }
    }
    Ok(tally.finish("parseval", TOL, "spectral norm = spatial norm"))
}

fn limits(cfg: &VerifyConfig) -> Result<Vec<SuiteReport>> {
    const WINDOW_TOL: f64 = 1e-3;
    const BALANCED_TOL: f64 = 1e-12;
    let mut window = Tally::new();
    for frac in [6.0, 4.0, 3.0] {
        let theta = Theta::interior(PI / frac)?;
        let mean =
            qw::windowed_left_norm(&Qubit::left(), &Coin::theta(theta), cfg.limit_start, 100);
        let limit = qw::chirality_limits(&Qubit::left(), theta)?.left_sq;
        window.record((mean - limit).abs(), WINDOW_TOL);
        window.record((limit - (1.0 - theta.sin() / 2.0)).abs(), WINDOW_TOL);
    }
    let mut balanced = Tally::new();
    let q = Qubit::new(
        Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2),
    )?;
    for theta in theta_grid(5) {
        for s in QwState::trajectory(&q, &Coin::theta(theta)).take(201) {
            let n = s.chirality_norms();
            balanced.record(
                (n.left_sq - 0.5).abs().max((n.right_sq - 0.5).abs()),
                BALANCED_TOL,
            );
        }
    }
    Ok(vec![
        window.finish(
            "chirality_limit",
            WINDOW_TOL,
            "windowed mean of ||Psi^L(n)||^2 vs 1 - sin(theta)/2",
        ),
        balanced.finish(
            "balanced_chirality_norms",
            BALANCED_TOL,
            "(1, i)/sqrt2 keeps both chirality norms at 1/2",
        ),
    ])
}

fn disjointness(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut tally = Tally::new();
    for (ci, c) in [0.25, 0.5, 1.0].into_iter().enumerate() {
        for (ti, theta) in theta_grid(5).into_iter().enumerate() {
            let r = classes::check_corollary4(
                c,
                theta,
                cfg.disjoint_samples,
                cfg.seed + (ci * 10 + ti) as u64,
            )?;
            tally.record(r.counterexamples.len() as f64, 0.5);
        }
    }
    Ok(tally.finish(
        "disjointness",
        0.5,
        "no triple is both symmetric and norm-conserving",
    ))
}

fn reversibility(cfg: &VerifyConfig) -> SuiteReport {
    const TOL: f64 = 1e-9;
    let tally = (0..20u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(cfg.seed ^ 0x70, i);
            let triple = classes::random_triple(&mut rng);
            let theta = Theta::new(rng.random_range(0.0..=FRAC_PI_2)).expect("in range");
            let start = RcaState::initial(&triple);
            let mut s = start.clone();
            for _ in 0..cfg.reversal_steps {
                s = s.step_theta(theta);
            }
            for _ in 0..cfg.reversal_steps {
                s = s.step_back(theta);
            }
            let mut tally = Tally::new();
            tally.record(
                s.current()
                    .max_abs_diff(start.current())
                    .max(s.next().max_abs_diff(start.next())),
                TOL,
            );
            tally
        })
        .reduce(Tally::new, Tally::merge);
    tally.finish(
        "reversibility",
        TOL,
        "forward then backward recovers the initial rows",
    )
}

fn lemma_symmetries(cfg: &VerifyConfig) -> SuiteReport {
    const TOL: f64 = 1e-13;
    let n_max = cfg.coupling_steps;
    let tally = (0..20u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(cfg.seed ^ 0x80, i);
            let theta = Theta::new(rng.random_range(0.0..=FRAC_PI_2)).expect("in range");
            let mut tally = Tally::new();

            let beta = classes::unit_disc(&mut rng);
            let mirrored =
                InitialTriple::new(classes::unit_disc(&mut rng), beta, -beta).expect("finite");
            for (n, row) in rca::evolve(&mirrored, theta, n_max).iter().enumerate() {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                for (k, v) in row.iter() {
                    let d = v - row.get(-k) * sign;
                    tally.record(d.re.abs().max(d.im.abs()), TOL);
                }
            }

            let beta_re: f64 = rng.random_range(-1.0..1.0);
            let xi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let phase = Complex64::from_polar(1.0, xi);
            let conj = InitialTriple::new(
                Complex64::new(0.0, 0.0),
                Complex64::new(beta_re, 0.0),
                phase * beta_re,
            )
            .expect("finite");
            for (n, row) in rca::evolve(&conj, theta, n_max).iter().enumerate() {
                let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
                for (k, v) in row.iter() {
                    let d = v - phase * row.get(-k).conj() * sign;
                    tally.record(d.re.abs().max(d.im.abs()), TOL);
                }
            }
            tally
        })
        .reduce(Tally::new, Tally::merge);
    tally.finish(
        "mirror_symmetries",
        TOL,
        "X_k(n) = (-1)^n X_-k(n) and X_k(n) = (-1)^(n+1) e^(i xi) conj X_-k(n)",
    )
}

fn triple_of(reals: &[f64; 6]) -> InitialTriple {
    InitialTriple {
        alpha: Complex64::new(reals[0], reals[1]),
        beta: Complex64::new(reals[2], reals[3]),
        gamma: Complex64::new(reals[4], reals[5]),
    }
}

/// Runs every suite.
pub fn run(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let mut suites = vec![unitarity(cfg), coupling(cfg), hadamard(cfg)];
    suites.extend(symmetry(cfg)?);
    suites.extend(conservation(cfg)?);
    suites.extend(closed_form(cfg)?);
    suites.push(h_identity(cfg));
    suites.push(parseval(cfg)?);
    suites.extend(limits(cfg)?);
    suites.push(disjointness(cfg)?);
    suites.push(reversibility(cfg));
    suites.push(lemma_symmetries(cfg));
    Ok(VerifyReport {
        seed: cfg.seed,
        passed: suites.iter().all(|s| s.passed),
        suites,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes_and_is_deterministic() {
        let a = run(&VerifyConfig::quick(42)).unwrap();
        for s in &a.suites {
            assert!(s.passed, "{s:?}");
        }
        assert!(a.passed);
        let b = run(&VerifyConfig::quick(42)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn theta_grid_is_interior() {
        let g = theta_grid(10);
        assert_eq!(g.len(), 10);
        assert!(g.iter().all(|t| t.require_interior().is_ok()));
    }
}
