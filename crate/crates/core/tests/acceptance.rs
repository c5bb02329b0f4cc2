//! Release gate: one PASS/FAIL line per acceptance criterion.
//!
//! Run with `cargo test -p qwrca --test acceptance`. Tolerances and sample
//! counts are fixed here and must not be relaxed.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI, TAU};
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use qwrca::classes::{self, sample_rng};
use qwrca::qw::{self, Chirality, QwState};
use qwrca::rca::{self, RcaState};
use qwrca::spectral;
use qwrca::verify::{random_qubit, theta_grid};
use qwrca::{Coin, InitialTriple, Qubit, Theta};

const SEED: u64 = 20_240_601;

struct Outcome {
    passed: bool,
    worst: f64,
    note: String,
}

fn outcome(worst: f64, tol: f64, note: impl Into<String>) -> Outcome {
    Outcome {
        passed: worst < tol,
        worst,
        note: note.into(),
    }
}

fn pmax(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_theta<R: Rng>(rng: &mut R) -> Theta {
    Theta::new(rng.random_range(0.0..=FRAC_PI_2)).unwrap()
}

fn unitarity() -> Outcome {
    let worst = theta_grid(10)
        .into_par_iter()
        .enumerate()
        .map(|(ti, theta)| {
            let coin = Coin::theta(theta);
            let mut worst = 0f64;
            for qi in 0..20 {
                let q = random_qubit(&mut sample_rng(SEED, (ti * 100 + qi) as u64));
                for s in QwState::trajectory(&q, &coin).take(1001) {
                    worst = pmax(worst, (s.total_probability() - 1.0).abs());
                }
            }
            worst
        })
        .reduce(|| 0.0, pmax);
    outcome(worst, 1e-12, "10 theta x 20 qubits, n <= 1000")
}

fn coupling() -> Outcome {
    let worst = (0..40u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(SEED ^ 2, i);
            let q = random_qubit(&mut rng);
            let theta = random_theta(&mut rng);
            let coin = Coin::theta(theta);
            let walk: Vec<QwState> = QwState::trajectory(&q, &coin).take(101).collect();
            let mut worst = 0f64;
            for ch in [Chirality::Left, Chirality::Right] {
                let rows = rca::evolve(&q.rca_triple(&coin, ch), theta, 100);
                for (row, s) in rows.iter().zip(&walk) {
                    worst = pmax(worst, row.max_abs_diff(s.chirality(ch)));
                }
            }
            worst
        })
        .reduce(|| 0.0, pmax);
    outcome(
        worst,
        1e-12,
        "40 random (qubit, theta), both chiralities, n <= 100",
    )
}

fn hadamard() -> Outcome {
    // by hand: Psi(1) = {-1: (1/√2, 0), 1: (0, 1/√2)}
    //          Psi(2) = {-2: (1/2, 0), 0: (1/2, 1/2), 2: (0, -1/2)}
    let s = QwState::evolve(&Qubit::left(), &Coin::hadamard(), 2);
    let d = s.distribution();
    let oracle = [(-2i64, 0.25), (0, 0.5), (2, 0.25)];
    let mut worst = 0f64;
    for (k, p) in &d {
        let want = oracle.iter().find(|o| o.0 == *k).map_or(0.0, |o| o.1);
        worst = pmax(worst, (p - want).abs());
    }
    for (k, _) in oracle {
        if !d.contains_key(&k) {
            worst = f64::INFINITY;
        }
    }
    outcome(worst, 1e-15, format!("{d:?}"))
}

fn theorem2() -> Outcome {
    let theta = Theta::interior(PI / 5.0).unwrap();
    let reports = classes::check_theorem2(theta, 100, 100, SEED).unwrap();
    let mut member_worst = 0f64;
    let mut closed_worst = 0f64;
    let mut weakest_witness = f64::INFINITY;
    let (mut members, mut outsiders) = (0, 0);
    for r in &reports {
        closed_worst = pmax(closed_worst, r.closed_form_residual);
        let [ar, ai, br, bi, gr, gi] = r.triple;
        let t = InitialTriple::new(c(ar, ai), c(br, bi), c(gr, gi)).unwrap();
        if r.predicted_member {
            members += 1;
            member_worst = pmax(member_worst, r.max_violation);
        } else {
            outsiders += 1;
            weakest_witness = weakest_witness.min(classes::moment_witness(&t, theta));
        }
    }
    let passed = members == 100
        && outsiders == 100
        && member_worst < 1e-10
        && weakest_witness > 1e-10
        && closed_worst < 1e-12;
    Outcome {
        passed,
        worst: member_worst,
        note: format!(
            "members {members}, outsiders {outsiders}, weakest outsider witness {weakest_witness:.3e}, closed-form gap {closed_worst:.3e}"
        ),
    }
}

fn theorem3() -> Outcome {
    let mut member_worst = 0f64;
    let mut members = 0;
    for (i, theta) in theta_grid(5).into_iter().enumerate() {
        let reports = classes::check_theorem3(theta, 0.5, 500, 50, SEED + i as u64).unwrap();
        for r in reports.iter().filter(|r| r.predicted_member) {
            members += 1;
            member_worst = pmax(member_worst, r.max_violation);
        }
    }
    let closed_worst = (0..100u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(SEED ^ 5, i);
            let t = classes::random_triple(&mut rng);
            let theta = random_theta(&mut rng);
            let rows = rca::evolve(&t, theta, 3);
            rca::small_n_norms(&t, theta)
                .iter()
                .zip(&rows)
                .map(|(v, row)| (v - row.norm_sq()).abs())
                .fold(0.0, pmax)
        })
        .reduce(|| 0.0, pmax);
    Outcome {
        passed: members == 250 && member_worst < 1e-10 && closed_worst < 1e-12,
        worst: member_worst,
        note: format!(
            "{members} members, n <= 500; ||X(0..3)||^2 closed-form gap {closed_worst:.3e}"
        ),
    }
}

fn exact_norm() -> Outcome {
    let thetas = theta_grid(5);
    let cases: Vec<(usize, u64)> = (0..5).flat_map(|t| (0..50).map(move |i| (t, i))).collect();
    let total_worst = cases
        .par_iter()
        .map(|&(ti, i)| {
            let theta = thetas[ti];
            let t = classes::random_triple(&mut sample_rng(SEED ^ 6, ti as u64 * 1000 + i));
            let rows = rca::evolve(&t, theta, 50);
            rows.iter()
                .enumerate()
                .map(|(n, row)| {
                    let d = spectral::closed_form_norm(&t, theta, n).unwrap();
                    (d.total() - row.norm_sq()).abs()
                })
                .fold(0.0, pmax)
        })
        .reduce(|| 0.0, pmax);
    let osc_worst = cases
        .par_iter()
        .filter(|(_, i)| *i < 10)
        .map(|&(ti, i)| {
            let theta = thetas[ti];
            let mut rng = sample_rng(SEED ^ 7, ti as u64 * 1000 + i);
            let cc = [0.25, 0.5, 1.0, 2.0][i as usize % 4];
            let t = classes::sample_phi_star(cc, theta, &mut rng).unwrap();
            (0..=50)
                .map(|n| {
                    spectral::closed_form_norm(&t, theta, n)
                        .unwrap()
                        .oscillatory
                        .abs()
                })
                .fold(0.0, pmax)
        })
        .reduce(|| 0.0, pmax);
    Outcome {
        passed: total_worst < 1e-8 && osc_worst < 1e-8,
        worst: total_worst,
        note: format!("250 triples, n <= 50; conserving-class oscillatory max {osc_worst:.3e}"),
    }
}

fn h_identity() -> Outcome {
    let worst = (0..=200usize)
        .into_par_iter()
        .map(|n| {
            (0..10_000)
                .map(|i| spectral::h_n_value(-FRAC_PI_2 * i as f64 / 9_999.0, n).abs())
                .fold(0.0, pmax)
        })
        .reduce(|| 0.0, pmax);
    outcome(worst, 1e-13, "x in [-pi/2, 0], 10^4 points, n <= 200")
}

fn parseval() -> Outcome {
    let worst = (0..20u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(SEED ^ 8, i);
            let t = classes::random_triple(&mut rng);
            let theta = random_theta(&mut rng);
            rca::evolve(&t, theta, 100)
                .iter()
                .enumerate()
                .map(|(n, row)| {
                    let s =
                        spectral::parseval_norm(&t, theta, n, spectral::parseval_grid(n)).unwrap();
                    (s - row.norm_sq()).abs()
                })
                .fold(0.0, pmax)
        })
        .reduce(|| 0.0, pmax);
    outcome(worst, 1e-11, "20 random (triple, theta), n <= 100")
}

fn limits() -> Outcome {
    let mut window_worst = 0f64;
    for div in [6.0, 4.0, 3.0] {
        let theta = Theta::interior(PI / div).unwrap();
        let mean = qw::windowed_left_norm(&Qubit::left(), &Coin::theta(theta), 2000, 100);
        window_worst = pmax(window_worst, (mean - (1.0 - theta.sin() / 2.0)).abs());
    }
    let q = Qubit::new(c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)).unwrap();
    let mut balanced_worst = 0f64;
    for theta in theta_grid(5).into_iter().chain([Theta::HADAMARD]) {
        for s in QwState::trajectory(&q, &Coin::theta(theta)).take(201) {
            let n = s.chirality_norms();
            balanced_worst = pmax(
                balanced_worst,
                pmax((n.left_sq - 0.5).abs(), (n.right_sq - 0.5).abs()),
            );
        }
    }
    Outcome {
        passed: window_worst < 1e-3 && balanced_worst < 1e-12,
        worst: window_worst,
        note: format!("window [2000, 2100]; balanced qubit gap {balanced_worst:.3e}"),
    }
}

fn disjointness() -> Outcome {
    let mut counterexamples = 0;
    let mut runs = 0;
    for (ci, cc) in [0.25, 0.5, 1.0].into_iter().enumerate() {
        for (ti, theta) in theta_grid(5).into_iter().enumerate() {
            let r =
                classes::check_corollary4(cc, theta, 1000, SEED + (10 * ci + ti) as u64).unwrap();
            assert_eq!((r.perp_samples, r.star_samples), (1000, 1000));
            counterexamples += r.counterexamples.len();
            runs += 1;
        }
    }
    Outcome {
        passed: counterexamples == 0,
        worst: counterexamples as f64,
        note: format!("{runs} (c, theta) pairs x 2000 samples, max counts counterexamples"),
    }
}

fn reversibility() -> Outcome {
    let worst = (0..50u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(SEED ^ 11, i);
            let t = classes::random_triple(&mut rng);
            let theta = random_theta(&mut rng);
            let start = RcaState::initial(&t);
            let mut s = start.clone();
            for _ in 0..100 {
                s = s.step_theta(theta);
            }
            for _ in 0..100 {
                s = s.step_back(theta);
            }
            pmax(
                s.current().max_abs_diff(start.current()),
                s.next().max_abs_diff(start.next()),
            )
        })
        .reduce(|| 0.0, pmax);
    outcome(worst, 1e-9, "50 random (triple, theta), 100 steps each way")
}

fn componentwise(z: Complex64) -> f64 {
    pmax(z.re.abs(), z.im.abs())
}

fn mirror_lemma() -> Outcome {
    let worst = (0..30u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(SEED ^ 12, i);
            let theta = random_theta(&mut rng);
            let mut worst = 0f64;

            // beta = -gamma: X_k(n) = (-1)^n X_-k(n)
            let beta = classes::unit_disc(&mut rng);
            let t = InitialTriple::new(classes::unit_disc(&mut rng), beta, -beta).unwrap();
            for (n, row) in rca::evolve(&t, theta, 100).iter().enumerate() {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                for (k, v) in row.iter() {
                    worst = pmax(worst, componentwise(v - row.get(-k) * sign));
                }
            }

            // alpha = 0, beta real, gamma = e^{i xi} beta:
            // X_k(n) = (-1)^(n+1) e^{i xi} conj X_-k(n)
            let b: f64 = rng.random_range(-1.0..1.0);
            let phase = Complex64::from_polar(1.0, rng.random_range(0.0..TAU));
            let t = InitialTriple::new(c(0.0, 0.0), c(b, 0.0), phase * b).unwrap();
            for (n, row) in rca::evolve(&t, theta, 100).iter().enumerate() {
                let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
                for (k, v) in row.iter() {
                    worst = pmax(worst, componentwise(v - phase * row.get(-k).conj() * sign));
                }
            }
            worst
        })
        .reduce(|| 0.0, pmax);
    outcome(worst, 1e-13, "30 random instances of each family, n <= 100")
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("unitarity", unitarity),
        ("chirality coupling", coupling),
        ("hadamard two steps", hadamard),
        ("symmetric class", theorem2),
        ("conserving class", theorem3),
        ("exact norm formula", exact_norm),
        ("h_n identity", h_identity),
        ("parseval", parseval),
        ("chirality limits", limits),
        ("class disjointness", disjointness),
        ("reversibility", reversibility),
        ("mirror symmetries", mirror_lemma),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check);
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(o) => {
                let tag = if o.passed { "PASS" } else { "FAIL" };
                if !o.passed {
                    failed += 1;
                }
                println!(
                    "{tag} {:>2} {name}: max {:.3e} ({}) [{secs:.1}s]",
                    i + 1,
                    o.worst,
                    o.note
                );
            }
            Err(_) => {
                failed += 1;
                println!("FAIL {:>2} {name}: panicked [{secs:.1}s]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
