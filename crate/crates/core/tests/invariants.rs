use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use proptest::prelude::*;

use qwrca::classes;
use qwrca::qw::{self, Chirality, QwState};
use qwrca::rca::{self, RcaCoefficients, RcaState};
use qwrca::spectral;
use qwrca::{Coin, InitialTriple, Qubit, Theta};

fn amp() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn triple() -> impl Strategy<Value = InitialTriple> {
    (amp(), amp(), amp()).prop_map(|(a, b, g)| InitialTriple::new(a, b, g).unwrap())
}

fn theta() -> impl Strategy<Value = Theta> {
    (0.0..=FRAC_PI_2).prop_map(|t| Theta::new(t).unwrap())
}

fn interior_theta() -> impl Strategy<Value = Theta> {
    (0.01..FRAC_PI_2 - 0.01).prop_map(|t| Theta::interior(t).unwrap())
}

fn qubit() -> impl Strategy<Value = Qubit> {
    (amp(), amp())
        .prop_filter("nonzero", |(l, r)| l.norm_sqr() + r.norm_sqr() > 1e-3)
        .prop_map(|(l, r)| {
            let n = (l.norm_sqr() + r.norm_sqr()).sqrt();
            Qubit::new(l / n, r / n).unwrap()
        })
}

/// Sum with pairwise splitting, for comparison with the engine's row norms.
fn pairwise(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise(a) + pairwise(b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn walk_conserves_probability(q in qubit(), t in theta(), n in 0usize..300) {
        let s = QwState::evolve(&q, &Coin::theta(t), n);
        prop_assert!((s.total_probability() - 1.0).abs() < 1e-12);
        prop_assert!((s.chirality_norms().total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn walk_support_has_parity(q in qubit(), t in theta(), n in 1usize..60) {
        let s = QwState::evolve(&q, &Coin::theta(t), n);
        for (k, p) in s.distribution() {
            if (k - n as i64).rem_euclid(2) != 0 || k.unsigned_abs() > n as u64 {
                prop_assert_eq!(p, 0.0);
            }
        }
    }

    #[test]
    fn rca_is_linear(x in triple(), y in triple(), s in amp(), t in theta(), n in 0usize..60) {
        let lhs = rca::evolve(&x.scale(s).add(&y), t, n);
        let ex = rca::evolve(&x, t, n);
        let ey = rca::evolve(&y, t, n);
        for m in 0..=n {
            let rhs = ex[m].scale(s).add(&ey[m]);
            prop_assert!(lhs[m].max_abs_diff(&rhs) < 1e-12);
        }
    }

    #[test]
    fn theta_form_matches_general_form(x in triple(), t in theta(), n in 0usize..80) {
        let a = rca::evolve(&x, t, n);
        let b = rca::evolve_with(&x, &RcaCoefficients::from_coin(&Coin::theta(t)), n);
        prop_assert!(a[n].max_abs_diff(&b[n]) < 1e-12);
    }

    #[test]
    fn backward_undoes_forward(x in triple(), t in theta(), n in 0usize..100) {
        let start = RcaState::initial(&x);
        let mut s = start.clone();
        for _ in 0..n {
            s = s.step_theta(t);
        }
        for _ in 0..n {
            s = s.step_back(t);
        }
        prop_assert_eq!(s.time(), 0);
        prop_assert!(s.current().max_abs_diff(start.current()) < 1e-9);
        prop_assert!(s.next().max_abs_diff(start.next()) < 1e-9);
    }

    #[test]
    fn coupling_reproduces_both_chiralities(q in qubit(), t in theta(), n in 0usize..80) {
        let coin = Coin::theta(t);
        let s = QwState::evolve(&q, &coin, n);
        for ch in [Chirality::Left, Chirality::Right] {
            let rows = rca::evolve(&q.rca_triple(&coin, ch), t, n);
            prop_assert!(rows[n].max_abs_diff(s.chirality(ch)) < 1e-12);
        }
    }

    #[test]
    fn mirror_family(a in amp(), b in amp(), t in theta(), n in 0usize..100) {
        let x = InitialTriple::new(a, b, -b).unwrap();
        let row = &rca::evolve(&x, t, n)[n];
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        for (k, v) in row.iter() {
            let d = v - row.get(-k) * sign;
            prop_assert!(d.re.abs() < 1e-13 && d.im.abs() < 1e-13);
        }
    }

    #[test]
    fn conjugate_mirror_family(b in -1.0..1.0f64, xi in 0.0..TAU, t in theta(), n in 0usize..100) {
        let phase = Complex64::from_polar(1.0, xi);
        let zero = Complex64::new(0.0, 0.0);
        let x = InitialTriple::new(zero, Complex64::new(b, 0.0), phase * b).unwrap();
        let row = &rca::evolve(&x, t, n)[n];
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        for (k, v) in row.iter() {
            let d = v - phase * row.get(-k).conj() * sign;
            prop_assert!(d.re.abs() < 1e-13 && d.im.abs() < 1e-13);
        }
    }

    #[test]
    fn symmetric_class_has_zero_moment(seed in any::<u64>(), t in interior_theta()) {
        let x = classes::sample_phi_perp(&mut classes::sample_rng(seed, 0));
        prop_assert!(classes::in_phi_perp(&x));
        prop_assert!(classes::empirical_symmetric(&x, t, 60).holds);
        prop_assert!(classes::empirical_zero_moment(&x, t, 60).holds);
    }

    #[test]
    fn conserving_class_keeps_norm(seed in any::<u64>(), c in 0.05..3.0f64, t in interior_theta()) {
        let x = classes::sample_phi_star(c, t, &mut classes::sample_rng(seed, 0)).unwrap();
        prop_assert!(classes::in_phi_star(&x, c, t).unwrap());
        let check = classes::empirical_conserved(&x, t, c, 120);
        prop_assert!(check.max_violation < 1e-10 * c.max(1.0), "{:?}", check);
    }

    #[test]
    fn classes_never_overlap(seed in any::<u64>(), c in 0.05..3.0f64, t in interior_theta()) {
        let mut rng = classes::sample_rng(seed, 0);
        let perp = classes::match_norms(&classes::sample_phi_perp(&mut rng), c);
        prop_assert!(!(classes::in_phi_perp(&perp) && classes::in_phi_star(&perp, c, t).unwrap()));
        let star = classes::sample_phi_star(c, t, &mut rng).unwrap();
        prop_assert!(!classes::in_phi_perp(&star));
    }

    #[test]
    fn closed_forms_match_simulation(x in triple(), t in theta()) {
        let rows = rca::evolve(&x, t, 3);
        let m = rca::closed_moments(&x, t);
        let norms = rca::small_n_norms(&x, t);
        for n in 1..=3 {
            prop_assert!((m[n - 1] - rows[n].first_moment()).abs() < 1e-12);
        }
        for n in 0..=3 {
            prop_assert!((norms[n] - rows[n].norm_sq()).abs() < 1e-12);
        }
    }

    #[test]
    fn parseval_agrees_with_rows(x in triple(), t in interior_theta(), n in 0usize..100) {
        let row = &rca::evolve(&x, t, n)[n];
        let s = spectral::parseval_norm(&x, t, n, spectral::parseval_grid(n)).unwrap();
        prop_assert!((s - row.norm_sq()).abs() < 1e-11);
    }

    #[test]
    fn spectral_recurrence_matches_closed_form(x in triple(), t in (0.2..FRAC_PI_2 - 0.01).prop_map(|t| Theta::interior(t).unwrap()), xi in 0.0..TAU, n in 0usize..=1000) {
        let a = spectral::xt_closed(&x, t, xi, n).unwrap();
        let b = spectral::xt_recurrence(&x, t, xi, n);
        prop_assert!((a.re - b.re).abs() < 1e-11 && (a.im - b.im).abs() < 1e-11, "{a} vs {b}");
    }

    #[test]
    fn row_norm_matches_pairwise_sum(x in triple(), t in theta(), n in 0usize..200) {
        let row = &rca::evolve(&x, t, n)[n];
        let parts: Vec<f64> = row.values().iter().map(|v| v.norm_sqr()).collect();
        prop_assert!((row.norm_sq() - pairwise(&parts)).abs() < 1e-12 * (1.0 + row.norm_sq()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn coefficient_norms_are_equal(x in triple(), t in interior_theta()) {
        let (a, b) = spectral::coefficient_norms(&x, t, 1e-13).unwrap();
        prop_assert!((a - b).abs() < 1e-11);
        let limit = spectral::norm_limit(&x, t).unwrap();
        // the limit reaches ~300 at theta = 0.01, where 1e-11 is below the summation floor
        prop_assert!((a + b - limit).abs() < 1e-10);
    }

    #[test]
    fn conserving_class_steady_term_is_c(seed in any::<u64>(), c in 0.05..3.0f64, t in interior_theta(), n in 0usize..30) {
        let x = classes::sample_phi_star(c, t, &mut classes::sample_rng(seed, 0)).unwrap();
        let d = spectral::closed_form_norm(&x, t, n).unwrap();
        prop_assert!((d.steady - c).abs() < 1e-8 * c.max(1.0));
        prop_assert!(d.oscillatory.abs() < 1e-8 * c.max(1.0));
    }

    #[test]
    fn exact_norm_matches_rows(x in triple(), t in interior_theta(), n in 0usize..40) {
        let row = &rca::evolve(&x, t, n)[n];
        let d = spectral::closed_form_norm(&x, t, n).unwrap();
        prop_assert!((d.total() - row.norm_sq()).abs() < 1e-8);
    }
}

#[test]
fn spectral_recurrence_matches_closed_form_on_random_draws() {
    // uniform (triple, theta, xi); near theta = 0 and xi = pi/2 the recurrence
    // itself is ill-conditioned, which is why the proptest above bounds theta
    use rand::Rng;
    let mut worst = 0f64;
    for i in 0..2000 {
        let mut rng = classes::sample_rng(99, i);
        let x = classes::random_triple(&mut rng);
        let t = Theta::interior(rng.random_range(1e-9..FRAC_PI_2)).unwrap();
        let xi = rng.random_range(0.0..TAU);
        let n = rng.random_range(0..=1000);
        let d = spectral::xt_closed(&x, t, xi, n).unwrap() - spectral::xt_recurrence(&x, t, xi, n);
        worst = worst.max(d.re.abs()).max(d.im.abs());
    }
    assert!(worst < 1e-11, "{worst:e}");
}

#[test]
fn windowed_limit_error_shrinks_with_time() {
    // the error is not monotone step to step, only the endpoints are compared
    for div in [12.0, 6.0, 4.0, 3.0, 2.4] {
        let t = Theta::interior(PI / div).unwrap();
        let coin = Coin::theta(t);
        let target = qw::chirality_limits(&Qubit::left(), t).unwrap().left_sq;
        let early = (qw::windowed_left_norm(&Qubit::left(), &coin, 500, 100) - target).abs();
        let late = (qw::windowed_left_norm(&Qubit::left(), &coin, 2000, 100) - target).abs();
        assert!(late < early, "theta = pi/{div}: {early:e} -> {late:e}");
        assert!(late < 1e-3);
    }
}
