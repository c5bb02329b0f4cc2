//! Coin matrices and the angle parameter of the `H(θ)` family.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Tolerance on each unitarity identity.
pub const UNITARY_TOL: f64 = 1e-12;

/// Rotation angle of the `H(θ)` coin, in radians.
///
/// Construction only admits `θ ∈ [0, π/2]`. The Fourier-side and
/// classification code needs the open interval and asks for it through
/// [`Theta::interior`] or [`Theta::require_interior`].
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Theta(f64);

impl Theta {
    pub const HADAMARD: Theta = Theta(std::f64::consts::FRAC_PI_4);

    pub fn new(radians: f64) -> Result<Self> {
        if radians.is_finite() && (0.0..=FRAC_PI_2).contains(&radians) {
            Ok(Theta(radians))
        } else {
            Err(Error::ThetaOutOfRange(radians))
        }
    }

    /// An angle strictly inside `(0, π/2)`.
    pub fn interior(radians: f64) -> Result<Self> {
        Theta::new(radians)
            .map_err(|_| Error::ThetaNotInterior(radians))?
            .require_interior()
    }

    /// Parses a rational multiple of π such as `"1/4"`, `"1/3"` or `"0.25"`.
    pub fn from_pi_fraction(text: &str) -> Result<Self> {
        let bad = || Error::BadPiFraction(text.to_string());
        let frac = match text.trim().split_once('/') {
            Some((num, den)) => {
                let num: f64 = num.trim().parse().map_err(|_| bad())?;
                let den: f64 = den.trim().parse().map_err(|_| bad())?;
                if den == 0.0 {
                    return Err(bad());
                }
                num / den
            }
            None => text.trim().parse().map_err(|_| bad())?,
        };
        Theta::new(PI * frac)
    }

    pub fn require_interior(self) -> Result<Self> {
        if self.0 > 0.0 && self.0 < FRAC_PI_2 {
            Ok(self)
        } else {
            Err(Error::ThetaNotInterior(self.0))
        }
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn cos(self) -> f64 {
        self.0.cos()
    }

    pub fn sin(self) -> f64 {
        self.0.sin()
    }
}

impl TryFrom<f64> for Theta {
    type Error = Error;

    fn try_from(radians: f64) -> Result<Self> {
        Theta::new(radians)
    }
}

impl From<Theta> for f64 {
    fn from(theta: Theta) -> f64 {
        theta.0
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A 2×2 coin `[[a, b], [c, d]]` with its determinant cached.
///
/// [`Coin::new`] accepts any entries so that non-unitary matrices can be
/// inspected with [`Coin::unitarity`]; [`Coin::unitary`] rejects them.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coin {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
    delta: Complex64,
}

impl Coin {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Coin {
            a,
            b,
            c,
            d,
            delta: a * d - b * c,
        }
    }

    pub fn unitary(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let coin = Coin::new(a, b, c, d);
        if [a, b, c, d].iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite);
        }
        let report = coin.unitarity();
        if report.passed() {
            Ok(coin)
        } else {
            Err(Error::NotUnitary(report.max_residual()))
        }
    }

    /// `H(θ) = [[cos θ, sin θ], [sin θ, −cos θ]]`.
    pub fn theta(theta: Theta) -> Self {
        let (s, c) = theta.radians().sin_cos();
        Coin::new(
            Complex64::new(c, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(-c, 0.0),
        )
    }

    pub fn hadamard() -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Coin::new(h, h, h, -h)
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Coin::new(one, zero, zero, one)
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    pub fn d(&self) -> Complex64 {
        self.d
    }

    /// `Δ = det U = ad − bc`.
    pub fn delta(&self) -> Complex64 {
        self.delta
    }

    pub fn unitarity(&self) -> UnitarityReport {
        let (a, b, c, d, delta) = (self.a, self.b, self.c, self.d, self.delta);
        let norms = (a.norm_sqr() + c.norm_sqr() - 1.0)
            .abs()
            .max((b.norm_sqr() + d.norm_sqr() - 1.0).abs());
        let orthogonality = (a * c.conj() + b * d.conj()).norm();
        let determinant_form = (c + delta * b.conj())
            .norm()
            .max((d - delta * a.conj()).norm());
        let determinant_modulus = (delta.norm() - 1.0).abs();
        let check = |identity, residual: f64| UnitarityCheck {
            identity,
            residual,
            passed: residual < UNITARY_TOL,
        };
        UnitarityReport {
            checks: [
                check("|a|^2+|c|^2 = |b|^2+|d|^2 = 1", norms),
                check("a*conj(c) + b*conj(d) = 0", orthogonality),
                check("c = -delta*conj(b), d = delta*conj(a)", determinant_form),
                check("|delta| = 1", determinant_modulus),
            ],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnitarityCheck {
    pub identity: &'static str,
    pub residual: f64,
    pub passed: bool,
}

/// Residuals of the four identities a unitary coin satisfies.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnitarityReport {
    pub checks: [UnitarityCheck; 4],
}

impl UnitarityReport {
    pub fn passed(&self) -> bool {
        self.checks
            .iter()
            .all(|c| c.passed && c.residual.is_finite())
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn hadamard_is_theta_quarter_pi() {
        let h = Coin::theta(Theta::new(FRAC_PI_4).unwrap());
        let s = FRAC_1_SQRT_2;
        assert!((h.a() - re(s)).norm() < 1e-15);
        assert!((h.b() - re(s)).norm() < 1e-15);
        assert!((h.c() - re(s)).norm() < 1e-15);
        assert!((h.d() - re(-s)).norm() < 1e-15);
    }

    #[test]
    fn theta_zero_and_third() {
        let c0 = Coin::theta(Theta::new(0.0).unwrap());
        assert_eq!(
            (c0.a(), c0.b(), c0.c(), c0.d()),
            (re(1.0), re(0.0), re(0.0), re(-1.0))
        );

        let c3 = Coin::theta(Theta::from_pi_fraction("1/3").unwrap());
        assert!((c3.a().re - 0.5).abs() < 1e-15);
        assert!((c3.b().re - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((c3.c().re - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((c3.d().re + 0.5).abs() < 1e-15);
    }

    #[test]
    fn theta_range_is_enforced() {
        assert!(Theta::new(-0.1).is_err());
        assert!(Theta::new(FRAC_PI_2 + 1e-9).is_err());
        assert!(Theta::new(f64::NAN).is_err());
        assert!(Theta::new(FRAC_PI_2).is_ok());
        assert!(Theta::interior(0.0).is_err());
        assert!(Theta::interior(FRAC_PI_2).is_err());
        assert!(Theta::interior(1.0).is_ok());
    }

    #[test]
    fn pi_fractions() {
        assert_eq!(Theta::from_pi_fraction("1/4").unwrap().radians(), PI / 4.0);
        assert_eq!(
            Theta::from_pi_fraction(" 1 / 6 ").unwrap().radians(),
            PI / 6.0
        );
        assert_eq!(Theta::from_pi_fraction("0.5").unwrap().radians(), FRAC_PI_2);
        assert!(Theta::from_pi_fraction("1/0").is_err());
        assert!(Theta::from_pi_fraction("abc").is_err());
        assert!(Theta::from_pi_fraction("3/4").is_err());
    }

    #[test]
    fn hadamard_passes_unitarity() {
        let report = Coin::hadamard().unitarity();
        assert!(report.passed());
        assert!(report.max_residual() < 1e-15, "{report:?}");
    }

    #[test]
    fn identity_coin_passes() {
        let coin = Coin::identity();
        assert_eq!(coin.delta(), re(1.0));
        assert!(coin.unitarity().passed());
    }

    #[test]
    fn rank_one_coin_fails_orthogonality() {
        let s = re(FRAC_1_SQRT_2);
        let report = Coin::new(s, s, s, s).unitarity();
        assert!(!report.passed());
        assert!(!report.checks[1].passed);
        assert!((report.checks[1].residual - 1.0).abs() < 1e-15);
        assert!(Coin::unitary(s, s, s, s).is_err());
    }

    #[test]
    fn theta_family_is_unitary_with_determinant_minus_one() {
        for i in 1..=100 {
            let theta = Theta::new(FRAC_PI_2 * i as f64 / 101.0).unwrap();
            let coin = Coin::theta(theta);
            let report = coin.unitarity();
            assert!(report.max_residual() < 1e-14, "theta {theta}: {report:?}");
            assert!((coin.delta() - re(-1.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn complex_unitary_coin() {
        // e^{iπ/3} times a real rotation
        let ph = Complex64::from_polar(1.0, PI / 3.0);
        let (s, c) = 0.4f64.sin_cos();
        let coin = Coin::unitary(ph * c, -ph * s, ph * s, ph * c).unwrap();
        assert!((coin.delta().norm() - 1.0).abs() < 1e-15);
    }
}
