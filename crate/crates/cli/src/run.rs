//! Executes a validated [`Job`] and produces its report.

use num_complex::Complex64;
use qwrca::classes::{self, EmpiricalCheck, PerpBranch, StarResiduals};
use qwrca::qw::QwState;
use qwrca::rca::{self, RcaCoefficients};
use qwrca::spectral;
use qwrca::verify::{self, VerifyConfig, VerifyReport};
use qwrca::{Coin, InitialTriple, Qubit};
use serde::{Deserialize, Serialize};

use crate::config::Job;
use crate::error::CliResult;

/// One site of one step: amplitude and its squared modulus.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub n: usize,
    pub k: i64,
    pub re: f64,
    pub im: f64,
    pub prob_or_sq: f64,
}

impl TrajectoryRecord {
    pub fn new(n: usize, k: i64, v: Complex64) -> Self {
        TrajectoryRecord {
            n,
            k,
            re: v.re,
            im: v.im,
            prob_or_sq: v.norm_sqr(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QwSite {
    pub k: i64,
    pub left: Complex64,
    pub right: Complex64,
    pub prob: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QwStep {
    pub n: usize,
    pub left_sq: f64,
    pub right_sq: f64,
    pub total: f64,
    pub sites: Vec<QwSite>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QwReport {
    pub theta: Option<f64>,
    /// `[a, b, c, d]`
    pub coin: [Complex64; 4],
    pub qubit: Qubit,
    pub steps: Vec<QwStep>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RcaStep {
    pub n: usize,
    pub norm_sq: f64,
    pub first_moment: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RcaReport {
    pub theta: Option<f64>,
    pub coefficients: RcaCoefficients,
    pub triple: InitialTriple,
    pub records: Vec<TrajectoryRecord>,
    pub summary: Vec<RcaStep>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub theta: f64,
    pub c: f64,
    pub triple: InitialTriple,
    pub in_phi_perp: bool,
    pub perp_branch: Option<PerpBranch>,
    pub in_phi_star: bool,
    pub star_residuals: StarResiduals,
    pub symmetric: EmpiricalCheck,
    pub zero_moment: EmpiricalCheck,
    pub conserved: EmpiricalCheck,
    /// Largest closed-form `|m(1..3)|`.
    pub moment_witness: f64,
    /// Largest closed-form `|‖X(0..3)‖² − c|`.
    pub norm_witness: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormRow {
    pub n: usize,
    pub direct: f64,
    pub parseval: f64,
    pub closed_form: f64,
    pub steady: f64,
    pub oscillatory: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormsReport {
    pub theta: f64,
    pub triple: InitialTriple,
    pub rows: Vec<NormRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitsReport {
    pub theta: f64,
    /// Limit of `‖Ψᴸ(n)‖²`; qubit input only.
    pub left_limit: Option<f64>,
    /// Limit of `‖Ψᴿ(n)‖²`; qubit input only.
    pub right_limit: Option<f64>,
    /// Limit of `‖X(n)‖²` for the triple, or for the qubit's coupled triple
    /// when a chirality is given.
    pub norm_limit: Option<f64>,
}

/// Output of every mode except `verify`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Report {
    Qw(QwReport),
    Rca(RcaReport),
    Classify(ClassifyReport),
    Norms(NormsReport),
    Limits(LimitsReport),
}

pub enum Outcome {
    Report(Report),
    Verify(VerifyReport),
}

fn coin_entries(coin: &Coin) -> [Complex64; 4] {
    [coin.a(), coin.b(), coin.c(), coin.d()]
}

fn run_qw(theta: Option<f64>, coin: &Coin, qubit: &Qubit, steps: usize) -> QwReport {
    let steps = QwState::trajectory(qubit, coin)
        .take(steps + 1)
        .map(|s| {
            let norms = s.chirality_norms();
            let sites = s
                .left()
                .sites()
                .map(|k| {
                    let (l, r) = (s.left().get(k), s.right().get(k));
                    QwSite {
                        k,
                        left: l,
                        right: r,
                        prob: l.norm_sqr() + r.norm_sqr(),
                    }
                })
                .collect();
            QwStep {
                n: s.time(),
                left_sq: norms.left_sq,
                right_sq: norms.right_sq,
                total: norms.total(),
                sites,
            }
        })
        .collect();
    QwReport {
        theta,
        coin: coin_entries(coin),
        qubit: *qubit,
        steps,
    }
}

fn run_rca(
    theta: Option<f64>,
    coeffs: RcaCoefficients,
    triple: &InitialTriple,
    steps: usize,
) -> RcaReport {
    let rows = rca::evolve_with(triple, &coeffs, steps);
    let records = rows
        .iter()
        .enumerate()
        .flat_map(|(n, row)| row.iter().map(move |(k, v)| TrajectoryRecord::new(n, k, v)))
        .collect();
    let summary = rca::moments(&rows)
        .into_iter()
        .map(|m| RcaStep {
            n: m.n,
            norm_sq: m.norm_sq,
            first_moment: m.first_moment,
        })
        .collect();
    RcaReport {
        theta,
        coefficients: coeffs,
        triple: *triple,
        records,
        summary,
    }
}

pub fn run_job(job: &Job) -> CliResult<Outcome> {
    let report = match job {
        Job::Qw {
            theta,
            coin,
            qubit,
            steps,
        } => Report::Qw(run_qw(theta.map(|t| t.radians()), coin, qubit, *steps)),
        Job::Rca {
            theta,
            coin,
            triple,
            steps,
        } => {
            let coeffs = match (coin, theta) {
                (Some(coin), _) => RcaCoefficients::from_coin(coin),
                (None, Some(t)) => RcaCoefficients::Theta { theta: *t },
                (None, None) => unreachable!("validated by RunConfig::job"),
            };
            Report::Rca(run_rca(theta.map(|t| t.radians()), coeffs, triple, *steps))
        }
        Job::Classify {
            theta,
            triple,
            c,
            steps,
        } => {
            let theta = *theta;
            Report::Classify(ClassifyReport {
                theta: theta.radians(),
                c: *c,
                triple: *triple,
                in_phi_perp: classes::in_phi_perp(triple),
                perp_branch: classes::phi_perp_branch(triple),
                in_phi_star: classes::in_phi_star(triple, *c, theta)?,
                star_residuals: classes::phi_star_residuals(triple, *c, theta)?,
                symmetric: classes::empirical_symmetric(triple, theta, *steps),
                zero_moment: classes::empirical_zero_moment(triple, theta, *steps),
                conserved: classes::empirical_conserved(triple, theta, *c, *steps),
                moment_witness: classes::moment_witness(triple, theta),
                norm_witness: classes::norm_witness(triple, theta, *c),
            })
        }
        Job::Norms {
            theta,
            triple,
            steps,
        } => {
            let rows = rca::evolve(triple, *theta, *steps)
                .iter()
                .enumerate()
                .map(|(n, row)| -> CliResult<NormRow> {
                    let d = spectral::closed_form_norm(triple, *theta, n)?;
                    Ok(NormRow {
                        n,
                        direct: row.norm_sq(),
                        parseval: spectral::parseval_norm(
                            triple,
                            *theta,
                            n,
                            spectral::parseval_grid(n),
                        )?,
                        closed_form: d.total(),
                        steady: d.steady,
                        oscillatory: d.oscillatory,
                    })
                })
                .collect::<CliResult<Vec<_>>>()?;
            Report::Norms(NormsReport {
                theta: theta.radians(),
                triple: *triple,
                rows,
            })
        }
        Job::Limits {
            theta,
            qubit,
            triple,
        } => {
            let chirality = qubit
                .as_ref()
                .map(|q| qwrca::qw::chirality_limits(q, *theta))
                .transpose()?;
            Report::Limits(LimitsReport {
                theta: theta.radians(),
                left_limit: chirality.map(|c| c.left_sq),
                right_limit: chirality.map(|c| c.right_sq),
                norm_limit: triple
                    .as_ref()
                    .map(|t| spectral::norm_limit(t, *theta))
                    .transpose()?,
            })
        }
        Job::Verify { seed, quick } => {
            let cfg = if *quick {
                VerifyConfig::quick(*seed)
            } else {
                VerifyConfig::full(*seed)
            };
            return Ok(Outcome::Verify(verify::run(&cfg)?));
        }
    };
    Ok(Outcome::Report(report))
}
