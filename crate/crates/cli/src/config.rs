//! Run and sweep configuration as read from JSON or assembled from flags.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use qwrca::qw::Chirality;
use qwrca::{Coin, InitialTriple, Qubit, Theta};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Qw,
    Rca,
    Classify,
    Norms,
    Limits,
    Verify,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Qw => "qw",
            Mode::Rca => "rca",
            Mode::Classify => "classify",
            Mode::Norms => "norms",
            Mode::Limits => "limits",
            Mode::Verify => "verify",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Starting state: a walker qubit or an RCA triple.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Initial {
    Qubit(Qubit),
    Triple(InitialTriple),
}

/// Explicit coin entries, each `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoinSpec {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl CoinSpec {
    pub fn to_coin(self) -> CliResult<Coin> {
        Ok(Coin::unitary(self.a, self.b, self.c, self.d)?)
    }
}

pub const DEFAULT_STEPS: usize = 100;
pub const DEFAULT_SEED: u64 = 42;

/// Everything a single run may be given. Every field is optional so that
/// flags can fill or override a partial file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    /// Radians.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    /// Rational multiple of π, e.g. `"1/4"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_frac: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coin: Option<CoinSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<Initial>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chirality: Option<Chirality>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Run the reduced verify suite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quick: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

/// Validated single-run job.
#[derive(Clone, Debug, PartialEq)]
pub enum Job {
    Qw {
        theta: Option<Theta>,
        coin: Coin,
        qubit: Qubit,
        steps: usize,
    },
    Rca {
        theta: Option<Theta>,
        coin: Option<Coin>,
        triple: InitialTriple,
        steps: usize,
    },
    Classify {
        theta: Theta,
        triple: InitialTriple,
        c: f64,
        steps: usize,
    },
    Norms {
        theta: Theta,
        triple: InitialTriple,
        steps: usize,
    },
    Limits {
        theta: Theta,
        qubit: Option<Qubit>,
        triple: Option<InitialTriple>,
    },
    Verify {
        seed: u64,
        quick: bool,
    },
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
}

pub fn parse_theta(theta: Option<f64>, frac: Option<&str>) -> CliResult<Option<Theta>> {
    match (theta, frac) {
        (Some(_), Some(_)) => Err(CliError::config("give theta or theta_frac, not both")),
        (Some(t), None) => Ok(Some(Theta::new(t)?)),
        (None, Some(f)) => Ok(Some(Theta::from_pi_fraction(f)?)),
        (None, None) => Ok(None),
    }
}

impl RunConfig {
    /// Fields set in `overrides` replace those in `self`.
    pub fn merged(mut self, overrides: RunConfig) -> RunConfig {
        macro_rules! take {
            ($($f:ident),*) => { $( if overrides.$f.is_some() { self.$f = overrides.$f; } )* };
        }
        if overrides.theta.is_some() || overrides.theta_frac.is_some() {
            self.theta = None;
            self.theta_frac = None;
        }
        take!(
            mode,
            theta,
            theta_frac,
            coin,
            initial,
            chirality,
            steps,
            c,
            seed,
            quick,
            output_path,
            format
        );
        self
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    fn theta(&self) -> CliResult<Option<Theta>> {
        parse_theta(self.theta, self.theta_frac.as_deref())
    }

    fn require_theta(&self) -> CliResult<Theta> {
        self.theta()?
            .ok_or_else(|| CliError::config("theta (or theta_frac) is required"))
    }

    fn require_h_coin(&self, mode: Mode) -> CliResult<()> {
        if self.coin.is_some() {
            return Err(CliError::config(format!(
                "mode {} only supports the H(theta) coin",
                mode.name()
            )));
        }
        Ok(())
    }

    /// Triple for the RCA-side modes; a qubit needs `chirality` and is
    /// converted through `coin`.
    fn triple(&self, coin: &Coin) -> CliResult<InitialTriple> {
        match self.initial {
            Some(Initial::Triple(t)) => {
                if self.chirality.is_some() {
                    return Err(CliError::config(
                        "chirality only applies to a qubit initial state",
                    ));
                }
                Ok(t)
            }
            Some(Initial::Qubit(q)) => {
                let ch = self.chirality.ok_or_else(|| {
                    CliError::config(
                        "a qubit initial state needs chirality (left or right) in this mode",
                    )
                })?;
                Ok(q.rca_triple(coin, ch))
            }
            None => Err(CliError::config(
                "initial state (qubit or triple) is required",
            )),
        }
    }

    pub fn job(&self) -> CliResult<Job> {
        let mode = self
            .mode
            .ok_or_else(|| CliError::config("mode is required"))?;
        let steps = self.steps.unwrap_or(DEFAULT_STEPS);
        if self.c.is_some() && mode != Mode::Classify {
            return Err(CliError::config("c only applies to classify"));
        }
        match mode {
            Mode::Qw => {
                let qubit = match self.initial {
                    Some(Initial::Qubit(q)) => q,
                    Some(Initial::Triple(_)) => {
                        return Err(CliError::config("mode qw needs a qubit, not a triple"))
                    }
                    None => return Err(CliError::config("initial qubit is required")),
                };
                let (theta, coin) = self.coin_or_theta()?;
                Ok(Job::Qw {
                    theta,
                    coin,
                    qubit,
                    steps,
                })
            }
            Mode::Rca => {
                let (theta, coin) = self.coin_or_theta()?;
                let triple = self.triple(&coin)?;
                let explicit = self.coin.is_some().then_some(coin);
                Ok(Job::Rca {
                    theta,
                    coin: explicit,
                    triple,
                    steps,
                })
            }
            Mode::Classify => {
                self.require_h_coin(mode)?;
                let theta = self.require_theta()?.require_interior()?;
                let triple = self.triple(&Coin::theta(theta))?;
                let c = self.c.unwrap_or_else(|| triple.alpha_sq());
                Ok(Job::Classify {
                    theta,
                    triple,
                    c,
                    steps,
                })
            }
            Mode::Norms => {
                self.require_h_coin(mode)?;
                let theta = self.require_theta()?.require_interior()?;
                let triple = self.triple(&Coin::theta(theta))?;
                Ok(Job::Norms {
                    theta,
                    triple,
                    steps,
                })
            }
            Mode::Limits => {
                self.require_h_coin(mode)?;
                let theta = self.require_theta()?.require_interior()?;
                match self.initial {
                    Some(Initial::Qubit(q)) => Ok(Job::Limits {
                        theta,
                        qubit: Some(q),
                        triple: self
                            .chirality
                            .map(|ch| q.rca_triple(&Coin::theta(theta), ch)),
                    }),
                    Some(Initial::Triple(_)) => Ok(Job::Limits {
                        theta,
                        qubit: None,
                        triple: Some(self.triple(&Coin::theta(theta))?),
                    }),
                    None => Err(CliError::config(
                        "initial state (qubit or triple) is required",
                    )),
                }
            }
            Mode::Verify => Ok(Job::Verify {
                seed: self.seed.unwrap_or(DEFAULT_SEED),
                quick: self.quick.unwrap_or(false),
            }),
        }
    }

    /// Explicit coin if given (theta then optional), else `H(theta)`.
    fn coin_or_theta(&self) -> CliResult<(Option<Theta>, Coin)> {
        let theta = self.theta()?;
        match (self.coin, theta) {
            (Some(spec), t) => Ok((t, spec.to_coin()?)),
            (None, Some(t)) => Ok((Some(t), Coin::theta(t))),
            (None, None) => Err(CliError::config(
                "theta (or theta_frac, or an explicit coin) is required",
            )),
        }
    }
}

/// Cross product of angles and initial states run in one mode.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub thetas: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub theta_fracs: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub initials: Vec<Initial>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chirality: Option<Chirality>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

/// One cell of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub theta: f64,
    pub initial_index: usize,
    pub config: RunConfig,
}

impl SweepConfig {
    pub fn merged(mut self, o: SweepConfig) -> SweepConfig {
        if o.mode.is_some() {
            self.mode = o.mode;
        }
        if !o.thetas.is_empty() || !o.theta_fracs.is_empty() {
            self.thetas = o.thetas;
            self.theta_fracs = o.theta_fracs;
        }
        if !o.initials.is_empty() {
            self.initials = o.initials;
        }
        macro_rules! take {
            ($($f:ident),*) => { $( if o.$f.is_some() { self.$f = o.$f; } )* };
        }
        take!(chirality, steps, c, output_path, format);
        self
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    pub fn cells(&self) -> CliResult<(Mode, Vec<Cell>)> {
        let mode = self
            .mode
            .ok_or_else(|| CliError::config("sweep mode is required"))?;
        if mode == Mode::Verify {
            return Err(CliError::config("verify cannot be swept"));
        }
        let mut thetas = Vec::new();
        for &t in &self.thetas {
            thetas.push(Theta::new(t)?.radians());
        }
        for f in &self.theta_fracs {
            thetas.push(Theta::from_pi_fraction(f)?.radians());
        }
        if thetas.is_empty() {
            return Err(CliError::config("sweep needs at least one theta"));
        }
        if self.initials.is_empty() {
            return Err(CliError::config("sweep needs at least one initial state"));
        }
        if self.c.is_some() && mode != Mode::Classify {
            return Err(CliError::config("c only applies to classify"));
        }
        let cells = thetas
            .iter()
            .flat_map(|&theta| {
                self.initials.iter().enumerate().map(move |(i, init)| Cell {
                    theta,
                    initial_index: i,
                    config: RunConfig {
                        mode: Some(mode),
                        theta: Some(theta),
                        initial: Some(*init),
                        chirality: self.chirality.filter(|_| matches!(init, Initial::Qubit(_))),
                        steps: self.steps,
                        c: self.c,
                        ..Default::default()
                    },
                })
            })
            .collect();
        Ok((mode, cells))
    }
}
