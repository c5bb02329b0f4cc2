use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("theta = {0} lies outside [0, pi/2]")]
    ThetaOutOfRange(f64),

    #[error("theta = {0} must lie strictly inside (0, pi/2)")]
    ThetaNotInterior(f64),

    #[error("invalid pi fraction {0:?}; expected something like \"1/4\"")]
    BadPiFraction(String),

    #[error("amplitude is not finite")]
    NonFinite,

    #[error("qubit is not normalized: |alpha_l|^2 + |alpha_r|^2 = {0}")]
    NotNormalized(f64),

    #[error("coin is not unitary (largest residual {0:e})")]
    NotUnitary(f64),

    #[error("conserved constant c = {0} must be finite and non-negative")]
    InvalidConstant(f64),

    #[error("Parseval grid of {grid} points cannot resolve step {step}; need at least {required}")]
    GridTooCoarse {
        grid: usize,
        step: usize,
        required: usize,
    },

    #[error(
        "quadrature did not converge: error estimate {estimate:e} after {intervals} subintervals"
    )]
    Quadrature { estimate: f64, intervals: usize },

    #[error("sampler constraints unsatisfiable: {0}")]
    Unsatisfiable(String),
}
