//! Discrete-time quantum walks on the integer line and the reversible
//! cellular automaton (RCA) obtained by uncoupling their two chirality
//! components.
//!
//! The crate is organised bottom-up:
//!
//! * [`coin`] and [`state`] hold the value types: coins, angles, qubits,
//!   RCA initial triples and dense lattice rows.
//! * [`qw`] evolves the coined walk and couples it to the RCA.
//! * [`rca`] evolves the scalar recurrence forwards and backwards and
//!   computes norms and first moments, including their small-step closed
//!   forms.
//! * [`classes`] decides membership in the symmetric and norm-conserving
//!   initial-state classes, samples them, and checks the equivalences
//!   between the algebraic and the dynamical characterisations.
//! * [`spectral`] is the Fourier side: eigenvalues, Parseval, the exact
//!   integral representation of `‖X(n)‖²` and its large-`n` limit.
//! * [`verify`] bundles every check into a deterministic, seeded report.
//!
//! All amplitudes are [`num_complex::Complex64`].

pub mod classes;
pub mod coin;
mod error;
pub mod quadrature;
pub mod qw;
pub mod rca;
pub mod spectral;
pub mod state;
pub mod verify;

pub use coin::{Coin, Theta, UnitarityCheck, UnitarityReport};
pub use error::{Error, Result};
pub use state::{Amplitude, AmplitudeRow, InitialTriple, Qubit};

/// Componentwise absolute tolerance used for equality of complex values.
pub const COMPLEX_TOL: f64 = 1e-12;
