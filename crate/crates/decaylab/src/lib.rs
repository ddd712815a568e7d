//! Completely positive, trace-preserving evolution of unstable particles.
//!
//! An unstable particle is modeled as an open system on the direct sum of its
//! particle space and a one-dimensional vacuum sector, with a superselection
//! rule forbidding particle--vacuum coherences.  The time evolution is a
//! one-parameter dynamical semigroup of CP trace-preserving maps, available in
//! three equivalent forms: a closed-form propagator, operator-sum (Kraus)
//! representations, and a Lindblad master equation.
//!
//! Two channels are implemented:
//!
//! * [`scalar`] -- a two-level (particle plus vacuum) channel for a neutral
//!   pseudoscalar like the pion; with superselection it reduces to a
//!   time-dependent amplitude-damping operation.
//! * [`meson`] -- a three-level channel for neutral kaons or B mesons, where
//!   the nonorthogonal short/long-lived eigenbasis (overlap `delta_L`,
//!   quantifying CP violation) requires a metric `g` in the operator-sum
//!   completeness relation.
//!
//! Complete positivity puts an upper bound `lambda_max` on the decoherence
//! parameter of the meson channel; [`bounds`] computes it together with the
//! boundary time `t_plus` and the per-time allowed band.  [`dynamics`] holds
//! the representation-independent machinery (Kraus application, RK4 master
//! equation integration, tensor evolution of noninteracting pairs), and
//! [`linalg`] a small dense complex-matrix layer sized for dimensions up to 9.
//!
//! See the `examples/` directory for runnable walkthroughs of each
//! capability, and the `decaylab` binary for CSV emission and verification.

pub mod bounds;
pub mod cli;
pub mod dynamics;
pub mod linalg;
pub mod meson;
pub mod presets;
pub mod scalar;
pub mod units;

pub use bounds::BoundReport;
pub use dynamics::{KrausSet, LindbladModel};
pub use linalg::CMatrix;
pub use meson::{CpViolation, MesonParams, StateKind, TildeState};
pub use presets::ParticlePreset;
pub use scalar::{ScalarParams, ScalarState};

/// Errors shared across the crate.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("not Hermitian")]
    NotHermitian,
    #[error("negative time")]
    NegativeTime,
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("superselection violated")]
    SuperselectionViolated,
    #[error("z too large: L1 coefficient imaginary")]
    ZTooLarge,
    #[error("Lindblad family invalid: L1 coefficient imaginary")]
    LindbladInvalid,
    #[error("not completely positive at t = {t}: radicand {radicand}")]
    NotCompletelyPositive { t: f64, radicand: f64 },
    #[error("no t_plus: left bound never active")]
    NoTPlus,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
