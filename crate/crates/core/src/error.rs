//! Crate-wide error type.

use thiserror::Error;

use crate::bases::BasisKind;

/// Why a register dimension was rejected for a basis family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimensionReason {
    /// d = 2 is prime but even; the quadratic-phase family needs an odd prime.
    Even,
    /// Composite with at least two distinct prime factors, or an even composite.
    Composite,
    /// Odd prime powers p^k (k >= 2) admit full families in principle, but the
    /// quadratic-phase construction used here does not cover them.
    PrimePowerUnsupported,
}

impl std::fmt::Display for DimensionReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            DimensionReason::Even => "even",
            DimensionReason::Composite => "composite",
            DimensionReason::PrimePowerUnsupported => "prime power unsupported",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {d} invalid for {kind} bases: {reason}")]
    InvalidDimension {
        d: usize,
        kind: BasisKind,
        reason: DimensionReason,
    },
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("label {label} out of range for dimension {d}")]
    LabelOutOfRange { label: usize, d: usize },
    #[error("register dimensions {left:?} and {right:?} do not match")]
    DimensionMismatch { left: Vec<usize>, right: Vec<usize> },
    #[error("register index {register} out of range for {registers} registers")]
    RegisterOutOfRange { register: usize, registers: usize },
    #[error("register index {0} contracted twice")]
    DuplicateRegister(usize),
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("amplitudes must be finite")]
    NonFiniteAmplitude,
    #[error("amplitude count {got} does not match register dimensions (expected {expected})")]
    AmplitudeCount { got: usize, expected: usize },
    #[error("measurement basis is not orthonormal and complete (max deviation {deviation:.3e})")]
    NonOrthonormalBasis { deviation: f64 },
    #[error("cannot measure or normalize a zero-norm state")]
    ZeroNormState,
    #[error("state of {d}^{n} amplitudes exceeds the dense-vector budget of {cap}")]
    StateTooLarge { d: usize, n: usize, cap: usize },
    #[error("labels violate the consistency conditions")]
    InconsistentLabels,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("missing party data: {0}")]
    MissingPartyData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
