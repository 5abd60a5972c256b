//! Crate-wide error type.

use std::fmt;

/// Errors from design, analysis, runtime and simulation operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Model order must be at least 1 (and at most the supported maximum for
    /// the requested operation).
    InvalidOrder(usize),
    /// Closed-loop bandwidth must be positive and finite.
    InvalidBandwidth(f64),
    /// Observer bandwidth factor must be positive and finite.
    InvalidObserverFactor(f64),
    /// Critical gain parameter must be finite and nonzero.
    InvalidCriticalGain(f64),
    /// Sample time must be positive and finite.
    InvalidSampleTime(f64),
    /// Discrete observer pole must lie in [0, 1).
    InvalidObserverPole(f64),
    /// Gain vector has non-finite or non-positive entries.
    InvalidGains,
    /// Output limits must satisfy `u_min < u_max`.
    InvalidLimits,
    /// Vector or matrix dimensions do not match the model order.
    DimensionMismatch { expected: usize, actual: usize },
    /// The closed-loop denominator has no usable pole at the origin.
    DegenerateGains,
    /// A polynomial that must normalize to constant term 1 has a zero
    /// constant term.
    NormalizationFailure,
    /// Requested order is outside the supported range of this code path.
    UnsupportedOrder(usize),
    /// The observer-gain coefficient-matching system is singular.
    IllConditioned,
    /// The denominator polynomial has no root at z = 1 within tolerance, so
    /// the accumulator cannot be factored out.
    NotAnIntegrator,
    /// Controller step received a NaN or infinite sample.
    NonFiniteInput,
    /// Frequency-response evaluation hit a pole of the transfer function.
    PoleHit,
    /// The measured high-frequency magnitude slope is inconsistent with the
    /// claimed relative degree.
    WrongRelativeDegree { measured_db_per_decade: f64 },
    /// A closed-loop denominator polynomial vanished identically.
    AlgebraicDegeneracy,
    /// Transfer function numerator degree exceeds the denominator degree.
    ImproperTf,
    /// Matrix exponential overflowed for the given horizon.
    MatrixExpOverflow,
    /// The closed-loop plant must be strictly proper for simulation.
    DirectFeedthrough,
    /// The simulation trace contains no reference step.
    NoStepFound,
    /// Metrics were requested on a trace that terminated in a divergence
    /// fault.
    DivergedTrace { step: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidOrder(n) => write!(f, "invalid model order {n}"),
            Error::InvalidBandwidth(w) => write!(f, "closed-loop bandwidth must be > 0, got {w}"),
            Error::InvalidObserverFactor(k) => {
                write!(f, "observer bandwidth factor must be > 0, got {k}")
            }
            Error::InvalidCriticalGain(b) => {
                write!(f, "critical gain b0 must be finite and nonzero, got {b}")
            }
            Error::InvalidSampleTime(t) => write!(f, "sample time must be > 0, got {t}"),
            Error::InvalidObserverPole(z) => {
                write!(f, "observer pole must lie in [0, 1), got {z}")
            }
            Error::InvalidGains => write!(f, "gains must be finite and strictly positive"),
            Error::InvalidLimits => write!(f, "output limits must satisfy u_min < u_max"),
            Error::DimensionMismatch { expected, actual } => {
                write!(f, "dimension mismatch: expected {expected}, got {actual}")
            }
            Error::DegenerateGains => {
                write!(f, "closed-loop denominator has no usable origin pole")
            }
            Error::NormalizationFailure => {
                write!(f, "zero constant term in a polynomial that must normalize to 1")
            }
            Error::UnsupportedOrder(n) => write!(f, "order {n} not supported by this path"),
            Error::IllConditioned => write!(f, "observer gain system is singular"),
            Error::NotAnIntegrator => {
                write!(f, "denominator has no root at z = 1 within tolerance")
            }
            Error::NonFiniteInput => write!(f, "controller input is NaN or infinite"),
            Error::PoleHit => write!(f, "frequency response evaluated at a pole"),
            Error::WrongRelativeDegree { measured_db_per_decade } => write!(
                f,
                "high-frequency slope {measured_db_per_decade:.2} dB/decade inconsistent with requested relative degree"
            ),
            Error::AlgebraicDegeneracy => write!(f, "closed-loop denominator is identically zero"),
            Error::ImproperTf => write!(f, "transfer function is improper"),
            Error::MatrixExpOverflow => write!(f, "matrix exponential overflowed"),
            Error::DirectFeedthrough => {
                write!(f, "closed-loop simulation requires a strictly proper plant")
            }
            Error::NoStepFound => write!(f, "trace contains no reference step"),
            Error::DivergedTrace { step } => {
                write!(f, "trace diverged at step {step}")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
