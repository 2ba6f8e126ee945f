//! Error types shared by all solver and recovery modules.

use alloc::string::String;
use core::fmt;

use crate::geometry::Dimension;

/// Failure modes of construction, solving, and recovery operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the mathematical domain of a function
    /// (negative Bessel argument, zero radius, ...).
    Domain { what: &'static str },
    /// Invalid construction parameters; the message names the offending
    /// field and the violated constraint.
    Invalid { what: String },
    /// Wave vectors are not on the same energy shell (|k| != |l|).
    ShellMismatch { k_norm: f64, l_norm: f64 },
    /// Mixed 2-D and 3-D quantities.
    DimensionMismatch { expected: Dimension, got: Dimension },
    /// Evaluation point must lie strictly outside the scatterer support.
    InsideSupport { norm: f64, support_radius: f64 },
    /// A far-field entry was evaluated along a ray that does not match its
    /// outgoing direction.
    DirectionMismatch,
    /// k = l: the ray oscillation period is undefined.
    DegeneratePair,
    /// s1 ≡ s2 (mod T/2): the 2×2 recovery system is singular.
    DegenerateOffsets { sin_delta: f64 },
    /// Kernel evaluated at zero distance.
    Singularity,
    /// Exactly singular linear system (zero pivot).
    SingularMatrix,
    /// Condition estimate of the discretized system exceeds the safety
    /// threshold; the energy sits near an exceptional value of the
    /// discretized operator.
    IllConditioned { estimate: f64 },
    /// Too few usable data points.
    InsufficientData { needed: usize, got: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what } => write!(f, "domain error: {what}"),
            Error::Invalid { what } => write!(f, "invalid parameter: {what}"),
            Error::ShellMismatch { k_norm, l_norm } => write!(
                f,
                "energy shell mismatch: |k| = {k_norm} but |l| = {l_norm}"
            ),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::InsideSupport {
                norm,
                support_radius,
            } => write!(
                f,
                "point at distance {norm} lies inside the scatterer support (radius {support_radius})"
            ),
            Error::DirectionMismatch => {
                write!(f, "far-field entry direction does not match the evaluation ray")
            }
            Error::DegeneratePair => write!(f, "degenerate pair: k = l has no ray period"),
            Error::DegenerateOffsets { sin_delta } => write!(
                f,
                "degenerate offsets: |sin(2*pi*(s1-s2)/T)| = {} < 0.1 (s1 = s2 mod T/2 is forbidden)",
                sin_delta
            ),
            Error::Singularity => write!(f, "kernel evaluated at zero distance"),
            Error::SingularMatrix => write!(f, "singular linear system (zero pivot)"),
            Error::IllConditioned { estimate } => write!(
                f,
                "ill-conditioned system: condition estimate {estimate:.3e} exceeds 1e12"
            ),
            Error::InsufficientData { needed, got } => {
                write!(f, "insufficient data: need at least {needed}, got {got}")
            }
        }
    }
}
