//! Error types shared across the library.

use thiserror::Error;

/// Library-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while validating parameters, solving the
/// cycle geometry, or running a simulation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter failed a finiteness or positivity requirement.
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter {
        field: &'static str,
        reason: String,
    },

    /// The characteristic quadratic does not have two distinct real roots.
    #[error("degenerate characteristic equation: {0}")]
    DegenerateEquation(String),

    /// The positive characteristic root does not admit a finite exercise
    /// boundary (requires beta > 1).
    #[error("no free boundary: the positive characteristic root must exceed 1, got beta = {beta}")]
    NoFreeBoundary { beta: f64 },

    /// A root bracket showed no sign change: the requested point does not
    /// exist for these parameters.
    #[error("no bifurcation in [{lo}, {hi}]: {what}")]
    NoBifurcation { what: String, lo: f64, hi: f64 },

    /// Root finding failed to converge within the iteration cap.
    #[error("bisection failed to converge within {max_iter} iterations")]
    NoConvergence { max_iter: usize },

    /// An input lies outside a formula's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Issuance has passed the collapse point; strict valuations are not
    /// defined there.
    #[error("issuance s = {s} lies beyond the collapse point s_tilde = {s_tilde}")]
    PostCollapse { s: f64, s_tilde: f64 },

    /// The Euler scheme stepped to a non-positive issuance level.
    #[error("euler step {step} produced a non-positive issuance level; use scheme `exact` or a smaller dt")]
    EulerStepRejected { step: usize },

    /// Configuration file problems: unreadable file or malformed contents.
    #[error("config error: {0}")]
    Config(String),
}
