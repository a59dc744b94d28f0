//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide error enumeration.
///
/// Variants are grouped by how callers should react: `InvalidParams`,
/// `OutOfDomain` and `ParseError` indicate bad input; `UnsupportedRegime`
/// indicates structurally valid input outside the range a routine can handle;
/// `CapExceeded` and `SearchFailed` indicate resource exhaustion or an
/// unproductive search rather than a wrong answer.
#[derive(Debug, Error)]
pub enum Error {
    /// Parameters violate a documented precondition (e.g. `β ≤ 1`, or an
    /// offset outside the admissible window for the given slope).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A point lies outside the domain of the requested map or expansion.
    #[error("point outside the domain of the map")]
    OutOfDomain,

    /// An operation needed more digits of a symbolic sequence than the
    /// caller supplied.
    #[error("needed {needed} digits but only {have} are available")]
    InsufficientDigits { needed: usize, have: usize },

    /// Two finite words agreed on their common prefix, so their
    /// lexicographic order is not determined by the data given.
    #[error("sequences agree on the computed window; order undetermined")]
    Incomparable,

    /// The input is well-formed but falls in a regime the routine does not
    /// decide (e.g. a slope below the threshold where the criterion applies).
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    /// A hard cap on intermediate data was hit before the computation
    /// finished; raise the cap or lower the depth.
    #[error("intermediate set would exceed the cap of {cap} intervals")]
    CapExceeded { cap: usize },

    /// A bounded search finished without finding the object it was asked
    /// for; the message says what was sought and how far the search went.
    #[error("search failed: {0}")]
    SearchFailed(String),

    /// A string did not parse as the expected exact-arithmetic value.
    #[error("parse error: {0}")]
    ParseError(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
