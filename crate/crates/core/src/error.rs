//! Error types shared across the engine.

use thiserror::Error;

/// Errors surfaced by graph enumeration, localization, and invariant assembly.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A denominator of a Bott summand vanished at the chosen torus weights.
    ///
    /// The value of the invariant does not depend on the weights, so the
    /// caller may retry with a different specialization; `graph` and `factor`
    /// identify the summand and the factor that vanished.
    #[error("degenerate weights: {factor} (graph {graph})")]
    DegenerateWeights { graph: String, factor: String },

    /// Multiple-cover inversion produced a non-integral instanton number.
    ///
    /// This never happens for correctly computed invariants; it signals an
    /// upstream bug rather than bad user input.
    #[error("instanton number for degree {degree} is not an integer: {value}")]
    IntegralityViolation { degree: u32, value: String },

    /// A torus weight vector failed validation (duplicate or zero entries,
    /// wrong length).
    #[error("invalid weight vector: {0}")]
    InvalidWeights(String),

    /// A requested complete-intersection type is not Calabi-Yau of dimension
    /// three, or fails basic validation.
    #[error("invalid complete-intersection type: {0}")]
    InvalidType(String),

    /// Malformed structural input (non-tree edge set, bad degree list, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
