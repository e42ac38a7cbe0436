use thiserror::Error;

/// Errors shared by the pattern, expression, synthesis and machine layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two operands live in different base-pattern spaces.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// A base pattern must have at least one component.
    #[error("dimension must be at least 1")]
    ZeroDimension,

    /// A sequence must contain at least one base pattern.
    #[error("a sequence must have length at least 1")]
    EmptySequence,

    /// A bitstring may contain only the characters 0 and 1.
    #[error("invalid bitstring character {found:?}")]
    InvalidBitstring { found: char },

    /// A length bound must admit at least length-1 sequences.
    #[error("length bound must be at least 1")]
    ZeroBound,

    /// An operation restricted to spatial patterns saw a longer instance.
    #[error("pattern is not spatial: it contains an instance of length {len}")]
    NotSpatial { len: usize },

    /// The pattern contains an instance longer than the complement bound.
    #[error("length bound {l_max} is smaller than an instance of length {len}")]
    BoundTooSmall { l_max: usize, len: usize },

    /// Materializing the requested universe would exceed the enumeration cap.
    #[error("enumeration of {requested} instances exceeds the cap of {cap}")]
    EnumerationGuard { requested: u128, cap: u64 },

    /// NOT or AND applied to an operand that is not spatial.
    #[error("NOT and AND apply only to spatial operands")]
    Kind,

    /// Synthesis requires every instance to have one common length.
    #[error("instances have mixed lengths: {first} vs {second}")]
    MixedLengths { first: usize, second: usize },

    /// Synthesis rejects the empty pattern unless explicitly allowed.
    #[error("cannot synthesize a form for the empty pattern")]
    EmptyTarget,
}
