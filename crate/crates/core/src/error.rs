//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by construction and validation routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A composition had a zero part or could not be parsed.
    #[error("invalid composition: {0}")]
    InvalidComposition(String),
    /// A bit string contained a character other than `0` or `1`.
    #[error("invalid bit string: {0}")]
    InvalidBits(String),
    /// Two compositions were expected to have the same total.
    #[error("composition totals differ: {0} and {1}")]
    TotalMismatch(usize, usize),
    /// A composition was required to refine another one.
    #[error("{finer} does not refine {coarser}")]
    NotRefinement { coarser: String, finer: String },
    /// An operation needed a composition with exactly two parts.
    #[error("expected a two-part composition, got {0}")]
    NotTwoParts(String),
    /// An operation needed a composition of a positive number.
    #[error("the empty composition is not allowed here")]
    EmptyComposition,
    /// Two algebra elements or modules live on different strand counts.
    #[error("strand counts differ: {0} and {1}")]
    StrandMismatch(usize, usize),
    /// A generator index does not exist on the given number of strands.
    #[error("generator {generator} is out of range for {strands} strands")]
    GeneratorOutOfRange { generator: String, strands: usize },
    /// An element does not lie in the block subalgebra it was declared in.
    #[error("element does not preserve the blocks of {0}")]
    BlockViolation(String),
    /// A permutation was malformed.
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    /// An algebra expression failed to parse.
    #[error("parse error at position {pos}: {message}")]
    Parse { pos: usize, message: String },
    /// A cube index had the wrong number of bits.
    #[error("index has {got} bits, expected {expected}")]
    IndexLength { got: usize, expected: usize },
    /// An iteration level outside the valid range was requested.
    #[error("level {level} is out of range (maximum {max})")]
    LevelOutOfRange { level: usize, max: usize },
    /// Level parameters do not describe the requested case.
    #[error("invalid level parameters: {0}")]
    InvalidLevel(String),
    /// A collapse was requested along an axis the cube no longer has.
    #[error("axis {0} is not present")]
    AxisMissing(String),
    /// The bottom set of a collapse is not contained in the top set.
    #[error("section property fails along {axis} at index {index}")]
    SectionFailure { axis: String, index: String },
    /// A shuffle was not a member of the set an operation requires.
    #[error("{0}")]
    NotInSet(String),
    /// An operation required a different fiber verdict.
    #[error("verdict mismatch: {0}")]
    VerdictMismatch(String),
    /// Matrix or module dimensions did not agree.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// A requested size exceeds the configured limit.
    #[error("size limit exceeded: {0}")]
    LimitExceeded(String),
}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
