//! Error type shared across the crate.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A scheme or operation was given parameters outside its valid range.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Malformed token or header while parsing a text format.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// A grid row carried the wrong number of entries, or the row count
    /// disagreed with the header.
    #[error("dimension mismatch at line {line}: found {found} entries, expected {expected}")]
    DimensionMismatch {
        line: usize,
        found: usize,
        expected: usize,
    },

    /// The operation requires a canonicalized array but the input still
    /// carries raw labels.
    #[error("array still carries raw labels; canonicalize it first")]
    RawLabels,

    /// Canonicalization requires every non-star entry to carry a raw label.
    #[error("entry at row {row}, column {col} has no raw label")]
    MissingRawLabel { row: usize, col: usize },

    /// The orthogonal-array index l / q^t is not an integer.
    #[error("index not integral: {rows} rows cannot split evenly over {q}^{t} tuples")]
    IndexNotIntegral { rows: usize, q: u32, t: usize },

    /// Columns disagree on their star count, so no single Z exists.
    #[error("columns have differing star counts ({first} vs {second}); no single Z exists")]
    NonUniformStars { first: usize, second: usize },

    /// Columns disagree on their useless-star count, so coded placement
    /// does not apply.
    #[error("columns have differing useless-star counts ({first} vs {second})")]
    NonUniformUseless { first: usize, second: usize },

    /// No z in [1, q-1] satisfies floor((q-1)/(q-z)) = r.
    #[error("empty class: no z in [1, {max_z}] has floor(({q}-1)/({q}-z)) = {r}")]
    EmptyFloorClass { q: u32, r: u32, max_z: u32 },

    /// Packet payloads passed to the erasure coder have inconsistent sizes
    /// or the wrong count.
    #[error("erasure coder size mismatch: {0}")]
    MdsShape(String),

    /// Code length exceeds the number of usable evaluation points.
    #[error("code length {n} exceeds the field limit of {max} symbols")]
    MdsTooLong { n: usize, max: usize },

    /// Fewer than k distinct symbols were provided to the decoder.
    #[error("insufficient symbols: have {have}, need {need}")]
    MdsInsufficientSymbols { have: usize, need: usize },

    /// The decoder received the same symbol index twice.
    #[error("duplicate symbol index {index}")]
    MdsDuplicateIndex { index: usize },

    /// File size is not divisible by the scheme's division count.
    #[error("file size {file_size} is not divisible by the division count {division}")]
    SizeNotDivisible { file_size: usize, division: usize },

    /// A demand entry points past the library.
    #[error("demand for user {user} is {demand}, but the library holds {num_files} files")]
    DemandOutOfRange {
        user: usize,
        demand: usize,
        num_files: usize,
    },

    /// The column-selection transform tried to relabel an entry that is a
    /// star. This signals a construction bug and is never expected.
    #[error("relabel target at row {row}, column {col} is a star")]
    RelabelTargetStar { row: usize, col: usize },
}
