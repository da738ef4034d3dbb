use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index ({row}, {col}) out of range for a {n}x{n} matrix")]
    IndexOutOfRange { row: usize, col: usize, n: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix must have at least {min} rows, found {found}")]
    DimensionTooSmall { min: usize, found: usize },

    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRow { row: usize, expected: usize, found: usize },

    #[error("contraction pair must satisfy i < j, got ({i}, {j})")]
    InvalidPair { i: usize, j: usize },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("cofactors disagree: C_{{{}{}}} = {}, C_{{{}{}}} = {}", first.0, first.1, first.2, second.0, second.1, second.2)]
    CofactorMismatch {
        first: (usize, usize, String),
        second: (usize, usize, String),
    },

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid Pruefer sequence: {0}")]
    InvalidPrufer(String),

    #[error("edge {{{i}, {j}}} is not in the tree")]
    EdgeAbsent { i: usize, j: usize },

    #[error("{what} limit exceeded: n = {n} > cap {cap}")]
    CapExceeded { what: &'static str, n: usize, cap: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },

    #[error("line {line}: vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
}
