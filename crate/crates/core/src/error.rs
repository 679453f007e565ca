use thiserror::Error;

/// Broad failure class, used by the CLI to pick an exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or inconsistent input.
    Validation,
    /// The input is well formed but violates a mathematical hypothesis.
    Hypothesis,
    /// An internal invariant failed; this is a defect.
    Internal,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("vector is not contained in the ambient subspace")]
    NotASubspace,
    #[error("structure constants are not associative on basis triple ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("unit is not a two-sided identity")]
    BadUnit,
    #[error("module {module}: {reason}")]
    InvalidModule { module: String, reason: String },
    #[error("kernel of the family action is not nilpotent; the declared family is not the complete set of simple modules")]
    NotNilpotent,
    #[error("word of degree {degree} exceeds the degree cap {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },
    #[error("rewriting system is not confluent on overlap {0}")]
    NotConfluent(String),
    #[error("relation has inconsistent endpoints: {0}")]
    EndpointMismatch(String),
    #[error("2-cochain is not a cocycle (first failure at basis triple ({0}, {1}, {2}))")]
    NotACocycle(usize, usize, usize),
    #[error("versal morphism is not an algebra homomorphism at basis pair ({0}, {1})")]
    NotAHomomorphism(usize, usize),
    #[error("iterated extension action is not associative: equation ({0}, {1}) fails")]
    NotAssociativeAction(usize, usize),
    #[error("subspace is not a two-sided ideal")]
    NotAnIdeal,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("internal invariant breached: {0}")]
    Invariant(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            InvalidField(_) | Parse(_) | Schema(_) | Shape(_) | NotASubspace | NotAssociative(..)
            | BadUnit | InvalidModule { .. } | NotConfluent(_) | EndpointMismatch(_)
            | NotAssociativeAction(..) | NotAnIdeal => ErrorKind::Validation,
            NotNilpotent | HypothesisViolated(_) | DegreeCapExceeded { .. } => ErrorKind::Hypothesis,
            NotACocycle(..) | NotAHomomorphism(..) | Invariant(_) => ErrorKind::Internal,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
