use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("malformed document: {0}")]
    Syntax(String),

    #[error("invalid representation at {path}: {message}")]
    Validation { path: String, message: String },

    #[error("cannot compose: {0}")]
    Composition(String),

    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),

    #[error("closure limit exceeded at object `{object}` by {rule} rule ({size} elements, {rounds} rounds)")]
    ClosureDivergence { object: String, rule: String, size: usize, rounds: usize },

    #[error("subspace family is not closed under intersection")]
    NotMeetClosed,

    #[error("subspace family lacks the zero or the full subspace")]
    MissingBounds,

    #[error("subspace is not an element of the poset")]
    ElementNotInPoset,

    #[error("factorization criterion violated at object `{object}`")]
    CriterionViolated { object: String },

    #[error("projection construction failed at object `{object}`: {message}")]
    ConstructionFailure { object: String, message: String },

    #[error("flag at object `{object}` is missing the {what} of generator `{generator}`")]
    MissingFlagElement { object: String, generator: String, what: String },

    #[error("inverse-category axiom violated: {0}")]
    AxiomViolation(String),

    #[error("quiver has an undirected cycle through generator `{0}`")]
    Cycle(String),

    #[error("blocks do not align: {0}")]
    AlignmentFailure(String),

    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable name used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Syntax(_) => "SyntaxError",
            Error::Validation { .. } => "ValidationError",
            Error::Composition(_) => "CompositionError",
            Error::AmbientMismatch(_) => "AmbientMismatch",
            Error::ClosureDivergence { .. } => "ClosureDivergence",
            Error::NotMeetClosed => "NotMeetClosed",
            Error::MissingBounds => "MissingBounds",
            Error::ElementNotInPoset => "ElementNotInPoset",
            Error::CriterionViolated { .. } => "CriterionViolated",
            Error::ConstructionFailure { .. } => "ConstructionFailure",
            Error::MissingFlagElement { .. } => "MissingFlagElement",
            Error::AxiomViolation(_) => "AxiomViolation",
            Error::Cycle(_) => "CycleError",
            Error::AlignmentFailure(_) => "AlignmentFailure",
            Error::TooLarge(_) => "TooLarge",
            Error::Io(_) => "IoError",
        }
    }

    pub(crate) fn validation(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation { path: path.into(), message: message.into() }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
