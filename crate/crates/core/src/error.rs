use thiserror::Error;

/// Errors raised by the algebra engine and the definition-language frontend.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("element is not parity-homogeneous: {0}")]
    ParityInhomogeneous(String),

    #[error("undeclared symbol `{0}`")]
    UndeclaredSymbol(String),

    #[error("duplicate declaration of `{0}`")]
    DuplicateSymbol(String),

    #[error("duplicate bracket statement for [{0}, {1}]")]
    DuplicateBracket(String, String),

    #[error("parity mismatch in bracket [{pair}]: {detail}")]
    ParityMismatch { pair: String, detail: String },

    #[error("generator `{0}` has no declared conformal weight")]
    MissingWeight(String),

    #[error("mode index {index} is not compatible with weight {weight} of `{generator}`")]
    IndexWeightMismatch {
        generator: String,
        index: String,
        weight: String,
    },

    #[error("mode symbols use different indexings")]
    IndexingMismatch,

    #[error("distribution is not local; offending regular monomials: {0}")]
    NonLocal(String),

    #[error("invalid bilinear form: {0}")]
    InvalidForm(String),

    #[error("bracket of the base Lie superalgebra is not a Lie superbracket: {0}")]
    NotLie(String),

    #[error("presentation fails the Lie conformal axioms: {0}")]
    NotLieConformal(String),

    #[error("lambda-degree guard of {limit} exceeded (degree {degree}); the bracket table is probably not local")]
    DegreeGuard { limit: u32, degree: u32 },

    #[error("`{0}` is not a primary field with respect to the given Virasoro element")]
    NotPrimary(String),

    #[error("{line}:{column}: {inner}")]
    Located {
        line: usize,
        column: usize,
        inner: Box<Error>,
    },

    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
