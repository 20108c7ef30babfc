use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("invalid context: {0}")]
    InvalidContext(String),

    #[error("invalid intervention: {0}")]
    InvalidIntervention(String),

    #[error("invalid mechanism for {variable}: {message}")]
    InvalidMechanism { variable: String, message: String },

    #[error("line {line}: {message}")]
    ModelFile { line: usize, message: String },

    #[error("syntax error at offset {offset}: expected {expected}, found {found}")]
    Syntax {
        offset: usize,
        expected: String,
        found: String,
    },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("value `{value}` is not in the range of `{variable}`")]
    OutOfRangeValue { variable: String, value: String },

    #[error(
        "context has {found} values but the signature declares {expected} exogenous variables"
    )]
    BadContextArity { expected: usize, found: usize },

    #[error("variable `{0}` is set more than once in one intervention")]
    DuplicateInterventionTarget(String),

    #[error("formula does not match the signature: {0}")]
    Validation(String),

    #[error("budget exceeded: {what} needs {needed} steps, budget is {budget}")]
    BudgetExceeded {
        what: String,
        needed: u128,
        budget: u64,
    },

    #[error("model is not recursive")]
    NotRecursive,

    #[error("model does not have unique solutions")]
    NotUniqueSolutions,

    #[error("signature size guard does not hold: {0}")]
    GuardViolated(String),

    #[error("signature shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("malformed CNF: {0}")]
    MalformedCnf(String),

    #[error("witness failed verification: {0}")]
    WitnessRejected(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}
