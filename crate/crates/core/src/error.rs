use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad class of a failure, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Malformed input: bad conductor, wrong shape, invalid automorphism.
    Input,
    /// The input is well formed but violates a mathematical precondition.
    Precondition,
    /// A configured budget was exceeded.
    Budget,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid conductor {0}")]
    InvalidConductor(i64),

    #[error("arithmetic error: {0}")]
    Arithmetic(String),

    #[error("invalid automorphism: exponent {k} is not a unit modulo {n}")]
    InvalidAutomorphism { n: i64, k: i64 },

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("matrix is not invertible")]
    NotInvertible,

    #[error("product relation violated: {0}")]
    RelationViolation(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("eigenvalue data is not on the moduli space: {0}")]
    NotOnModuli(String),

    #[error("eigenvalue data does not lie in the component: {0}")]
    NotInComponent(String),

    #[error("eigenvalue {0} is not a root of unity")]
    NotQuasiUnipotent(String),

    #[error("indeterminate: {0}")]
    Indeterminate(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable kebab-case identifier used in JSON error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidConductor(_) => "invalid-conductor",
            Error::Arithmetic(_) => "arithmetic-error",
            Error::InvalidAutomorphism { .. } => "invalid-automorphism",
            Error::FieldMismatch(_) => "field-error",
            Error::Shape(_) => "shape-error",
            Error::NotInvertible => "not-invertible",
            Error::RelationViolation(_) => "relation-violation",
            Error::NotApplicable(_) => "not-applicable",
            Error::NotOnModuli(_) => "not-on-moduli",
            Error::NotInComponent(_) => "not-in-component",
            Error::NotQuasiUnipotent(_) => "not-quasi-unipotent",
            Error::Indeterminate(_) => "indeterminate",
            Error::BudgetExceeded(_) => "budget-exceeded",
            Error::Parse(_) => "parse-error",
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidConductor(_)
            | Error::InvalidAutomorphism { .. }
            | Error::Shape(_)
            | Error::Parse(_) => ErrorClass::Input,
            Error::BudgetExceeded(_) => ErrorClass::Budget,
            _ => ErrorClass::Precondition,
        }
    }
}
