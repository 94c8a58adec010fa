use thiserror::Error;

use crate::cnf::Var;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("universe of {vars} variables exceeds the configured limit of {limit}")]
    LimitExceeded { vars: usize, limit: usize },

    #[error("more than {limit} clauses generated")]
    ClauseLimitExceeded { limit: usize },

    #[error("clause {index} is tautological")]
    TautologicalClause { index: usize },

    #[error("formula contains the empty clause")]
    EmptyClause,

    #[error("formula is unsatisfiable")]
    Unsatisfiable,

    #[error("formula is not q-Horn")]
    NotQHorn,

    #[error("formula is not Horn (clause {index} has several positive literals)")]
    NotHorn { index: usize },

    #[error("formula is not propagation complete")]
    NotPc,

    #[error("formula is not unit refutation complete")]
    NotUrc,

    #[error("clause is not an implicate of the formula")]
    NotImplicate,

    #[error("variable {0} is outside the formula universe")]
    VariableOutOfRange(Var),

    #[error("assignment contains both polarities of variable {0}")]
    InconsistentAssignment(Var),

    #[error("variable sets do not match: {0}")]
    UniverseMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
