use thiserror::Error;

use crate::boolexpr::Var;
use crate::formula::Logic;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at column {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("connective '{connective}' is not part of {logic} (column {pos})")]
    NotInLogic {
        connective: String,
        logic: Logic,
        pos: usize,
    },

    #[error("a BI sequent has exactly one succedent formula, found {0}")]
    BiSuccedent(usize),

    #[error("variable x{} is unassigned", .0 .0)]
    Unassigned(Var),

    #[error("invalid bunch address {0:?}")]
    BadAddress(Vec<usize>),

    #[error("rule {rule} does not apply: {reason}")]
    RuleMismatch { rule: String, reason: String },

    #[error("tag arity mismatch: {expected} slots but {found} variables")]
    TagArity { expected: usize, found: usize },

    #[error("pop without matching push")]
    PopEmpty,

    #[error("formula size {size} exceeds the oracle bound {bound}")]
    SizeBound { size: usize, bound: usize },

    #[error("extraction failed: {0}")]
    Extract(String),

    #[error("malformed proof: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
