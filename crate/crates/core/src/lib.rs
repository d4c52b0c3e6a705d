//! Proof search for MLL, PLL and BI that settles the distribution of side
//! formulas across multiplicative branches with Boolean constraints.

pub mod boolexpr;
pub mod calculus;
pub mod bunch;
pub mod context;
pub mod corpus;
pub mod error;
pub mod extract;
pub mod formula;
pub mod parse;
pub mod proof_json;
pub mod search;
pub mod sequent;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
pub use boolexpr::{Assignment, BoolExpr, Constraint, Literal, Var, VarAllocator};
pub use bunch::{Bunch, BunchNode};
pub use calculus::{Principal, RuleId, RuleInstance};
pub use extract::{extract, inject_zero, PlainNode, PlainProof};
pub use formula::{Formula, Logic};
pub use parse::{parse_formula, parse_sequent};
pub use proof_json::ProofDoc;
pub use search::{
    prove, prove_with, BatchOrder, FailReason, Outcome, ResourceProof, SearchConfig, SearchLimits, SearchResult,
    SearchStats, Strategy,
};
pub use sequent::{PlainSequent, Sequent};
pub use solver::{truth_table_sat, ConstraintStore};
pub use verify::{brute_force_prove, check_proof, validate, BRUTE_FORCE_BOUND};
