//! Generalized products over finite index sets: ring and Boolean formula
//! syntax, finite stalks, [[θ]] sets and evaluation of Ψ(θ̄).
//!
//! Index sets are finite, so the predicate Fin holds of every subset and
//! adds nothing to the Boolean side.

mod eval;
mod formula;
mod stalk;

use thiserror::Error;

pub use eval::{
    eval_boole, eval_ring_formula, gen_product_eval, preservation_check, theta_set, FiniteFamily,
    GeneralizedSentence, GlobalElement, IndexSet, PreservationReport, INDEX_CAP, QUANTIFIER_DEPTH_CAP,
};
pub use formula::{
    parse_boole_formula, parse_ring_formula, var_index, BoolTerm, BooleAtom, BooleFormula, Formula, ParseError,
    RingAtom, RingFormula, Term,
};
pub use stalk::{Stalk, StalkSpec, STALK_ORDER_CAP, TABLE_ORDER_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FvError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("quantifier depth {depth} exceeds the cap {cap}")]
    QuantifierDepth { depth: usize, cap: usize },
    #[error("stalk order {order} exceeds the cap {cap}")]
    StalkTooLarge { order: String, cap: usize },
    #[error("index set of size {size} exceeds the cap {cap}")]
    IndexTooLarge { size: usize, cap: usize },
    #[error("element {value} is not in the stalk at {index}")]
    ElementOutOfRange { index: String, value: usize },
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("invalid stalk: {0}")]
    InvalidStalk(String),
    #[error("invalid family: {0}")]
    Family(String),
    #[error("unknown index label `{0}`")]
    UnknownIndex(String),
}
