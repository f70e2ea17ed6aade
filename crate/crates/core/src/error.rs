use thiserror::Error;

use crate::model::{Diagnostic, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("word is not well matched")]
    NotWellMatched,
    #[error("no expansion for label `{0}`")]
    MissingExpansion(Symbol),
    #[error("automaton is not deterministic and complete over the requested labels")]
    NotDeterministicComplete,
    #[error("operands have different pushdown alphabets")]
    AlphabetMismatch,
    #[error("operand is not codeterministic and complete with complete DFA modules")]
    NotCodetComplete,
    #[error("enumeration budget exceeded: more than {0} words")]
    BudgetExceeded(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid automaton: {}", join(.0))]
    Validation(Vec<Diagnostic>),
}

fn join(ds: &[Diagnostic]) -> String {
    ds.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}
