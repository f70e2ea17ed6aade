//! Visibly recursive automata (VRAs): finite automata that call each other
//! through procedural symbols, each procedure bracketed by a call and a
//! return letter of a pushdown alphabet.
//!
//! The crate covers the data model, recursive-run semantics, translations to
//! and from visibly pushdown automata, the codeterministic complete normal
//! form, closure operations, decision procedures, a brute-force oracle for
//! differential testing, and JSON/DOT interchange.
//!
//! ```
//! use vra_core::{fixtures, semantics::vra_member, Word};
//!
//! let v = fixtures::running_example();
//! assert!(vra_member(&v, &Word::from_chars("ccrar")).unwrap().accepted);
//! assert!(!vra_member(&v, &Word::from_chars("ccarar")).unwrap().accepted);
//! ```

pub mod codet;
pub mod decide;
mod error;
pub mod fa;
pub mod fixtures;
pub mod io;
pub mod model;
pub mod ops;
pub mod oracle;
pub mod semantics;
pub mod vpa;

pub use error::Error;
pub use model::{
    classify, validate_vra, Diagnostic, FiniteAutomaton, LetterKind, ModuleTag, ProcOrigin, ProceduralAlphabet,
    PushdownAlphabet, StateId, Symbol, Vra, WellMatchedInfo, Word,
};
pub use vpa::Vpa;

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
struct ReadmeDoctests;
