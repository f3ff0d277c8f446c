//! Explicit-value CEGAR with selection among infeasible sliced prefixes.
//!
//! Programs are parsed into control-flow automata, explored with a
//! precision-restricted value analysis, and refined by interpolating
//! either the whole error path or one of its sliced prefixes.

pub mod engine;
pub mod frontend;
pub mod interpolation;
pub mod path;
pub mod refinement;
pub mod value_domain;

pub use engine::{cegar, cegar_observed, Limits, RunStats, UnknownReason, Verdict};
pub use frontend::{build_cfa, parse, parse_cfa, ControlFlowAutomaton, ParseError};
pub use refinement::{Precision, SelectionHeuristic};

/// A caller broke the precondition of an operation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ContractError {
    #[error("path is feasible")]
    FeasiblePath,
    #[error("minus and plus sequences do not contradict")]
    NotContradicting,
    #[error("cannot turn a Bottom interpolant into constraints")]
    BottomInterpolant,
    #[error("no sliced prefixes to choose from")]
    NoPrefixes,
    #[error("every prefix needs an interpolant sequence")]
    MissingInterpolants,
    #[error("the classic heuristic does not select a prefix")]
    NoSelection,
    #[error("reached set has no error state")]
    NoErrorState,
}
