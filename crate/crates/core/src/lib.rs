//! Trace-value ordering for abstract cyclic entailment proofs.
//!
//! Proofs are finite graphs of rule instances annotated with antecedent and
//! consequent trace values and ordinal-weighted trace pairs. The crate
//! decides whether a consequent value is bounded (`≤`) or strictly bounded
//! (`<`) by an antecedent value at a node, by building ordinal max-plus
//! weighted automata for both sides and comparing their quantitative
//! languages. Alongside that it checks global soundness, the structural
//! restrictions that make the comparison decidable, and computes the
//! thresholds those restrictions depend on.
//!
//! The pipeline is exposed through [`decision::decide_order`]; the modules
//! below can also be used on their own.

pub mod automata;
pub mod cli;
pub mod containment;
pub mod decision;
pub mod error;
pub mod fixtures;
mod graph;
pub mod ordinal;
pub mod proof;
pub mod random;
pub mod report;
pub mod restrictions;
pub mod soundness;
pub mod traces;

pub use error::{Error, Result};
pub use ordinal::{Ordinal, TropicalWeight};
pub use proof::{parse_proof_graph, NodeId, ProofGraph, Side, ValueId};
