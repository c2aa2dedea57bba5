//! Quantitative language comparison `L_b ≤ L_a` (or `<`) between two
//! automata over one alphabet: for every word `b` accepts, `a` must accept
//! it with at least (strictly more than) `b`'s value.
//!
//! Two engines: a bounded reference oracle that evaluates every word of
//! `b`'s domain up to a length, and the lag-set engine that explores
//! normalized weight profiles of both automata and can also verify.

mod lagset;
mod oracle;

use serde::Serialize;

use crate::automata::{Letter, WeightedAutomaton};
use crate::error::{Error, Result};
use crate::ordinal::TropicalWeight;

pub use lagset::decide_containment;
pub use oracle::oracle_compare;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ContainmentStatus {
    /// The whole profile space was closed without a violation.
    Verified,
    /// A word violating the relation was found.
    Refuted,
    /// Some profile exceeded the lag cap before the space closed.
    UnknownSaturated,
    /// The bounded oracle found nothing up to its length bound.
    UnknownBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Oracle,
    Lagset,
}

impl std::str::FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "oracle" => Ok(Engine::Oracle),
            "lagset" => Ok(Engine::Lagset),
            _ => Err(format!("unknown engine {s:?} (expected lagset or oracle)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub word: Vec<Letter>,
    pub b_value: TropicalWeight,
    pub a_value: TropicalWeight,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContainmentVerdict {
    pub status: ContainmentStatus,
    pub counterexample: Option<Counterexample>,
    pub engine: Engine,
    pub strict: bool,
    /// Word length bound for the oracle, lag cap for the lag-set engine.
    pub bound: u64,
    /// Words (oracle) or profiles (lag-set) examined.
    pub explored: usize,
}

/// Whether values `b_value` and `a_value` of one word break the relation.
pub fn violates(b_value: &TropicalWeight, a_value: &TropicalWeight, strict: bool) -> bool {
    match b_value {
        TropicalWeight::Bottom => false,
        _ if strict => a_value <= b_value,
        _ => a_value < b_value,
    }
}

fn check_alphabets(b: &WeightedAutomaton, a: &WeightedAutomaton) -> Result<()> {
    if b.alphabet() == a.alphabet() {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch)
    }
}

#[cfg(test)]
mod tests;
