//! Deciding `τ ≤ τ'` and `τ < τ'` for a consequent value `τ` and an
//! antecedent value `τ'` at one node.
//!
//! The pipeline only answers HOLDS or FAILS when every precondition of the
//! automata reduction is met: the proof is well formed, globally sound and
//! trace-injective, and the query satisfies the three restrictions. It then
//! compares the consequent automaton with the antecedent approximation of
//! depth `N`.

use serde::Serialize;

use crate::automata::{
    build_antecedent_approx, build_consequent, is_grounded, run_values, Letter, State, TracePairQuery,
    WeightedAutomaton,
};
use crate::containment::{decide_containment, oracle_compare, ContainmentVerdict, Engine};
use crate::error::Result;
use crate::ordinal::{Ordinal, TropicalWeight};
use crate::proof::{validate, Finding, NodeId, ProofGraph, Side};
use crate::restrictions::{check_restrictions, RestrictionsReport, Thresholds};
use crate::soundness::{check_global_soundness, SoundnessReport};
use crate::traces::{classify_right_trace, enumerate_right_maximal, left_traces_along, prog_points, Trace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Leq,
    Lt,
}

impl Relation {
    pub fn strict(strict: bool) -> Self {
        if strict {
            Relation::Lt
        } else {
            Relation::Leq
        }
    }

    pub fn is_strict(self) -> bool {
        self == Relation::Lt
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OrderStatus {
    Holds,
    Fails,
    NotApplicable,
    Unknown,
}

/// One stage of the pipeline and what it found, in pipeline order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reason {
    Validation(Vec<Finding>),
    Soundness(SoundnessReport),
    TraceInjectivity(bool),
    Restrictions(Box<RestrictionsReport>),
    /// The approximation depth and lag cap in use; `depth` is absent when
    /// the thresholds give no finite bound.
    Bound { depth: Option<u64>, lag_cap: Option<u64> },
    Groundedness(bool),
    Containment(ContainmentVerdict),
}

/// A word refuting the comparison, read back as a path and the consequent
/// trace of a best run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderWitness {
    pub path: Vec<NodeId>,
    pub trace: Trace,
    pub consequent_value: TropicalWeight,
    pub antecedent_value: TropicalWeight,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderVerdict {
    pub relation: Relation,
    pub status: OrderStatus,
    pub reasons: Vec<Reason>,
    pub witness: Option<OrderWitness>,
}

impl OrderVerdict {
    pub fn thresholds(&self) -> Option<&Thresholds> {
        self.reasons.iter().find_map(|r| match r {
            Reason::Restrictions(report) => Some(&report.thresholds),
            _ => None,
        })
    }

    pub fn containment(&self) -> Option<&ContainmentVerdict> {
        self.reasons.iter().find_map(|r| match r {
            Reason::Containment(c) => Some(c),
            _ => None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecideOptions {
    pub engine: Engine,
    /// Defaults to [`default_lag_cap`].
    pub lag_cap: Option<u64>,
    /// Word length bound when `engine` is the oracle.
    pub oracle_len: usize,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            engine: Engine::Lagset,
            lag_cap: None,
            oracle_len: 12,
        }
    }
}

/// `4 · N · max(maxStep, 1) · |Nodes|`, saturating.
pub fn default_lag_cap(t: &Thresholds, nodes: usize) -> Option<u64> {
    let n = t.n_bound?;
    let step = t.max_step.as_nat()?.max(1);
    Some(
        4u64.saturating_mul(n)
            .saturating_mul(step)
            .saturating_mul(nodes as u64),
    )
}

pub fn decide_order(p: &ProofGraph, q: &TracePairQuery, strict: bool, options: &DecideOptions) -> Result<OrderVerdict> {
    q.check(p)?;
    let mut verdict = OrderVerdict {
        relation: Relation::strict(strict),
        status: OrderStatus::NotApplicable,
        reasons: Vec::new(),
        witness: None,
    };

    let validation = validate(p);
    let structural: Vec<Finding> = validation.structural().cloned().collect();
    let well_formed = structural.is_empty();
    verdict.reasons.push(Reason::Validation(structural));
    if !well_formed {
        return Ok(verdict);
    }

    let soundness = check_global_soundness(p);
    let sound = soundness.sound;
    verdict.reasons.push(Reason::Soundness(soundness));
    if !sound {
        return Ok(verdict);
    }

    verdict.reasons.push(Reason::TraceInjectivity(validation.trace_injective));
    if !validation.trace_injective {
        return Ok(verdict);
    }

    let restrictions = check_restrictions(p, q)?;
    let passed = restrictions.passed();
    let thresholds = restrictions.thresholds.clone();
    verdict.reasons.push(Reason::Restrictions(Box::new(restrictions)));
    if !passed {
        return Ok(verdict);
    }

    let depth = thresholds.n_bound.filter(|&n| n <= u32::MAX as u64);
    let lag_cap = options.lag_cap.or_else(|| default_lag_cap(&thresholds, p.len()));
    verdict.reasons.push(Reason::Bound { depth, lag_cap });
    let Some(depth) = depth else {
        return Ok(verdict);
    };

    let b = build_consequent(p, q)?;
    let a = build_antecedent_approx(p, q, depth as u32)?;
    let grounded = is_grounded(&b, p)?;
    verdict.reasons.push(Reason::Groundedness(grounded));
    if !grounded {
        verdict.status = OrderStatus::Fails;
        return Ok(verdict);
    }

    let result = match options.engine {
        Engine::Lagset => decide_containment(&b, &a, strict, lag_cap.unwrap_or(u64::MAX))?,
        Engine::Oracle => oracle_compare(&b, &a, strict, options.oracle_len)?,
    };
    use crate::containment::ContainmentStatus as C;
    verdict.status = match result.status {
        C::Verified => OrderStatus::Holds,
        C::Refuted => OrderStatus::Fails,
        C::UnknownSaturated | C::UnknownBound => OrderStatus::Unknown,
    };
    verdict.witness = result
        .counterexample
        .as_ref()
        .map(|cx| read_witness(&b, &cx.word, &cx.b_value, &cx.a_value));
    verdict.reasons.push(Reason::Containment(result));
    Ok(verdict)
}

fn read_witness(b: &WeightedAutomaton, word: &[Letter], bv: &TropicalWeight, av: &TropicalWeight) -> OrderWitness {
    let path = word
        .iter()
        .filter_map(|l| match l {
            Letter::Node(n) => Some(*n),
            Letter::Pair(..) => None,
        })
        .collect();
    let best = run_values(b, word)
        .into_iter()
        .filter(|(_, v)| v == bv)
        .map(|(run, _)| run)
        .next();
    let values = best
        .map(|run| {
            run.states
                .iter()
                .filter_map(|&s| match b.state(s) {
                    State::NodeValue(_, v) => Some(v),
                    _ => None,
                })
                .collect()
        })
        .unwrap_or_default();
    OrderWitness {
        path,
        trace: Trace::new(Side::Right, values),
        consequent_value: bv.clone(),
        antecedent_value: av.clone(),
    }
}

/// A positive maximal consequent trace with no qualifying antecedent
/// partner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefinitionCounterexample {
    pub path: Vec<NodeId>,
    pub trace: Trace,
    pub size: Ordinal,
    /// Largest size among antecedent traces along the path that satisfy the
    /// terminal condition, if any does.
    pub best_partner: Option<Ordinal>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DefinitionOutcome {
    /// Every trace along paths of at most `max_path_len` nodes is matched.
    NoCounterexample { max_path_len: usize, traces_checked: usize },
    Counterexample(DefinitionCounterexample),
}

impl DefinitionOutcome {
    pub fn is_counterexample(&self) -> bool {
        matches!(self, DefinitionOutcome::Counterexample(_))
    }
}

/// Checks the order relation directly from traces, over paths of at most
/// `max_path_len` nodes: every positive maximal consequent trace from the
/// queried value needs an antecedent trace from the queried value along a
/// prefix of its path that is at least as large (strictly larger when
/// `strict`), where either the consequent trace ends in a ground value or
/// it ends at an axiom and the antecedent trace runs the whole path and
/// ends in a value equated with the consequent one.
pub fn definition_oracle(
    p: &ProofGraph,
    q: &TracePairQuery,
    strict: bool,
    max_path_len: usize,
) -> Result<DefinitionOutcome> {
    q.check(p)?;
    let traces = enumerate_right_maximal(p, q.node, q.con, max_path_len)?;
    let checked = traces.len();
    for (path, right) in traces {
        let class = classify_right_trace(p, &path, &right)?;
        let size = prog_points(p, &path, &right)?;
        let last = *path.last().unwrap();
        let last_right = *right.values.last().unwrap();
        let mut best_partner: Option<Ordinal> = None;
        let mut matched = false;
        for left in left_traces_along(p, &path, q.ant) {
            let terminal_ok = class.grounded
                || (class.partially_maximal
                    && left.len() == path.len()
                    && p.nodes()[last.0]
                        .equates
                        .contains(&(*left.values.last().unwrap(), last_right)));
            if !terminal_ok {
                continue;
            }
            let left_size = prog_points(p, &path[..left.len()], &left)?;
            let ok = if strict { size < left_size } else { size <= left_size };
            if ok {
                matched = true;
                break;
            }
            if best_partner.as_ref().is_none_or(|b| *b < left_size) {
                best_partner = Some(left_size);
            }
        }
        if !matched {
            return Ok(DefinitionOutcome::Counterexample(DefinitionCounterexample {
                path,
                trace: right,
                size,
                best_partner,
            }));
        }
    }
    Ok(DefinitionOutcome::NoCounterexample {
        max_path_len,
        traces_checked: checked,
    })
}
