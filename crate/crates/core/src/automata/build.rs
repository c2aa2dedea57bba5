use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use super::{Alphabet, AutomatonKind, Letter, State, TracePairQuery, Transition, WeightedAutomaton};
use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::proof::{NodeId, ProofGraph, Side};

/// Explores the states reachable from `Start`. States are numbered in
/// breadth-first discovery order, visiting each state's transitions sorted
/// by letter and target, so numbering depends only on the proof.
fn explore(
    p: &ProofGraph,
    kind: AutomatonKind,
    succ: impl Fn(State) -> Vec<(Letter, State, Ordinal)>,
    is_final: impl Fn(State) -> bool,
) -> WeightedAutomaton {
    let mut index: BTreeMap<State, usize> = BTreeMap::new();
    let mut states = vec![State::Start];
    index.insert(State::Start, 0);
    let mut queue = VecDeque::from([State::Start]);
    let mut transitions = Vec::new();
    while let Some(s) = queue.pop_front() {
        let from = index[&s];
        let mut out = succ(s);
        out.sort_by(|x, y| (&x.0, x.1).cmp(&(&y.0, y.1)));
        out.dedup_by(|x, y| x.0 == y.0 && x.1 == y.1);
        for (letter, target, weight) in out {
            let to = *index.entry(target).or_insert_with(|| {
                states.push(target);
                queue.push_back(target);
                states.len() - 1
            });
            // weights only count between two node-value states
            let weight = if s.is_node_value() && target.is_node_value() {
                weight
            } else {
                Ordinal::zero()
            };
            transitions.push(Transition {
                from,
                letter,
                to,
                weight,
            });
        }
    }
    let finals = states.iter().map(|&s| is_final(s)).collect();
    WeightedAutomaton::new(kind, Arc::new(Alphabet::of(p)), states, 0, finals, transitions)
        .expect("constructed automata are well formed")
}

fn trace_steps(p: &ProofGraph, side: Side, n: NodeId, v: crate::proof::ValueId) -> Vec<(Letter, State, Ordinal)> {
    p.trace_successors(side, n, v)
        .map(|(m, u, w)| (Letter::Node(m), State::NodeValue(m, u), w.clone()))
        .collect()
}

/// The consequent automaton for `q`: runs follow right-hand traces from
/// `q.con`, accepting at maximal positive ends.
pub fn build_consequent(p: &ProofGraph, q: &TracePairQuery) -> Result<WeightedAutomaton> {
    q.check(p)?;
    let init = q.node;
    let succ = |s: State| match s {
        State::Start => vec![(Letter::Node(init), State::NodeValue(init, q.con), Ordinal::zero())],
        State::NodeValue(n, v) => {
            let mut out = trace_steps(p, Side::Right, n, v);
            let node = &p.nodes()[n.0];
            if node.is_axiom() && !node.ground.contains(&v) && !node.excluded.contains(&v) {
                out.push((Letter::Pair(p.equated_with(n, v), v), State::Bot, Ordinal::zero()));
            }
            out
        }
        _ => Vec::new(),
    };
    let is_final = |s: State| match s {
        State::Bot => true,
        State::NodeValue(n, v) => {
            let node = &p.nodes()[n.0];
            if node.excluded.contains(&v) {
                false
            } else if node.is_axiom() {
                node.ground.contains(&v)
            } else {
                p.is_terminal(n, Side::Right, v)
            }
        }
        _ => false,
    };
    Ok(explore(p, AutomatonKind::Consequent, succ, is_final))
}

/// Sink behaviour of an antecedent automaton: `None` for the single sink of
/// the full automaton, `Some(n)` for chains of depth `n`.
fn build_antecedent(p: &ProofGraph, q: &TracePairQuery, depth: Option<u32>) -> Result<WeightedAutomaton> {
    q.check(p)?;
    let init = q.node;
    let sink_for = |entry: NodeId| match depth {
        None => State::Top,
        Some(_) => State::TopChain(entry, 1),
    };
    let succ = |s: State| match s {
        State::Start => vec![(Letter::Node(init), State::NodeValue(init, q.ant), Ordinal::zero())],
        State::NodeValue(n, v) => {
            let mut out = trace_steps(p, Side::Left, n, v);
            for step in p.steps(n) {
                out.push((Letter::Node(step.target), sink_for(step.target), Ordinal::zero()));
            }
            let node = &p.nodes()[n.0];
            if node.is_axiom() {
                for &c in &node.con_values {
                    let equated = p.equated_with(n, c);
                    if equated.contains(&v) {
                        out.push((Letter::Pair(equated, c), State::Bot, Ordinal::zero()));
                    }
                }
            }
            out
        }
        State::Top => p
            .node_ids()
            .map(|m| (Letter::Node(m), State::Top, Ordinal::zero()))
            .collect(),
        State::TopChain(x, i) => p
            .node_ids()
            .filter_map(|m| {
                if m != x {
                    Some((Letter::Node(m), State::TopChain(x, i), Ordinal::zero()))
                } else if i < depth.unwrap_or(0) {
                    Some((Letter::Node(m), State::TopChain(x, i + 1), Ordinal::zero()))
                } else {
                    None
                }
            })
            .collect(),
        State::Bot => Vec::new(),
    };
    let kind = match depth {
        None => AutomatonKind::AntecedentFull,
        Some(n) => AutomatonKind::AntecedentApprox(n),
    };
    Ok(explore(p, kind, succ, |s| s != State::Start))
}

/// The full antecedent automaton for `q`.
pub fn build_antecedent_full(p: &ProofGraph, q: &TracePairQuery) -> Result<WeightedAutomaton> {
    build_antecedent(p, q, None)
}

/// The antecedent automaton approximated to depth `n ≥ 1`.
pub fn build_antecedent_approx(p: &ProofGraph, q: &TracePairQuery, n: u32) -> Result<WeightedAutomaton> {
    if n == 0 {
        return Err(Error::ZeroApproximation);
    }
    build_antecedent(p, q, Some(n))
}
