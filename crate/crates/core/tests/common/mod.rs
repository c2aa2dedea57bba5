//! Reference computations shared by the integration tests. Everything here
//! works from the raw node and trace-pair data of a proof, not from the
//! crate's own trace or automaton code.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use cep_core::automata::{run_values, Letter, State, WeightedAutomaton};
use cep_core::automata::TracePairQuery;
use cep_core::random::{random_proof, GenConfig};
use cep_core::{NodeId, Ordinal, ProofGraph, Side, TropicalWeight, ValueId};

/// Trace pairs of the edge `u → v` on `side`, merged over child slots with
/// the larger weight kept.
pub fn edge_pairs(p: &ProofGraph, side: Side, u: NodeId, v: NodeId) -> BTreeMap<(ValueId, ValueId), Ordinal> {
    let node = &p.nodes()[u.0];
    let mut out: BTreeMap<(ValueId, ValueId), Ordinal> = BTreeMap::new();
    for (slot, &child) in node.children.iter().enumerate() {
        if child != v {
            continue;
        }
        let Some(d) = p.delta(u).get(slot) else { continue };
        let map = match side {
            Side::Left => &d.left,
            Side::Right => &d.right,
        };
        for (&k, w) in map {
            let e = out.entry(k).or_insert_with(|| w.clone());
            if *e < *w {
                *e = w.clone();
            }
        }
    }
    out
}

pub fn children(p: &ProofGraph, u: NodeId) -> BTreeSet<NodeId> {
    p.nodes()[u.0].children.iter().copied().collect()
}

/// Every path of 1 to `max_len` nodes starting at `start`.
pub fn paths_from(p: &ProofGraph, start: NodeId, max_len: usize) -> Vec<Vec<NodeId>> {
    let mut out = Vec::new();
    let mut stack = vec![vec![start]];
    while let Some(path) = stack.pop() {
        if path.len() < max_len {
            for c in children(p, *path.last().unwrap()) {
                let mut ext = path.clone();
                ext.push(c);
                stack.push(ext);
            }
        }
        out.push(path);
    }
    out.sort();
    out
}

/// Traces on `side` starting with `first` that follow the whole of `path`,
/// each with its reverse-sum size.
pub fn full_traces(p: &ProofGraph, side: Side, path: &[NodeId], first: ValueId) -> Vec<(Vec<ValueId>, Ordinal)> {
    if !p.nodes()[path[0].0].values(side).contains(&first) {
        return Vec::new();
    }
    let mut cur: Vec<(Vec<ValueId>, Vec<Ordinal>)> = vec![(vec![first], Vec::new())];
    for w in path.windows(2) {
        let pairs = edge_pairs(p, side, w[0], w[1]);
        let mut next = Vec::new();
        for (vals, weights) in cur {
            let last = *vals.last().unwrap();
            for (&(x, y), weight) in &pairs {
                if x == last {
                    let mut v = vals.clone();
                    v.push(y);
                    let mut ws = weights.clone();
                    ws.push(weight.clone());
                    next.push((v, ws));
                }
            }
        }
        cur = next;
    }
    cur.into_iter()
        .map(|(vals, weights)| (vals, reverse_sum(&weights)))
        .collect()
}

/// `w_k + ... + w_1`.
pub fn reverse_sum(weights: &[Ordinal]) -> Ordinal {
    let mut acc = Ordinal::zero();
    for w in weights.iter().rev() {
        acc = &acc + w;
    }
    acc
}

/// Left traces from `first` along every prefix of `path` (lengths 1..=n).
pub fn prefix_left_traces(p: &ProofGraph, path: &[NodeId], first: ValueId) -> Vec<(Vec<ValueId>, Ordinal)> {
    (1..=path.len())
        .flat_map(|k| full_traces(p, Side::Left, &path[..k], first))
        .collect()
}

/// The value would be the last of a maximal trace: no pair on any edge out
/// of the node starts with it.
pub fn terminal(p: &ProofGraph, side: Side, n: NodeId, v: ValueId) -> bool {
    children(p, n)
        .into_iter()
        .all(|c| edge_pairs(p, side, n, c).keys().all(|&(x, _)| x != v))
}

pub fn node_word(path: &[NodeId]) -> Vec<Letter> {
    path.iter().map(|&n| Letter::Node(n)).collect()
}

/// The states of a run and its weight as a reverse sum of transition
/// weights, whether or not the run accepts.
pub fn raw_runs(a: &WeightedAutomaton, word: &[Letter]) -> Vec<(Vec<State>, Ordinal, TropicalWeight)> {
    run_values(a, word)
        .into_iter()
        .map(|(run, value)| {
            let mut weights = Vec::new();
            for (i, pair) in run.states.windows(2).enumerate() {
                let t = a
                    .transitions()
                    .iter()
                    .find(|t| t.from == pair[0] && t.to == pair[1] && t.letter == word[i])
                    .expect("run steps are transitions");
                weights.push(t.weight.clone());
            }
            let states = run.states.iter().map(|&q| a.state(q)).collect();
            (states, reverse_sum(&weights), value)
        })
        .collect()
}

pub fn node_values(states: &[State]) -> Vec<ValueId> {
    states
        .iter()
        .filter_map(|s| match s {
            State::NodeValue(_, v) => Some(*v),
            _ => None,
        })
        .collect()
}

pub fn root_query(p: &ProofGraph) -> Option<TracePairQuery> {
    let r = p.root();
    Some(TracePairQuery {
        node: r,
        ant: *p.values(r, Side::Left).iter().next()?,
        con: *p.values(r, Side::Right).iter().next()?,
    })
}

/// The small-proof corpus: at most 5 nodes, 2 values per side, weights in
/// {0, 1, 2}. Even seeds are trace-injective.
pub fn small_corpus(count: usize) -> Vec<(u64, ProofGraph, TracePairQuery)> {
    (0..count as u64)
        .filter_map(|seed| {
            let cfg = GenConfig {
                injective: seed % 2 == 0,
                ..GenConfig::default()
            };
            let p = random_proof(&cfg, seed);
            let q = root_query(&p)?;
            Some((seed, p, q))
        })
        .collect()
}

/// Pair letters `(T, τ)` that some automaton over `p` could read.
pub fn pair_letters(p: &ProofGraph) -> BTreeSet<Letter> {
    let mut out = BTreeSet::new();
    for n in p.node_ids() {
        if !p.nodes()[n.0].children.is_empty() {
            continue;
        }
        for &c in &p.nodes()[n.0].con_values {
            out.insert(Letter::Pair(equated(p, n, c), c));
        }
    }
    out
}

/// Antecedent values equated with `c` at `n`.
pub fn equated(p: &ProofGraph, n: NodeId, c: ValueId) -> BTreeSet<ValueId> {
    let node = &p.nodes()[n.0];
    node.equates
        .iter()
        .filter(|&&(a, x)| x == c && node.ant_values.contains(&a))
        .map(|&(a, _)| a)
        .collect()
}

pub fn nat(o: &Ordinal) -> u64 {
    o.as_nat().expect("finite weight")
}

/// Left values at `node` reachable from `(node, ant)` by left traces,
/// `ant` included.
pub fn reachable_left_values(p: &ProofGraph, node: NodeId, ant: ValueId) -> BTreeSet<ValueId> {
    let mut seen = BTreeSet::from([(node, ant)]);
    let mut stack = vec![(node, ant)];
    while let Some((n, v)) = stack.pop() {
        for c in children(p, n) {
            for &(x, y) in edge_pairs(p, Side::Left, n, c).keys() {
                if x == v && seen.insert((c, y)) {
                    stack.push((c, y));
                }
            }
        }
    }
    seen.into_iter().filter(|&(n, _)| n == node).map(|(_, v)| v).collect()
}

/// Searches paths of at most `max_len` nodes for a positive maximal
/// consequent trace without a matching antecedent trace. Returns the path
/// and consequent values of the first one found, shortest paths first.
pub fn order_counterexample(
    p: &ProofGraph,
    q: &TracePairQuery,
    strict: bool,
    max_len: usize,
) -> Option<(Vec<NodeId>, Vec<ValueId>)> {
    let mut paths = paths_from(p, q.node, max_len);
    paths.sort_by_key(|x| x.len());
    for path in paths {
        let last = *path.last().unwrap();
        let node = &p.nodes()[last.0];
        for (right, size) in full_traces(p, Side::Right, &path, q.con) {
            let tau = *right.last().unwrap();
            if node.excluded.contains(&tau) || !terminal(p, Side::Right, last, tau) {
                continue;
            }
            let grounded = node.ground.contains(&tau);
            let matched = prefix_left_traces(p, &path, q.ant).into_iter().any(|(left, left_size)| {
                let anchored = grounded
                    || (node.children.is_empty()
                        && left.len() == path.len()
                        && node.equates.contains(&(*left.last().unwrap(), tau)));
                anchored && if strict { size < left_size } else { size <= left_size }
            });
            if !matched {
                return Some((path, right));
            }
        }
    }
    None
}
