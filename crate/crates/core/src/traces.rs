//! Paths, traces and their sizes.
//!
//! A path is a non-empty node sequence in which each node is a parent of the
//! next. A trace is a sequence of values of one side that follows a path
//! prefix, each consecutive value pair being a trace pair of the aligned
//! edge. The size of a trace is the *reverse* ordinal sum of its step
//! weights: the last step's weight comes first.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::proof::{NodeId, ProofGraph, Side, ValueId};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Trace {
    pub side: Side,
    pub values: Vec<ValueId>,
}

impl Trace {
    pub fn new(side: Side, values: Vec<ValueId>) -> Self {
        Trace { side, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A path together with a trace of the same length following it.
pub type TracedPath = (Vec<NodeId>, Trace);

/// Whether `path` is a path: non-empty with every step an edge.
pub fn is_path(p: &ProofGraph, path: &[NodeId]) -> bool {
    !path.is_empty()
        && path.iter().all(|n| n.0 < p.len())
        && path.windows(2).all(|w| p.is_edge(w[0], w[1]))
}

/// Whether `t` follows the prefix of `path` of the same length.
///
/// Fails if the trace is longer than the path or if some value is not a
/// value of the aligned node on the trace's side.
pub fn follows(p: &ProofGraph, path: &[NodeId], t: &Trace) -> Result<bool> {
    if t.len() > path.len() {
        return Err(Error::TraceTooLong {
            trace: t.len(),
            path: path.len(),
        });
    }
    for (&v, &n) in t.values.iter().zip(path) {
        let node = p.node(n)?;
        if !node.values(t.side).contains(&v) {
            return Err(Error::UnknownValue {
                node: node.name.clone(),
                side: t.side.value_kind(),
                value: p.value_name(v).to_string(),
            });
        }
    }
    if !is_path(p, path) {
        return Ok(false);
    }
    Ok(t.values
        .windows(2)
        .zip(path.windows(2))
        .all(|(v, n)| p.weight(t.side, n[0], n[1], v[0], v[1]).is_some()))
}

/// Step weights of `t` along `path`, in path order.
fn step_weights<'a>(p: &'a ProofGraph, path: &[NodeId], t: &Trace) -> Result<Vec<&'a Ordinal>> {
    if !follows(p, path, t)? {
        return Err(Error::Structure {
            location: "trace".into(),
            message: "the trace does not follow the path".into(),
        });
    }
    Ok(t.values
        .windows(2)
        .zip(path.windows(2))
        .map(|(v, n)| p.weight(t.side, n[0], n[1], v[0], v[1]).expect("checked by follows"))
        .collect())
}

/// Reverse-sum size of a trace along a path: `δ_{n-1} + ... + δ_1`.
pub fn prog_points(p: &ProofGraph, path: &[NodeId], t: &Trace) -> Result<Ordinal> {
    let weights = step_weights(p, path, t)?;
    Ok(weights
        .into_iter()
        .rev()
        .fold(Ordinal::zero(), |acc, w| &acc + w))
}

/// Maximality and polarity of a finite right-hand trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RightClassification {
    /// The final value is terminal for the final node.
    pub maximal: bool,
    /// The final node does not exclude the final value.
    pub positive: bool,
    /// Maximal and ending at an axiom.
    pub partially_maximal: bool,
    /// Maximal and ending at a non-axiom.
    pub fully_maximal: bool,
    /// The final value is ground at the final node.
    pub grounded: bool,
}

pub fn classify_right_trace(
    p: &ProofGraph,
    path: &[NodeId],
    t: &Trace,
) -> Result<RightClassification> {
    if t.side != Side::Right {
        return Err(Error::Structure {
            location: "trace".into(),
            message: "expected a right-hand trace".into(),
        });
    }
    if t.is_empty() || !follows(p, path, t)? {
        return Err(Error::Structure {
            location: "trace".into(),
            message: "the trace does not follow the path".into(),
        });
    }
    let last = *t.values.last().unwrap();
    let node_id = path[t.len() - 1];
    let node = p.node(node_id)?;
    let maximal = p.is_terminal(node_id, Side::Right, last);
    Ok(RightClassification {
        maximal,
        positive: !node.excluded.contains(&last),
        partially_maximal: maximal && node.is_axiom(),
        fully_maximal: maximal && !node.is_axiom(),
        grounded: node.ground.contains(&last),
    })
}

/// All positive maximal right-hand traces starting with `value` at `node`
/// along paths of at most `max_path_len` nodes, with the trace as long as
/// the path. Shortest first, then by path and trace.
///
/// Bounded by construction: used as a reference oracle, not as a decision
/// procedure.
pub fn enumerate_right_maximal(
    p: &ProofGraph,
    node: NodeId,
    value: ValueId,
    max_path_len: usize,
) -> Result<Vec<TracedPath>> {
    let n = p.node(node)?;
    if !n.con_values.contains(&value) {
        return Err(Error::UnknownValue {
            node: n.name.clone(),
            side: Side::Right.value_kind(),
            value: p.value_name(value).to_string(),
        });
    }
    let mut out = Vec::new();
    let mut path = vec![node];
    let mut values = vec![value];
    walk_right(p, max_path_len, &mut path, &mut values, &mut out);
    out.sort_by(|x, y| (x.0.len(), x).cmp(&(y.0.len(), y)));
    Ok(out)
}

fn walk_right(
    p: &ProofGraph,
    max_len: usize,
    path: &mut Vec<NodeId>,
    values: &mut Vec<ValueId>,
    out: &mut Vec<TracedPath>,
) {
    if path.len() > max_len {
        return;
    }
    let node = *path.last().unwrap();
    let value = *values.last().unwrap();
    if p.is_terminal(node, Side::Right, value) {
        if !p.nodes()[node.0].excluded.contains(&value) {
            out.push((path.clone(), Trace::new(Side::Right, values.clone())));
        }
        return;
    }
    for (child, next, _) in p.trace_successors(Side::Right, node, value) {
        path.push(child);
        values.push(next);
        walk_right(p, max_len, path, values, out);
        path.pop();
        values.pop();
    }
}

/// Enumerates every simple cycle of a finite graph, once per rotation.
///
/// A cycle `s_1 ... s_n` with `s_1 = s_n` is simple when `s_2 ... s_n` are
/// pairwise distinct. Each start state is tried as a root, so a cycle of `k`
/// distinct states is reported `k` times.
pub(crate) fn simple_cycles_of<S, F, I>(starts: impl IntoIterator<Item = S>, succ: F) -> Vec<Vec<S>>
where
    S: Copy + Ord,
    F: Fn(S) -> I,
    I: IntoIterator<Item = S>,
{
    fn dfs<S, F, I>(
        root: S,
        succ: &F,
        stack: &mut Vec<S>,
        on_stack: &mut BTreeSet<S>,
        out: &mut Vec<Vec<S>>,
    ) where
        S: Copy + Ord,
        F: Fn(S) -> I,
        I: IntoIterator<Item = S>,
    {
        let cur = *stack.last().unwrap();
        for next in succ(cur) {
            if next == root {
                let mut cycle = stack.clone();
                cycle.push(root);
                out.push(cycle);
            } else if on_stack.insert(next) {
                stack.push(next);
                dfs(root, succ, stack, on_stack, out);
                stack.pop();
                on_stack.remove(&next);
            }
        }
    }

    let mut out = Vec::new();
    for root in starts {
        let mut stack = vec![root];
        let mut on_stack = BTreeSet::new();
        dfs(root, &succ, &mut stack, &mut on_stack, &mut out);
    }
    out
}

fn trace_states(p: &ProofGraph, side: Side) -> Vec<(NodeId, ValueId)> {
    p.node_ids()
        .flat_map(|n| p.values(n, side).iter().map(move |&v| (n, v)))
        .collect()
}

/// Every simple trace cycle on `side`, once per root.
pub fn simple_cycles(p: &ProofGraph, side: Side) -> Vec<TracedPath> {
    let cycles = simple_cycles_of(trace_states(p, side), |(n, v)| {
        p.trace_successors(side, n, v)
            .map(|(m, u, _)| (m, u))
            .collect::<Vec<_>>()
    });
    let mut out: Vec<TracedPath> = cycles
        .into_iter()
        .map(|c| {
            let (nodes, values) = c.into_iter().unzip();
            (nodes, Trace::new(side, values))
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Every simple binary left cycle: pairs of left traces along a common
/// cycle, judged on (node, value, value) triples. Diagonal pairs included.
pub fn simple_binary_cycles(p: &ProofGraph) -> Vec<(Vec<NodeId>, Trace, Trace)> {
    let starts: Vec<(NodeId, ValueId, ValueId)> = p
        .node_ids()
        .flat_map(|n| {
            let vals = p.values(n, Side::Left);
            vals.iter()
                .flat_map(move |&a| vals.iter().map(move |&b| (n, a, b)))
        })
        .collect();
    let cycles = simple_cycles_of(starts, |(n, a, b)| binary_successors(p, n, a, b));
    let mut out: Vec<_> = cycles
        .into_iter()
        .map(|c| {
            let nodes = c.iter().map(|s| s.0).collect();
            let first = c.iter().map(|s| s.1).collect();
            let second = c.iter().map(|s| s.2).collect();
            (
                nodes,
                Trace::new(Side::Left, first),
                Trace::new(Side::Left, second),
            )
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

pub(crate) fn binary_successors(
    p: &ProofGraph,
    n: NodeId,
    a: ValueId,
    b: ValueId,
) -> Vec<(NodeId, ValueId, ValueId)> {
    let mut out = Vec::new();
    for step in p.steps(n) {
        for (a2, _) in step.from_value(Side::Left, a) {
            for (b2, _) in step.from_value(Side::Left, b) {
                out.push((step.target, a2, b2));
            }
        }
    }
    out
}

/// Every left trace of any length `1..=path.len()` starting with `first`
/// that follows `path`. Exhaustive; for oracles and tests.
pub fn left_traces_along(p: &ProofGraph, path: &[NodeId], first: ValueId) -> Vec<Trace> {
    let mut out = Vec::new();
    if path.is_empty() || !p.values(path[0], Side::Left).contains(&first) {
        return out;
    }
    let mut cur = vec![vec![first]];
    for i in 1..=path.len() {
        let mut next = Vec::new();
        for vals in cur {
            if i < path.len() {
                let last = *vals.last().unwrap();
                if let Some(step) = p.step(path[i - 1], path[i]) {
                    for (v, _) in step.from_value(Side::Left, last) {
                        let mut ext = vals.clone();
                        ext.push(v);
                        next.push(ext);
                    }
                }
            }
            out.push(Trace::new(Side::Left, vals));
        }
        cur = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::random::{random_proof, GenConfig};
    use proptest::prelude::*;

    struct L2 {
        p: ProofGraph,
        n0: NodeId,
        n1: NodeId,
        n2: NodeId,
        a: ValueId,
        c: ValueId,
    }

    fn l2() -> L2 {
        let p = fixtures::loop2();
        L2 {
            n0: p.node_id("n0").unwrap(),
            n1: p.node_id("n1").unwrap(),
            n2: p.node_id("n2").unwrap(),
            a: p.value_id("a").unwrap(),
            c: p.value_id("c").unwrap(),
            p,
        }
    }

    #[test]
    fn follows_examples() {
        let L2 { p, n0, n1, n2, a, c } = l2();
        let right = |v: Vec<ValueId>| Trace::new(Side::Right, v);
        assert!(follows(&p, &[n0, n1, n2], &right(vec![c, c, c])).unwrap());
        assert!(follows(&p, &[n0, n1], &Trace::new(Side::Left, vec![a])).unwrap());
        assert!(follows(&p, &[n0, n1], &right(vec![c, a])).is_err());
        assert!(follows(&p, &[n0], &right(vec![c, c])).is_err());
        // n0 -> n2 is not an edge
        assert!(!follows(&p, &[n0, n2], &right(vec![c, c])).unwrap());
    }

    #[test]
    fn prog_points_examples() {
        let L2 { p, n0, n1, n2, c, .. } = l2();
        let t1 = Trace::new(Side::Right, vec![c]);
        assert_eq!(prog_points(&p, &[n0], &t1).unwrap(), Ordinal::zero());
        let path = [n0, n1, n0, n1, n2];
        let t = Trace::new(Side::Right, vec![c; 5]);
        assert_eq!(prog_points(&p, &path, &t).unwrap(), Ordinal::from_nat(2));
    }

    #[test]
    fn prog_points_is_a_reverse_sum() {
        // weights [ω, 1] in path order: 1 + ω = ω, not ω + 1
        let L2 { p, n0, n1, n2, c, .. } = l2();
        let q = p.modified(|_, delta| {
            delta[0][0].right.insert((c, c), Ordinal::omega());
            delta[1][1].right.insert((c, c), Ordinal::from_nat(1));
        });
        let t = Trace::new(Side::Right, vec![c; 3]);
        assert_eq!(prog_points(&q, &[n0, n1, n2], &t).unwrap(), Ordinal::omega());
    }

    #[test]
    fn classify_examples() {
        let L2 { p, n0, n1, n2, c, .. } = l2();
        let t3 = Trace::new(Side::Right, vec![c; 3]);
        let k = classify_right_trace(&p, &[n0, n1, n2], &t3).unwrap();
        assert!(k.maximal && k.positive && k.partially_maximal && k.grounded);
        assert!(!k.fully_maximal);
        let k = classify_right_trace(&p, &[n0, n1], &Trace::new(Side::Right, vec![c; 2])).unwrap();
        assert!(!k.maximal);
        let excl = p.modified(|nodes, _| {
            nodes[n2.0].excluded.insert(c);
        });
        let k = classify_right_trace(&excl, &[n0, n1, n2], &t3).unwrap();
        assert!(k.maximal && !k.positive);
    }

    #[test]
    fn enumerate_examples() {
        let L2 { p, n0, n1, n2, a, c } = l2();
        let three = enumerate_right_maximal(&p, n0, c, 3).unwrap();
        assert_eq!(three, vec![(vec![n0, n1, n2], Trace::new(Side::Right, vec![c; 3]))]);
        let five = enumerate_right_maximal(&p, n0, c, 5).unwrap();
        assert_eq!(five.len(), 2);
        assert!(five.contains(&(vec![n0, n1, n0, n1, n2], Trace::new(Side::Right, vec![c; 5]))));
        assert!(enumerate_right_maximal(&fixtures::unsound1(), NodeId(0), a, 4).is_err());
    }

    #[test]
    fn simple_cycle_examples() {
        let L2 { p, n0, n1, a, .. } = l2();
        let left = simple_cycles(&p, Side::Left);
        assert_eq!(
            left,
            vec![
                (vec![n0, n1, n0], Trace::new(Side::Left, vec![a; 3])),
                (vec![n1, n0, n1], Trace::new(Side::Left, vec![a; 3])),
            ]
        );
        let binary = simple_binary_cycles(&p);
        assert_eq!(binary.len(), 2);
        for (_, t, u) in &binary {
            assert_eq!(t, u);
            assert_eq!(t.values, vec![a; 3]);
        }
        let acyclic = p.modified(|nodes, delta| {
            nodes[1].children.clear();
            delta[1].clear();
            nodes[1].children.push(NodeId(2));
            delta[1].push(Default::default());
        });
        assert!(simple_cycles(&acyclic, Side::Left).is_empty());
        assert!(simple_binary_cycles(&acyclic).is_empty());
    }

    #[test]
    fn left_traces_along_covers_prefixes() {
        let L2 { p, n0, n1, n2, a, .. } = l2();
        let ts = left_traces_along(&p, &[n0, n1, n2], a);
        let lens: Vec<usize> = ts.iter().map(Trace::len).collect();
        assert_eq!(lens, vec![1, 2, 3]);
    }

    fn cfg() -> GenConfig {
        GenConfig {
            max_nodes: 5,
            max_values: 2,
            weights: vec![0, 1, 2],
            injective: true,
            ..GenConfig::default()
        }
    }

    /// All traces of exactly `path.len()` values following `path` from `first`.
    fn full_traces(p: &ProofGraph, side: Side, path: &[NodeId], first: ValueId) -> Vec<Vec<ValueId>> {
        let mut cur = vec![vec![first]];
        for w in path.windows(2) {
            let mut next = Vec::new();
            for vals in &cur {
                let step = match p.step(w[0], w[1]) {
                    Some(s) => s,
                    None => return Vec::new(),
                };
                for (v, _) in step.from_value(side, *vals.last().unwrap()) {
                    let mut e = vals.clone();
                    e.push(v);
                    next.push(e);
                }
            }
            cur = next;
        }
        cur
    }

    fn random_paths(p: &ProofGraph, seed: u64, len: usize) -> Vec<Vec<NodeId>> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        for _ in 0..8 {
            let mut path = vec![p.root()];
            while path.len() < len {
                let steps = p.steps(*path.last().unwrap());
                if steps.is_empty() {
                    break;
                }
                path.push(steps[rng.gen_range(0..steps.len())].target);
            }
            out.push(path);
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn prog_of_concatenation(seed in 0u64..10_000, split in 1usize..6) {
            let p = random_proof(&cfg(), seed);
            for side in [Side::Left, Side::Right] {
                for path in random_paths(&p, seed, 7) {
                    let Some(&first) = p.values(path[0], side).iter().next() else { continue };
                    for vals in full_traces(&p, side, &path, first) {
                        let k = split.min(vals.len() - 1);
                        let whole = prog_points(&p, &path, &Trace::new(side, vals.clone())).unwrap();
                        let head = prog_points(&p, &path[..=k], &Trace::new(side, vals[..=k].to_vec())).unwrap();
                        let tail = prog_points(&p, &path[k..], &Trace::new(side, vals[k..].to_vec())).unwrap();
                        prop_assert_eq!(whole, &tail + &head);
                    }
                }
            }
        }

        #[test]
        fn enumerated_traces_are_positive_maximal(seed in 0u64..10_000) {
            let p = random_proof(&cfg(), seed);
            for n in p.node_ids() {
                for &v in p.values(n, Side::Right) {
                    for (path, t) in enumerate_right_maximal(&p, n, v, 6).unwrap() {
                        let k = classify_right_trace(&p, &path, &t).unwrap();
                        prop_assert!(k.maximal && k.positive);
                        prop_assert_eq!(path.len(), t.len());
                    }
                }
            }
        }

        #[test]
        fn injective_traces_are_determined_by_endpoints(seed in 0u64..10_000) {
            let p = random_proof(&cfg(), seed);
            for side in [Side::Left, Side::Right] {
                for path in random_paths(&p, seed ^ 0x55, 6) {
                    for &first in p.values(path[0], side) {
                        let ts = full_traces(&p, side, &path, first);
                        for x in &ts {
                            for y in &ts {
                                if x.last() == y.last() {
                                    prop_assert_eq!(x, y);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}
