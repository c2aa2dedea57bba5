//! Global soundness: every infinite path must have a tail followed by a left
//! trace that progresses infinitely often.
//!
//! Decided by a size-change style closure. Each path summarises to a sloped
//! relation between antecedent values of its endpoints (`down` when some
//! step on the way has positive weight). The proof is sound iff every
//! idempotent relation from a node to itself has a `down` self-pair.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::proof::{NodeId, ProofGraph, Side, ValueId};

/// Antecedent value pairs with a slope, `true` meaning down.
pub type SlopedRelation = BTreeMap<(ValueId, ValueId), bool>;

pub fn compose(r: &SlopedRelation, s: &SlopedRelation) -> SlopedRelation {
    let mut out = SlopedRelation::new();
    for (&(a, b), &d1) in r {
        for (&(_, c), &d2) in s.range((b, ValueId(0))..=(b, ValueId(usize::MAX))) {
            let e = out.entry((a, c)).or_insert(false);
            *e |= d1 || d2;
        }
    }
    out
}

fn edge_relation(p: &ProofGraph, from: NodeId, to: NodeId) -> SlopedRelation {
    p.step(from, to)
        .map(|s| {
            s.left
                .iter()
                .map(|(&k, w)| (k, !w.is_zero()))
                .collect()
        })
        .unwrap_or_default()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lasso {
    /// Path from the root to the first node of the cycle, inclusive.
    pub prefix: Vec<NodeId>,
    /// Closed path; first and last node coincide.
    pub cycle: Vec<NodeId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SoundnessReport {
    pub sound: bool,
    pub witness: Option<Lasso>,
    /// Number of distinct (source, target, relation) summaries in the closure.
    pub closure_size: usize,
}

type Key = (NodeId, NodeId, Vec<((ValueId, ValueId), bool)>);

fn key(u: NodeId, v: NodeId, r: &SlopedRelation) -> Key {
    (u, v, r.iter().map(|(&k, &d)| (k, d)).collect())
}

pub fn check_global_soundness(p: &ProofGraph) -> SoundnessReport {
    let edges: Vec<(NodeId, NodeId, SlopedRelation)> = p
        .node_ids()
        .flat_map(|u| p.steps(u).iter().map(move |s| (u, s.target)))
        .map(|(u, v)| (u, v, edge_relation(p, u, v)))
        .collect();
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); p.len()];
    for (i, (u, _, _)) in edges.iter().enumerate() {
        out_edges[u.0].push(i);
    }

    // Closure with one witness path per summary. Each round extends the
    // previous round's new summaries by one edge, so witnesses found in a
    // round all have the same length; the lexicographically least wins.
    let mut closure: BTreeMap<Key, Vec<NodeId>> = BTreeMap::new();
    let mut frontier: Vec<(Key, SlopedRelation, Vec<NodeId>)> = Vec::new();
    for (u, v, r) in &edges {
        let k = key(*u, *v, r);
        let path = vec![*u, *v];
        match closure.get(&k) {
            Some(old) if *old <= path => {}
            _ => {
                closure.insert(k.clone(), path.clone());
            }
        }
    }
    for (k, path) in &closure {
        frontier.push((k.clone(), k.2.iter().copied().collect(), path.clone()));
    }

    let (edges, out_edges) = (&edges, &out_edges);
    while !frontier.is_empty() {
        let mut found: Vec<(Key, SlopedRelation, Vec<NodeId>)> = frontier
            .par_iter()
            .flat_map_iter(|(k, r, path)| {
                let v = k.1;
                out_edges[v.0].iter().map(move |&e| {
                    let (_, w, ref er) = edges[e];
                    let c = compose(r, er);
                    let mut ext = path.clone();
                    ext.push(w);
                    (key(k.0, w, &c), c, ext)
                })
            })
            .collect();
        found.sort_by(|x, y| (&x.0, &x.2).cmp(&(&y.0, &y.2)));
        found.dedup_by(|x, y| x.0 == y.0);
        frontier = found
            .into_iter()
            .filter(|(k, _, path)| {
                if closure.contains_key(k) {
                    false
                } else {
                    closure.insert(k.clone(), path.clone());
                    true
                }
            })
            .collect();
    }

    let mut witness = None;
    for ((u, v, pairs), path) in &closure {
        if u != v {
            continue;
        }
        let r: SlopedRelation = pairs.iter().copied().collect();
        if compose(&r, &r) != r {
            continue;
        }
        if r.iter().any(|(&(a, b), &d)| a == b && d) {
            continue;
        }
        let candidate = Lasso {
            prefix: path_from_root(p, *u),
            cycle: path.clone(),
        };
        let better = match &witness {
            None => true,
            Some(w) => lasso_rank(&candidate) < lasso_rank(w),
        };
        if better {
            witness = Some(candidate);
        }
    }
    SoundnessReport {
        sound: witness.is_none(),
        witness,
        closure_size: closure.len(),
    }
}

fn lasso_rank(l: &Lasso) -> (usize, &Vec<NodeId>, &Vec<NodeId>) {
    (l.prefix.len() + l.cycle.len(), &l.prefix, &l.cycle)
}

/// Shortest path from the root to `target` (lexicographically least among
/// shortest), or just `[target]` when it is unreachable.
pub(crate) fn path_from_root(p: &ProofGraph, target: NodeId) -> Vec<NodeId> {
    let mut pred: Vec<Option<NodeId>> = vec![None; p.len()];
    let mut seen = BTreeSet::from([p.root()]);
    let mut queue = VecDeque::from([p.root()]);
    while let Some(u) = queue.pop_front() {
        if u == target {
            let mut path = vec![u];
            let mut cur = u;
            while let Some(prev) = pred[cur.0] {
                path.push(prev);
                cur = prev;
            }
            path.reverse();
            return path;
        }
        let mut next: Vec<NodeId> = p.steps(u).iter().map(|s| s.target).collect();
        next.sort();
        for v in next {
            if seen.insert(v) {
                pred[v.0] = Some(u);
                queue.push_back(v);
            }
        }
    }
    vec![target]
}

/// Whether the eventually periodic path `prefix · cycle^ω` is followed on
/// some tail by an infinitely progressing left trace. Independent of the
/// closure: looks for a cycle with a positive step in the value graph over
/// cycle positions.
pub fn lasso_progresses(p: &ProofGraph, cycle: &[NodeId]) -> bool {
    let k = cycle.len() - 1;
    if k == 0 {
        return false;
    }
    // states (position, value); position i sits on cycle[i]
    type Pos = (usize, ValueId);
    let mut adj: BTreeMap<Pos, Vec<(Pos, bool)>> = BTreeMap::new();
    for i in 0..k {
        if let Some(step) = p.step(cycle[i], cycle[i + 1]) {
            for (&(a, b), w) in step.pairs(Side::Left) {
                adj.entry((i, a))
                    .or_default()
                    .push((((i + 1) % k, b), !w.is_zero()));
            }
        }
    }
    // A positive edge u -> v lies on a cycle iff v reaches u.
    let reaches = |from: (usize, ValueId), to: (usize, ValueId)| {
        let mut seen = BTreeSet::from([from]);
        let mut stack = vec![from];
        while let Some(s) = stack.pop() {
            if s == to {
                return true;
            }
            for (t, _) in adj.get(&s).into_iter().flatten() {
                if seen.insert(*t) {
                    stack.push(*t);
                }
            }
        }
        false
    };
    adj.iter().any(|(&u, outs)| {
        outs.iter().any(|&(v, down)| down && reaches(v, u))
    })
}
