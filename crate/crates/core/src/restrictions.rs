//! The three structural restrictions under which the order relations can be
//! decided, and the thresholds they feed into.
//!
//! All checks only look at trace pairs reachable from the query: left-hand
//! ones from the antecedent value, right-hand ones from the consequent value.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::automata::TracePairQuery;
use crate::error::{Error, Result};
use crate::graph::{find_cycle, sccs};
use crate::ordinal::Ordinal;
use crate::proof::{NodeId, ProofGraph, Side, ValueId};
use crate::traces::{binary_successors, Trace};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Thresholds {
    /// Most trace values on either side of any node.
    pub trace_width: usize,
    /// Most distinct parents of any node.
    pub in_degree: usize,
    /// Number of (node, antecedent value, antecedent value) triples.
    pub cycle_threshold: usize,
    /// Largest left-hand pair weight, 0 when there are none.
    pub max_step: Ordinal,
    /// `2 + C·maxStep·W + W`; absent when `max_step` is infinite or the
    /// product overflows.
    pub n_bound: Option<u64>,
}

pub fn compute_thresholds(p: &ProofGraph, q: &TracePairQuery) -> Result<Thresholds> {
    q.check(p)?;
    let trace_width = p.trace_width();
    let cycle_threshold = p.nodes().iter().map(|n| n.ant_values.len().pow(2)).sum();
    let max_step = p.weights(Side::Left).max().cloned().unwrap_or_else(Ordinal::zero);
    let n_bound = max_step.as_nat().and_then(|m| {
        let w = trace_width as u64;
        (cycle_threshold as u64)
            .checked_mul(m)?
            .checked_mul(w)?
            .checked_add(w)?
            .checked_add(2)
    });
    Ok(Thresholds {
        trace_width,
        in_degree: p.in_degree(),
        cycle_threshold,
        max_step,
        n_bound,
    })
}

/// One weighted trace pair on one edge.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PairRef {
    pub side: Side,
    pub from: NodeId,
    pub to: NodeId,
    pub from_value: ValueId,
    pub to_value: ValueId,
    pub weight: Ordinal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinitelyProgressingReport {
    pub passed: bool,
    /// Reachable pairs with a weight of ω or more.
    pub offending: Vec<PairRef>,
}

/// A cycle of (node, value) pairs; first and last entries coincide.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleWitness {
    pub side: Side,
    pub nodes: Vec<NodeId>,
    pub values: Vec<ValueId>,
}

impl CycleWitness {
    pub fn trace(&self) -> Trace {
        Trace::new(self.side, self.values.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DynamicReport {
    pub passed: bool,
    /// A reachable cycle all of whose steps weigh 0.
    pub witness: Option<CycleWitness>,
}

/// Two left traces along a common cycle whose sizes differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BinaryCycleWitness {
    pub nodes: Vec<NodeId>,
    pub first: Vec<ValueId>,
    pub second: Vec<ValueId>,
    /// Size of the first trace minus size of the second.
    pub difference: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalancedReport {
    pub passed: bool,
    pub witness: Option<BinaryCycleWitness>,
}

fn reachable(p: &ProofGraph, q: &TracePairQuery, side: Side) -> BTreeSet<(NodeId, ValueId)> {
    let v = match side {
        Side::Left => q.ant,
        Side::Right => q.con,
    };
    p.reachable_pairs(side, q.node, v)
}

pub fn check_finitely_progressing(p: &ProofGraph, q: &TracePairQuery) -> Result<FinitelyProgressingReport> {
    q.check(p)?;
    let mut offending = Vec::new();
    for side in [Side::Left, Side::Right] {
        for (n, v) in reachable(p, q, side) {
            for (m, u, w) in p.trace_successors(side, n, v) {
                if !w.is_finite() {
                    offending.push(PairRef {
                        side,
                        from: n,
                        to: m,
                        from_value: v,
                        to_value: u,
                        weight: w.clone(),
                    });
                }
            }
        }
    }
    offending.sort();
    Ok(FinitelyProgressingReport {
        passed: offending.is_empty(),
        offending,
    })
}

/// Every simple cycle has positive size exactly when the reachable
/// subgraph of zero-weight steps is acyclic: weights are never negative, so
/// a reverse sum is 0 only if every summand is.
pub fn check_dynamic(p: &ProofGraph, q: &TracePairQuery) -> Result<DynamicReport> {
    q.check(p)?;
    for side in [Side::Left, Side::Right] {
        let states: Vec<(NodeId, ValueId)> = reachable(p, q, side).into_iter().collect();
        let index: BTreeMap<(NodeId, ValueId), usize> =
            states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let adj: Vec<Vec<usize>> = states
            .iter()
            .map(|&(n, v)| {
                let mut out: Vec<usize> = p
                    .trace_successors(side, n, v)
                    .filter(|(_, _, w)| w.is_zero())
                    .map(|(m, u, _)| index[&(m, u)])
                    .collect();
                out.sort();
                out
            })
            .collect();
        if let Some(cycle) = find_cycle(&adj) {
            return Ok(DynamicReport {
                passed: false,
                witness: Some(CycleWitness {
                    side,
                    nodes: cycle.iter().map(|&i| states[i].0).collect(),
                    values: cycle.iter().map(|&i| states[i].1).collect(),
                }),
            });
        }
    }
    Ok(DynamicReport {
        passed: true,
        witness: None,
    })
}

type Triple = (NodeId, ValueId, ValueId);

fn finite(w: &Ordinal) -> Result<i64> {
    w.as_nat()
        .and_then(|n| i64::try_from(n).ok())
        .ok_or_else(|| Error::InfiniteWeight(w.to_string()))
}

fn step_difference(p: &ProofGraph, s: Triple, t: Triple) -> Result<i64> {
    let w1 = p.weight(Side::Left, s.0, t.0, s.1, t.1).expect("edge of the product");
    let w2 = p.weight(Side::Left, s.0, t.0, s.2, t.2).expect("edge of the product");
    Ok(finite(w1)? - finite(w2)?)
}

/// Every simple binary left cycle has equal sizes on both components
/// exactly when, inside every strongly connected component of the pair
/// graph, step differences admit a consistent potential.
pub fn check_balanced(p: &ProofGraph, q: &TracePairQuery) -> Result<BalancedReport> {
    q.check(p)?;
    let left = reachable(p, q, Side::Left);
    let mut states: Vec<Triple> = Vec::new();
    for &(n, a) in &left {
        for &(m, b) in &left {
            if n == m {
                states.push((n, a, b));
            }
        }
    }
    states.sort();
    let index: BTreeMap<Triple, usize> = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut adj: Vec<Vec<usize>> = Vec::with_capacity(states.len());
    let mut diff: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for (i, &(n, a, b)) in states.iter().enumerate() {
        let mut out = Vec::new();
        for t in binary_successors(p, n, a, b) {
            let j = index[&t];
            diff.insert((i, j), step_difference(p, (n, a, b), t)?);
            out.push(j);
        }
        out.sort();
        out.dedup();
        adj.push(out);
    }

    let (comp, _) = sccs(&adj);
    let mut potential: Vec<Option<i64>> = vec![None; states.len()];
    let mut parent: Vec<Option<usize>> = vec![None; states.len()];
    for root in 0..states.len() {
        if potential[root].is_some() {
            continue;
        }
        potential[root] = Some(0);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if comp[v] != comp[u] {
                    continue;
                }
                let expect = potential[u].unwrap() + diff[&(u, v)];
                match potential[v] {
                    None => {
                        potential[v] = Some(expect);
                        parent[v] = Some(u);
                        queue.push_back(v);
                    }
                    Some(pv) if pv == expect => {}
                    Some(_) => {
                        let walk = unbalanced_walk(&adj, &comp, &potential, &parent, &diff, root, u, v);
                        let cycle = nonzero_simple_cycle(&walk, &diff);
                        return Ok(BalancedReport {
                            passed: false,
                            witness: Some(BinaryCycleWitness {
                                nodes: cycle.iter().map(|&i| states[i].0).collect(),
                                first: cycle.iter().map(|&i| states[i].1).collect(),
                                second: cycle.iter().map(|&i| states[i].2).collect(),
                                difference: cycle.windows(2).map(|w| diff[&(w[0], w[1])]).sum(),
                            }),
                        });
                    }
                }
            }
        }
    }
    Ok(BalancedReport {
        passed: true,
        witness: None,
    })
}

fn tree_path(parent: &[Option<usize>], root: usize, to: usize) -> Vec<usize> {
    let mut path = vec![to];
    let mut cur = to;
    while cur != root {
        cur = parent[cur].expect("tree vertex");
        path.push(cur);
    }
    path.reverse();
    path
}

/// Shortest path `from → to` inside one component.
fn path_within(adj: &[Vec<usize>], comp: &[usize], from: usize, to: usize) -> Vec<usize> {
    let mut pred = BTreeMap::new();
    let mut queue = VecDeque::from([from]);
    let mut seen = BTreeSet::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            break;
        }
        for &v in &adj[u] {
            if comp[v] == comp[from] && seen.insert(v) {
                pred.insert(v, u);
                queue.push_back(v);
            }
        }
    }
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = pred[&cur];
        path.push(cur);
    }
    path.reverse();
    path
}

/// A closed walk through `root` with nonzero total difference, built from
/// the edge `u → v` that broke the potential.
#[allow(clippy::too_many_arguments)]
fn unbalanced_walk(
    adj: &[Vec<usize>],
    comp: &[usize],
    potential: &[Option<i64>],
    parent: &[Option<usize>],
    diff: &BTreeMap<(usize, usize), i64>,
    root: usize,
    u: usize,
    v: usize,
) -> Vec<usize> {
    let back = path_within(adj, comp, v, root);
    let back_sum: i64 = back.windows(2).map(|w| diff[&(w[0], w[1])]).sum();
    // root ~> u -> v ~> root  versus  root ~> v ~> root: their sums differ
    // by pot(u) + d(u, v) - pot(v) != 0, so one of them is nonzero.
    let through_edge = potential[u].unwrap() + diff[&(u, v)] + back_sum;
    let mut walk = if through_edge != 0 {
        let mut w = tree_path(parent, root, u);
        w.push(v);
        w
    } else {
        tree_path(parent, root, v)
    };
    walk.extend_from_slice(&back[1..]);
    walk
}

/// Splits a closed walk into simple cycles and returns one with nonzero
/// total; one exists because the totals add up to the walk's.
fn nonzero_simple_cycle(walk: &[usize], diff: &BTreeMap<(usize, usize), i64>) -> Vec<usize> {
    let mut stack: Vec<usize> = Vec::new();
    for &s in walk {
        if let Some(i) = stack.iter().position(|&x| x == s) {
            let mut cycle = stack[i..].to_vec();
            cycle.push(s);
            let sum: i64 = cycle.windows(2).map(|w| diff[&(w[0], w[1])]).sum();
            if sum != 0 {
                return cycle;
            }
            stack.truncate(i + 1);
        } else {
            stack.push(s);
        }
    }
    unreachable!("a closed walk with nonzero total contains a nonzero simple cycle")
}

/// All three restrictions together.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RestrictionsReport {
    pub finitely_progressing: FinitelyProgressingReport,
    pub dynamic: DynamicReport,
    /// Absent when some reachable weight is infinite.
    pub balanced: Option<BalancedReport>,
    pub thresholds: Thresholds,
}

impl RestrictionsReport {
    pub fn passed(&self) -> bool {
        self.finitely_progressing.passed
            && self.dynamic.passed
            && self.balanced.as_ref().is_some_and(|b| b.passed)
    }
}

pub fn check_restrictions(p: &ProofGraph, q: &TracePairQuery) -> Result<RestrictionsReport> {
    let finitely_progressing = check_finitely_progressing(p, q)?;
    let balanced = if finitely_progressing.passed {
        Some(check_balanced(p, q)?)
    } else {
        None
    };
    Ok(RestrictionsReport {
        finitely_progressing,
        dynamic: check_dynamic(p, q)?,
        balanced,
        thresholds: compute_thresholds(p, q)?,
    })
}
