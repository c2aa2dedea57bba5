use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use super::{co_accessible, Letter, WeightedAutomaton};
use crate::graph::sccs;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Ambiguity {
    Unambiguous,
    Finite,
    Infinite,
}

/// Per-state successor lists grouped by letter, restricted to useful states.
struct Trimmed<'a> {
    useful: Vec<bool>,
    by_letter: Vec<BTreeMap<&'a Letter, Vec<usize>>>,
}

impl<'a> Trimmed<'a> {
    fn new(a: &'a WeightedAutomaton) -> Self {
        let live = co_accessible(a);
        let mut reach = vec![false; a.len()];
        reach[a.initial()] = true;
        let mut stack = vec![a.initial()];
        while let Some(q) = stack.pop() {
            for t in a.outgoing(q) {
                if !reach[t.to] {
                    reach[t.to] = true;
                    stack.push(t.to);
                }
            }
        }
        let useful: Vec<bool> = (0..a.len()).map(|q| live[q] && reach[q]).collect();
        let mut by_letter = vec![BTreeMap::new(); a.len()];
        for t in a.transitions() {
            if useful[t.from] && useful[t.to] {
                by_letter[t.from].entry(&t.letter).or_insert_with(Vec::new).push(t.to);
            }
        }
        Trimmed { useful, by_letter }
    }

    fn pair_successors(&self, p: usize, q: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (letter, ps) in &self.by_letter[p] {
            if let Some(qs) = self.by_letter[q].get(letter) {
                for &p2 in ps {
                    for &q2 in qs {
                        out.push((p2, q2));
                    }
                }
            }
        }
        out
    }

    fn triple_successors(&self, (p, q, r): (usize, usize, usize)) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (letter, ps) in &self.by_letter[p] {
            let (Some(qs), Some(rs)) = (self.by_letter[q].get(letter), self.by_letter[r].get(letter)) else {
                continue;
            };
            for &p2 in ps {
                for &q2 in qs {
                    for &r2 in rs {
                        out.push((p2, q2, r2));
                    }
                }
            }
        }
        out
    }
}

fn reachable<S: Ord + Copy>(start: S, succ: impl Fn(S) -> Vec<S>) -> BTreeSet<S> {
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        for t in succ(s) {
            if seen.insert(t) {
                queue.push_back(t);
            }
        }
    }
    seen
}

/// Strongly connected components of the square automaton: a component id
/// per pair and whether each component is cyclic.
fn square_sccs(t: &Trimmed, pairs: &[(usize, usize)]) -> (BTreeMap<(usize, usize), usize>, Vec<bool>) {
    let index_of: BTreeMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let adj: Vec<Vec<usize>> = pairs
        .iter()
        .map(|&(p, q)| {
            t.pair_successors(p, q)
                .into_iter()
                .filter_map(|s| index_of.get(&s).copied())
                .collect()
        })
        .collect();
    let (comp, cyclic) = sccs(&adj);
    let by_pair = pairs.iter().enumerate().map(|(i, &p)| (p, comp[i])).collect();
    (by_pair, cyclic)
}

/// Classifies the degree of ambiguity: the number of accepting runs per
/// word is 1 at most, bounded, or unbounded.
///
/// Unbounded exactly when, among useful states, either some state loops on
/// a word along two distinct runs, or there are states `p ≠ q` and a word
/// `w` with `p →w p`, `p →w q` and `q →w q`.
pub fn ambiguity(a: &WeightedAutomaton) -> Ambiguity {
    let t = Trimmed::new(a);
    let useful: Vec<usize> = (0..a.len()).filter(|&q| t.useful[q]).collect();
    if useful.is_empty() {
        return Ambiguity::Unambiguous;
    }
    let pairs: Vec<(usize, usize)> = useful
        .iter()
        .flat_map(|&p| useful.iter().map(move |&q| (p, q)))
        .collect();
    let (comp, cyclic) = square_sccs(&t, &pairs);

    // Exponential pattern: a cyclic component holding both a diagonal and an
    // off-diagonal pair.
    let mut diag = vec![false; cyclic.len()];
    let mut off = vec![false; cyclic.len()];
    for (&(p, q), &c) in &comp {
        if p == q {
            diag[c] = true;
        } else {
            off[c] = true;
        }
    }
    if (0..cyclic.len()).any(|c| cyclic[c] && diag[c] && off[c]) {
        return Ambiguity::Infinite;
    }

    // Polynomial pattern, via the triple product.
    for &p in &useful {
        let from_diag = reachable((p, p), |(x, y)| t.pair_successors(x, y));
        for &q in &useful {
            if p == q || !cyclic[comp[&(p, q)]] || !from_diag.contains(&(p, q)) {
                continue;
            }
            let seen = reachable((p, p, q), |s| t.triple_successors(s));
            if seen.contains(&(p, q, q)) {
                return Ambiguity::Infinite;
            }
        }
    }

    // Two distinct accepting runs split at some off-diagonal pair that is
    // reachable from the start and can still reach a pair of final states.
    let i = a.initial();
    let forward = reachable((i, i), |(x, y)| t.pair_successors(x, y));
    let mut preds: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for &(p, q) in &forward {
        for s in t.pair_successors(p, q) {
            preds.entry(s).or_default().push((p, q));
        }
    }
    let mut live: BTreeSet<(usize, usize)> = forward
        .iter()
        .copied()
        .filter(|&(p, q)| a.is_final(p) && a.is_final(q))
        .collect();
    let mut stack: Vec<_> = live.iter().copied().collect();
    while let Some(s) = stack.pop() {
        for &r in preds.get(&s).into_iter().flatten() {
            if live.insert(r) {
                stack.push(r);
            }
        }
    }
    if live.iter().any(|&(p, q)| p != q) {
        Ambiguity::Finite
    } else {
        Ambiguity::Unambiguous
    }
}
