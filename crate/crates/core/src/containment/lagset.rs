//! Lag-profile exploration.
//!
//! A profile records, for the word read so far, every live state of both
//! automata with the best run value reaching it, shifted so that the
//! smallest value is 0. Whether a word violates the relation depends only
//! on its profile, and so does the profile of every extension, so a
//! breadth-first search over profiles decides the relation once the set of
//! reachable profiles is closed.
//!
//! Two reductions keep profiles small without changing any verdict, both
//! about antecedent-side states from which no positive weight can follow
//! (sinks and ⊥):
//! - such an entry at or below the least consequent-side value never
//!   decides anything, since every value the consequent side can still
//!   accept is at least that large;
//! - a sink chain entry is dominated by an entry of the same chain at a
//!   lower level with at least its value, which accepts every continuation
//!   it accepts with that value.
//!
//! Antecedent runs that pull far ahead of every consequent run would keep
//! the profile space infinite, so antecedent values more than half the lag
//! cap above the best consequent value are lowered to that height. This
//! only ever weakens the antecedent side, so a closed search without a
//! violation still verifies. A violation found after lowering is rechecked
//! on its word; if the recheck clears it, the search goes on but can no
//! longer verify. Profiles whose spread still exceeds the lag cap are not
//! expanded; either way the answer is then `UNKNOWN_SATURATED`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;

use super::{check_alphabets, violates, ContainmentStatus, ContainmentVerdict, Counterexample, Engine};
use crate::automata::{co_accessible, language_value, Letter, State, WeightedAutomaton};
use crate::error::{Error, Result};

/// (state, value) pairs sorted by state.
type Entries = Vec<(usize, u64)>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Profile {
    b: Entries,
    a: Entries,
    /// Some antecedent value on the way here was lowered.
    lowered: bool,
}

/// Natural weights and per-state facts of one automaton.
struct Prepared<'a> {
    aut: &'a WeightedAutomaton,
    weights: Vec<u64>,
    live: Vec<bool>,
    /// No positive weight is reachable from the state.
    frozen: Vec<bool>,
}

impl<'a> Prepared<'a> {
    fn new(aut: &'a WeightedAutomaton) -> Result<Self> {
        let weights = aut
            .transitions()
            .iter()
            .map(|t| t.weight.as_nat().ok_or_else(|| Error::InfiniteWeight(t.weight.to_string())))
            .collect::<Result<Vec<u64>>>()?;
        let live = co_accessible(aut);
        // frozen = cannot reach a positive transition; propagate backwards
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); aut.len()];
        let mut hot = vec![false; aut.len()];
        for (t, &w) in aut.transitions().iter().zip(&weights) {
            preds[t.to].push(t.from);
            if w > 0 {
                hot[t.from] = true;
            }
        }
        let mut stack: Vec<usize> = (0..aut.len()).filter(|&q| hot[q]).collect();
        while let Some(q) = stack.pop() {
            for &r in &preds[q] {
                if !hot[r] {
                    hot[r] = true;
                    stack.push(r);
                }
            }
        }
        Ok(Prepared {
            aut,
            weights,
            live,
            frozen: hot.iter().map(|h| !h).collect(),
        })
    }

    fn step(&self, entries: &Entries, letter: &Letter) -> Entries {
        let mut next: BTreeMap<usize, u64> = BTreeMap::new();
        for &(q, v) in entries {
            for i in self.aut.successor_range(q, letter) {
                let t = &self.aut.transitions()[i];
                if !self.live[t.to] {
                    continue;
                }
                let value = v + self.weights[i];
                let e = next.entry(t.to).or_insert(value);
                if *e < value {
                    *e = value;
                }
            }
        }
        next.into_iter().collect()
    }

    fn best_accepting(&self, entries: &Entries) -> Option<u64> {
        entries
            .iter()
            .filter(|(q, _)| self.aut.is_final(*q))
            .map(|&(_, v)| v)
            .max()
    }
}

fn profile_violates(b: &Prepared, a: &Prepared, p: &Profile, strict: bool) -> bool {
    match (b.best_accepting(&p.b), a.best_accepting(&p.a)) {
        (None, _) => false,
        (Some(_), None) => true,
        (Some(x), Some(y)) => if strict { y <= x } else { y < x },
    }
}

struct Search<'a> {
    b: Prepared<'a>,
    a: Prepared<'a>,
    strict: bool,
    /// Antecedent values are kept within this distance above the best
    /// consequent value.
    headroom: u64,
}

impl Search<'_> {
    fn reduce(&self, mut p: Profile) -> Profile {
        if let Some(max_b) = p.b.iter().map(|&(_, v)| v).max() {
            let ceiling = max_b.saturating_add(self.headroom);
            for e in p.a.iter_mut() {
                if e.1 > ceiling {
                    e.1 = ceiling;
                    p.lowered = true;
                }
            }
        }
        if let Some(min_b) = p.b.iter().map(|&(_, v)| v).min() {
            let strict = self.strict;
            p.a.retain(|&(q, v)| {
                !self.a.frozen[q] || if strict { v > min_b } else { v >= min_b }
            });
        }
        let states = self.a.aut.states();
        let chains: Vec<(usize, u64)> = p.a.clone();
        p.a.retain(|&(q, v)| match states[q] {
            State::TopChain(x, i) => !chains.iter().any(|&(r, w)| {
                matches!(states[r], State::TopChain(y, j) if y == x && j < i) && w >= v
            }),
            _ => true,
        });
        let min = p.b.iter().chain(&p.a).map(|&(_, v)| v).min().unwrap_or(0);
        for e in p.b.iter_mut().chain(p.a.iter_mut()) {
            e.1 -= min;
        }
        p
    }

    fn initial(&self) -> Profile {
        let entry = |x: &Prepared| -> Entries {
            let q = x.aut.initial();
            if x.live[q] {
                vec![(q, 0)]
            } else {
                Vec::new()
            }
        };
        self.reduce(Profile {
            b: entry(&self.b),
            a: entry(&self.a),
            lowered: false,
        })
    }

    fn spread(p: &Profile) -> u64 {
        p.b.iter().chain(&p.a).map(|&(_, v)| v).max().unwrap_or(0)
    }

    /// Successor profiles in letter order; letters the consequent side
    /// cannot read are skipped since no word through them is in its domain.
    fn expand(&self, p: &Profile) -> Vec<(Letter, Profile)> {
        let letters: BTreeSet<&Letter> = p
            .b
            .iter()
            .flat_map(|&(q, _)| self.b.aut.outgoing(q).iter().map(|t| &t.letter))
            .collect();
        letters
            .into_iter()
            .filter_map(|letter| {
                let b = self.b.step(&p.b, letter);
                if b.is_empty() {
                    return None;
                }
                let a = self.a.step(&p.a, letter);
                Some((
                    letter.clone(),
                    self.reduce(Profile {
                        b,
                        a,
                        lowered: p.lowered,
                    }),
                ))
            })
            .collect()
    }
}

/// Decides `L_b ≤ L_a` (or `<` when `strict`) for automata with natural
/// weights by exploring lag profiles with spread at most `lag_cap`.
///
/// A refutation carries a violating word with both language values
/// recomputed from scratch. It is the least one in length-then-letter order
/// unless antecedent values had to be lowered.
pub fn decide_containment(
    b: &WeightedAutomaton,
    a: &WeightedAutomaton,
    strict: bool,
    lag_cap: u64,
) -> Result<ContainmentVerdict> {
    check_alphabets(b, a)?;
    let search = Search {
        b: Prepared::new(b)?,
        a: Prepared::new(a)?,
        strict,
        headroom: (lag_cap / 2).max(1),
    };
    let start = search.initial();
    let mut index: HashMap<Profile, usize> = HashMap::new();
    let mut parent: Vec<Option<(usize, Letter)>> = vec![None];
    let mut profiles = vec![start.clone()];
    index.insert(start, 0);
    let mut saturated = false;

    let verdict = |status, counterexample, explored| ContainmentVerdict {
        status,
        counterexample,
        engine: Engine::Lagset,
        strict,
        bound: lag_cap,
        explored,
    };
    // the word of a profile, with its exact values if they violate
    let confirm = |at: usize, parent: &[Option<(usize, Letter)>]| {
        let mut word = Vec::new();
        let mut cur = at;
        while let Some((prev, letter)) = &parent[cur] {
            word.push(letter.clone());
            cur = *prev;
        }
        word.reverse();
        let (bv, av) = (language_value(b, &word), language_value(a, &word));
        violates(&bv, &av, strict).then_some(Counterexample {
            word,
            b_value: bv,
            a_value: av,
        })
    };
    let mut spurious = false;

    if profile_violates(&search.b, &search.a, &profiles[0], strict) {
        if let Some(cx) = confirm(0, &parent) {
            return Ok(verdict(ContainmentStatus::Refuted, Some(cx), 1));
        }
        spurious = true;
    }
    let mut level: Vec<usize> = vec![0];
    while !level.is_empty() {
        let expandable: Vec<usize> = level
            .iter()
            .copied()
            .filter(|&i| {
                let over = Search::spread(&profiles[i]) > lag_cap;
                saturated |= over;
                !over
            })
            .collect();
        let successors: Vec<Vec<(Letter, Profile)>> = expandable
            .par_iter()
            .map(|&i| search.expand(&profiles[i]))
            .collect();
        let mut next = Vec::new();
        for (&from, succ) in expandable.iter().zip(successors) {
            for (letter, profile) in succ {
                if index.contains_key(&profile) {
                    continue;
                }
                let id = profiles.len();
                let bad = profile_violates(&search.b, &search.a, &profile, strict);
                let lowered = profile.lowered;
                index.insert(profile.clone(), id);
                profiles.push(profile);
                parent.push(Some((from, letter)));
                if bad {
                    match confirm(id, &parent) {
                        Some(cx) => return Ok(verdict(ContainmentStatus::Refuted, Some(cx), profiles.len())),
                        None => {
                            debug_assert!(lowered, "exact profiles only report real violations");
                            spurious = true;
                        }
                    }
                }
                next.push(id);
            }
        }
        log::debug!("lag-set level: {} new profiles, {} total", next.len(), profiles.len());
        level = next;
    }
    let status = if saturated || spurious {
        ContainmentStatus::UnknownSaturated
    } else {
        ContainmentStatus::Verified
    };
    Ok(verdict(status, None, profiles.len()))
}
