use std::collections::BTreeMap;

use super::{Letter, WeightedAutomaton};
use crate::ordinal::{Ordinal, TropicalWeight};

/// A run as its state sequence, starting at the initial state.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Run {
    pub states: Vec<usize>,
}

impl Run {
    pub fn last(&self) -> usize {
        *self.states.last().expect("runs are never empty")
    }
}

/// Every run over `w` from the initial state, with its value: the tropical
/// product of its transition weights if it accepts, `⊥` otherwise. Sorted
/// by state sequence.
pub fn run_values(a: &WeightedAutomaton, w: &[Letter]) -> Vec<(Run, TropicalWeight)> {
    let mut out = Vec::new();
    let mut states = vec![a.initial()];
    extend(a, w, &mut states, TropicalWeight::one(), &mut out);
    out
}

fn extend(
    a: &WeightedAutomaton,
    w: &[Letter],
    states: &mut Vec<usize>,
    value: TropicalWeight,
    out: &mut Vec<(Run, TropicalWeight)>,
) {
    let q = *states.last().unwrap();
    let Some(letter) = w.get(states.len() - 1) else {
        let value = if a.is_final(q) { value } else { TropicalWeight::Bottom };
        out.push((Run { states: states.clone() }, value));
        return;
    };
    for t in a.successors(q, letter) {
        states.push(t.to);
        let next = value.otimes(&TropicalWeight::Value(t.weight.clone()));
        extend(a, w, states, next, out);
        states.pop();
    }
}

/// Best value reaching each state over some word; absent states are
/// unreachable.
pub type Config = BTreeMap<usize, Ordinal>;

/// One letter of the max-plus forward evaluation. Since ordinal addition is
/// monotone in its right argument, keeping only the best value per state is
/// exact.
pub fn step_config(a: &WeightedAutomaton, config: &Config, letter: &Letter) -> Config {
    let mut next = Config::new();
    for (&q, v) in config {
        for t in a.successors(q, letter) {
            let value = &t.weight + v;
            match next.get_mut(&t.to) {
                Some(old) if *old >= value => {}
                Some(old) => *old = value,
                None => {
                    next.insert(t.to, value);
                }
            }
        }
    }
    next
}

/// Maximum accepting value in a configuration, `⊥` if none.
pub fn accepted(a: &WeightedAutomaton, config: &Config) -> TropicalWeight {
    config
        .iter()
        .filter(|(q, _)| a.is_final(**q))
        .map(|(_, v)| TropicalWeight::Value(v.clone()))
        .max()
        .unwrap_or(TropicalWeight::Bottom)
}

pub fn initial_config(a: &WeightedAutomaton) -> Config {
    Config::from([(a.initial(), Ordinal::zero())])
}

/// `L_a(w)`: the maximum over all runs, `⊥` when no run accepts.
pub fn language_value(a: &WeightedAutomaton, w: &[Letter]) -> TropicalWeight {
    let mut config = initial_config(a);
    for letter in w {
        config = step_config(a, &config, letter);
        if config.is_empty() {
            return TropicalWeight::Bottom;
        }
    }
    accepted(a, &config)
}

/// States from which some final state is reachable.
pub fn co_accessible(a: &WeightedAutomaton) -> Vec<bool> {
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); a.len()];
    for t in a.transitions() {
        preds[t.to].push(t.from);
    }
    let mut live = vec![false; a.len()];
    let mut stack: Vec<usize> = a.finals().collect();
    for &q in &stack {
        live[q] = true;
    }
    while let Some(q) = stack.pop() {
        for &r in &preds[q] {
            if !live[r] {
                live[r] = true;
                stack.push(r);
            }
        }
    }
    live
}
