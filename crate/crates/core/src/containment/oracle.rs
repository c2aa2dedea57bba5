use std::collections::BTreeSet;

use super::{check_alphabets, violates, ContainmentStatus, ContainmentVerdict, Counterexample, Engine};
use crate::automata::{accepted, initial_config, step_config, Config, Letter, WeightedAutomaton};
use crate::error::Result;

/// Checks every word of length at most `max_len` in the domain of `b`,
/// shortest first and lexicographically within a length. Returns the first
/// violating word, or `UNKNOWN_BOUND`: a bounded search never verifies.
pub fn oracle_compare(
    b: &WeightedAutomaton,
    a: &WeightedAutomaton,
    strict: bool,
    max_len: usize,
) -> Result<ContainmentVerdict> {
    check_alphabets(b, a)?;
    let mut level: Vec<(Vec<Letter>, Config, Config)> =
        vec![(Vec::new(), initial_config(b), initial_config(a))];
    let mut explored = 0;
    for len in 0..=max_len {
        for (word, bc, ac) in &level {
            explored += 1;
            let (bv, av) = (accepted(b, bc), accepted(a, ac));
            if violates(&bv, &av, strict) {
                return Ok(ContainmentVerdict {
                    status: ContainmentStatus::Refuted,
                    counterexample: Some(Counterexample {
                        word: word.clone(),
                        b_value: bv,
                        a_value: av,
                    }),
                    engine: Engine::Oracle,
                    strict,
                    bound: max_len as u64,
                    explored,
                });
            }
        }
        if len == max_len {
            break;
        }
        let mut next = Vec::new();
        for (word, bc, ac) in &level {
            let letters: BTreeSet<&Letter> = bc
                .keys()
                .flat_map(|&q| b.outgoing(q).iter().map(|t| &t.letter))
                .collect();
            for letter in letters {
                let nb = step_config(b, bc, letter);
                if nb.is_empty() {
                    continue;
                }
                let na = step_config(a, ac, letter);
                let mut w = word.clone();
                w.push(letter.clone());
                next.push((w, nb, na));
            }
        }
        level = next;
    }
    Ok(ContainmentVerdict {
        status: ContainmentStatus::UnknownBound,
        counterexample: None,
        engine: Engine::Oracle,
        strict,
        bound: max_len as u64,
        explored,
    })
}
