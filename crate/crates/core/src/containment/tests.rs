use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::automata::{
    build_antecedent_approx, build_consequent, language_value, path_word, Alphabet, AutomatonKind, State,
    TracePairQuery, Transition,
};
use crate::fixtures;
use crate::ordinal::Ordinal;
use crate::proof::{NodeId, ProofGraph, Side};
use crate::random::{random_proof, GenConfig};

fn pair(p: &ProofGraph, n: u32) -> (WeightedAutomaton, WeightedAutomaton) {
    let q = TracePairQuery::resolve(p, "n0", "a", "c").unwrap();
    (
        build_consequent(p, &q).unwrap(),
        build_antecedent_approx(p, &q, n).unwrap(),
    )
}

#[test]
fn oracle_on_fixtures() {
    let p = fixtures::loop2();
    let (b, a) = pair(&p, 6);
    let r = oracle_compare(&b, &a, false, 12).unwrap();
    assert_eq!(r.status, ContainmentStatus::UnknownBound);
    assert!(r.counterexample.is_none());

    let r = oracle_compare(&b, &a, true, 12).unwrap();
    assert_eq!(r.status, ContainmentStatus::Refuted);
    let cx = r.counterexample.unwrap();
    assert_eq!(cx.word, path_word(&[NodeId(0), NodeId(1), NodeId(2)]));
    assert_eq!(cx.b_value, TropicalWeight::Value(Ordinal::from_nat(1)));
    assert_eq!(cx.a_value, cx.b_value);

    let s = fixtures::strict2();
    let (b, a) = pair(&s, 9);
    assert_eq!(oracle_compare(&b, &a, true, 12).unwrap().status, ContainmentStatus::UnknownBound);
}

#[test]
fn lagset_on_fixtures() {
    let p = fixtures::loop2();
    let (b, a) = pair(&p, 6);
    let r = decide_containment(&b, &a, false, 64).unwrap();
    assert_eq!(r.status, ContainmentStatus::Verified);

    let r = decide_containment(&b, &a, true, 64).unwrap();
    assert_eq!(r.status, ContainmentStatus::Refuted);
    let oracle = oracle_compare(&b, &a, true, 12).unwrap();
    assert_eq!(r.counterexample, oracle.counterexample);

    let s = fixtures::strict2();
    let (b, a) = pair(&s, 9);
    assert_eq!(decide_containment(&b, &a, true, 64).unwrap().status, ContainmentStatus::Verified);
}

#[test]
fn domain_gap_is_refuted() {
    let p = fixtures::loop2().modified(|nodes, _| nodes[2].ground.clear());
    let (b, a) = pair(&p, 6);
    // drop the antecedent side's pair-letter transitions
    let kept: Vec<Transition> = a
        .transitions()
        .iter()
        .filter(|t| a.state(t.to) != State::Bot)
        .cloned()
        .collect();
    let finals = (0..a.len()).map(|q| a.is_final(q)).collect();
    let a = WeightedAutomaton::new(
        a.kind(),
        a.alphabet_arc().clone(),
        a.states().to_vec(),
        a.initial(),
        finals,
        kept,
    )
    .unwrap();
    let r = decide_containment(&b, &a, false, 64).unwrap();
    assert_eq!(r.status, ContainmentStatus::Refuted);
    let cx = r.counterexample.unwrap();
    assert_eq!(cx.a_value, TropicalWeight::Bottom);
    assert_ne!(cx.b_value, TropicalWeight::Bottom);
    assert_eq!(language_value(&b, &cx.word), cx.b_value);
}

#[test]
fn infinite_weights_are_rejected() {
    let p = fixtures::loop2();
    let c = p.value_id("c").unwrap();
    let p = p.modified(|_, delta| {
        delta[0][0].right.insert((c, c), Ordinal::omega());
    });
    let (b, a) = pair(&p, 6);
    assert!(matches!(decide_containment(&b, &a, false, 64), Err(Error::InfiniteWeight(_))));
    // the oracle works with ordinals directly
    assert!(oracle_compare(&b, &a, false, 6).is_ok());
}

#[test]
fn alphabets_must_agree() {
    let (b, _) = pair(&fixtures::loop2(), 2);
    let other = WeightedAutomaton::new(
        AutomatonKind::Raw,
        Arc::new(Alphabet::default()),
        vec![State::Start],
        0,
        vec![false],
        vec![],
    )
    .unwrap();
    assert!(matches!(oracle_compare(&b, &other, false, 3), Err(Error::AlphabetMismatch)));
    assert!(matches!(decide_containment(&b, &other, false, 3), Err(Error::AlphabetMismatch)));
}

#[test]
fn violation_relation() {
    let v = |n| TropicalWeight::Value(Ordinal::from_nat(n));
    assert!(!violates(&TropicalWeight::Bottom, &TropicalWeight::Bottom, true));
    assert!(violates(&v(0), &TropicalWeight::Bottom, false));
    assert!(!violates(&v(1), &v(1), false));
    assert!(violates(&v(1), &v(1), true));
    assert!(!violates(&v(1), &v(2), true));
}

fn random_pair(seed: u64) -> Option<(WeightedAutomaton, WeightedAutomaton)> {
    let cfg = GenConfig {
        max_nodes: 4,
        injective: true,
        ..GenConfig::default()
    };
    let p = random_proof(&cfg, seed);
    let n = p.root();
    let q = TracePairQuery {
        node: n,
        ant: *p.values(n, Side::Left).iter().next()?,
        con: *p.values(n, Side::Right).iter().next()?,
    };
    let depth = 1 + (seed % 3) as u32;
    Some((
        build_consequent(&p, &q).ok()?,
        build_antecedent_approx(&p, &q, depth).ok()?,
    ))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn lagset_agrees_with_oracle(seed in 0u64..1_000_000, strict in any::<bool>()) {
        let Some((b, a)) = random_pair(seed) else { return Ok(()) };
        let r = decide_containment(&b, &a, strict, 32).unwrap();
        match r.status {
            ContainmentStatus::Verified => {
                let o = oracle_compare(&b, &a, strict, 10).unwrap();
                prop_assert!(o.counterexample.is_none(), "oracle refutes {:?}", o.counterexample);
            }
            ContainmentStatus::Refuted => {
                let cx = r.counterexample.unwrap();
                prop_assert!(violates(&language_value(&b, &cx.word), &language_value(&a, &cx.word), strict));
                let o = oracle_compare(&b, &a, strict, cx.word.len()).unwrap();
                let found = o.counterexample.map(|c| c.word.len());
                prop_assert!(found.is_some_and(|n| n <= cx.word.len()));
            }
            _ => {}
        }
    }

    #[test]
    fn lagset_is_deterministic(seed in 0u64..1_000_000) {
        let Some((b, a)) = random_pair(seed) else { return Ok(()) };
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let x = one.install(|| decide_containment(&b, &a, false, 32).unwrap());
        let y = four.install(|| decide_containment(&b, &a, false, 32).unwrap());
        prop_assert_eq!(x, y);
    }
}
