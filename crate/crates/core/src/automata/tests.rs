use std::collections::BTreeSet;

use super::*;
use crate::fixtures;
use crate::ordinal::TropicalWeight;
use crate::proof::EdgeDelta;

fn query(p: &ProofGraph) -> TracePairQuery {
    TracePairQuery::resolve(p, "n0", "a", "c").unwrap()
}

fn ids(p: &ProofGraph) -> (NodeId, NodeId, NodeId, ValueId, ValueId) {
    (
        p.node_id("n0").unwrap(),
        p.node_id("n1").unwrap(),
        p.node_id("n2").unwrap(),
        p.value_id("a").unwrap(),
        p.value_id("c").unwrap(),
    )
}

fn has_pair_edge(a: &WeightedAutomaton) -> bool {
    a.transitions()
        .iter()
        .any(|t| matches!(t.letter, Letter::Pair(..)))
}

#[test]
fn consequent_loop2() {
    let p = fixtures::loop2();
    let (n0, n1, n2, _, c) = ids(&p);
    let b = build_consequent(&p, &query(&p)).unwrap();
    let states: BTreeSet<State> = b.states().iter().copied().collect();
    assert_eq!(
        states,
        BTreeSet::from([
            State::Start,
            State::NodeValue(n0, c),
            State::NodeValue(n1, c),
            State::NodeValue(n2, c),
        ])
    );
    let q = b.state_index(State::NodeValue(n2, c)).unwrap();
    assert!(b.is_final(q));
    assert!(!has_pair_edge(&b));
    assert!(is_grounded(&b, &p).unwrap());
}

#[test]
fn consequent_without_ground() {
    let p = fixtures::loop2();
    let (_, _, n2, a, c) = ids(&p);
    let q = p.modified(|nodes, _| nodes[n2.0].ground.clear());
    let b = build_consequent(&q, &query(&q)).unwrap();
    let from = b.state_index(State::NodeValue(n2, c)).unwrap();
    let bot = b.state_index(State::Bot).unwrap();
    let pair = Letter::Pair(BTreeSet::from([a]), c);
    assert_eq!(b.successors(from, &pair).map(|t| t.to).collect::<Vec<_>>(), vec![bot]);
    assert!(!b.is_final(from));
    // only ⊥ accepts now, so the automaton is vacuously grounded
    assert!(is_grounded(&b, &q).unwrap());
}

#[test]
fn query_values_are_checked() {
    let p = fixtures::loop2();
    let err = TracePairQuery::resolve(&p, "n0", "a", "a").unwrap_err();
    assert!(err.to_string().contains("unknown consequent value"), "{err}");
    let bogus = TracePairQuery {
        node: NodeId(0),
        ant: p.value_id("c").unwrap(),
        con: p.value_id("c").unwrap(),
    };
    assert!(build_consequent(&p, &bogus).is_err());
}

#[test]
fn ungrounded_fully_maximal_end() {
    let p = fixtures::loop2();
    let (_, n1, n2, a, c) = ids(&p);
    // n3: a non-axiom whose consequent value has nowhere to go
    let q = p.modified(|nodes, delta| {
        let mut n3 = nodes[n1.0].clone();
        n3.name = "n3".into();
        n3.children = vec![n2];
        nodes.push(n3);
        let mut slot = EdgeDelta::default();
        slot.left.insert((a, a), Ordinal::zero());
        delta.push(vec![slot]);
        nodes[n1.0].children.push(NodeId(3));
        let mut into = EdgeDelta::default();
        into.right.insert((c, c), Ordinal::zero());
        delta[n1.0].push(into);
    });
    let b = build_consequent(&q, &query(&q)).unwrap();
    assert!(b.is_final(b.state_index(State::NodeValue(NodeId(3), c)).unwrap()));
    assert!(!is_grounded(&b, &q).unwrap());
    let a_full = build_antecedent_full(&q, &query(&q)).unwrap();
    assert!(is_grounded(&a_full, &q).is_err());
}

#[test]
fn antecedent_full_loop2() {
    let p = fixtures::loop2();
    let (n0, n1, n2, a, c) = ids(&p);
    let full = build_antecedent_full(&p, &query(&p)).unwrap();
    let from = full.state_index(State::NodeValue(n2, a)).unwrap();
    let bot = full.state_index(State::Bot).unwrap();
    let pair = Letter::Pair(BTreeSet::from([a]), c);
    assert_eq!(full.successors(from, &pair).map(|t| t.to).collect::<Vec<_>>(), vec![bot]);
    assert_eq!(full.finals().count(), full.len() - 1);

    let runs = run_values(&full, &path_word(&[n0, n1, n2]));
    let ends: BTreeSet<State> = runs.iter().map(|(r, _)| full.state(r.last())).collect();
    assert!(ends.contains(&State::Top));
    assert!(ends.contains(&State::NodeValue(n2, a)));
}

#[test]
fn approximation_chains() {
    let p = fixtures::loop2();
    let (n0, n1, _, _, _) = ids(&p);
    let one = build_antecedent_approx(&p, &query(&p), 1).unwrap();
    let top1 = one.state_index(State::TopChain(n1, 1)).unwrap();
    assert_eq!(one.successors(top1, &Letter::Node(n1)).count(), 0);
    assert_eq!(one.successors(top1, &Letter::Node(n0)).count(), 1);

    let two = build_antecedent_approx(&p, &query(&p), 2).unwrap();
    let chain_end = |w: &[NodeId]| -> BTreeSet<State> {
        run_values(&two, &path_word(w))
            .into_iter()
            .map(|(r, _)| two.state(r.last()))
            .filter(|s| matches!(s, State::TopChain(x, _) if *x == n1))
            .collect()
    };
    // enter on the first n1, then read n1 once more: two occurrences
    let ok = chain_end(&[n0, n1, n0, n1]);
    assert!(ok.contains(&State::TopChain(n1, 2)));
    // a third occurrence after entry: that run dies, later entries survive
    let runs = run_values(&two, &path_word(&[n0, n1, n0, n1, n0, n1]));
    assert!(runs.iter().all(|(r, _)| {
        two.state(r.states[2]) != State::TopChain(n1, 1)
    }));
    assert!(build_antecedent_approx(&p, &query(&p), 0).is_err());
}

#[test]
fn approximations_share_the_kernel() {
    let p = fixtures::ambig1();
    let q = query(&p);
    let kernel = |a: &WeightedAutomaton| -> BTreeSet<(State, Letter, State, Ordinal)> {
        a.transitions()
            .iter()
            .filter(|t| !a.state(t.from).is_sink() && !a.state(t.to).is_sink())
            .map(|t| (a.state(t.from), t.letter.clone(), a.state(t.to), t.weight.clone()))
            .collect()
    };
    let full = kernel(&build_antecedent_full(&p, &q).unwrap());
    for n in 1..4 {
        assert_eq!(kernel(&build_antecedent_approx(&p, &q, n).unwrap()), full);
    }
}

#[test]
fn run_semantics() {
    let p = fixtures::loop2();
    let (n0, n1, n2, _, _) = ids(&p);
    let b = build_consequent(&p, &query(&p)).unwrap();
    assert_eq!(
        run_values(&b, &[]),
        vec![(Run { states: vec![b.initial()] }, TropicalWeight::Bottom)]
    );
    assert_eq!(language_value(&b, &[]), TropicalWeight::Bottom);

    let w = path_word(&[n0, n1, n2]);
    let runs = run_values(&b, &w);
    assert_eq!(runs.len(), 1);
    assert_eq!(runs[0].1, TropicalWeight::Value(Ordinal::from_nat(1)));
    assert_eq!(language_value(&b, &w), TropicalWeight::Value(Ordinal::from_nat(1)));

    // n0 is not a child of n0
    let bad = path_word(&[n0, n0]);
    assert!(run_values(&b, &bad).is_empty());
    assert_eq!(language_value(&b, &bad), TropicalWeight::Bottom);

    // a prefix that is not yet accepted
    let prefix = path_word(&[n0, n1]);
    let runs = run_values(&b, &prefix);
    assert_eq!(runs.len(), 1);
    assert_eq!(runs[0].1, TropicalWeight::Bottom);
}

#[test]
fn language_value_is_the_max_over_runs() {
    let p = fixtures::loop2();
    let (n0, n1, n2, _, _) = ids(&p);
    let full = build_antecedent_full(&p, &query(&p)).unwrap();
    for w in [
        vec![n0, n1, n2],
        vec![n0, n1, n0, n1, n2],
        vec![n0, n1, n0],
        vec![n0],
    ] {
        let w = path_word(&w);
        let best = run_values(&full, &w)
            .into_iter()
            .map(|(_, v)| v)
            .max()
            .unwrap_or(TropicalWeight::Bottom);
        assert_eq!(language_value(&full, &w), best);
    }
}

#[test]
fn ambiguity_classes() {
    let p = fixtures::ambig1();
    let q = query(&p);
    assert_eq!(ambiguity(&build_antecedent_full(&p, &q).unwrap()), Ambiguity::Infinite);
    for n in 1..=3 {
        assert_eq!(
            ambiguity(&build_antecedent_approx(&p, &q, n).unwrap()),
            Ambiguity::Finite,
            "depth {n}"
        );
    }
    let l = fixtures::loop2();
    assert_eq!(ambiguity(&build_consequent(&l, &query(&l)).unwrap()), Ambiguity::Unambiguous);
}

#[test]
fn exponential_ambiguity() {
    // one state looping on `x` along two different runs
    let names = Arc::new(Alphabet {
        nodes: vec!["x".into()],
        values: vec![],
    });
    let x = Letter::Node(NodeId(0));
    let t = |from, to| Transition {
        from,
        letter: x.clone(),
        to,
        weight: Ordinal::zero(),
    };
    let a = WeightedAutomaton::new(
        AutomatonKind::Raw,
        names,
        vec![State::Start, State::Top],
        0,
        vec![true, false],
        vec![t(0, 0), t(0, 1), t(1, 0)],
    )
    .unwrap();
    assert_eq!(ambiguity(&a), Ambiguity::Infinite);
}

#[test]
fn dot_export() {
    let p = fixtures::loop2();
    let b = build_consequent(&p, &query(&p)).unwrap();
    assert_eq!(export_dot(&b), include_str!("../../fixtures/loop2_consequent.dot"));

    let empty = WeightedAutomaton::new(
        AutomatonKind::Raw,
        Arc::new(Alphabet::default()),
        vec![State::Start],
        0,
        vec![false],
        vec![],
    )
    .unwrap();
    assert_eq!(
        export_dot(&empty),
        "digraph \"raw\" {\n  rankdir=LR;\n  __init [shape=point];\n  s0 [label=\"start\", shape=circle];\n  __init -> s0;\n}\n"
    );

    let q = p.modified(|nodes, _| nodes[2].ground.clear());
    let dot = export_dot(&build_consequent(&q, &query(&q)).unwrap());
    assert!(dot.contains("label=\"⊥\", shape=doublecircle"));
}

#[test]
fn json_roundtrip() {
    let p = fixtures::ambig1();
    let q = query(&p);
    for a in [
        build_consequent(&p, &q).unwrap(),
        build_antecedent_full(&p, &q).unwrap(),
        build_antecedent_approx(&p, &q, 3).unwrap(),
    ] {
        let text = a.to_json();
        let back = AutomatonFile::parse(text.as_bytes()).unwrap().load().unwrap();
        assert_eq!(back.to_json(), text);
        assert_eq!(back.kind(), a.kind());
    }
}

#[test]
fn rejects_malformed_automata() {
    let bad = br#"{"kind":"raw","initial":3,"states":[{"tag":"start","final":false}],"transitions":[]}"#;
    assert!(AutomatonFile::parse(bad).unwrap().load().is_err());
    let dup = br#"{"kind":"raw","initial":0,"states":[{"tag":"bot","final":false},{"tag":"bot","final":true}],"transitions":[]}"#;
    assert!(AutomatonFile::parse(dup).unwrap().load().is_err());
    assert!(AutomatonFile::parse(b"{").is_err());
}
