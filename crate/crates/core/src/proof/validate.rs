use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{NodeId, ProofGraph, Side, ValueId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FindingKind {
    /// A trace pair whose source is not a value of the parent.
    DeltaDomain,
    /// A trace pair whose target is not a value of the child.
    DeltaCodomain,
    /// A value used both as an antecedent and as a consequent value.
    NamespaceOverlap,
    /// Two sources mapped to one target on the same edge and side.
    TraceInjectivity,
    /// `ground`, `excluded` or `equates` mention values the node lacks.
    AnnotationScope,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub kind: FindingKind,
    pub location: String,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub trace_injective: bool,
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }

    /// Findings other than trace-injectivity ones, which the decision
    /// pipeline treats separately.
    pub fn structural(&self) -> impl Iterator<Item = &Finding> {
        self.findings
            .iter()
            .filter(|f| f.kind != FindingKind::TraceInjectivity)
    }
}

/// Checks the structural well-formedness conditions that parsing does not
/// enforce, and trace injectivity of every edge and side.
pub fn validate(p: &ProofGraph) -> ValidationReport {
    let mut findings = Vec::new();
    let mut push = |kind, location: String, message: String| {
        findings.push(Finding {
            kind,
            location,
            message,
        })
    };

    let all = |side: Side| -> BTreeSet<ValueId> {
        p.nodes()
            .iter()
            .flat_map(|n| n.values(side).iter().copied())
            .collect()
    };
    for v in all(Side::Left).intersection(&all(Side::Right)) {
        push(
            FindingKind::NamespaceOverlap,
            format!("value {:?}", p.value_name(*v)),
            format!(
                "{:?} occurs both as an antecedent and as a consequent value",
                p.value_name(*v)
            ),
        );
    }

    for (i, node) in p.nodes().iter().enumerate() {
        let name = &node.name;
        for &v in &node.ground {
            if !node.con_values.contains(&v) {
                push(
                    FindingKind::AnnotationScope,
                    format!("nodes[{i}].ground"),
                    format!("{:?} is not a consequent value of {name:?}", p.value_name(v)),
                );
            }
        }
        for &v in &node.excluded {
            if !node.con_values.contains(&v) {
                push(
                    FindingKind::AnnotationScope,
                    format!("nodes[{i}].excluded"),
                    format!("{:?} is not a consequent value of {name:?}", p.value_name(v)),
                );
            }
        }
        for &(a, c) in &node.equates {
            if !node.ant_values.contains(&a) || !node.con_values.contains(&c) {
                push(
                    FindingKind::AnnotationScope,
                    format!("nodes[{i}].equates"),
                    format!(
                        "({:?}, {:?}) is not an antecedent/consequent pair of {name:?}",
                        p.value_name(a),
                        p.value_name(c)
                    ),
                );
            }
        }

        for (slot, d) in p.delta(NodeId(i)).iter().enumerate() {
            let child = p.node(node.children[slot]).expect("resolved at parse time");
            for side in [Side::Left, Side::Right] {
                let loc = format!("{name} -> {} (child {slot}, {side})", child.name);
                let mut sources: BTreeMap<ValueId, Vec<ValueId>> = BTreeMap::new();
                for &(a, b) in d.side(side).keys() {
                    if !node.values(side).contains(&a) {
                        push(
                            FindingKind::DeltaDomain,
                            loc.clone(),
                            format!(
                                "δ domain: {:?} is not a {} value of {name:?}",
                                p.value_name(a),
                                side.value_kind()
                            ),
                        );
                    }
                    if !child.values(side).contains(&b) {
                        push(
                            FindingKind::DeltaCodomain,
                            loc.clone(),
                            format!(
                                "δ codomain: {:?} is not a {} value of {:?}",
                                p.value_name(b),
                                side.value_kind(),
                                child.name
                            ),
                        );
                    }
                    sources.entry(b).or_default().push(a);
                }
                for (b, srcs) in sources {
                    if srcs.len() > 1 {
                        push(
                            FindingKind::TraceInjectivity,
                            loc.clone(),
                            format!(
                                "{} all map to {:?}",
                                srcs.iter()
                                    .map(|&s| format!("{:?}", p.value_name(s)))
                                    .collect::<Vec<_>>()
                                    .join(", "),
                                p.value_name(b)
                            ),
                        );
                    }
                }
            }
        }

        // Slots sharing a child are indistinguishable on node sequences, so
        // their union must be injective too.
        for step in p.steps(NodeId(i)) {
            let slots = node.children.iter().filter(|&&c| c == step.target).count();
            if slots < 2 {
                continue;
            }
            for side in [Side::Left, Side::Right] {
                let mut sources: BTreeMap<ValueId, BTreeSet<ValueId>> = BTreeMap::new();
                for &(a, b) in step.pairs(side).keys() {
                    sources.entry(b).or_default().insert(a);
                }
                let per_slot_clean = p.delta(NodeId(i)).iter().enumerate().all(|(s, d)| {
                    node.children[s] != step.target || {
                        let mut seen = BTreeSet::new();
                        d.side(side).keys().all(|&(_, b)| seen.insert(b))
                    }
                });
                if per_slot_clean && sources.values().any(|s| s.len() > 1) {
                    push(
                        FindingKind::TraceInjectivity,
                        format!("{name} -> {} (parallel children, {side})", p.node_name(step.target)),
                        "parallel child slots together map two sources to one target".into(),
                    );
                }
            }
        }
    }

    let trace_injective = !findings
        .iter()
        .any(|f| f.kind == FindingKind::TraceInjectivity);
    ValidationReport {
        trace_injective,
        findings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::ordinal::Ordinal;

    #[test]
    fn loop2_is_clean() {
        let r = validate(&fixtures::loop2());
        assert!(r.is_clean(), "{:?}", r.findings);
        assert!(r.trace_injective);
    }

    #[test]
    fn codomain_violation() {
        let p = fixtures::loop2();
        let a = p.value_id("a").unwrap();
        let c = p.value_id("c").unwrap();
        // (a, c): c is not an antecedent value of the child
        let q = p.modified(|_, delta| {
            delta[0][0].left.insert((a, c), Ordinal::zero());
        });
        let r = validate(&q);
        assert!(r
            .findings
            .iter()
            .any(|f| f.kind == FindingKind::DeltaCodomain && f.message.contains("δ codomain")));
    }

    #[test]
    fn injectivity_violation() {
        let p = fixtures::ambig1();
        let a = p.value_id("a").unwrap();
        let b = p.value_id("b").unwrap();
        let q = p.modified(|_, delta| {
            delta[0][0].left.insert((b, a), Ordinal::zero());
        });
        let r = validate(&q);
        assert!(!r.trace_injective);
        let inj: Vec<_> = r
            .findings
            .iter()
            .filter(|f| f.kind == FindingKind::TraceInjectivity)
            .collect();
        assert_eq!(inj.len(), 1);
        assert!(inj[0].location.starts_with("n0 -> n1 (child 0, left)"));
    }

    #[test]
    fn namespace_overlap_and_scope() {
        let p = fixtures::loop2();
        let a = p.value_id("a").unwrap();
        let q = p.modified(|nodes, _| {
            nodes[2].con_values.insert(a);
            nodes[0].ground.insert(a);
        });
        let r = validate(&q);
        let kinds: BTreeSet<_> = r.findings.iter().map(|f| f.kind).collect();
        assert!(kinds.contains(&FindingKind::NamespaceOverlap));
        assert!(kinds.contains(&FindingKind::AnnotationScope));
    }
}
