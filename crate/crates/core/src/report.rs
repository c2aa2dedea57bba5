//! JSON views of analysis results with nodes, values and letters by name.
//!
//! Field order is fixed by construction, so identical inputs give
//! byte-identical documents.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::automata::{ambiguity, is_grounded, Letter, TracePairQuery, WeightedAutomaton};
use crate::containment::ContainmentVerdict;
use crate::decision::{DefinitionOutcome, OrderVerdict, Reason};
use crate::proof::{NodeId, ProofGraph, ValidationReport, ValueId};
use crate::restrictions::{RestrictionsReport, Thresholds};
use crate::soundness::{Lasso, SoundnessReport};
use crate::traces::{classify_right_trace, prog_points, Trace};

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn nodes(p: &ProofGraph, ns: &[NodeId]) -> Value {
    json!(p.render_nodes(ns))
}

fn values(p: &ProofGraph, vs: &[ValueId]) -> Value {
    json!(p.render_values(vs))
}

pub fn query(p: &ProofGraph, q: &TracePairQuery) -> Value {
    json!({
        "node": p.node_name(q.node),
        "ant": p.value_name(q.ant),
        "con": p.value_name(q.con),
    })
}

pub fn validation(r: &ValidationReport) -> Value {
    json!({
        "clean": r.is_clean(),
        "trace_injective": r.trace_injective,
        "findings": r.findings,
    })
}

pub fn lasso(p: &ProofGraph, l: &Lasso) -> Value {
    json!({
        "prefix": nodes(p, &l.prefix),
        "cycle": nodes(p, &l.cycle),
    })
}

pub fn soundness(p: &ProofGraph, r: &SoundnessReport) -> Value {
    json!({
        "sound": r.sound,
        "witness": r.witness.as_ref().map(|l| lasso(p, l)),
        "closure_size": r.closure_size,
    })
}

pub fn thresholds(t: &Thresholds) -> Value {
    json!({
        "trace_width": t.trace_width,
        "in_degree": t.in_degree,
        "cycle_threshold": t.cycle_threshold,
        "max_step": t.max_step,
        "n_bound": t.n_bound,
    })
}

pub fn restrictions(p: &ProofGraph, r: &RestrictionsReport) -> Value {
    let fp = &r.finitely_progressing;
    let offending: Vec<Value> = fp
        .offending
        .iter()
        .map(|e| {
            json!({
                "side": e.side,
                "from": p.node_name(e.from),
                "to": p.node_name(e.to),
                "from_value": p.value_name(e.from_value),
                "to_value": p.value_name(e.to_value),
                "weight": e.weight,
            })
        })
        .collect();
    let dynamic = json!({
        "passed": r.dynamic.passed,
        "witness": r.dynamic.witness.as_ref().map(|w| json!({
            "side": w.side,
            "nodes": nodes(p, &w.nodes),
            "values": values(p, &w.values),
        })),
    });
    let balanced = r.balanced.as_ref().map(|b| {
        json!({
            "passed": b.passed,
            "witness": b.witness.as_ref().map(|w| json!({
                "nodes": nodes(p, &w.nodes),
                "first": values(p, &w.first),
                "second": values(p, &w.second),
                "difference": w.difference,
            })),
        })
    });
    json!({
        "passed": r.passed(),
        "finitely_progressing": {"passed": fp.passed, "offending": offending},
        "dynamic": dynamic,
        "balanced": balanced,
        "thresholds": thresholds(&r.thresholds),
    })
}

pub fn word(a: &WeightedAutomaton, w: &[Letter]) -> Value {
    json!(a.render_word(w))
}

pub fn containment(b: &WeightedAutomaton, v: &ContainmentVerdict) -> Value {
    json!({
        "status": v.status,
        "engine": v.engine,
        "strict": v.strict,
        "bound": v.bound,
        "explored": v.explored,
        "counterexample": v.counterexample.as_ref().map(|cx| json!({
            "word": word(b, &cx.word),
            "b_value": cx.b_value,
            "a_value": cx.a_value,
        })),
    })
}

pub fn trace(p: &ProofGraph, path: &[NodeId], t: &Trace) -> Value {
    json!({
        "path": nodes(p, path),
        "values": values(p, &t.values),
    })
}

/// A positive maximal consequent trace with its size and classification.
pub fn right_trace(p: &ProofGraph, path: &[NodeId], t: &Trace) -> Value {
    let mut v = trace(p, path, t);
    let obj = v.as_object_mut().expect("object");
    if let Ok(size) = prog_points(p, path, t) {
        obj.insert("size".into(), json!(size));
    }
    if let Ok(c) = classify_right_trace(p, path, t) {
        obj.insert("partially_maximal".into(), json!(c.partially_maximal));
        obj.insert("grounded".into(), json!(c.grounded));
    }
    v
}

pub fn automaton(p: Option<&ProofGraph>, a: &WeightedAutomaton) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), json!(a.kind().name()));
    if let crate::automata::AutomatonKind::AntecedentApprox(n) = a.kind() {
        m.insert("depth".into(), json!(n));
    }
    m.insert("states".into(), json!(a.len()));
    m.insert("transitions".into(), json!(a.transitions().len()));
    m.insert("finals".into(), json!(a.finals().count()));
    m.insert("ambiguity".into(), json!(ambiguity(a)));
    if let Some(p) = p {
        if let Ok(g) = is_grounded(a, p) {
            m.insert("grounded".into(), json!(g));
        }
    }
    Value::Object(m)
}

pub fn definition(p: &ProofGraph, o: &DefinitionOutcome) -> Value {
    match o {
        DefinitionOutcome::NoCounterexample {
            max_path_len,
            traces_checked,
        } => json!({
            "counterexample": null,
            "max_path_len": max_path_len,
            "traces_checked": traces_checked,
        }),
        DefinitionOutcome::Counterexample(cx) => json!({
            "counterexample": {
                "path": nodes(p, &cx.path),
                "values": values(p, &cx.trace.values),
                "size": cx.size,
                "best_partner": cx.best_partner,
            },
        }),
    }
}

fn reason(p: &ProofGraph, r: &Reason) -> Value {
    match r {
        Reason::Validation(findings) => json!({
            "check": "validation",
            "passed": findings.is_empty(),
            "findings": findings,
        }),
        Reason::Soundness(s) => {
            let mut v = soundness(p, s);
            let obj = v.as_object_mut().expect("object");
            obj.shift_insert(0, "check".into(), json!("soundness"));
            obj.shift_insert(1, "passed".into(), json!(s.sound));
            v
        }
        Reason::TraceInjectivity(ok) => {
            let mut v = json!({"check": "trace_injectivity", "passed": ok});
            if !ok {
                v["note"] = json!("without trace injectivity the approximate antecedent automaton need not be finitely ambiguous");
            }
            v
        }
        Reason::Restrictions(r) => {
            let mut v = restrictions(p, r);
            v.as_object_mut()
                .expect("object")
                .shift_insert(0, "check".into(), json!("restrictions"));
            v
        }
        Reason::Bound { depth, lag_cap } => json!({
            "check": "bound",
            "passed": depth.is_some(),
            "depth": depth,
            "lag_cap": lag_cap,
        }),
        Reason::Groundedness(g) => json!({"check": "groundedness", "passed": g}),
        Reason::Containment(c) => json!({
            "check": "containment",
            "status": c.status,
            "engine": c.engine,
            "bound": c.bound,
            "explored": c.explored,
        }),
    }
}

pub fn order(p: &ProofGraph, q: &TracePairQuery, v: &OrderVerdict) -> Value {
    json!({
        "relation": v.relation,
        "status": v.status,
        "query": query(p, q),
        "reasons": v.reasons.iter().map(|r| reason(p, r)).collect::<Vec<_>>(),
        "witness": v.witness.as_ref().map(|w| json!({
            "path": nodes(p, &w.path),
            "values": values(p, &w.trace.values),
            "consequent_value": w.consequent_value,
            "antecedent_value": w.antecedent_value,
        })),
    })
}
