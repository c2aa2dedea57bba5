//! JSON reading and writing of annotated proofs.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{EdgeDelta, Node, NodeId, ProofGraph, Sequent, Side, ValueId};
use crate::error::{Error, Result};
use crate::ordinal::Ordinal;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ProofFile {
    pub root: String,
    pub nodes: Vec<NodeEntry>,
    #[serde(default)]
    pub delta: Vec<DeltaEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct NodeEntry {
    pub id: String,
    #[serde(default)]
    pub rule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axiom: Option<bool>,
    #[serde(default)]
    pub sequent: SequentEntry,
    #[serde(default)]
    pub ant_values: Vec<String>,
    #[serde(default)]
    pub con_values: Vec<String>,
    #[serde(default)]
    pub children: Vec<String>,
    #[serde(default)]
    pub ground: Vec<String>,
    #[serde(default)]
    pub excluded: Vec<String>,
    #[serde(default)]
    pub equates: Vec<(String, String)>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SequentEntry {
    #[serde(default)]
    pub ant: String,
    #[serde(default)]
    pub con: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DeltaEntry {
    pub from: String,
    pub child_index: usize,
    pub side: Side,
    pub pairs: Vec<(String, String, Ordinal)>,
}

impl<'de> Deserialize<'de> for Side {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match String::deserialize(d)?.as_str() {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            other => Err(serde::de::Error::custom(format!(
                "side must be \"left\" or \"right\", found {other:?}"
            ))),
        }
    }
}

fn structure(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Structure {
        location: location.into(),
        message: message.into(),
    }
}

/// Parses a JSON proof document and resolves every reference in it.
pub fn parse_proof_graph(source: &[u8]) -> Result<ProofGraph> {
    let file: ProofFile = serde_json::from_slice(source).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    ProofGraph::from_file(&file)
}

impl ProofGraph {
    pub fn from_file(file: &ProofFile) -> Result<ProofGraph> {
        if file.nodes.is_empty() {
            return Err(structure("root", "root missing: the proof has no nodes"));
        }
        let mut node_index: HashMap<&str, NodeId> = HashMap::new();
        for (i, n) in file.nodes.iter().enumerate() {
            if node_index.insert(n.id.as_str(), NodeId(i)).is_some() {
                return Err(structure(
                    format!("nodes[{i}].id"),
                    format!("duplicate node id {:?}", n.id),
                ));
            }
        }
        let root = *node_index
            .get(file.root.as_str())
            .ok_or_else(|| structure("root", format!("root missing: no node {:?}", file.root)))?;

        let mut value_names: Vec<String> = Vec::new();
        let mut value_index: HashMap<String, ValueId> = HashMap::new();
        for n in &file.nodes {
            for v in n.ant_values.iter().chain(&n.con_values) {
                if !value_index.contains_key(v) {
                    value_index.insert(v.clone(), ValueId(value_names.len()));
                    value_names.push(v.clone());
                }
            }
        }
        let value = |loc: &dyn Fn() -> String, name: &str| -> Result<ValueId> {
            value_index
                .get(name)
                .copied()
                .ok_or_else(|| structure(loc(), format!("unknown trace value {name:?}")))
        };

        let mut nodes = Vec::with_capacity(file.nodes.len());
        for (i, n) in file.nodes.iter().enumerate() {
            let children = n
                .children
                .iter()
                .enumerate()
                .map(|(j, c)| {
                    node_index.get(c.as_str()).copied().ok_or_else(|| {
                        structure(
                            format!("nodes[{i}].children[{j}]"),
                            format!("dangling child reference {c:?}"),
                        )
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if let Some(axiom) = n.axiom {
                if axiom != children.is_empty() {
                    return Err(structure(
                        format!("nodes[{i}].axiom"),
                        format!(
                            "node {:?} is marked axiom={axiom} but has {} children",
                            n.id,
                            children.len()
                        ),
                    ));
                }
            }
            let set = |field: &str, names: &[String]| -> Result<BTreeSet<ValueId>> {
                names
                    .iter()
                    .enumerate()
                    .map(|(j, v)| value(&|| format!("nodes[{i}].{field}[{j}]"), v))
                    .collect()
            };
            let equates = n
                .equates
                .iter()
                .enumerate()
                .map(|(j, (a, c))| {
                    let loc = || format!("nodes[{i}].equates[{j}]");
                    Ok((value(&loc, a)?, value(&loc, c)?))
                })
                .collect::<Result<BTreeSet<_>>>()?;
            nodes.push(Node {
                name: n.id.clone(),
                rule: n.rule.clone(),
                sequent: Sequent {
                    ant: n.sequent.ant.clone(),
                    con: n.sequent.con.clone(),
                },
                ant_values: set("ant_values", &n.ant_values)?,
                con_values: set("con_values", &n.con_values)?,
                children,
                ground: set("ground", &n.ground)?,
                excluded: set("excluded", &n.excluded)?,
                equates,
            });
        }

        let mut delta: Vec<Vec<EdgeDelta>> = nodes
            .iter()
            .map(|n| vec![EdgeDelta::default(); n.children.len()])
            .collect();
        for (i, d) in file.delta.iter().enumerate() {
            let from = *node_index.get(d.from.as_str()).ok_or_else(|| {
                structure(
                    format!("delta[{i}].from"),
                    format!("dangling node reference {:?}", d.from),
                )
            })?;
            let slots = delta[from.0].len();
            if d.child_index >= slots {
                return Err(structure(
                    format!("delta[{i}].child_index"),
                    format!(
                        "node {:?} has {slots} children, index {} is out of range",
                        d.from, d.child_index
                    ),
                ));
            }
            let map = delta[from.0][d.child_index].side_mut(d.side);
            for (j, (a, b, w)) in d.pairs.iter().enumerate() {
                let loc = || format!("delta[{i}].pairs[{j}]");
                let key = (value(&loc, a)?, value(&loc, b)?);
                if map.insert(key, w.clone()).is_some() {
                    return Err(structure(
                        loc(),
                        format!("duplicate trace pair ({a:?}, {b:?})"),
                    ));
                }
            }
        }
        Ok(ProofGraph::assemble(nodes, root, value_names, delta))
    }

    /// Canonical file representation: nodes in index order, values in
    /// interning order, one delta entry per non-empty (edge, side).
    pub fn to_file(&self) -> ProofFile {
        let names = |set: &BTreeSet<ValueId>| -> Vec<String> {
            let mut out: Vec<String> = set.iter().map(|&v| self.value_name(v).to_string()).collect();
            out.sort();
            out
        };
        let nodes = self
            .nodes()
            .iter()
            .map(|n| NodeEntry {
                id: n.name.clone(),
                rule: n.rule.clone(),
                axiom: Some(n.is_axiom()),
                sequent: SequentEntry {
                    ant: n.sequent.ant.clone(),
                    con: n.sequent.con.clone(),
                },
                ant_values: names(&n.ant_values),
                con_values: names(&n.con_values),
                children: n
                    .children
                    .iter()
                    .map(|&c| self.node_name(c).to_string())
                    .collect(),
                ground: names(&n.ground),
                excluded: names(&n.excluded),
                equates: {
                    let mut e: Vec<(String, String)> = n
                        .equates
                        .iter()
                        .map(|&(a, c)| (self.value_name(a).to_string(), self.value_name(c).to_string()))
                        .collect();
                    e.sort();
                    e
                },
            })
            .collect();
        let mut delta = Vec::new();
        for id in self.node_ids() {
            for (slot, d) in self.delta(id).iter().enumerate() {
                for side in [Side::Left, Side::Right] {
                    let map = d.side(side);
                    if map.is_empty() {
                        continue;
                    }
                    delta.push(DeltaEntry {
                        from: self.node_name(id).to_string(),
                        child_index: slot,
                        side,
                        pairs: {
                            let mut pairs: Vec<_> = map
                                .iter()
                                .map(|(&(a, b), w)| {
                                    (
                                        self.value_name(a).to_string(),
                                        self.value_name(b).to_string(),
                                        w.clone(),
                                    )
                                })
                                .collect();
                            pairs.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));
                            pairs
                        },
                    });
                }
            }
        }
        ProofFile {
            root: self.node_name(self.root()).to_string(),
            nodes,
            delta,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("proof serialization cannot fail")
    }
}
