//! Cyclic pre-proofs annotated with trace values.
//!
//! A [`ProofGraph`] is a finite rooted graph whose nodes are rule instances.
//! Each node carries antecedent (left) and consequent (right) trace values,
//! and each ordered edge carries two partial maps from value pairs to
//! ordinals (the trace pair weights). Sequent text and rule names are opaque
//! labels; everything the analyses need enters through the value sets, the
//! weights and the per-node `ground` / `excluded` / `equates` annotations.

mod io;
mod validate;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::Bound;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;

pub use io::{parse_proof_graph, ProofFile};
pub use validate::{validate, Finding, FindingKind, ValidationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ValueId(pub usize);

/// Which half of a sequent a trace value belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }

    pub(crate) fn value_kind(self) -> &'static str {
        match self {
            Side::Left => "antecedent",
            Side::Right => "consequent",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Sequent {
    pub ant: String,
    pub con: String,
}

/// Weighted trace pairs for one side of one edge.
pub type PairMap = BTreeMap<(ValueId, ValueId), Ordinal>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeDelta {
    pub left: PairMap,
    pub right: PairMap,
}

impl EdgeDelta {
    pub fn side(&self, side: Side) -> &PairMap {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    pub fn side_mut(&mut self, side: Side) -> &mut PairMap {
        match side {
            Side::Left => &mut self.left,
            Side::Right => &mut self.right,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub name: String,
    pub rule: String,
    pub sequent: Sequent,
    pub ant_values: BTreeSet<ValueId>,
    pub con_values: BTreeSet<ValueId>,
    pub children: Vec<NodeId>,
    pub ground: BTreeSet<ValueId>,
    pub excluded: BTreeSet<ValueId>,
    /// (antecedent, consequent) pairs equated by the sequent.
    pub equates: BTreeSet<(ValueId, ValueId)>,
}

impl Node {
    pub fn is_axiom(&self) -> bool {
        self.children.is_empty()
    }

    pub fn values(&self, side: Side) -> &BTreeSet<ValueId> {
        match side {
            Side::Left => &self.ant_values,
            Side::Right => &self.con_values,
        }
    }
}

/// One parent→child step with the trace pairs of every child slot that
/// points at the same child merged. Where two slots share a pair the larger
/// weight is kept: a node sequence cannot tell the slots apart, and every
/// quantity built from steps takes maxima over traces anyway.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub target: NodeId,
    pub left: PairMap,
    pub right: PairMap,
}

impl Step {
    pub fn pairs(&self, side: Side) -> &PairMap {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    /// Pairs leaving `value` on `side`.
    pub fn from_value(
        &self,
        side: Side,
        value: ValueId,
    ) -> impl Iterator<Item = (ValueId, &Ordinal)> + '_ {
        self.pairs(side)
            .range((
                Bound::Included((value, ValueId(0))),
                Bound::Included((value, ValueId(usize::MAX))),
            ))
            .map(|(&(_, to), w)| (to, w))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofGraph {
    nodes: Vec<Node>,
    root: NodeId,
    value_names: Vec<String>,
    node_index: HashMap<String, NodeId>,
    value_index: HashMap<String, ValueId>,
    /// `delta[node][child_index]`
    delta: Vec<Vec<EdgeDelta>>,
    steps: Vec<Vec<Step>>,
    parents: Vec<BTreeSet<NodeId>>,
}

impl ProofGraph {
    pub(crate) fn assemble(
        nodes: Vec<Node>,
        root: NodeId,
        value_names: Vec<String>,
        delta: Vec<Vec<EdgeDelta>>,
    ) -> Self {
        let node_index = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.name.clone(), NodeId(i)))
            .collect();
        let value_index = value_names
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), ValueId(i)))
            .collect();
        let mut steps: Vec<Vec<Step>> = Vec::with_capacity(nodes.len());
        let mut parents = vec![BTreeSet::new(); nodes.len()];
        for (i, node) in nodes.iter().enumerate() {
            let mut merged: Vec<Step> = Vec::new();
            for (slot, &child) in node.children.iter().enumerate() {
                parents[child.0].insert(NodeId(i));
                let idx = match merged.iter().position(|s| s.target == child) {
                    Some(idx) => idx,
                    None => {
                        merged.push(Step {
                            target: child,
                            left: PairMap::new(),
                            right: PairMap::new(),
                        });
                        merged.len() - 1
                    }
                };
                let d = &delta[i][slot];
                for (side, map) in [(Side::Left, &d.left), (Side::Right, &d.right)] {
                    let into = match side {
                        Side::Left => &mut merged[idx].left,
                        Side::Right => &mut merged[idx].right,
                    };
                    for (k, w) in map {
                        match into.get_mut(k) {
                            Some(old) if *old >= *w => {}
                            Some(old) => *old = w.clone(),
                            None => {
                                into.insert(*k, w.clone());
                            }
                        }
                    }
                }
            }
            steps.push(merged);
        }
        ProofGraph {
            nodes,
            root,
            value_names,
            node_index,
            value_index,
            delta,
            steps,
            parents,
        }
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len()).map(NodeId)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> Result<&Node> {
        self.nodes
            .get(id.0)
            .ok_or_else(|| Error::UnknownNode(format!("#{}", id.0)))
    }

    pub fn node_id(&self, name: &str) -> Result<NodeId> {
        self.node_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    pub fn node_name(&self, id: NodeId) -> &str {
        &self.nodes[id.0].name
    }

    pub fn value_count(&self) -> usize {
        self.value_names.len()
    }

    pub fn value_name(&self, id: ValueId) -> &str {
        &self.value_names[id.0]
    }

    pub fn value_names(&self) -> &[String] {
        &self.value_names
    }

    pub fn node_names(&self) -> Vec<String> {
        self.nodes.iter().map(|n| n.name.clone()).collect()
    }

    /// Resolves a value name and checks that it belongs to `node` on `side`.
    pub fn value_at(&self, node: NodeId, side: Side, name: &str) -> Result<ValueId> {
        let n = self.node(node)?;
        let unknown = || Error::UnknownValue {
            node: n.name.clone(),
            side: side.value_kind(),
            value: name.to_string(),
        };
        let id = self.value_index.get(name).copied().ok_or_else(unknown)?;
        if n.values(side).contains(&id) {
            Ok(id)
        } else {
            Err(unknown())
        }
    }

    pub fn value_id(&self, name: &str) -> Option<ValueId> {
        self.value_index.get(name).copied()
    }

    pub fn values(&self, node: NodeId, side: Side) -> &BTreeSet<ValueId> {
        self.nodes[node.0].values(side)
    }

    pub fn is_axiom(&self, node: NodeId) -> bool {
        self.nodes[node.0].is_axiom()
    }

    /// Raw per-slot weights, `delta(node)[child_index]`.
    pub fn delta(&self, node: NodeId) -> &[EdgeDelta] {
        &self.delta[node.0]
    }

    /// Distinct children of `node`, in first-occurrence order.
    pub fn steps(&self, node: NodeId) -> &[Step] {
        &self.steps[node.0]
    }

    pub fn step(&self, from: NodeId, to: NodeId) -> Option<&Step> {
        self.steps[from.0].iter().find(|s| s.target == to)
    }

    pub fn is_edge(&self, from: NodeId, to: NodeId) -> bool {
        self.step(from, to).is_some()
    }

    /// The weight of trace pair `(from_value, to_value)` on step `from → to`.
    pub fn weight(
        &self,
        side: Side,
        from: NodeId,
        to: NodeId,
        from_value: ValueId,
        to_value: ValueId,
    ) -> Option<&Ordinal> {
        self.step(from, to)?.pairs(side).get(&(from_value, to_value))
    }

    pub fn parents(&self, node: NodeId) -> &BTreeSet<NodeId> {
        &self.parents[node.0]
    }

    /// Maximum number of distinct parents of any node.
    pub fn in_degree(&self) -> usize {
        self.parents.iter().map(BTreeSet::len).max().unwrap_or(0)
    }

    /// Whether `value` has no trace pair on any child edge of `node`.
    pub fn is_terminal(&self, node: NodeId, side: Side, value: ValueId) -> bool {
        self.steps[node.0]
            .iter()
            .all(|s| s.from_value(side, value).next().is_none())
    }

    /// Values of `node` on `side` that are terminal for the node.
    pub fn terminal_values(&self, node: NodeId, side: Side) -> Result<BTreeSet<ValueId>> {
        let n = self.node(node)?;
        Ok(n
            .values(side)
            .iter()
            .copied()
            .filter(|&v| self.is_terminal(node, side, v))
            .collect())
    }

    /// `T_ν(τ)`: antecedent values equated with consequent value `con` at `node`.
    pub fn equated_with(&self, node: NodeId, con: ValueId) -> BTreeSet<ValueId> {
        let n = &self.nodes[node.0];
        n.equates
            .iter()
            .filter(|&&(a, c)| c == con && n.ant_values.contains(&a))
            .map(|&(a, _)| a)
            .collect()
    }

    /// Successor (node, value) pairs of `(node, value)` in the trace graph.
    pub fn trace_successors(
        &self,
        side: Side,
        node: NodeId,
        value: ValueId,
    ) -> impl Iterator<Item = (NodeId, ValueId, &Ordinal)> + '_ {
        self.steps[node.0].iter().flat_map(move |s| {
            s.from_value(side, value)
                .map(move |(to, w)| (s.target, to, w))
        })
    }

    /// All (node, value) pairs reachable from `(node, value)` by traces,
    /// including the start pair itself.
    pub fn reachable_pairs(
        &self,
        side: Side,
        node: NodeId,
        value: ValueId,
    ) -> BTreeSet<(NodeId, ValueId)> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![(node, value)];
        seen.insert((node, value));
        while let Some((n, v)) = stack.pop() {
            for (m, u, _) in self.trace_successors(side, n, v) {
                if seen.insert((m, u)) {
                    stack.push((m, u));
                }
            }
        }
        seen
    }

    /// Maximum number of trace values on either side of any node.
    pub fn trace_width(&self) -> usize {
        self.nodes
            .iter()
            .map(|n| n.ant_values.len().max(n.con_values.len()))
            .max()
            .unwrap_or(0)
    }

    /// Every weight on `side`, across all edges.
    pub fn weights(&self, side: Side) -> impl Iterator<Item = &Ordinal> + '_ {
        self.delta
            .iter()
            .flatten()
            .flat_map(move |d| d.side(side).values())
    }

    /// Renders a node sequence using node names.
    pub fn render_nodes(&self, nodes: &[NodeId]) -> Vec<String> {
        nodes.iter().map(|&n| self.node_name(n).to_string()).collect()
    }

    pub fn render_values(&self, values: &[ValueId]) -> Vec<String> {
        values.iter().map(|&v| self.value_name(v).to_string()).collect()
    }

    /// Returns a copy with `edit` applied to the raw node and delta tables.
    /// Derived indices are rebuilt, so mutation tests can go through here.
    pub fn modified(&self, edit: impl FnOnce(&mut Vec<Node>, &mut Vec<Vec<EdgeDelta>>)) -> Self {
        let mut nodes = self.nodes.clone();
        let mut delta = self.delta.clone();
        edit(&mut nodes, &mut delta);
        ProofGraph::assemble(nodes, self.root, self.value_names.clone(), delta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn loop2_shape() {
        let p = fixtures::loop2();
        assert_eq!(p.len(), 3);
        let n0 = p.node_id("n0").unwrap();
        let n1 = p.node_id("n1").unwrap();
        let n2 = p.node_id("n2").unwrap();
        assert_eq!(p.root(), n0);
        assert!(p.is_axiom(n2));
        assert!(!p.is_axiom(n1));
        assert_eq!(p.nodes()[n1.0].children, vec![n0, n2]);
        assert_eq!(p.in_degree(), 1);
        assert_eq!(p.trace_width(), 1);
    }

    #[test]
    fn terminal_values_examples() {
        let p = fixtures::loop2();
        let c = p.value_id("c").unwrap();
        let n0 = p.node_id("n0").unwrap();
        let n2 = p.node_id("n2").unwrap();
        assert_eq!(
            p.terminal_values(n2, Side::Right).unwrap(),
            BTreeSet::from([c])
        );
        assert!(p.terminal_values(n0, Side::Right).unwrap().is_empty());
        assert!(p.terminal_values(NodeId(17), Side::Right).is_err());

        // children but no pairs anywhere: everything is terminal
        let bare = p.modified(|_, delta| {
            for d in delta.iter_mut().flatten() {
                *d = EdgeDelta::default();
            }
        });
        assert_eq!(
            bare.terminal_values(n0, Side::Right).unwrap(),
            BTreeSet::from([c])
        );
        let a = p.value_id("a").unwrap();
        assert_eq!(
            bare.terminal_values(n0, Side::Left).unwrap(),
            BTreeSet::from([a])
        );
    }

    #[test]
    fn parallel_children_merge_with_max() {
        let p = fixtures::loop2();
        let n1 = p.node_id("n1").unwrap();
        let a = p.value_id("a").unwrap();
        let q = p.modified(|nodes, delta| {
            let first = nodes[n1.0].children[0];
            nodes[n1.0].children.push(first);
            let mut d = EdgeDelta::default();
            d.left.insert((a, a), Ordinal::from_nat(5));
            delta[n1.0].push(d);
        });
        let n0 = q.node_id("n0").unwrap();
        assert_eq!(q.steps(n1).len(), 2);
        assert_eq!(
            q.weight(Side::Left, n1, n0, a, a),
            Some(&Ordinal::from_nat(5))
        );
    }

    #[test]
    fn value_lookup_checks_side() {
        let p = fixtures::loop2();
        let n0 = p.node_id("n0").unwrap();
        assert!(p.value_at(n0, Side::Right, "c").is_ok());
        assert!(p.value_at(n0, Side::Right, "a").is_err());
        assert!(p.value_at(n0, Side::Left, "zz").is_err());
    }
}
