//! Seeded random proof graphs for property tests and benchmarks.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ordinal::Ordinal;
use crate::proof::{EdgeDelta, Node, NodeId, ProofGraph, Sequent, Side, ValueId};

#[derive(Clone, Debug)]
pub struct GenConfig {
    pub max_nodes: usize,
    /// Upper bound on values per node and side.
    pub max_values: usize,
    /// Pair weights are drawn uniformly from this list.
    pub weights: Vec<u64>,
    /// At most one source per target on every edge and side.
    pub injective: bool,
    pub max_children: usize,
    /// Probability that a given value pair is a trace pair.
    pub pair_density: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_nodes: 5,
            max_values: 2,
            weights: vec![0, 1, 2],
            injective: false,
            max_children: 2,
            pair_density: 0.5,
        }
    }
}

/// A random proof graph, fully determined by `cfg` and `seed`. Every node is
/// reachable from the root `n0`, values never overlap between sides and
/// annotations only mention values the node has.
pub fn random_proof(cfg: &GenConfig, seed: u64) -> ProofGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=cfg.max_nodes.max(1));
    let width = cfg.max_values.max(1);
    let ant_pool: Vec<ValueId> = (0..width).map(ValueId).collect();
    let con_pool: Vec<ValueId> = (width..2 * width).map(ValueId).collect();
    let mut names: Vec<String> = (0..width).map(|i| format!("a{i}")).collect();
    names.extend((0..width).map(|i| format!("c{i}")));

    let subset = |rng: &mut ChaCha8Rng, pool: &[ValueId]| -> BTreeSet<ValueId> {
        let k = rng.gen_range(1..=pool.len());
        pool.choose_multiple(rng, k).copied().collect()
    };

    let mut children: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    for i in 1..n {
        let open: Vec<usize> = (0..i)
            .filter(|&j| children[j].len() < cfg.max_children)
            .collect();
        let parent = *open.choose(&mut rng).unwrap_or(&(i - 1));
        children[parent].push(NodeId(i));
    }
    for kids in children.iter_mut() {
        while kids.len() < cfg.max_children && rng.gen_bool(0.35) {
            kids.push(NodeId(rng.gen_range(0..n)));
        }
    }

    let mut nodes = Vec::with_capacity(n);
    for (i, kids) in children.iter().enumerate() {
        nodes.push(Node {
            name: format!("n{i}"),
            rule: String::new(),
            sequent: Sequent::default(),
            ant_values: subset(&mut rng, &ant_pool),
            con_values: subset(&mut rng, &con_pool),
            children: kids.clone(),
            ground: BTreeSet::new(),
            excluded: BTreeSet::new(),
            equates: BTreeSet::new(),
        });
    }

    let mut delta = Vec::with_capacity(n);
    for i in 0..n {
        let mut per_slot = Vec::new();
        for &child in &nodes[i].children {
            let mut d = EdgeDelta::default();
            for side in [Side::Left, Side::Right] {
                let mut pairs: Vec<(ValueId, ValueId)> = Vec::new();
                for &a in nodes[i].values(side) {
                    for &b in nodes[child.0].values(side) {
                        if rng.gen_bool(cfg.pair_density) {
                            pairs.push((a, b));
                        }
                    }
                }
                if cfg.injective {
                    pairs.shuffle(&mut rng);
                    let mut taken = BTreeMap::new();
                    pairs.retain(|&(a, b)| *taken.entry(b).or_insert(a) == a);
                }
                for pair in pairs {
                    let w = *cfg.weights.choose(&mut rng).unwrap_or(&0);
                    d.side_mut(side).insert(pair, Ordinal::from_nat(w));
                }
            }
            per_slot.push(d);
        }
        delta.push(per_slot);
    }

    // Parallel slots are merged per step; keep the merged relation injective.
    if cfg.injective {
        for (i, slots) in delta.iter_mut().enumerate() {
            let kids = &nodes[i].children;
            for side in [Side::Left, Side::Right] {
                let mut taken: BTreeMap<(NodeId, ValueId), ValueId> = BTreeMap::new();
                for (slot, d) in slots.iter_mut().enumerate() {
                    d.side_mut(side).retain(|&(a, b), _| {
                        *taken.entry((kids[slot], b)).or_insert(a) == a
                    });
                }
            }
        }
    }

    for node in nodes.iter_mut() {
        let axiom = node.children.is_empty();
        for &c in &node.con_values {
            if rng.gen_bool(if axiom { 0.6 } else { 0.3 }) {
                node.ground.insert(c);
            }
            if rng.gen_bool(0.1) {
                node.excluded.insert(c);
            }
            if axiom {
                for &a in &node.ant_values {
                    if rng.gen_bool(0.4) {
                        node.equates.insert((a, c));
                    }
                }
            }
        }
    }

    ProofGraph::assemble(nodes, NodeId(0), names, delta)
}
