//! Ordinal max-plus weighted automata over node and pair letters.
//!
//! The consequent automaton reads a path word and tracks one right-hand
//! trace; its runs are weighted by the trace pair weights, so a run's value
//! is the size of the trace it follows. The antecedent automata do the same
//! for left-hand traces, but may abandon the trace at any point and move to
//! a sink that accepts the rest of the word with weight zero. The full
//! antecedent automaton has a single sink; the approximation of depth `n`
//! uses chains of sinks that remember the node read on entry and reject
//! once that node has been read `n` times.

mod ambiguity;
mod build;
mod dot;
mod io;
mod runs;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::proof::{NodeId, ProofGraph, Side, ValueId};

pub use ambiguity::{ambiguity, Ambiguity};
pub use build::{build_antecedent_approx, build_antecedent_full, build_consequent};
pub use dot::export_dot;
pub use io::{AutomatonFile, LetterEntry, StateEntry, TransitionEntry};
pub use runs::{
    accepted, co_accessible, initial_config, language_value, run_values, step_config, Config, Run,
};

/// Node and value names used to render and exchange letters and states.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Alphabet {
    pub nodes: Vec<String>,
    pub values: Vec<String>,
}

impl Alphabet {
    pub fn of(p: &ProofGraph) -> Self {
        Alphabet {
            nodes: p.node_names(),
            values: p.value_names().to_vec(),
        }
    }

    pub fn node(&self, n: NodeId) -> &str {
        &self.nodes[n.0]
    }

    pub fn value(&self, v: ValueId) -> &str {
        &self.values[v.0]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Node(NodeId),
    /// `(T, τ)`: the antecedent values equated with consequent value `τ`.
    Pair(BTreeSet<ValueId>, ValueId),
}

impl Letter {
    pub fn render(&self, names: &Alphabet) -> String {
        match self {
            Letter::Node(n) => names.node(*n).to_string(),
            Letter::Pair(set, c) => format!(
                "({{{}}},{})",
                set.iter().map(|v| names.value(*v)).collect::<Vec<_>>().join(","),
                names.value(*c)
            ),
        }
    }
}

/// Turns a node sequence into a word.
pub fn path_word(path: &[NodeId]) -> Vec<Letter> {
    path.iter().map(|&n| Letter::Node(n)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum State {
    Start,
    NodeValue(NodeId, ValueId),
    Bot,
    Top,
    /// `⊤ⁱ_ν`: sink entered on reading `ν`, having read it `i` times since.
    TopChain(NodeId, u32),
}

impl State {
    pub fn render(&self, names: &Alphabet) -> String {
        match self {
            State::Start => "start".into(),
            State::NodeValue(n, v) => format!("({},{})", names.node(*n), names.value(*v)),
            State::Bot => "⊥".into(),
            State::Top => "⊤".into(),
            State::TopChain(n, i) => format!("⊤^{i}_{}", names.node(*n)),
        }
    }

    pub fn is_node_value(&self) -> bool {
        matches!(self, State::NodeValue(..))
    }

    pub fn is_sink(&self) -> bool {
        matches!(self, State::Top | State::TopChain(..))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AutomatonKind {
    Consequent,
    AntecedentFull,
    AntecedentApprox(u32),
    /// Loaded from a file with no construction attached.
    Raw,
}

impl AutomatonKind {
    pub fn name(self) -> &'static str {
        match self {
            AutomatonKind::Consequent => "consequent",
            AutomatonKind::AntecedentFull => "antecedent_full",
            AutomatonKind::AntecedentApprox(_) => "antecedent_approx",
            AutomatonKind::Raw => "raw",
        }
    }
}

impl fmt::Display for AutomatonKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AutomatonKind::AntecedentApprox(n) => write!(f, "antecedent_approx({n})"),
            k => f.write_str(k.name()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub from: usize,
    pub letter: Letter,
    pub to: usize,
    pub weight: Ordinal,
}

/// The node and the two values a pair of automata is built for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TracePairQuery {
    pub node: NodeId,
    pub ant: ValueId,
    pub con: ValueId,
}

impl TracePairQuery {
    /// Resolves names, checking that both values belong to the node.
    pub fn resolve(p: &ProofGraph, node: &str, ant: &str, con: &str) -> Result<Self> {
        let node = p.node_id(node)?;
        Ok(TracePairQuery {
            node,
            ant: p.value_at(node, Side::Left, ant)?,
            con: p.value_at(node, Side::Right, con)?,
        })
    }

    pub(crate) fn check(&self, p: &ProofGraph) -> Result<()> {
        let n = p.node(self.node)?;
        for (side, v) in [(Side::Left, self.ant), (Side::Right, self.con)] {
            if !n.values(side).contains(&v) {
                return Err(Error::UnknownValue {
                    node: n.name.clone(),
                    side: side.value_kind(),
                    value: p.value_names().get(v.0).cloned().unwrap_or_else(|| format!("#{}", v.0)),
                });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedAutomaton {
    kind: AutomatonKind,
    alphabet: Arc<Alphabet>,
    states: Vec<State>,
    initial: usize,
    finals: Vec<bool>,
    /// Sorted by (from, letter, to).
    transitions: Vec<Transition>,
    /// `transitions[offsets[q]..offsets[q + 1]]` leave `q`.
    offsets: Vec<usize>,
}

impl WeightedAutomaton {
    pub fn new(
        kind: AutomatonKind,
        alphabet: Arc<Alphabet>,
        states: Vec<State>,
        initial: usize,
        finals: Vec<bool>,
        mut transitions: Vec<Transition>,
    ) -> Result<Self> {
        let bad = |message: String| Error::Structure {
            location: "automaton".into(),
            message,
        };
        if initial >= states.len() {
            return Err(bad(format!("initial state {initial} out of range")));
        }
        if finals.len() != states.len() {
            return Err(bad("final flags do not match the state count".into()));
        }
        transitions.sort_by(|x, y| (x.from, &x.letter, x.to).cmp(&(y.from, &y.letter, y.to)));
        for w in transitions.windows(2) {
            if (w[0].from, &w[0].letter, w[0].to) == (w[1].from, &w[1].letter, w[1].to) {
                return Err(bad(format!("duplicate transition from state {}", w[0].from)));
            }
        }
        for t in &transitions {
            if t.from >= states.len() || t.to >= states.len() {
                return Err(bad("transition endpoint out of range".into()));
            }
            let in_range = match &t.letter {
                Letter::Node(n) => n.0 < alphabet.nodes.len(),
                Letter::Pair(set, c) => {
                    c.0 < alphabet.values.len() && set.iter().all(|v| v.0 < alphabet.values.len())
                }
            };
            if !in_range {
                return Err(bad("letter outside the alphabet".into()));
            }
        }
        let mut offsets = vec![0; states.len() + 1];
        for t in &transitions {
            offsets[t.from + 1] += 1;
        }
        for i in 0..states.len() {
            offsets[i + 1] += offsets[i];
        }
        Ok(WeightedAutomaton {
            kind,
            alphabet,
            states,
            initial,
            finals,
            transitions,
            offsets,
        })
    }

    pub fn kind(&self) -> AutomatonKind {
        self.kind
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn alphabet_arc(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn state(&self, q: usize) -> State {
        self.states[q]
    }

    pub fn state_index(&self, s: State) -> Option<usize> {
        self.states.iter().position(|&x| x == s)
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals[q]
    }

    pub fn finals(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.states.len()).filter(|&q| self.finals[q])
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn outgoing(&self, q: usize) -> &[Transition] {
        &self.transitions[self.offsets[q]..self.offsets[q + 1]]
    }

    /// Transitions from `q` reading `letter`.
    pub fn successors<'a>(&'a self, q: usize, letter: &'a Letter) -> impl Iterator<Item = &'a Transition> + 'a {
        let out = self.outgoing(q);
        let start = out.partition_point(|t| t.letter < *letter);
        out[start..].iter().take_while(move |t| t.letter == *letter)
    }

    /// Positions in [`Self::transitions`] of the transitions from `q`
    /// reading `letter`.
    pub fn successor_range(&self, q: usize, letter: &Letter) -> std::ops::Range<usize> {
        let out = self.outgoing(q);
        let start = out.partition_point(|t| t.letter < *letter);
        let len = out[start..].iter().take_while(|t| t.letter == *letter).count();
        let base = self.offsets[q] + start;
        base..base + len
    }

    /// Whether every weight is a natural number.
    pub fn has_finite_weights(&self) -> bool {
        self.transitions.iter().all(|t| t.weight.is_finite())
    }

    pub fn render_state(&self, q: usize) -> String {
        self.states[q].render(&self.alphabet)
    }

    pub fn render_word(&self, w: &[Letter]) -> Vec<String> {
        w.iter().map(|l| l.render(&self.alphabet)).collect()
    }
}

/// Whether every reachable accepting node-value state of a consequent
/// automaton carries a ground value.
pub fn is_grounded(b: &WeightedAutomaton, p: &ProofGraph) -> Result<bool> {
    if b.kind() != AutomatonKind::Consequent {
        return Err(Error::WrongAutomaton {
            expected: AutomatonKind::Consequent.name(),
            found: b.kind().name(),
        });
    }
    Ok(b.finals().all(|q| match b.state(q) {
        State::NodeValue(n, v) => p.nodes()[n.0].ground.contains(&v),
        _ => true,
    }))
}

#[cfg(test)]
mod tests;
