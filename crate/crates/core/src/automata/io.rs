//! JSON exchange format for automata, used by `cep automata --json` and read
//! back by `cep contain`. Letters and states refer to nodes and values by
//! name, so files produced from different proofs can be compared as long as
//! the names agree.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Alphabet, AutomatonKind, Letter, State, Transition, WeightedAutomaton};
use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::proof::{NodeId, ValueId};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomatonFile {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<u32>,
    pub initial: usize,
    pub states: Vec<StateEntry>,
    pub transitions: Vec<TransitionEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateEntry {
    #[serde(flatten)]
    pub state: StateTag,
    #[serde(rename = "final")]
    pub accepting: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum StateTag {
    Start,
    NodeValue { node: String, value: String },
    Bot,
    Top,
    TopChain { node: String, level: u32 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LetterEntry {
    Node(String),
    Pair { ant: Vec<String>, con: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionEntry {
    pub from: usize,
    pub letter: LetterEntry,
    pub to: usize,
    pub weight: Ordinal,
}

fn intern(names: &mut Vec<String>, name: &str) -> usize {
    match names.iter().position(|n| n == name) {
        Some(i) => i,
        None => {
            names.push(name.to_string());
            names.len() - 1
        }
    }
}

fn lookup(names: &[String], name: &str) -> usize {
    names.iter().position(|n| n == name).expect("interned before lookup")
}

impl WeightedAutomaton {
    pub fn to_file(&self) -> AutomatonFile {
        let names = self.alphabet();
        let states = self
            .states()
            .iter()
            .enumerate()
            .map(|(q, s)| StateEntry {
                state: match *s {
                    State::Start => StateTag::Start,
                    State::NodeValue(n, v) => StateTag::NodeValue {
                        node: names.node(n).into(),
                        value: names.value(v).into(),
                    },
                    State::Bot => StateTag::Bot,
                    State::Top => StateTag::Top,
                    State::TopChain(n, level) => StateTag::TopChain {
                        node: names.node(n).into(),
                        level,
                    },
                },
                accepting: self.is_final(q),
            })
            .collect();
        let transitions = self
            .transitions()
            .iter()
            .map(|t| TransitionEntry {
                from: t.from,
                letter: match &t.letter {
                    Letter::Node(n) => LetterEntry::Node(names.node(*n).into()),
                    Letter::Pair(set, c) => LetterEntry::Pair {
                        ant: set.iter().map(|v| names.value(*v).to_string()).collect(),
                        con: names.value(*c).into(),
                    },
                },
                to: t.to,
                weight: t.weight.clone(),
            })
            .collect();
        let depth = match self.kind() {
            AutomatonKind::AntecedentApprox(n) => Some(n),
            _ => None,
        };
        AutomatonFile {
            kind: self.kind().name().into(),
            depth,
            initial: self.initial(),
            states,
            transitions,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_file()).expect("serializable");
        s.push('\n');
        s
    }
}

impl AutomatonFile {
    pub fn parse(source: &[u8]) -> Result<Self> {
        serde_json::from_slice(source).map_err(|e| Error::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    fn intern_names(&self, alphabet: &mut Alphabet) {
        for s in &self.states {
            match &s.state {
                StateTag::NodeValue { node, value } => {
                    intern(&mut alphabet.nodes, node);
                    intern(&mut alphabet.values, value);
                }
                StateTag::TopChain { node, .. } => {
                    intern(&mut alphabet.nodes, node);
                }
                _ => {}
            }
        }
        for t in &self.transitions {
            match &t.letter {
                LetterEntry::Node(n) => {
                    intern(&mut alphabet.nodes, n);
                }
                LetterEntry::Pair { ant, con } => {
                    for v in ant {
                        intern(&mut alphabet.values, v);
                    }
                    intern(&mut alphabet.values, con);
                }
            }
        }
    }

    fn kind(&self) -> Result<AutomatonKind> {
        Ok(match (self.kind.as_str(), self.depth) {
            ("consequent", None) => AutomatonKind::Consequent,
            ("antecedent_full", None) => AutomatonKind::AntecedentFull,
            ("antecedent_approx", Some(n)) if n > 0 => AutomatonKind::AntecedentApprox(n),
            ("raw", None) => AutomatonKind::Raw,
            (k, d) => {
                return Err(Error::Structure {
                    location: "kind".into(),
                    message: format!("unsupported automaton kind {k:?} with depth {d:?}"),
                })
            }
        })
    }

    fn resolve(&self, alphabet: Arc<Alphabet>) -> Result<WeightedAutomaton> {
        let node = |n: &str| NodeId(lookup(&alphabet.nodes, n));
        let value = |v: &str| ValueId(lookup(&alphabet.values, v));
        let states = self
            .states
            .iter()
            .map(|s| match &s.state {
                StateTag::Start => State::Start,
                StateTag::NodeValue { node: n, value: v } => State::NodeValue(node(n), value(v)),
                StateTag::Bot => State::Bot,
                StateTag::Top => State::Top,
                StateTag::TopChain { node: n, level } => State::TopChain(node(n), *level),
            })
            .collect::<Vec<_>>();
        let distinct: BTreeSet<_> = states.iter().collect();
        if distinct.len() != states.len() {
            return Err(Error::Structure {
                location: "states".into(),
                message: "duplicate state".into(),
            });
        }
        let finals = self.states.iter().map(|s| s.accepting).collect();
        let transitions = self
            .transitions
            .iter()
            .map(|t| Transition {
                from: t.from,
                letter: match &t.letter {
                    LetterEntry::Node(n) => Letter::Node(node(n)),
                    LetterEntry::Pair { ant, con } => {
                        Letter::Pair(ant.iter().map(|v| value(v)).collect(), value(con))
                    }
                },
                to: t.to,
                weight: t.weight.clone(),
            })
            .collect();
        WeightedAutomaton::new(self.kind()?, alphabet, states, self.initial, finals, transitions)
    }

    pub fn load(&self) -> Result<WeightedAutomaton> {
        let mut alphabet = Alphabet::default();
        self.intern_names(&mut alphabet);
        self.resolve(Arc::new(alphabet))
    }

    /// Loads two automata over one shared alphabet, as containment needs.
    pub fn load_pair(b: &AutomatonFile, a: &AutomatonFile) -> Result<(WeightedAutomaton, WeightedAutomaton)> {
        let mut alphabet = Alphabet::default();
        b.intern_names(&mut alphabet);
        a.intern_names(&mut alphabet);
        let alphabet = Arc::new(alphabet);
        Ok((b.resolve(alphabet.clone())?, a.resolve(alphabet)?))
    }
}
