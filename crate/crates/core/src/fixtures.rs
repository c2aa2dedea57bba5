//! Small hand-built proofs used by the tests, the CLI examples and the
//! FFI smoke tests.
//!
//! - `loop2`: root `n0 → n1`, `n1 → [n0, n2]`, axiom `n2`; one value per
//!   side everywhere, weight 1 on `(n0, n1)` and 0 elsewhere; at `n2` the
//!   consequent value is ground and equated with the antecedent value.
//! - `strict2`: `loop2` with the left weight on `(n0, n1)` raised to 2.
//! - `unsound1`: one node with a self-loop whose only left pair is flat.
//! - `ambig1`: `loop2` with an extra antecedent value `b` at `n0` and `n1`
//!   that has no trace pairs.

use crate::proof::{parse_proof_graph, ProofGraph};

pub const LOOP2: &str = include_str!("../fixtures/loop2.json");
pub const STRICT2: &str = include_str!("../fixtures/strict2.json");
pub const UNSOUND1: &str = include_str!("../fixtures/unsound1.json");
pub const AMBIG1: &str = include_str!("../fixtures/ambig1.json");

fn load(src: &str) -> ProofGraph {
    parse_proof_graph(src.as_bytes()).expect("bundled fixture parses")
}

pub fn loop2() -> ProofGraph {
    load(LOOP2)
}

pub fn strict2() -> ProofGraph {
    load(STRICT2)
}

pub fn unsound1() -> ProofGraph {
    load(UNSOUND1)
}

pub fn ambig1() -> ProofGraph {
    load(AMBIG1)
}
