//! Ordinals below ω^ω in Cantor normal form, and the ordinal max-plus
//! semiring built on top of them.
//!
//! An [`Ordinal`] is a finite sum `ω^e1·c1 + ... + ω^ek·ck` with strictly
//! decreasing exponents and positive coefficients. Addition is ordinal
//! addition, so it is associative but not commutative: `1 + ω = ω` while
//! `ω + 1 > ω`.
//!
//! [`TropicalWeight`] adjoins a least element ⊥ and provides the semiring
//! operations used by the weighted automata: `⊕` is maximum and `a ⊗ b` is the
//! *reversed* sum `b + a`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Largest exponent accepted by the parser. Keeps literals like `w^4000000000`
/// from being accepted as something we cannot add without overflow.
pub const MAX_EXPONENT: u32 = u32::MAX - 1;

/// A single Cantor-normal-form term `ω^exponent · coefficient`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub exponent: u32,
    pub coefficient: u64,
}

/// An ordinal strictly below ω^ω.
///
/// Terms are kept sorted by strictly decreasing exponent with non-zero
/// coefficients, so structural equality is ordinal equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Ordinal {
    terms: Vec<Term>,
}

impl Ordinal {
    pub const fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn omega() -> Self {
        Ordinal {
            terms: vec![Term {
                exponent: 1,
                coefficient: 1,
            }],
        }
    }

    pub fn from_nat(n: u64) -> Self {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal {
                terms: vec![Term {
                    exponent: 0,
                    coefficient: n,
                }],
            }
        }
    }

    /// `ω^exponent · coefficient`.
    pub fn monomial(exponent: u32, coefficient: u64) -> Self {
        if coefficient == 0 {
            Ordinal::zero()
        } else {
            Ordinal {
                terms: vec![Term {
                    exponent,
                    coefficient,
                }],
            }
        }
    }

    /// Builds an ordinal from raw terms, checking the normal-form invariants.
    pub fn from_terms(terms: Vec<Term>) -> Result<Self, Error> {
        for t in &terms {
            if t.coefficient == 0 {
                return Err(Error::Ordinal("zero coefficient in normal form".into()));
            }
        }
        for w in terms.windows(2) {
            if w[0].exponent <= w[1].exponent {
                return Err(Error::Ordinal(
                    "exponents must be strictly decreasing".into(),
                ));
            }
        }
        Ok(Ordinal { terms })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|t| t.exponent == 0)
    }

    /// The natural number this ordinal denotes, if it is finite.
    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exponent == 0 => Some(t.coefficient),
            _ => None,
        }
    }

    /// Ordinal addition, or `None` if a coefficient overflows `u64`.
    pub fn checked_add(&self, rhs: &Ordinal) -> Option<Ordinal> {
        let Some(lead) = rhs.terms.first() else {
            return Some(self.clone());
        };
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .copied()
            .take_while(|t| t.exponent >= lead.exponent)
            .collect();
        let mut rest = rhs.terms.iter().copied();
        match terms.last_mut() {
            Some(last) if last.exponent == lead.exponent => {
                last.coefficient = last.coefficient.checked_add(lead.coefficient)?;
                rest.next();
            }
            _ => {}
        }
        terms.extend(rest);
        Some(Ordinal { terms })
    }

    /// Exponent of the leading term; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|t| t.exponent)
    }
}

impl Add for &Ordinal {
    type Output = Ordinal;

    /// Panics on coefficient overflow, which cannot happen for weights read
    /// from realistic proof files.
    fn add(self, rhs: &Ordinal) -> Ordinal {
        self.checked_add(rhs).expect("ordinal coefficient overflow")
    }
}

impl Add for Ordinal {
    type Output = Ordinal;

    fn add(self, rhs: Ordinal) -> Ordinal {
        &self + &rhs
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(other.terms.iter()) {
            match a.exponent.cmp(&b.exponent) {
                Ordering::Equal => {}
                ord => return ord,
            }
            match a.coefficient.cmp(&b.coefficient) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::from_nat(n)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match (t.exponent, t.coefficient) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "w")?,
                (1, c) => write!(f, "w*{c}")?,
                (e, 1) => write!(f, "w^{e}")?,
                (e, c) => write!(f, "w^{e}*{c}")?,
            }
        }
        Ok(())
    }
}

fn parse_term(src: &str) -> Result<Ordinal, Error> {
    let bad = |msg: &str| Error::Ordinal(format!("{msg} in ordinal term {src:?}"));
    let s = src.trim();
    if s.is_empty() {
        return Err(bad("empty term"));
    }
    if s.bytes().all(|b| b.is_ascii_digit()) {
        let n = s.parse::<u64>().map_err(|_| bad("integer out of range"))?;
        return Ok(Ordinal::from_nat(n));
    }
    let (power, coefficient) = match s.split_once('*') {
        Some((p, c)) => {
            let c = c.trim();
            if c.is_empty() || !c.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad("malformed coefficient"));
            }
            (p.trim(), c.parse::<u64>().map_err(|_| bad("coefficient out of range"))?)
        }
        None => (s, 1),
    };
    let exponent = if power == "w" {
        1
    } else if let Some(e) = power.strip_prefix("w^") {
        let e = e.trim();
        if e.is_empty() || !e.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad("malformed exponent"));
        }
        let e = e.parse::<u64>().map_err(|_| bad("exponent overflow"))?;
        if e > MAX_EXPONENT as u64 {
            return Err(bad("exponent overflow"));
        }
        e as u32
    } else {
        return Err(bad("expected an integer or a power of w"));
    };
    Ok(Ordinal::monomial(exponent, coefficient))
}

impl FromStr for Ordinal {
    type Err = Error;

    /// Parses `w^k*c + ... + c0` style literals. Terms are combined with
    /// ordinal addition, so `1 + w` parses to `w`.
    fn from_str(s: &str) -> Result<Self, Error> {
        s.split('+').try_fold(Ordinal::zero(), |acc, term| {
            let t = parse_term(term)?;
            acc.checked_add(&t)
                .ok_or_else(|| Error::Ordinal(format!("coefficient overflow in {s:?}")))
        })
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Nat(u64),
            Text(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Nat(n) => Ok(Ordinal::from_nat(n)),
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// An element of the ordinal max-plus semiring: an ordinal or ⊥.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TropicalWeight {
    Bottom,
    Value(Ordinal),
}

impl TropicalWeight {
    /// The ⊗-identity.
    pub fn one() -> Self {
        TropicalWeight::Value(Ordinal::zero())
    }

    /// The ⊕-identity, ⊥.
    pub fn zero() -> Self {
        TropicalWeight::Bottom
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, TropicalWeight::Bottom)
    }

    pub fn value(&self) -> Option<&Ordinal> {
        match self {
            TropicalWeight::Bottom => None,
            TropicalWeight::Value(o) => Some(o),
        }
    }

    /// `a ⊕ b = max(a, b)` with ⊥ least.
    pub fn oplus(&self, other: &Self) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// `a ⊗ b = b + a`; ⊥ is absorbing.
    pub fn otimes(&self, other: &Self) -> Self {
        match (self, other) {
            (TropicalWeight::Value(a), TropicalWeight::Value(b)) => TropicalWeight::Value(b + a),
            _ => TropicalWeight::Bottom,
        }
    }
}

impl From<Ordinal> for TropicalWeight {
    fn from(o: Ordinal) -> Self {
        TropicalWeight::Value(o)
    }
}

impl Ord for TropicalWeight {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (TropicalWeight::Bottom, TropicalWeight::Bottom) => Ordering::Equal,
            (TropicalWeight::Bottom, _) => Ordering::Less,
            (_, TropicalWeight::Bottom) => Ordering::Greater,
            (TropicalWeight::Value(a), TropicalWeight::Value(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for TropicalWeight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TropicalWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TropicalWeight::Bottom => write!(f, "⊥"),
            TropicalWeight::Value(o) => write!(f, "{o}"),
        }
    }
}

impl Serialize for TropicalWeight {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            TropicalWeight::Bottom => serializer.serialize_none(),
            TropicalWeight::Value(o) => o.serialize(serializer),
        }
    }
}

/// `a + b`.
pub fn ord_add(a: &Ordinal, b: &Ordinal) -> Ordinal {
    a + b
}

/// `a ⊗ b`.
pub fn trop_otimes(a: &TropicalWeight, b: &TropicalWeight) -> TropicalWeight {
    a.otimes(b)
}

/// `a ⊕ b`.
pub fn trop_oplus(a: &TropicalWeight, b: &TropicalWeight) -> TropicalWeight {
    a.oplus(b)
}
