//! Eventually periodic sequences: a finite preamble followed by a cycle that
//! repeats forever. Values are always stored in canonical form, so two
//! sequences are pointwise equal exactly when they are structurally equal.

use std::fmt;

use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupModel};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EvPerSeq {
    model: GroupModel,
    preamble: Vec<GroupElement>,
    cycle: Vec<GroupElement>,
}

/// Reduces `(preamble, cycle)` to canonical form: the cycle becomes its
/// primitive root, then preamble entries equal to what the cycle would have
/// produced at that index are absorbed into the cycle (rotating it).
///
/// Panics if `cycle` is empty.
pub fn canonicalize<T: PartialEq + Clone>(preamble: &[T], cycle: &[T]) -> (Vec<T>, Vec<T>) {
    assert!(!cycle.is_empty(), "cycle must be nonempty");
    let len = cycle.len();
    let period =
        (1..=len).filter(|p| len % p == 0).find(|&p| (p..len).all(|i| cycle[i] == cycle[i % p])).unwrap_or(len);
    let mut cycle = cycle[..period].to_vec();
    let mut preamble = preamble.to_vec();
    while preamble.last().is_some_and(|last| last == cycle.last().unwrap()) {
        preamble.pop();
        cycle.rotate_right(1);
    }
    (preamble, cycle)
}

impl EvPerSeq {
    pub fn new(model: GroupModel, preamble: Vec<GroupElement>, cycle: Vec<GroupElement>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::Parse("cycle must contain at least one term".into()));
        }
        for term in preamble.iter().chain(&cycle) {
            model.check(term)?;
        }
        let (preamble, cycle) = canonicalize(&preamble, &cycle);
        Ok(EvPerSeq { model, preamble, cycle })
    }

    /// Internal constructor for terms already known to lie in `model`.
    pub(crate) fn from_terms(model: GroupModel, preamble: &[GroupElement], cycle: &[GroupElement]) -> Self {
        let (preamble, cycle) = canonicalize(preamble, cycle);
        EvPerSeq { model, preamble, cycle }
    }

    pub fn constant(model: GroupModel, value: GroupElement) -> Result<Self> {
        Self::new(model, Vec::new(), vec![value])
    }

    pub fn periodic(model: GroupModel, cycle: Vec<GroupElement>) -> Result<Self> {
        Self::new(model, Vec::new(), cycle)
    }

    pub fn zero(model: GroupModel) -> Self {
        EvPerSeq { model, preamble: Vec::new(), cycle: vec![model.zero()] }
    }

    pub fn model(&self) -> GroupModel {
        self.model
    }

    pub fn preamble(&self) -> &[GroupElement] {
        &self.preamble
    }

    pub fn cycle(&self) -> &[GroupElement] {
        &self.cycle
    }

    pub fn term(&self, n: usize) -> &GroupElement {
        match self.preamble.get(n) {
            Some(t) => t,
            None => &self.cycle[(n - self.preamble.len()) % self.cycle.len()],
        }
    }

    /// The first `n` terms.
    pub fn prefix(&self, n: usize) -> Vec<GroupElement> {
        (0..n).map(|i| self.term(i).clone()).collect()
    }

    /// The constant value of the tail, if the canonical cycle has length 1.
    pub fn tail_constant(&self) -> Option<&GroupElement> {
        match self.cycle.as_slice() {
            [only] => Some(only),
            _ => None,
        }
    }

    /// Applies `f` termwise; the result is re-canonicalized.
    pub fn map(&self, model: GroupModel, f: impl Fn(&GroupElement) -> GroupElement) -> Self {
        let preamble: Vec<_> = self.preamble.iter().map(&f).collect();
        let cycle: Vec<_> = self.cycle.iter().map(&f).collect();
        Self::from_terms(model, &preamble, &cycle)
    }

    /// Combines two sequences termwise over the common unrolled window.
    pub fn zip_with(&self, other: &Self, f: impl Fn(&GroupElement, &GroupElement) -> GroupElement) -> Result<Self> {
        if self.model != other.model {
            return Err(Error::ModelMismatch { left: self.model, right: other.model });
        }
        let start = self.preamble.len().max(other.preamble.len());
        let period = self.cycle.len().lcm(&other.cycle.len());
        let terms = |range: std::ops::Range<usize>| -> Vec<GroupElement> {
            range.map(|n| f(self.term(n), other.term(n))).collect()
        };
        Ok(Self::from_terms(self.model, &terms(0..start), &terms(start..start + period)))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let model = self.model;
        self.zip_with(other, |a, b| model.add(a, b))
    }

    pub fn negate(&self) -> Self {
        let model = self.model;
        self.map(model, |a| model.neg(a))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.negate())
    }

    /// Drops the first term.
    pub fn shift(&self) -> Self {
        if self.preamble.is_empty() {
            let mut cycle = self.cycle.clone();
            cycle.rotate_left(1);
            EvPerSeq { model: self.model, preamble: Vec::new(), cycle }
        } else {
            Self::from_terms(self.model, &self.preamble[1..], &self.cycle)
        }
    }

    /// Parses `pre:[a,b];cyc:[c,d]`. `cyc:[..]` alone is also accepted.
    pub fn parse(model: GroupModel, text: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected pre:[..];cyc:[..], got {text:?}"));
        let bracketed = |part: &str, key: &str| -> Result<Vec<GroupElement>> {
            let inner = part
                .trim()
                .strip_prefix(key)
                .map(str::trim_start)
                .and_then(|s| s.strip_prefix(':'))
                .map(str::trim)
                .and_then(|s| s.strip_prefix('['))
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(bad)?;
            model.parse_list(inner)
        };
        let (preamble, cycle) = match text.split_once(';') {
            Some((pre, cyc)) => (bracketed(pre, "pre")?, bracketed(cyc, "cyc")?),
            None => (Vec::new(), bracketed(text, "cyc")?),
        };
        Self::new(model, preamble, cycle)
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, terms: &[GroupElement]) -> fmt::Result {
    write!(f, "[")?;
    for (i, t) in terms.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{t}")?;
    }
    write!(f, "]")
}

impl fmt::Display for EvPerSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pre:")?;
        write_list(f, &self.preamble)?;
        write!(f, ";cyc:")?;
        write_list(f, &self.cycle)
    }
}

impl fmt::Debug for EvPerSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self, self.model)
    }
}

impl Serialize for EvPerSeq {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> GroupModel {
        GroupModel::RationalLine
    }

    fn seq(model: GroupModel, text: &str) -> EvPerSeq {
        EvPerSeq::parse(model, text).unwrap()
    }

    #[test]
    fn term_reads_preamble_then_cycle() {
        assert_eq!(seq(q(), "pre:[5];cyc:[3]").term(0).to_string(), "5");
        assert_eq!(seq(q(), "pre:[];cyc:[0,1]").term(7).to_string(), "1");
        // 2,4,1,0,1,1,0,...
        let s = seq(q(), "pre:[2,4];cyc:[1,0,1]");
        let unrolled: Vec<String> = s.prefix(7).iter().map(ToString::to_string).collect();
        assert_eq!(unrolled, ["2", "4", "1", "0", "1", "1", "0"]);
        assert_eq!(s.term(6).to_string(), "0");
    }

    #[test]
    fn add_examples() {
        let s = seq(q(), "pre:[1/2];cyc:[3,4]");
        assert_eq!(EvPerSeq::zero(q()).add(&s).unwrap(), s);
        let sum = seq(q(), "cyc:[0,1]").add(&seq(q(), "cyc:[1,0]")).unwrap();
        assert_eq!(sum, seq(q(), "cyc:[1]"));
        let z2 = GroupModel::cyclic(2).unwrap();
        assert_eq!(seq(z2, "cyc:[1]").add(&seq(z2, "cyc:[1]")).unwrap(), EvPerSeq::zero(z2));
    }

    #[test]
    fn add_rejects_model_mismatch() {
        let z2 = GroupModel::cyclic(2).unwrap();
        let z3 = GroupModel::cyclic(3).unwrap();
        assert!(matches!(seq(z2, "cyc:[1]").add(&seq(z3, "cyc:[1]")), Err(Error::ModelMismatch { .. })));
    }

    #[test]
    fn negate_examples() {
        assert_eq!(seq(q(), "cyc:[7/3]").negate(), seq(q(), "cyc:[-7/3]"));
        let z3 = GroupModel::cyclic(3).unwrap();
        assert_eq!(seq(z3, "cyc:[1,2]").negate(), seq(z3, "cyc:[2,1]"));
        assert_eq!(seq(q(), "pre:[1/2];cyc:[3]").negate().to_string(), "pre:[-1/2];cyc:[-3]");
    }

    #[test]
    fn canonical_form_examples() {
        assert_eq!(seq(q(), "pre:[0];cyc:[0]").to_string(), "pre:[];cyc:[0]");
        assert_eq!(seq(q(), "cyc:[1,0,1,0]").to_string(), "pre:[];cyc:[1,0]");
        // 1,0,0,1,0,1,...: index 1 holds 0 but the cycle would put 1 there,
        // so nothing can be absorbed.
        let s = seq(q(), "pre:[1,0];cyc:[0,1]");
        assert_eq!(s.to_string(), "pre:[1,0];cyc:[0,1]");
        // 1,1,0,1,0,...: the second 1 is absorbed and the cycle rotates.
        let t = seq(q(), "pre:[1,1];cyc:[0,1]");
        assert_eq!(t.to_string(), "pre:[1];cyc:[1,0]");
        assert_eq!(t.prefix(8), seq(q(), "pre:[1,1];cyc:[0,1,0,1]").prefix(8));
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let (p, c) = canonicalize(&[3, 1, 2, 1, 2], &[1, 2, 1, 2]);
        assert_eq!((p.as_slice(), c.as_slice()), (&[3][..], &[1, 2][..]));
        assert_eq!(canonicalize(&p, &c), (p, c));
    }

    #[test]
    fn shift_drops_first_term() {
        let s = seq(q(), "pre:[9];cyc:[1,2,3]");
        assert_eq!(s.shift(), seq(q(), "cyc:[1,2,3]"));
        assert_eq!(s.shift().shift(), seq(q(), "cyc:[2,3,1]"));
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "pre:[1]", "cyc:[]", "pre:[1];cyc:[0.5]", "cyc:1,2", "pre:[1];cyc:[2"] {
            assert!(EvPerSeq::parse(q(), bad).is_err(), "{bad:?} should fail");
        }
        let z3 = GroupModel::cyclic(3).unwrap();
        assert_eq!(seq(z3, "pre:[4];cyc:[5]").to_string(), "pre:[1];cyc:[2]");
    }
}
