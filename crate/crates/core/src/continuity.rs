//! G-sequential continuity of tabulated maps `Z_n -> Z_n`, and the open and
//! closed map properties.
//!
//! `f` is G-sequentially continuous at `u` when every sequence with
//! `G(x) = u` has `G(f(x)) = f(u)`. Two deciders are provided:
//!
//! * [`decide_continuity`] is exact. A sequence converges to `u` iff its
//!   window walk eventually stays in one label class of value `u`, so it
//!   finally circulates in one cyclic strongly connected component `C` of
//!   that class. Continuity fails iff some such `C` contains windows whose
//!   images under `f` do not all carry one label of value `f(u)`. A
//!   counterexample is then a closed walk in `C`, which has period at most
//!   `|C|` for a single kernel and at most `2|C|` when two labels of equal
//!   value have to be mixed.
//! * [`is_continuous_bounded`] enumerates every periodic sequence up to a
//!   period bound and evaluates both sides directly. Preambles are not
//!   enumerated: kernel values only depend on the tail.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupModel};
use crate::lattice::{iter_bits, FiniteSpace, Mask};
use crate::methods::{evaluate, MethodDescriptor};
use crate::sequence::EvPerSeq;
use crate::topology::PointSet;
use crate::window::{self, KernelBank};

/// A total map on Z_n, `table[i] = f(i)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TabulatedFunction {
    model: GroupModel,
    table: Vec<u64>,
}

impl TabulatedFunction {
    pub fn new(model: GroupModel, table: Vec<u64>) -> Result<Self> {
        let n =
            model.modulus().ok_or_else(|| Error::Unsupported("tabulated functions live on cyclic groups".into()))?;
        if table.len() as u64 != n {
            return Err(Error::Parse(format!("a map on Z_{n} needs {n} images, got {}", table.len())));
        }
        if let Some(bad) = table.iter().find(|&&v| v >= n) {
            return Err(Error::Parse(format!("image {bad} is not a residue of Z_{n}")));
        }
        Ok(TabulatedFunction { model, table })
    }

    /// Comma separated images of `0, 1, ..., n-1`.
    pub fn parse(model: GroupModel, text: &str) -> Result<Self> {
        let table = model.parse_list(text)?.iter().map(|e| e.as_residue().expect("cyclic model")).collect();
        Self::new(model, table)
    }

    fn build(model: GroupModel, f: impl Fn(u64) -> u64) -> Self {
        let n = model.modulus().expect("cyclic model");
        TabulatedFunction { model, table: (0..n).map(|i| f(i) % n).collect() }
    }

    pub fn identity(model: GroupModel) -> Self {
        Self::build(model, |x| x)
    }

    pub fn constant(model: GroupModel, value: u64) -> Self {
        Self::build(model, |_| value)
    }

    /// `x -> a + x`.
    pub fn translation(model: GroupModel, a: u64) -> Self {
        Self::build(model, |x| a + x)
    }

    /// `x -> m x`; these are all the additive maps on Z_n.
    pub fn multiplication(model: GroupModel, m: u64) -> Self {
        Self::build(model, |x| m * x)
    }

    pub fn negation(model: GroupModel) -> Self {
        let n = model.modulus().expect("cyclic model");
        Self::build(model, |x| n - x)
    }

    /// Every map `Z_n -> Z_n`, in lexicographic order of tables.
    pub fn all(model: GroupModel) -> Vec<Self> {
        let n = model.modulus().expect("cyclic model");
        let count = n.pow(n as u32);
        (0..count)
            .map(|mut code| {
                let mut table = vec![0; n as usize];
                for slot in table.iter_mut().rev() {
                    *slot = code % n;
                    code /= n;
                }
                TabulatedFunction { model, table }
            })
            .collect()
    }

    pub fn model(&self) -> GroupModel {
        self.model
    }

    pub fn table(&self) -> &[u64] {
        &self.table
    }

    fn n(&self) -> u64 {
        self.table.len() as u64
    }

    pub fn apply(&self, x: &GroupElement) -> GroupElement {
        let r = x.as_residue().expect("residue argument");
        GroupElement::Residue(self.table[r as usize])
    }

    pub fn image(&self, a: Mask) -> Mask {
        iter_bits(a).fold(0, |acc, i| acc | 1 << self.table[i])
    }

    pub fn preimage(&self, a: Mask) -> Mask {
        self.table.iter().enumerate().filter(|(_, &v)| a >> v & 1 == 1).fold(0, |acc, (i, _)| acc | 1 << i)
    }

    pub fn image_set(&self, set: &PointSet) -> PointSet {
        set.map(|x| self.apply(x))
    }

    /// `f(a + b) = f(a) + f(b)` for all pairs.
    pub fn is_additive(&self) -> bool {
        let n = self.n();
        (0..n).all(|a| {
            (0..n).all(|b| self.table[((a + b) % n) as usize] == (self.table[a as usize] + self.table[b as usize]) % n)
        })
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.table.len()];
        self.table.iter().all(|&v| !std::mem::replace(&mut seen[v as usize], true))
    }

    /// `self ∘ inner`, i.e. `x -> self(inner(x))`.
    pub fn after(&self, inner: &TabulatedFunction) -> Self {
        TabulatedFunction { model: self.model, table: inner.table.iter().map(|&x| self.table[x as usize]).collect() }
    }

    /// Pointwise sum `x -> f(x) + g(x)`.
    pub fn plus(&self, other: &TabulatedFunction) -> Self {
        let n = self.n();
        TabulatedFunction {
            model: self.model,
            table: self.table.iter().zip(&other.table).map(|(a, b)| (a + b) % n).collect(),
        }
    }

    /// Pointwise negation `x -> -f(x)`.
    pub fn negated(&self) -> Self {
        let n = self.n();
        TabulatedFunction { model: self.model, table: self.table.iter().map(|&a| (n - a) % n).collect() }
    }
}

impl fmt::Display for TabulatedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.table.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for TabulatedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]@{}", self.model)
    }
}

impl Serialize for TabulatedFunction {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A sequence with `G(x) = point` whose image does not G-converge to `f(point)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContinuityWitness {
    pub point: GroupElement,
    pub sequence: EvPerSeq,
    /// `G(f(x))`, `None` when the image leaves the domain.
    pub image_value: Option<GroupElement>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContinuityVerdict {
    pub continuous: bool,
    pub witness: Option<ContinuityWitness>,
    /// Every periodic sequence up to this period was covered.
    pub verified_up_to_period: usize,
    /// True when the period bound is known to catch every counterexample.
    pub complete: bool,
}

/// Which sequences the continuity question ranges over.
#[derive(Debug, Clone, Default)]
pub struct ContinuityScope<'a> {
    /// Restrict sequence values to this set (continuity on a subset).
    pub domain: Option<&'a PointSet>,
    /// Only ask about this limit point.
    pub at: Option<&'a GroupElement>,
}

fn check_inputs(method: &MethodDescriptor, f: &TabulatedFunction) -> Result<KernelBank> {
    let bank = KernelBank::compile(method, f.model())?;
    Ok(bank)
}

fn build_witness(
    method: &MethodDescriptor,
    f: &TabulatedFunction,
    point: GroupElement,
    cycle: Vec<GroupElement>,
) -> Result<ContinuityWitness> {
    let sequence = EvPerSeq::periodic(f.model(), cycle)?;
    let image = sequence.map(f.model(), |x| f.apply(x));
    let image_value = evaluate(method, &image)?;
    Ok(ContinuityWitness { point, sequence, image_value })
}

/// Exact continuity decision through window-graph components.
pub fn decide_continuity(
    method: &MethodDescriptor,
    f: &TabulatedFunction,
    scope: &ContinuityScope<'_>,
) -> Result<ContinuityVerdict> {
    let bank = check_inputs(method, f)?;
    let alphabet: Vec<GroupElement> = match scope.domain {
        Some(domain) => domain.iter().cloned().collect(),
        None => f.model().elements().expect("cyclic model"),
    };
    let graph = bank.graph(alphabet)?;
    let source_labels = bank.labels(&graph);
    let image_labels = bank.labels_by(&graph, |x| f.apply(x));
    let mixing = if bank_components(method) > 1 { 2 } else { 1 };
    let bound = graph.node_count() * mixing;
    for (label, nodes) in window::label_classes(&source_labels) {
        let u = bank.value(&label);
        if scope.at.is_some_and(|at| *at != u) {
            continue;
        }
        let target = f.apply(&u);
        for component in graph.cyclic_components(&window::membership(&graph, &nodes)) {
            let first = component[0];
            let other = component.iter().copied().find(|&v| image_labels[v] != image_labels[first]);
            let stops = match other {
                Some(v) => vec![first, v],
                None if bank.value(&image_labels[first]) != target => vec![first],
                None => continue,
            };
            let cycle = graph.walk_to_cycle(&graph.closed_walk(&component, &stops));
            let witness = build_witness(method, f, u, cycle)?;
            return Ok(ContinuityVerdict {
                continuous: false,
                witness: Some(witness),
                verified_up_to_period: bound,
                complete: true,
            });
        }
    }
    Ok(ContinuityVerdict { continuous: true, witness: None, verified_up_to_period: bound, complete: true })
}

fn bank_components(method: &MethodDescriptor) -> usize {
    method.kernel_bank().map_or(1, |bank| bank.len())
}

/// Default enumeration budget for [`is_continuous_bounded`].
pub const DEFAULT_SEQUENCE_BUDGET: u128 = 1 << 21;

/// Exhaustive check over all periodic sequences of period `<= period_bound`.
pub fn is_continuous_bounded(
    method: &MethodDescriptor,
    f: &TabulatedFunction,
    period_bound: usize,
    budget: u128,
) -> Result<ContinuityVerdict> {
    check_inputs(method, f)?;
    if period_bound == 0 {
        return Err(Error::OutOfRange("period bound must be at least 1".into()));
    }
    let model = f.model();
    let n = model.modulus().expect("cyclic model") as u128;
    let needed = (1..=period_bound as u32).try_fold(0u128, |acc, p| n.checked_pow(p).and_then(|c| acc.checked_add(c)));
    match needed {
        Some(needed) if needed <= budget => {}
        needed => return Err(Error::BudgetExceeded { needed: needed.unwrap_or(u128::MAX), budget }),
    }
    let universe = model.elements().expect("cyclic model");
    for period in 1..=period_bound {
        let mut digits = vec![0usize; period];
        loop {
            let cycle: Vec<GroupElement> = digits.iter().map(|&d| universe[d].clone()).collect();
            let x = EvPerSeq::periodic(model, cycle.clone())?;
            if let Some(u) = evaluate(method, &x)? {
                let image = x.map(model, |t| f.apply(t));
                let image_value = evaluate(method, &image)?;
                if image_value.as_ref() != Some(&f.apply(&u)) {
                    return Ok(ContinuityVerdict {
                        continuous: false,
                        witness: Some(ContinuityWitness { point: u, sequence: x, image_value }),
                        verified_up_to_period: period_bound,
                        complete: false,
                    });
                }
            }
            // odometer increment
            let mut i = period;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < universe.len() {
                    break;
                }
                digits[i] = 0;
            }
            if digits.iter().all(|&d| d == 0) {
                break;
            }
        }
    }
    Ok(ContinuityVerdict { continuous: true, witness: None, verified_up_to_period: period_bound, complete: false })
}

/// An open (closed) set whose image is not open (closed).
pub fn open_map_violation(space: &FiniteSpace, f: &TabulatedFunction) -> Option<Mask> {
    space.all_subsets().find(|&a| space.is_open(a) && !space.is_open(f.image(a)))
}

pub fn closed_map_violation(space: &FiniteSpace, f: &TabulatedFunction) -> Option<Mask> {
    space.all_subsets().find(|&a| space.is_closed(a) && !space.is_closed(f.image(a)))
}

pub fn is_open_map(space: &FiniteSpace, f: &TabulatedFunction) -> bool {
    open_map_violation(space, f).is_none()
}

pub fn is_closed_map(space: &FiniteSpace, f: &TabulatedFunction) -> bool {
    closed_map_violation(space, f).is_none()
}
