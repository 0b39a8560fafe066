//! G-sequential closure of finite sets and the notions derived from it.
//!
//! For kernel methods (and `lim`, and sums of those) a point `l` lies in the
//! closure of a finite set `A` iff the window graph over `A` has a cycle
//! inside some label class whose value is `l`. Preambles never matter since
//! the value only depends on the tail, so periodic witnesses of period at
//! most `|A|^w` are enough.
//!
//! Open sets, interiors, boundaries and density quantify over complements,
//! so they are only offered on the finite models Z_n.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::group::{GroupElement, GroupModel};
use crate::methods::MethodDescriptor;
use crate::rational::Rational;
use crate::window::{self, KernelBank};

/// A finite set of points of one model, kept sorted.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet {
    model: GroupModel,
    elements: BTreeSet<GroupElement>,
}

impl PointSet {
    pub fn new(model: GroupModel, elements: impl IntoIterator<Item = GroupElement>) -> Result<Self> {
        let elements: BTreeSet<_> = elements.into_iter().collect();
        for e in &elements {
            model.check(e)?;
        }
        Ok(PointSet { model, elements })
    }

    pub(crate) fn from_checked(model: GroupModel, elements: BTreeSet<GroupElement>) -> Self {
        PointSet { model, elements }
    }

    pub fn empty(model: GroupModel) -> Self {
        PointSet { model, elements: BTreeSet::new() }
    }

    /// The whole group; finite models only.
    pub fn universe(model: GroupModel) -> Result<Self> {
        let elements = model.elements().ok_or_else(infinite_universe)?;
        Ok(PointSet { model, elements: elements.into_iter().collect() })
    }

    /// Parses a comma separated list such as `0,1/2,1`.
    pub fn parse(model: GroupModel, text: &str) -> Result<Self> {
        let text = text.trim();
        let text = text.strip_prefix('{').and_then(|t| t.strip_suffix('}')).unwrap_or(text);
        Self::new(model, model.parse_list(text)?)
    }

    pub fn model(&self) -> GroupModel {
        self.model
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        self.elements.contains(e)
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroupElement> {
        self.elements.iter()
    }

    pub fn elements(&self) -> &BTreeSet<GroupElement> {
        &self.elements
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.elements.is_subset(&other.elements)
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        self.with(self.elements.union(&other.elements).cloned().collect())
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        self.with(self.elements.intersection(&other.elements).cloned().collect())
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        self.with(self.elements.difference(&other.elements).cloned().collect())
    }

    pub fn complement(&self) -> Result<PointSet> {
        Ok(PointSet::universe(self.model)?.difference(self))
    }

    /// Elementwise sum `{a + b}`.
    pub fn sum(&self, other: &PointSet) -> PointSet {
        let model = self.model;
        self.with(self.elements.iter().flat_map(|a| other.elements.iter().map(move |b| model.add(a, b))).collect())
    }

    pub fn map(&self, f: impl Fn(&GroupElement) -> GroupElement) -> PointSet {
        self.with(self.elements.iter().map(f).collect())
    }

    fn with(&self, elements: BTreeSet<GroupElement>) -> PointSet {
        PointSet { model: self.model, elements }
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}@{}", self.model)
    }
}

impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.elements.iter())
    }
}

fn infinite_universe() -> Error {
    Error::Unsupported("the rational line has an infinite complement; use a cyclic universe".into())
}

#[derive(Debug, Clone)]
pub struct TopologyConfig {
    /// Largest universe for which interiors enumerate all subsets.
    pub universe_cap: usize,
    /// Longest cycle whose mean enters the Cesàro lower approximation.
    pub cesaro_cycle_bound: usize,
    pub execution: Execution,
}

impl Default for TopologyConfig {
    fn default() -> Self {
        TopologyConfig { universe_cap: 6, cesaro_cycle_bound: 4, execution: Execution::default() }
    }
}

/// A closure together with whether it is exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Closure {
    #[serde(rename = "closure")]
    pub set: PointSet,
    /// False only for the Cesàro lower approximation.
    pub complete: bool,
}

pub fn closure(method: &MethodDescriptor, set: &PointSet) -> Result<Closure> {
    closure_with(method, set, &TopologyConfig::default())
}

pub fn closure_with(method: &MethodDescriptor, set: &PointSet, config: &TopologyConfig) -> Result<Closure> {
    let model = set.model();
    method.check_model(model)?;
    if *method == MethodDescriptor::Cesaro {
        return Ok(cesaro_lower_closure(set, config.cesaro_cycle_bound));
    }
    let bank = KernelBank::compile(method, model)?;
    let graph = bank.graph(set.iter().cloned().collect())?;
    let classes: Vec<_> = window::label_classes(&bank.labels(&graph)).into_iter().collect();
    let hits = exec::map_collect(config.execution, &classes, |(label, nodes)| {
        graph.has_cycle(&window::membership(&graph, nodes)).then(|| bank.value(label))
    });
    Ok(Closure { set: PointSet::from_checked(model, hits.into_iter().flatten().collect()), complete: true })
}

/// Means of all cycles of length at most `bound` over `set`. The mean of a
/// cycle only depends on its multiset of values, so multisets are enumerated.
fn cesaro_lower_closure(set: &PointSet, bound: usize) -> Closure {
    let values: Vec<&Rational> = set.iter().filter_map(GroupElement::as_rational).collect();
    let mut means = BTreeSet::new();
    // counts[i] = multiplicity of values[i]
    fn walk(
        values: &[&Rational],
        start: usize,
        len: usize,
        total: &Rational,
        bound: usize,
        out: &mut BTreeSet<GroupElement>,
    ) {
        if len > 0 {
            out.insert(GroupElement::Rational(total / &Rational::from_integer(len as i64)));
        }
        if len == bound {
            return;
        }
        for i in start..values.len() {
            walk(values, i, len + 1, &(total + values[i]), bound, out);
        }
    }
    walk(&values, 0, 0, &Rational::zero(), bound.max(1), &mut means);
    Closure { set: PointSet::from_checked(set.model(), means), complete: set.len() <= 1 }
}

pub fn is_closed(method: &MethodDescriptor, set: &PointSet) -> Result<bool> {
    if *method == MethodDescriptor::Cesaro {
        method.check_model(set.model())?;
        // the closure of two or more points is a whole rational interval
        return Ok(set.len() <= 1);
    }
    Ok(closure(method, set)?.set.is_subset(set))
}

fn finite_complement(set: &PointSet) -> Result<PointSet> {
    if !set.model().is_finite() {
        return Err(infinite_universe());
    }
    set.complement()
}

pub fn is_open(method: &MethodDescriptor, set: &PointSet) -> Result<bool> {
    is_closed(method, &finite_complement(set)?)
}

/// Union of all open subsets of `set`, by enumerating them.
pub fn interior(method: &MethodDescriptor, set: &PointSet) -> Result<PointSet> {
    interior_with(method, set, &TopologyConfig::default())
}

pub fn interior_with(method: &MethodDescriptor, set: &PointSet, config: &TopologyConfig) -> Result<PointSet> {
    let model = set.model();
    let size = model.modulus().ok_or_else(infinite_universe)?;
    if size > config.universe_cap as u64 {
        return Err(Error::UniverseTooLarge { size, cap: config.universe_cap });
    }
    method.check_model(model)?;
    let points: Vec<&GroupElement> = set.iter().collect();
    let masks: Vec<u64> = (0..1u64 << points.len()).collect();
    let open_subsets = exec::try_map_collect(config.execution, &masks, |&mask| {
        let subset = PointSet::from_checked(
            model,
            points.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| (*e).clone()).collect(),
        );
        Ok::<_, Error>(is_open(method, &subset)?.then_some(subset))
    })?;
    Ok(open_subsets.into_iter().flatten().fold(PointSet::empty(model), |acc, u| acc.union(&u)))
}

/// `closure(A) ∩ closure(X \ A)`.
pub fn boundary(method: &MethodDescriptor, set: &PointSet) -> Result<PointSet> {
    let complement = finite_complement(set)?;
    Ok(closure(method, set)?.set.intersection(&closure(method, &complement)?.set))
}

pub fn is_dense(method: &MethodDescriptor, set: &PointSet) -> Result<bool> {
    let universe = PointSet::universe(set.model()).map_err(|_| infinite_universe())?;
    Ok(closure(method, set)?.set == universe)
}

/// `[closure(A), closure(closure(A)), ...]`, `k` entries.
pub fn closure_iterate(method: &MethodDescriptor, set: &PointSet, k: usize) -> Result<Vec<PointSet>> {
    if k == 0 {
        return Err(Error::OutOfRange("closure_iterate needs k >= 1".into()));
    }
    let mut out = Vec::with_capacity(k);
    let mut current = set.clone();
    for _ in 0..k {
        current = closure(method, &current)?.set;
        out.push(current.clone());
    }
    Ok(out)
}
