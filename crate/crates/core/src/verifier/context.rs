//! Everything a check needs about one (universe, method) pair, computed once.

use crate::continuity::{decide_continuity, ContinuityScope, TabulatedFunction};
use crate::error::Result;
use crate::exec::Execution;
use crate::group::{GroupElement, GroupModel};
use crate::lattice::{iter_bits, mask_to_set, FiniteSpace, Mask};
use crate::methods::{is_regular_on, MethodDescriptor};
use crate::window::{self, KernelBank};

/// Function tables are enumerated in full only up to this universe size.
pub const MAX_FUNCTION_SPACE: u64 = 5;

pub(crate) struct FunctionTable {
    pub all: Vec<TabulatedFunction>,
    pub continuous: Vec<bool>,
    pub open_map: Vec<bool>,
    pub closed_map: Vec<bool>,
    pub bound: usize,
}

pub(crate) struct Ctx {
    pub space: FiniteSpace,
    pub regular: bool,
    pub open_sets: Vec<Mask>,
    pub closed_sets: Vec<Mask>,
    pub functions: Option<FunctionTable>,
}

impl Ctx {
    pub fn new(method: &MethodDescriptor, model: GroupModel) -> Result<Self> {
        let space = FiniteSpace::new(method, model, Execution::Sequential)?;
        let regular = is_regular_on(method, model)?;
        let n = space.size() as u64;
        let functions = if n <= MAX_FUNCTION_SPACE {
            let all = TabulatedFunction::all(model);
            let mut continuous = Vec::with_capacity(all.len());
            let mut bound = 0;
            for f in &all {
                let verdict = decide_continuity(method, f, &ContinuityScope::default())?;
                bound = verdict.verified_up_to_period;
                continuous.push(verdict.continuous);
            }
            let open_map = all.iter().map(|f| crate::continuity::is_open_map(&space, f)).collect();
            let closed_map = all.iter().map(|f| crate::continuity::is_closed_map(&space, f)).collect();
            Some(FunctionTable { all, continuous, open_map, closed_map, bound })
        } else {
            None
        };
        Ok(Ctx { open_sets: space.open_sets(), closed_sets: space.closed_sets(), space, regular, functions })
    }

    pub fn model(&self) -> GroupModel {
        self.space.model()
    }

    pub fn method(&self) -> &MethodDescriptor {
        self.space.method()
    }

    pub fn table(&self) -> &FunctionTable {
        self.functions.as_ref().expect("function checks are skipped without a table")
    }

    /// Position of `f` in [`TabulatedFunction::all`].
    pub fn index(&self, f: &TabulatedFunction) -> usize {
        let n = self.space.size();
        f.table().iter().fold(0, |acc, &v| acc * n + v as usize)
    }

    pub fn continuous(&self, f: &TabulatedFunction) -> bool {
        self.table().continuous[self.index(f)]
    }

    pub fn open_map(&self, f: &TabulatedFunction) -> bool {
        self.table().open_map[self.index(f)]
    }

    pub fn closed_map(&self, f: &TabulatedFunction) -> bool {
        self.table().closed_map[self.index(f)]
    }

    /// Continuity for sequences whose terms lie in `domain`.
    pub fn continuous_on(&self, f: &TabulatedFunction, domain: Mask) -> bool {
        let set = mask_to_set(self.model(), domain);
        let scope = ContinuityScope { domain: Some(&set), at: None };
        decide_continuity(self.method(), f, &scope).expect("method validated with the context").continuous
    }

    pub fn continuous_at(&self, f: &TabulatedFunction, point: u64) -> bool {
        let point = GroupElement::Residue(point);
        let scope = ContinuityScope { domain: None, at: Some(&point) };
        decide_continuity(self.method(), f, &scope).expect("method validated with the context").continuous
    }

    /// True when every sequence with limit `l` under the method takes the
    /// value `l` infinitely often.
    pub fn is_subsequential(&self) -> bool {
        let model = self.model();
        let bank = KernelBank::compile(self.method(), model).expect("method validated with the context");
        let graph = bank.graph(model.elements().expect("cyclic model")).expect("small graph");
        let labels = bank.labels(&graph);
        graph.alphabet().iter().all(|l| {
            let avoiding: Vec<usize> = (0..graph.node_count())
                .filter(|&v| bank.value(&labels[v]) == *l && graph.tuple(v).into_iter().all(|t| t != l))
                .collect();
            !graph.has_cycle(&window::membership(&graph, &avoiding))
        })
    }

    pub fn equalizer(&self, f: &TabulatedFunction, g: &TabulatedFunction) -> Mask {
        (0..self.space.size()).filter(|&i| f.table()[i] == g.table()[i]).fold(0, |acc, i| acc | 1 << i)
    }

    pub fn has_neighborhood_inside(&self, a: usize, set: Mask) -> bool {
        self.open_sets.iter().any(|&u| u >> a & 1 == 1 && u & !set == 0)
    }

    pub fn closed_supersets_meet(&self, a: Mask) -> Mask {
        self.closed_sets.iter().filter(|&&k| a & !k == 0).fold(self.space.full(), |acc, &k| acc & k)
    }

    pub fn points(&self, mask: Mask) -> impl Iterator<Item = usize> {
        iter_bits(mask)
    }
}
