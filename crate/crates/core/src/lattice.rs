//! All subsets of a small Z_n as bitmasks, with the G-closure of every subset
//! tabulated once. Bit `i` stands for the residue `i`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::group::{GroupElement, GroupModel};
use crate::methods::MethodDescriptor;
use crate::topology::{self, PointSet, TopologyConfig};

pub type Mask = u64;

/// Largest Z_n a [`FiniteSpace`] will tabulate.
pub const MAX_SPACE: u64 = 12;

#[derive(Debug, Clone)]
pub struct FiniteSpace {
    model: GroupModel,
    method: MethodDescriptor,
    size: usize,
    closures: Vec<Mask>,
    open: Vec<bool>,
    interiors: Vec<Mask>,
}

pub fn iter_bits(mask: Mask) -> impl Iterator<Item = usize> {
    (0..Mask::BITS as usize).filter(move |i| mask >> i & 1 == 1)
}

/// All submasks of `mask`, including 0 and `mask` itself.
pub fn submasks(mask: Mask) -> impl Iterator<Item = Mask> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let current = next?;
        next = if current == 0 { None } else { Some((current - 1) & mask) };
        Some(current)
    })
}

impl FiniteSpace {
    pub fn new(method: &MethodDescriptor, model: GroupModel, execution: Execution) -> Result<Self> {
        let size =
            model.modulus().ok_or_else(|| Error::Unsupported("subset lattices need a cyclic universe".into()))?;
        if size > MAX_SPACE {
            return Err(Error::UniverseTooLarge { size, cap: MAX_SPACE as usize });
        }
        method.check_model(model)?;
        let size = size as usize;
        let masks: Vec<Mask> = (0..1 << size).collect();
        let config = TopologyConfig { execution: Execution::Sequential, ..TopologyConfig::default() };
        let closures = exec::try_map_collect(execution, &masks, |&mask| {
            let set = mask_to_set(model, mask);
            topology::closure_with(method, &set, &config).map(|c| set_to_mask(&c.set))
        })?;
        let full = (1 << size) - 1;
        let closed: Vec<bool> = masks.iter().map(|&m| closures[m as usize] & !m == 0).collect();
        let open: Vec<bool> = masks.iter().map(|&m| closed[(full & !m) as usize]).collect();
        let interiors =
            masks.iter().map(|&m| submasks(m).filter(|&s| open[s as usize]).fold(0, |acc, s| acc | s)).collect();
        Ok(FiniteSpace { model, method: method.clone(), size, closures, open, interiors })
    }

    pub fn model(&self) -> GroupModel {
        self.model
    }

    pub fn method(&self) -> &MethodDescriptor {
        &self.method
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn full(&self) -> Mask {
        (1 << self.size) - 1
    }

    pub fn all_subsets(&self) -> impl Iterator<Item = Mask> {
        0..=self.full()
    }

    pub fn complement(&self, a: Mask) -> Mask {
        self.full() & !a
    }

    pub fn closure(&self, a: Mask) -> Mask {
        self.closures[a as usize]
    }

    pub fn is_closed(&self, a: Mask) -> bool {
        self.closure(a) & !a == 0
    }

    pub fn is_open(&self, a: Mask) -> bool {
        self.open[a as usize]
    }

    pub fn interior(&self, a: Mask) -> Mask {
        self.interiors[a as usize]
    }

    pub fn boundary(&self, a: Mask) -> Mask {
        self.closure(a) & self.closure(self.complement(a))
    }

    pub fn is_dense(&self, a: Mask) -> bool {
        self.closure(a) == self.full()
    }

    pub fn open_sets(&self) -> Vec<Mask> {
        self.all_subsets().filter(|&a| self.is_open(a)).collect()
    }

    pub fn closed_sets(&self) -> Vec<Mask> {
        self.all_subsets().filter(|&a| self.is_closed(a)).collect()
    }

    /// Elementwise sum `{a + b}` in Z_n.
    pub fn sum(&self, a: Mask, b: Mask) -> Mask {
        let n = self.size;
        iter_bits(a).flat_map(|i| iter_bits(b).map(move |j| 1 << ((i + j) % n))).fold(0, |acc, bit| acc | bit)
    }

    pub fn to_set(&self, mask: Mask) -> PointSet {
        mask_to_set(self.model, mask)
    }
}

pub fn mask_to_set(model: GroupModel, mask: Mask) -> PointSet {
    let elements: BTreeSet<GroupElement> = iter_bits(mask).map(|i| GroupElement::Residue(i as u64)).collect();
    PointSet::new(model, elements).expect("mask fits the model")
}

/// Bitmask of a set of residues.
pub fn set_to_mask(set: &PointSet) -> Mask {
    set.iter().filter_map(GroupElement::as_residue).fold(0, |acc, r| acc | 1 << r)
}
