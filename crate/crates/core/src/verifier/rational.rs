//! The few checks that run on the rational line, over small random sets of
//! dyadic points.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha20Rng;

use crate::error::Result;
use crate::group::{GroupElement, GroupModel};
use crate::methods::MethodDescriptor;
use crate::rational::Rational;
use crate::topology::{self, PointSet};

use super::checks::Gate;

pub(crate) type SetPredicate = fn(&MethodDescriptor, &[PointSet]) -> Result<bool>;

pub(crate) struct RationalCheck {
    pub name: &'static str,
    pub gate: Gate,
    /// Instances tried before the random ones.
    pub pinned: fn() -> Vec<Vec<PointSet>>,
    /// Number of sets per random instance, as an inclusive range.
    pub arity: (usize, usize),
    pub violated: SetPredicate,
}

const Q: GroupModel = GroupModel::RationalLine;

fn point(p: i64, q: i64) -> GroupElement {
    GroupElement::Rational(Rational::new(p, q))
}

fn set(points: &[(i64, i64)]) -> PointSet {
    PointSet::new(Q, points.iter().map(|&(p, q)| point(p, q))).expect("rational points")
}

/// Up to two points drawn from `{-1, 0, 1/2, 1, 2}`.
pub(crate) fn draw_set(rng: &mut ChaCha20Rng) -> PointSet {
    let pool = [(-1, 1), (0, 1), (1, 2), (1, 1), (2, 1)];
    let size = rng.gen_range(0..=2);
    let chosen: Vec<(i64, i64)> = pool.choose_multiple(rng, size).copied().collect();
    set(&chosen)
}

fn closure(method: &MethodDescriptor, a: &PointSet) -> Result<PointSet> {
    Ok(topology::closure(method, a)?.set)
}

fn is_closed(method: &MethodDescriptor, a: &PointSet) -> Result<bool> {
    Ok(closure(method, a)?.is_subset(a))
}

fn sum_all(sets: &[PointSet]) -> PointSet {
    sets.iter().skip(1).fold(sets[0].clone(), |acc, a| acc.sum(a))
}

fn no_pins() -> Vec<Vec<PointSet>> {
    Vec::new()
}

pub(crate) fn rational_checks() -> Vec<RationalCheck> {
    vec![
        RationalCheck {
            name: "intersections-closed",
            gate: Gate::Always,
            pinned: no_pins,
            arity: (1, 3),
            violated: |m, s| {
                for a in s {
                    if !is_closed(m, a)? {
                        return Ok(false);
                    }
                }
                let meet = s.iter().skip(1).fold(s[0].clone(), |acc, a| acc.intersection(a));
                Ok(!is_closed(m, &meet)?)
            },
        },
        RationalCheck {
            name: "closure-family-bounds/i",
            gate: Gate::Regular,
            pinned: no_pins,
            arity: (1, 3),
            violated: |m, s| {
                let mut union = PointSet::empty(Q);
                for a in s {
                    union = union.union(&closure(m, a)?);
                }
                let all = s.iter().fold(PointSet::empty(Q), |acc, a| acc.union(a));
                Ok(!union.is_subset(&closure(m, &all)?))
            },
        },
        RationalCheck {
            name: "closure-family-bounds/ii",
            gate: Gate::Regular,
            pinned: no_pins,
            arity: (1, 3),
            violated: |m, s| {
                let meet = s.iter().skip(1).fold(s[0].clone(), |acc, a| acc.intersection(a));
                let mut closures = closure(m, &s[0])?;
                for a in &s[1..] {
                    closures = closures.intersection(&closure(m, a)?);
                }
                Ok(!closure(m, &meet)?.is_subset(&closures))
            },
        },
        RationalCheck {
            name: "closure-family-bounds/iii",
            gate: Gate::Regular,
            pinned: no_pins,
            arity: (1, 3),
            violated: |m, s| {
                let closures = s.iter().map(|a| closure(m, a)).collect::<Result<Vec<_>>>()?;
                Ok(!sum_all(&closures).is_subset(&closure(m, &sum_all(s))?))
            },
        },
        RationalCheck {
            name: "union-of-closed",
            gate: Gate::Falsifiable,
            pinned: || vec![vec![set(&[(0, 1)]), set(&[(1, 1)])]],
            arity: (2, 2),
            violated: |m, s| Ok(is_closed(m, &s[0])? && is_closed(m, &s[1])? && !is_closed(m, &s[0].union(&s[1]))?),
        },
        RationalCheck {
            name: "closure-idempotence",
            gate: Gate::Falsifiable,
            pinned: || vec![vec![set(&[(0, 1), (1, 1)])]],
            arity: (1, 1),
            violated: |m, s| {
                let once = closure(m, &s[0])?;
                Ok(closure(m, &once)? != once)
            },
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pinned_union_witness_under_averaging() {
        let avg = MethodDescriptor::averaging();
        let checks = rational_checks();
        let union = checks.iter().find(|c| c.name == "union-of-closed").unwrap();
        let pins = (union.pinned)();
        assert!((union.violated)(&avg, &pins[0]).unwrap());
        assert!(!(union.violated)(&MethodDescriptor::Lim, &pins[0]).unwrap());
        let idem = checks.iter().find(|c| c.name == "closure-idempotence").unwrap();
        assert!((idem.violated)(&avg, &(idem.pinned)()[0]).unwrap());
    }
}
