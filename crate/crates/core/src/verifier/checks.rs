//! The check table for finite cyclic universes.
//!
//! A check names the shape of its inputs through [`Slot`]s and a predicate
//! that returns `true` when an instance violates the statement. The same
//! predicate drives both the search and witness replay.

use crate::continuity::TabulatedFunction;
use crate::lattice::Mask;

use super::context::Ctx;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Gate {
    /// Asserted for every method.
    Always,
    /// Asserted for regular methods, observed otherwise.
    Regular,
    /// Expected to be refuted somewhere in the run.
    Falsifiable,
    /// Never asserted.
    Observe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SetKind {
    Any,
    NonEmpty,
    Open,
    NonEmptyOpen,
    Closed,
    Dense,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Pool {
    Any,
    Continuous,
    OpenMap,
    ClosedMap,
    Additive,
    AdditiveContinuous,
    Bijective,
    ContinuousBijection,
    Translation,
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Slot {
    Set(SetKind),
    /// A random family of one to four sets; must be the only slot.
    Family(SetKind),
    Func(Pool),
}

pub(crate) type Predicate = fn(&Ctx, &[Mask], &[TabulatedFunction]) -> bool;

pub(crate) struct Check {
    pub name: &'static str,
    pub gate: Gate,
    pub slots: &'static [Slot],
    pub uses_continuity: bool,
    pub violated: Predicate,
}

impl SetKind {
    pub fn admits(self, ctx: &Ctx, a: Mask) -> bool {
        let s = &ctx.space;
        match self {
            SetKind::Any => true,
            SetKind::NonEmpty => a != 0,
            SetKind::Open => s.is_open(a),
            SetKind::NonEmptyOpen => a != 0 && s.is_open(a),
            SetKind::Closed => s.is_closed(a),
            SetKind::Dense => s.is_dense(a),
        }
    }
}

impl Pool {
    pub fn admits(self, ctx: &Ctx, index: usize) -> bool {
        let t = ctx.table();
        let f = &t.all[index];
        match self {
            Pool::Any => true,
            Pool::Continuous => t.continuous[index],
            Pool::OpenMap => t.open_map[index],
            Pool::ClosedMap => t.closed_map[index],
            Pool::Additive => f.is_additive(),
            Pool::AdditiveContinuous => f.is_additive() && t.continuous[index],
            Pool::Bijective => f.is_bijective(),
            Pool::ContinuousBijection => f.is_bijective() && t.continuous[index],
            Pool::Translation => {
                let n = f.table().len() as u64;
                f.table().iter().enumerate().all(|(i, &v)| v == (f.table()[0] + i as u64) % n)
            }
            Pool::Constant => f.table().iter().all(|&v| v == f.table()[0]),
        }
    }
}

fn subset(a: Mask, b: Mask) -> bool {
    a & !b == 0
}

fn all_subsets_satisfy(ctx: &Ctx, p: impl Fn(Mask) -> bool) -> bool {
    ctx.space.all_subsets().all(p)
}

fn meet(sets: &[Mask], full: Mask) -> Mask {
    sets.iter().fold(full, |acc, &a| acc & a)
}

fn join(sets: &[Mask]) -> Mask {
    sets.iter().fold(0, |acc, &a| acc | a)
}

fn either_map_violation(ctx: &Ctx, premise_open: bool, premise_closed: bool, target: &TabulatedFunction) -> bool {
    (premise_open && !ctx.open_map(target)) || (premise_closed && !ctx.closed_map(target))
}

use Gate::*;
use Pool as P;
use SetKind as K;
use Slot::{Family, Func, Set};

pub(crate) fn finite_checks() -> Vec<Check> {
    vec![
        Check {
            name: "intersections-closed",
            gate: Always,
            slots: &[Family(K::Closed)],
            uses_continuity: false,
            violated: |c, s, _| !c.space.is_closed(meet(s, c.space.full())),
        },
        Check {
            name: "unions-open",
            gate: Always,
            slots: &[Family(K::Open)],
            uses_continuity: false,
            violated: |c, s, _| !c.space.is_open(join(s)),
        },
        Check {
            name: "open-iff-neighborhoods",
            gate: Always,
            slots: &[Set(K::Any)],
            uses_continuity: false,
            violated: |c, s, _| {
                let a = s[0];
                c.space.is_open(a) != c.points(a).all(|p| c.has_neighborhood_inside(p, a))
            },
        },
        Check {
            name: "interior-properties/i",
            gate: Always,
            slots: &[Set(K::Any)],
            uses_continuity: false,
            violated: |c, s, _| !c.space.is_open(c.space.interior(s[0])),
        },
        Check {
            name: "interior-properties/ii",
            gate: Always,
            slots: &[Set(K::Any)],
            uses_continuity: false,
            violated: |c, s, _| !subset(c.space.interior(s[0]), s[0]),
        },
        Check {
            name: "interior-properties/iii",
            gate: Always,
            slots: &[Set(K::Any)],
            uses_continuity: false,
            violated: |c, s, _| c.space.is_open(s[0]) != (c.space.interior(s[0]) == s[0]),
        },
        Check {
            name: "interior-properties/iv",
            gate: Always,
            slots: &[Set(K::Any), Set(K::Any)],
            uses_continuity: false,
            // the pair is read as A and A ∪ B so that A ⊆ B always holds
            violated: |c, s, _| !subset(c.space.interior(s[0]), c.space.interior(s[0] | s[1])),
        },
        Check {
            name: "interior-properties/v",
            gate: Always,
            slots: &[Set(K::Any), Set(K::Any)],
            uses_continuity: false,
            violated: |c, s, _| {
                let sp = &c.space;
                !subset(sp.interior(s[0] & s[1]), sp.interior(s[0]) & sp.interior(s[1]))
            },
        },
        Check {
            name: "interior-properties/vi",
            gate: Always,
            slots: &[Set(K::Any), Set(K::Any)],
            uses_continuity: false,
            violated: |c, s, _| {
                let sp = &c.space;
                !subset(sp.interior(s[0]) | sp.interior(s[1]), sp.interior(s[0] | s[1]))
            },
        },
        Check {
            name: "interior-of-families/i",
            gate: Always,
            slots: &[Family(K::Any)],
            uses_continuity: false,
            violated: |c, s, _| {
                let sp = &c.space;
                let interiors: Vec<Mask> = s.iter().map(|&a| sp.interior(a)).collect();
                !subset(sp.interior(meet(s, sp.full())), meet(&interiors, sp.full()))
            },
        },
        Check {
            name: "interior-of-families/ii",
            gate: Always,
            slots: &[Family(K::Any)],
            uses_continuity: false,
            violated: |c, s, _| {
                let interiors: Vec<Mask> = s.iter().map(|&a| c.space.interior(a)).collect();
                !subset(join(&interiors), c.space.interior(join(s)))
            },
        },
        Check {
            name: "closed-map-criterion",
            gate: Regular,
            slots: &[Func(P::Any)],
            uses_continuity: false,
            violated: |c, _, f| {
                let sp = &c.space;
                let criterion =
                    all_subsets_satisfy(c, |a| subset(sp.closure(f[0].image(a)), f[0].image(sp.closure(a))));
                criterion && !c.closed_map(&f[0])
            },
        },
        Check {
            name: "open-map-iff",
            gate: Always,
            slots: &[Func(P::Any)],
            uses_continuity: false,
            violated: |c, _, f| {
                let sp = &c.space;
                let criterion =
                    all_subsets_satisfy(c, |a| subset(f[0].image(sp.interior(a)), sp.interior(f[0].image(a))));
                criterion != c.open_map(&f[0])
            },
        },
        Check {
            name: "closure-vs-closed-supersets",
            gate: Regular,
            slots: &[Set(K::Any)],
            uses_continuity: false,
            violated: |c, s, _| !subset(c.space.closure(s[0]), c.closed_supersets_meet(s[0])),
        },
        Check {
            name: "neighborhood-meets",
            gate: Regular,
            slots: &[Set(K::Any), Set(K::Open)],
            uses_continuity: false,
            violated: |c, s, _| c.space.closure(s[0]) & s[1] != 0 && s[0] & s[1] == 0,
        },
        Check {
            name: "dense-meets-open",
            gate: Always,
            slots: &[Set(K::Dense), Set(K::NonEmptyOpen)],
            uses_continuity: false,
            violated: |_, s, _| s[0] & s[1] == 0,
        },
        Check {
            name: "complement-interior",
            gate: Always,
            slots: &[Set(K::Any)],
            uses_continuity: false,
            violated: |c, s, _| {
                let sp = &c.space;
                !subset(sp.closure(sp.complement(s[0])), sp.complement(sp.interior(s[0])))
            },
        },
        Check {
            name: "boundary-bound",
            gate: Always,
            slots: &[Set(K::Any)],
            uses_continuity: false,
            violated: |c, s, _| {
                let sp = &c.space;
                !subset(sp.boundary(s[0]), sp.closure(s[0]) & !sp.interior(s[0]))
            },
        },
        Check {
            name: "continuous-closure-image",
            gate: Regular,
            slots: &[Func(P::Continuous), Set(K::Any)],
            uses_continuity: true,
            violated: |c, s, f| !subset(f[0].image(c.space.closure(s[0])), c.space.closure(f[0].image(s[0]))),
        },
        Check {
            name: "inverse-image-closed",
            gate: Regular,
            slots: &[Func(P::Continuous), Set(K::Closed)],
            uses_continuity: true,
            violated: |c, s, f| !c.space.is_closed(f[0].preimage(s[0])),
        },
        Check {
            name: "inverse-image-open",
            gate: Regular,
            slots: &[Func(P::Continuous), Set(K::Open)],
            uses_continuity: true,
            violated: |c, s, f| !c.space.is_open(f[0].preimage(s[0])),
        },
        Check {
            name: "bijection-interior",
            gate: Always,
            slots: &[Func(P::ContinuousBijection), Set(K::Any)],
            uses_continuity: true,
            violated: |c, s, f| {
                let sp = &c.space;
                !subset(sp.interior(f[0].image(s[0])), f[0].image(sp.interior(s[0])))
            },
        },
        Check {
            name: "origin-continuity",
            gate: Regular,
            slots: &[Func(P::Additive)],
            uses_continuity: true,
            violated: |c, _, f| c.continuous_at(&f[0], 0) != c.continuous(&f[0]),
        },
        Check {
            name: "translation-maps",
            gate: Regular,
            slots: &[Func(P::Translation)],
            uses_continuity: true,
            violated: |c, _, f| !(c.continuous(&f[0]) && c.open_map(&f[0]) && c.closed_map(&f[0])),
        },
        Check {
            name: "sum-of-sets-open",
            gate: Regular,
            slots: &[Set(K::Any), Set(K::Open)],
            uses_continuity: false,
            violated: |c, s, _| !c.space.is_open(c.space.sum(s[0], s[1])),
        },
        Check {
            name: "composition-and-sum/i",
            gate: Always,
            slots: &[Func(P::Continuous), Func(P::Continuous)],
            uses_continuity: true,
            violated: |c, _, f| !c.continuous(&f[1].after(&f[0])),
        },
        Check {
            name: "composition-and-sum/ii",
            gate: Always,
            slots: &[Func(P::OpenMap), Func(P::OpenMap)],
            uses_continuity: false,
            violated: |c, _, f| !c.open_map(&f[1].after(&f[0])),
        },
        Check {
            name: "composition-and-sum/ii-closed",
            gate: Always,
            slots: &[Func(P::ClosedMap), Func(P::ClosedMap)],
            uses_continuity: false,
            violated: |c, _, f| !c.closed_map(&f[1].after(&f[0])),
        },
        Check {
            name: "composition-and-sum/iii",
            gate: Always,
            slots: &[Func(P::Continuous), Func(P::Continuous)],
            uses_continuity: true,
            violated: |c, _, f| !c.continuous(&f[0].plus(&f[1])),
        },
        Check {
            name: "composition-and-sum/iv",
            gate: Always,
            slots: &[Func(P::OpenMap), Func(P::OpenMap)],
            uses_continuity: false,
            violated: |c, _, f| !c.open_map(&f[0].plus(&f[1])),
        },
        Check {
            // f onto, gf open (closed) => g open (closed), as literally stated
            name: "composition-and-sum/v",
            gate: Observe,
            slots: &[Func(P::Bijective), Func(P::Any)],
            uses_continuity: false,
            violated: |c, _, f| {
                let gf = f[1].after(&f[0]);
                either_map_violation(c, c.open_map(&gf), c.closed_map(&gf), &f[1])
            },
        },
        Check {
            name: "composition-and-sum/v-with-continuity",
            gate: Always,
            slots: &[Func(P::ContinuousBijection), Func(P::Any)],
            uses_continuity: true,
            violated: |c, _, f| {
                let gf = f[1].after(&f[0]);
                either_map_violation(c, c.open_map(&gf), c.closed_map(&gf), &f[1])
            },
        },
        Check {
            // g one to one, gf open (closed) => f open (closed), as literally stated
            name: "composition-and-sum/vi",
            gate: Observe,
            slots: &[Func(P::Any), Func(P::Bijective)],
            uses_continuity: false,
            violated: |c, _, f| {
                let gf = f[1].after(&f[0]);
                either_map_violation(c, c.open_map(&gf), c.closed_map(&gf), &f[0])
            },
        },
        Check {
            name: "composition-and-sum/vi-with-continuity",
            gate: Always,
            slots: &[Func(P::Any), Func(P::ContinuousBijection)],
            uses_continuity: true,
            violated: |c, _, f| {
                let gf = f[1].after(&f[0]);
                either_map_violation(c, c.open_map(&gf), c.closed_map(&gf), &f[0])
            },
        },
        Check {
            name: "standard-maps/i",
            gate: Always,
            slots: &[Func(P::Continuous), Set(K::NonEmpty)],
            uses_continuity: true,
            violated: |c, s, f| !c.continuous_on(&f[0], s[0]),
        },
        Check {
            name: "standard-maps/ii",
            gate: Always,
            slots: &[],
            uses_continuity: true,
            violated: |c, _, _| !c.continuous(&TabulatedFunction::identity(c.model())),
        },
        Check {
            name: "standard-maps/iii",
            gate: Always,
            slots: &[Set(K::NonEmpty)],
            uses_continuity: true,
            violated: |c, s, _| !c.continuous_on(&TabulatedFunction::identity(c.model()), s[0]),
        },
        Check {
            name: "standard-maps/iv",
            gate: Regular,
            slots: &[Func(P::Constant)],
            uses_continuity: true,
            violated: |c, _, f| !c.continuous(&f[0]),
        },
        Check {
            name: "standard-maps/v",
            gate: Always,
            slots: &[Func(P::Continuous)],
            uses_continuity: true,
            violated: |c, _, f| !c.continuous(&f[0].negated()),
        },
        Check {
            name: "standard-maps/vi",
            gate: Always,
            slots: &[],
            uses_continuity: true,
            violated: |c, _, _| !c.continuous(&TabulatedFunction::negation(c.model())),
        },
        Check {
            name: "standard-maps/vii",
            gate: Always,
            slots: &[],
            uses_continuity: false,
            violated: |c, _, _| !c.closed_map(&TabulatedFunction::negation(c.model())),
        },
        Check {
            name: "continuous-functions-group",
            gate: Regular,
            slots: &[Func(P::Continuous), Func(P::Continuous)],
            uses_continuity: true,
            violated: |c, _, f| {
                let zero = TabulatedFunction::constant(c.model(), 0);
                !c.continuous(&zero) || !c.continuous(&f[0].plus(&f[1].negated()))
            },
        },
        Check {
            name: "kernel-closed",
            gate: Regular,
            slots: &[Func(P::AdditiveContinuous)],
            uses_continuity: true,
            violated: |c, _, f| !c.space.is_closed(f[0].preimage(1)),
        },
        Check {
            name: "equalizer-closed",
            gate: Regular,
            slots: &[Func(P::AdditiveContinuous), Func(P::AdditiveContinuous)],
            uses_continuity: true,
            violated: |c, _, f| !c.space.is_closed(c.equalizer(&f[0], &f[1])),
        },
        Check {
            // on a discrete universe the ordinary closure of A is A
            name: "subsequential-closures-match/closure",
            gate: Regular,
            slots: &[],
            uses_continuity: false,
            violated: |c, _, _| c.is_subsequential() != all_subsets_satisfy(c, |a| c.space.closure(a) == a),
        },
        Check {
            name: "subsequential-closures-match/interior",
            gate: Regular,
            slots: &[],
            uses_continuity: false,
            violated: |c, _, _| c.is_subsequential() && !all_subsets_satisfy(c, |a| c.space.interior(a) == a),
        },
        Check {
            name: "closure-family-bounds/i",
            gate: Regular,
            slots: &[Family(K::Any)],
            uses_continuity: false,
            violated: |c, s, _| {
                let closures: Vec<Mask> = s.iter().map(|&a| c.space.closure(a)).collect();
                !subset(join(&closures), c.space.closure(join(s)))
            },
        },
        Check {
            name: "closure-family-bounds/ii",
            gate: Regular,
            slots: &[Family(K::Any)],
            uses_continuity: false,
            violated: |c, s, _| {
                let sp = &c.space;
                let closures: Vec<Mask> = s.iter().map(|&a| sp.closure(a)).collect();
                !subset(sp.closure(meet(s, sp.full())), meet(&closures, sp.full()))
            },
        },
        Check {
            name: "closure-family-bounds/iii",
            gate: Regular,
            slots: &[Family(K::Any)],
            uses_continuity: false,
            violated: |c, s, _| {
                let sp = &c.space;
                let sum_all = |sets: &[Mask]| sets.iter().skip(1).fold(sets[0], |acc, &a| sp.sum(acc, a));
                let closures: Vec<Mask> = s.iter().map(|&a| sp.closure(a)).collect();
                !subset(sum_all(&closures), sp.closure(sum_all(s)))
            },
        },
        Check {
            // continuous on a subset but not on the whole universe
            name: "restriction-gap",
            gate: Observe,
            slots: &[Func(P::Any), Set(K::NonEmpty)],
            uses_continuity: true,
            violated: |c, s, f| !c.continuous(&f[0]) && c.continuous_on(&f[0], s[0]),
        },
        Check {
            name: "union-of-closed",
            gate: Falsifiable,
            slots: &[Set(K::Closed), Set(K::Closed)],
            uses_continuity: false,
            violated: |c, s, _| !c.space.is_closed(s[0] | s[1]),
        },
        Check {
            name: "closure-idempotence",
            gate: Falsifiable,
            slots: &[Set(K::Any)],
            uses_continuity: false,
            violated: |c, s, _| c.space.closure(c.space.closure(s[0])) != c.space.closure(s[0]),
        },
        Check {
            name: "interior-intersection",
            gate: Falsifiable,
            slots: &[Set(K::Any), Set(K::Any)],
            uses_continuity: false,
            violated: |c, s, _| {
                let sp = &c.space;
                sp.interior(s[0] & s[1]) != sp.interior(s[0]) & sp.interior(s[1])
            },
        },
    ]
}
