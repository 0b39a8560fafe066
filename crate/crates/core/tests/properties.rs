use gseq::continuity::{
    decide_continuity, is_continuous_bounded, ContinuityScope, TabulatedFunction, DEFAULT_SEQUENCE_BUDGET,
};
use gseq::density::{statistical_density, Radius};
use gseq::sequence::canonicalize;
use gseq::topology::closure;
use gseq::{
    evaluate, is_regular, is_regular_on, EvPerSeq, GroupElement, GroupModel, MethodDescriptor, PointSet, Rational,
};
use proptest::prelude::*;

const Q: GroupModel = GroupModel::RationalLine;

fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(p, q)| Rational::new(p, q))
}

fn q_element() -> impl Strategy<Value = GroupElement> {
    rational().prop_map(GroupElement::Rational)
}

fn q_seq() -> impl Strategy<Value = EvPerSeq> {
    (prop::collection::vec(q_element(), 0..4), prop::collection::vec(q_element(), 1..5))
        .prop_map(|(pre, cyc)| EvPerSeq::new(Q, pre, cyc).unwrap())
}

/// Sequences over a three letter alphabet so that kernels converge often.
fn sparse_q_seq() -> impl Strategy<Value = EvPerSeq> {
    let letter = prop::sample::select(vec![0i64, 1, 2]).prop_map(|v| GroupElement::Rational(Rational::from_integer(v)));
    (prop::collection::vec(letter.clone(), 0..3), prop::collection::vec(letter, 1..4))
        .prop_map(|(pre, cyc)| EvPerSeq::new(Q, pre, cyc).unwrap())
}

fn zn_seq(n: u64) -> impl Strategy<Value = EvPerSeq> {
    let model = GroupModel::cyclic(n).unwrap();
    let letter = (0..n).prop_map(GroupElement::Residue);
    (prop::collection::vec(letter.clone(), 0..4), prop::collection::vec(letter, 1..5))
        .prop_map(move |(pre, cyc)| EvPerSeq::new(model, pre, cyc).unwrap())
}

fn int_kernel() -> impl Strategy<Value = MethodDescriptor> {
    prop::collection::vec(-2i64..=2, 1..=2).prop_map(|c| MethodDescriptor::int_kernel(&c))
}

fn method() -> impl Strategy<Value = MethodDescriptor> {
    let kernel = prop::collection::vec(rational(), 1..=3).prop_map(|c| MethodDescriptor::kernel(c).unwrap());
    let leaf = prop_oneof![Just(MethodDescriptor::Lim), kernel];
    prop_oneof![leaf.clone(), (leaf.clone(), leaf).prop_map(|(a, b)| MethodDescriptor::sum(a, b))]
}

fn q_set() -> impl Strategy<Value = PointSet> {
    let pool = vec![(-1, 1), (0, 1), (1, 2), (1, 1), (2, 1)];
    prop::sample::subsequence(pool, 0..=3).prop_map(|pts| {
        PointSet::new(Q, pts.into_iter().map(|(p, q)| GroupElement::Rational(Rational::new(p, q)))).unwrap()
    })
}

fn value(m: &MethodDescriptor, x: &EvPerSeq) -> Option<GroupElement> {
    evaluate(m, x).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sequences_form_an_abelian_group(x in q_seq(), y in q_seq(), z in q_seq()) {
        let zero = EvPerSeq::zero(Q);
        prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
        prop_assert_eq!(x.add(&y).unwrap().add(&z).unwrap(), x.add(&y.add(&z).unwrap()).unwrap());
        prop_assert_eq!(x.add(&zero).unwrap(), x.clone());
        prop_assert_eq!(x.add(&x.negate()).unwrap(), zero);
    }

    #[test]
    fn cyclic_sequences_form_an_abelian_group(x in zn_seq(4), y in zn_seq(4)) {
        prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
        prop_assert_eq!(x.sub(&y).unwrap().add(&y).unwrap(), x);
    }

    #[test]
    fn canonical_form_keeps_terms_and_is_idempotent(
        pre in prop::collection::vec(0u8..3, 0..6),
        cyc in prop::collection::vec(0u8..3, 1..6),
    ) {
        let (p, c) = canonicalize(&pre, &cyc);
        let term = |pre: &[u8], cyc: &[u8], n: usize| if n < pre.len() { pre[n] } else { cyc[(n - pre.len()) % cyc.len()] };
        for n in 0..40 {
            prop_assert_eq!(term(&pre, &cyc, n), term(&p, &c, n));
        }
        prop_assert_eq!(canonicalize(&p, &c), (p.clone(), c.clone()));
        // the cycle is primitive and the preamble cannot absorb further
        for d in 1..c.len() {
            if c.len() % d == 0 {
                prop_assert!((0..c.len()).any(|i| c[i] != c[i % d]));
            }
        }
        if let Some(last) = p.last() {
            prop_assert_ne!(last, c.last().unwrap());
        }
    }

    #[test]
    fn text_round_trips(x in q_seq(), m in method()) {
        prop_assert_eq!(EvPerSeq::parse(Q, &x.to_string()).unwrap(), x);
        let parsed: MethodDescriptor = m.to_string().parse().unwrap();
        prop_assert_eq!(parsed, m);
    }

    #[test]
    fn methods_are_additive_on_their_domain(m in method(), x in sparse_q_seq(), y in sparse_q_seq()) {
        if let (Some(a), Some(b)) = (value(&m, &x), value(&m, &y)) {
            let sum = value(&m, &x.add(&y).unwrap());
            prop_assert_eq!(sum, Some(Q.add(&a, &b)));
            // the domain is a subgroup
            prop_assert!(value(&m, &x.sub(&y).unwrap()).is_some());
        }
        prop_assert_eq!(value(&m, &EvPerSeq::zero(Q)), Some(Q.zero()));
    }

    #[test]
    fn sum_domain_is_the_intersection(a in method(), b in method(), x in sparse_q_seq()) {
        let sum = MethodDescriptor::sum(a.clone(), b.clone());
        let both = value(&a, &x).zip(value(&b, &x));
        prop_assert_eq!(value(&sum, &x), both.map(|(u, v)| Q.add(&u, &v)));
    }

    #[test]
    fn shifting_does_not_change_values(m in method(), x in sparse_q_seq()) {
        prop_assert_eq!(value(&m, &x.shift()), value(&m, &x));
    }

    #[test]
    fn regular_methods_fix_constants(m in method(), c in q_element()) {
        let x = EvPerSeq::constant(Q, c.clone()).unwrap();
        prop_assume!(!c.as_rational().unwrap().is_zero());
        prop_assert_eq!(value(&m, &x) == Some(c), is_regular(&m));
    }

    #[test]
    fn regular_closures_contain_their_set(a in q_set(), m in method()) {
        let cl = closure(&m, &a).unwrap().set;
        if is_regular(&m) {
            prop_assert!(a.is_subset(&cl));
        }
    }

    #[test]
    fn closure_is_monotone_and_bounded_by_families(a in q_set(), b in q_set(), m in int_kernel()) {
        let cl = |s: &PointSet| closure(&m, s).unwrap().set;
        let union = a.union(&b);
        prop_assert!(cl(&a).union(&cl(&b)).is_subset(&cl(&union)));
        prop_assert!(cl(&a.intersection(&b)).is_subset(&cl(&a).intersection(&cl(&b))));
        prop_assert!(cl(&a).sum(&cl(&b)).is_subset(&cl(&a.sum(&b))));
    }

    #[test]
    fn window_closure_matches_enumeration_on_cyclic_groups(
        n in 2u64..=4,
        mask in 0u64..16,
        m in int_kernel(),
    ) {
        let model = GroupModel::cyclic(n).unwrap();
        let alphabet: Vec<GroupElement> = (0..n).filter(|i| mask >> i & 1 == 1).map(GroupElement::Residue).collect();
        let a = PointSet::new(model, alphabet.clone()).unwrap();
        let fast = closure(&m, &a).unwrap().set;
        let mut values = Vec::new();
        let width = m.kernel_bank().unwrap()[0].len() as u32;
        let bound = alphabet.len().pow(width);
        prop_assume!(bound <= 9);
        for period in 1..=bound {
            let words = alphabet.len().pow(period as u32);
            for code in 0..words {
                let cycle: Vec<GroupElement> =
                    (0..period).map(|i| alphabet[code / alphabet.len().pow(i as u32) % alphabet.len()].clone()).collect();
                values.extend(value(&m, &EvPerSeq::periodic(model, cycle).unwrap()));
            }
        }
        prop_assert_eq!(fast, PointSet::new(model, values).unwrap());
    }

}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn continuity_decider_agrees_with_enumeration(
        n in 2u64..=3,
        table in prop::collection::vec(0u64..3, 3),
        m in int_kernel(),
    ) {
        let model = GroupModel::cyclic(n).unwrap();
        let f = TabulatedFunction::new(model, table.into_iter().take(n as usize).map(|v| v % n).collect()).unwrap();
        let exact = decide_continuity(&m, &f, &ContinuityScope::default()).unwrap();
        let bounded = is_continuous_bounded(&m, &f, exact.verified_up_to_period, DEFAULT_SEQUENCE_BUDGET).unwrap();
        prop_assert_eq!(exact.continuous, bounded.continuous);
        if let Some(w) = exact.witness {
            prop_assert_eq!(value(&m, &w.sequence), Some(w.point.clone()));
            let image = w.sequence.map(model, |x| f.apply(x));
            prop_assert_ne!(value(&m, &image), Some(f.apply(&w.point)));
        }
    }

    #[test]
    fn additive_maps_continuous_at_origin_iff_everywhere(n in 2u64..=4, mult in 0u64..4, m in int_kernel()) {
        let model = GroupModel::cyclic(n).unwrap();
        prop_assume!(is_regular_on(&m, model).unwrap());
        let f = TabulatedFunction::multiplication(model, mult);
        let origin = GroupElement::Residue(0);
        let at_origin = ContinuityScope { at: Some(&origin), ..Default::default() };
        let everywhere = decide_continuity(&m, &f, &ContinuityScope::default()).unwrap().continuous;
        prop_assert_eq!(decide_continuity(&m, &f, &at_origin).unwrap().continuous, everywhere);
    }

    #[test]
    fn densities_are_probabilities(terms in prop::collection::vec(rational(), 1..60), r in (1i64..4, 1i64..4)) {
        let prefix: Vec<GroupElement> = terms.into_iter().map(GroupElement::Rational).collect();
        let d = statistical_density(Q, &prefix, &Q.zero(), &Radius::Ball(Rational::new(r.0, r.1))).unwrap();
        prop_assert!(d >= Rational::zero() && d <= Rational::one());
    }
}
