//! Semiring laws and order properties of the scalar grounds, and base
//! valuations, on sampled values.

use std::cmp::Ordering;

use bluebend::ground::{g_leq_sum, q, qf, BaseValuation, Q};
use bluebend::{GroundTag, GroundValue, OrderMode};
use num_traits::Signed;
use proptest::prelude::*;

const ADDITIVE: &[GroundTag] = &[
    GroundTag::Bool,
    GroundTag::Nat,
    GroundTag::Int,
    GroundTag::Rat,
    GroundTag::RPlus,
    GroundTag::Trop,
    GroundTag::OTrop,
    GroundTag::TropN(2),
    GroundTag::OrdGroup { rank: 2, idempotent: true },
];

fn small_q() -> impl Strategy<Value = Q> {
    (-12i64..=12, 1i64..=4).prop_map(|(n, d)| qf(n, d))
}

fn value(tag: GroundTag) -> BoxedStrategy<GroundValue> {
    match tag {
        GroundTag::Bool => (0i64..=1).prop_map(move |n| GroundValue::int(tag, n).unwrap()).boxed(),
        GroundTag::Nat => (0i64..=12).prop_map(move |n| GroundValue::int(tag, n).unwrap()).boxed(),
        GroundTag::Int => (-12i64..=12).prop_map(move |n| GroundValue::int(tag, n).unwrap()).boxed(),
        GroundTag::Rat => small_q().prop_map(move |x| GroundValue::rational(tag, x).unwrap()).boxed(),
        GroundTag::RPlus | GroundTag::Trop => {
            small_q().prop_map(move |x| GroundValue::rational(tag, x.abs()).unwrap()).boxed()
        }
        GroundTag::OTrop => (0i64..=6).prop_map(move |n| GroundValue::rational(tag, qf(n, 6)).unwrap()).boxed(),
        GroundTag::TropN(_) => prop_oneof![
            Just(GroundValue::zero(tag)),
            ((1i64..=4, 1i64..=2), (1i64..=4, 1i64..=2))
                .prop_map(move |((a, b), (c, d))| GroundValue::tuple(tag, vec![qf(a, b), qf(c, d)]).unwrap()),
        ]
        .boxed(),
        GroundTag::OrdGroup { .. } => prop_oneof![
            Just(GroundValue::zero(tag)),
            (-3i64..=3, -3i64..=3).prop_map(move |(a, b)| GroundValue::word(tag, vec![a, b]).unwrap()),
        ]
        .boxed(),
        _ => unreachable!(),
    }
}

fn triple() -> impl Strategy<Value = (GroundValue, GroundValue, GroundValue)> {
    prop::sample::select(ADDITIVE).prop_flat_map(|t| (value(t), value(t), value(t)))
}

fn le(a: &GroundValue, b: &GroundValue) -> bool {
    g_leq_sum(OrderMode::Pos, std::slice::from_ref(a), std::slice::from_ref(b)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn semiring_laws((a, b, c) in triple()) {
        let t = a.tag();
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        let zero = GroundValue::zero(t);
        prop_assert_eq!(a.mul(&zero).unwrap(), zero.clone());
        prop_assert_eq!(a.add(&zero).unwrap(), a.clone());
        prop_assert_eq!(a.mul(&GroundValue::one(t)).unwrap(), a.clone());
        if t.is_idempotent() {
            prop_assert_eq!(a.add(&a).unwrap(), a.clone());
        }
    }

    #[test]
    fn positive_order((a, b, c) in triple()) {
        let t = a.tag();
        prop_assume!(t.has_pos_order());
        prop_assert!(le(&a, &a));
        if le(&a, &b) && le(&b, &c) {
            prop_assert!(le(&a, &c));
        }
        if le(&a, &b) {
            prop_assert!(le(&a.add(&c).unwrap(), &b.add(&c).unwrap()));
            prop_assert!(le(&a.mul(&c).unwrap(), &b.mul(&c).unwrap()));
        }
    }

    #[test]
    fn tropical_order_is_max(xs in prop::collection::vec(small_q(), 0..4), ys in prop::collection::vec(small_q(), 0..4)) {
        let t = GroundTag::Trop;
        let lift = |v: &[Q]| v.iter().map(|x| GroundValue::rational(t, x.abs()).unwrap()).collect::<Vec<_>>();
        let max = |v: &[Q]| v.iter().map(|x| x.abs()).max().unwrap_or_else(|| q(0));
        prop_assert_eq!(g_leq_sum(OrderMode::Pos, &lift(&xs), &lift(&ys)).unwrap(), max(&xs) <= max(&ys));
    }

    #[test]
    fn base_valuations(a in small_q(), b in small_q(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let rat = |x: &Q| GroundValue::rational(GroundTag::Rat, x.clone()).unwrap();
        for v in [
            BaseValuation::trivial(GroundTag::Rat, GroundTag::Trop).unwrap(),
            BaseValuation::p_adic(p, GroundTag::Rat, GroundTag::Trop).unwrap(),
        ] {
            let (va, vb) = (v.apply(&rat(&a)).unwrap(), v.apply(&rat(&b)).unwrap());
            prop_assert_eq!(v.apply(&rat(&(a.clone() * b.clone()))).unwrap(), va.mul(&vb).unwrap());
            let vs = v.apply(&rat(&(a.clone() + b.clone()))).unwrap();
            prop_assert!(vs.cmp_order(&va.add(&vb).unwrap()) != Some(Ordering::Greater));
        }
        let arch = bluebend::ground::base_valuation(
            bluebend::ground::ValuationKind::Archimedean, GroundTag::Rat, GroundTag::RPlus).unwrap();
        let (va, vb) = (arch.apply(&rat(&a)).unwrap(), arch.apply(&rat(&b)).unwrap());
        prop_assert_eq!(arch.apply(&rat(&(a.clone() * b.clone()))).unwrap(), va.mul(&vb).unwrap());
        let vs = arch.apply(&rat(&(a.clone() + b.clone()))).unwrap();
        prop_assert!(vs.to_rational().unwrap() <= va.to_rational().unwrap() + vb.to_rational().unwrap());
    }
}
