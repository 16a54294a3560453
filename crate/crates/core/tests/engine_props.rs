//! Properties of the derivation engine, the functors and valuations.

mod common;

use std::collections::BTreeMap;

use bluebend::corpus;
use bluebend::functors::{apply_functor, holds_in_view, tensor_over_ground, FunctorTag};
use bluebend::ground::{q, qf, BaseValuation, Q};
use bluebend::presentation::{congruence_equiv, derives, equal_in_quotient, normalize_monomial};
use bluebend::valuation::{eval_monomial, is_valuation, ValuationSpec};
use bluebend::{DerivationBudget, GroundTag, GroundValue, Presentation};
use common::{budget, presentation, relation_text, MONOMIALS};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn idempotent_ground() -> impl Strategy<Value = GroundTag> {
    prop::sample::select(vec![GroundTag::Bool, GroundTag::Trop])
}

fn any_ground() -> impl Strategy<Value = GroundTag> {
    prop::sample::select(vec![GroundTag::F1, GroundTag::Bool, GroundTag::Nat, GroundTag::Trop])
}

fn monoid_presentation() -> impl Strategy<Value = Presentation> {
    let m = || prop::sample::select(&MONOMIALS[1..]);
    prop::collection::vec((m(), m()), 0..=2).prop_map(|rels| {
        rels.iter()
            .filter(|(a, b)| a != b)
            .fold(Presentation::new(GroundTag::F1, &["x", "y"]), |p, (a, b)| p.mon(&format!("{a} = {b}")).unwrap())
    })
}

proptest! {
    #![proptest_config(config(40))]

    #[test]
    fn budget_monotone(p in any_ground().prop_flat_map(presentation), rel in relation_text()) {
        common::budget_monotone(&p, &rel)?;
    }

    #[test]
    fn proved_relations_hold_at_valuations(
        p in idempotent_ground().prop_flat_map(presentation),
        rel in relation_text(),
        x in common::tropical_value(),
        y in common::tropical_value(),
    ) {
        common::proved_is_true(&p, &rel, x, y)?;
    }

    #[test]
    fn sums_and_products_of_proved_relations(
        p in idempotent_ground().prop_flat_map(presentation),
        i in 0usize..4,
        j in 0usize..4,
        c in prop::sample::select(MONOMIALS),
    ) {
        // generators and reflexive relations are proved outright
        let refl = p.parse_relation(&format!("{c} <= {c}")).unwrap();
        let pick = |k: usize| p.subaddition.get(k).cloned().unwrap_or_else(|| refl.clone());
        let (a, b) = (pick(i), pick(j));
        prop_assert!(derives(&p, &a, budget()).is_proved() && derives(&p, &b, budget()).is_proved());
        let big = budget().scaled(2);
        let s = derives(&p, &a.plus(&b), big);
        prop_assert!(s.is_proved(), "sum {} : {:?}", a.plus(&b), s);
        let prod = a.times(&b).unwrap();
        let t = derives(&p, &prod, big);
        prop_assert!(t.is_proved(), "product {} : {:?}", prod, t);
    }

    #[test]
    fn normal_forms(p in monoid_presentation(), m in prop::sample::select(MONOMIALS), c in prop::sample::select(MONOMIALS)) {
        let m = p.parse_monomial(m).unwrap();
        let n = normalize_monomial(&p, &m).unwrap();
        prop_assert_eq!(normalize_monomial(&p, &n).unwrap(), n.clone());
        let c = p.parse_monomial(c).unwrap();
        for (a, b) in &p.monoid_relations {
            let (ac, bc) = (a.mul(&c).unwrap(), b.mul(&c).unwrap());
            prop_assert_eq!(normalize_monomial(&p, &ac).unwrap(), normalize_monomial(&p, &bc).unwrap());
        }
    }

    #[test]
    fn pos_and_hull_are_idempotent(
        p in any_ground().prop_flat_map(presentation),
        f in prop::sample::select(vec![FunctorTag::Pos, FunctorTag::Hull]),
    ) {
        common::functor_idempotent(&p, f)?;
    }

    #[test]
    fn pos_makes_generators_nonnegative(p in any_ground().prop_flat_map(presentation)) {
        let pos = apply_functor(&p, FunctorTag::Pos).unwrap();
        for g in ["x", "y"] {
            let r = pos.parse_relation(&format!("0 <= {g}")).unwrap();
            prop_assert!(derives(&pos, &r, budget()).is_proved());
        }
    }

    #[test]
    fn pos_adds_no_identifications(
        p in idempotent_ground().prop_flat_map(presentation),
        a in prop::sample::select(MONOMIALS),
        b in prop::sample::select(MONOMIALS),
    ) {
        let pos = apply_functor(&p, FunctorTag::Pos).unwrap();
        let (ma, mb) = (p.parse_monomial(a).unwrap(), p.parse_monomial(b).unwrap());
        let before = equal_in_quotient(&p, &ma, &mb, budget());
        let after = equal_in_quotient(&pos, &ma, &mb, budget());
        prop_assume!(!before.is_unknown() && !after.is_unknown());
        prop_assert_eq!(before.is_proved(), after.is_proved());
    }

    #[test]
    fn idempotent_blueprints_are_conic(p in idempotent_ground().prop_flat_map(presentation), a in prop::sample::select(MONOMIALS), b in prop::sample::select(MONOMIALS), c in prop::sample::select(MONOMIALS)) {
        let idem = apply_functor(&p, FunctorTag::Idem).unwrap();
        let r = idem.parse_relation(&format!("{a} + {b} == {c}")).unwrap();
        let direct = derives(&idem, &r, budget());
        let conic = holds_in_view(&idem, FunctorTag::Conic, &r, budget());
        prop_assume!(!direct.is_unknown() && !conic.is_unknown());
        prop_assert_eq!(direct.is_proved(), conic.is_proved());
    }

    #[test]
    fn tensor_laws(g in any_ground(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pick = || {
            let mut p = Presentation::new(g, &["x", "y"]);
            for _ in 0..rng.gen_range(0..=2) {
                let m = |r: &mut ChaCha8Rng| MONOMIALS[r.gen_range(0..MONOMIALS.len())];
                p = p.rel(&format!("{} <= {} + {}", m(&mut rng), m(&mut rng), m(&mut rng))).unwrap();
            }
            p
        };
        let (a, b) = (pick(), common::renamed(&pick()));
        common::tensor_laws(&a, &b)?;
    }

    #[test]
    fn tropical_relations_hold_over_nonnegative_reals(rel in relation_text()) {
        // The identity on generators is a morphism from TROP^pos to RPLUS^pos.
        let p = Presentation::new(GroundTag::Trop, &["x", "y"]);
        let r = p.parse_relation(&rel).unwrap();
        prop_assume!(r.is_left_monomial());
        let tp = apply_functor(&p, FunctorTag::Pos).unwrap();
        let rp = apply_functor(&Presentation::new(GroundTag::RPlus, &["x", "y"]), FunctorTag::Pos).unwrap();
        if derives(&tp, &r, budget()).is_proved() {
            let r2 = rp.parse_relation(&rel).unwrap();
            prop_assert!(derives(&rp, &r2, budget()).is_proved(), "{} over RPLUS", rel);
        }
    }

    #[test]
    fn evaluation_is_multiplicative(
        a in prop::sample::select(MONOMIALS),
        b in prop::sample::select(MONOMIALS),
        x in common::tropical_value(),
        y in common::tropical_value(),
    ) {
        let p = corpus::by_name("line").unwrap();
        let t = GroundTag::Trop;
        let assign = [("x".to_string(), GroundValue::rational(t, x).unwrap()), ("y".to_string(), GroundValue::rational(t, y).unwrap())].into();
        let spec = ValuationSpec::new(p.clone(), BaseValuation::trivial(p.ground, t).unwrap(), assign).unwrap();
        let (ma, mb) = (p.parse_monomial(a).unwrap(), p.parse_monomial(b).unwrap());
        prop_assert_eq!(
            eval_monomial(&spec, &ma.mul(&mb).unwrap()).unwrap(),
            eval_monomial(&spec, &ma).unwrap().mul(&eval_monomial(&spec, &mb).unwrap()).unwrap()
        );
    }
}

#[test]
fn tensor_is_associative_on_the_corpus() {
    let k = GroundTag::Rat;
    let a = corpus::by_name("line").unwrap();
    let b = corpus::by_name("torus").unwrap();
    let c = Presentation::new(k, &["s"]).rel("s^2 == 1").unwrap();
    let left = tensor_over_ground(&tensor_over_ground(&a, &b, k, budget()).unwrap(), &c, k, budget()).unwrap();
    let right = tensor_over_ground(&a, &tensor_over_ground(&b, &c, k, budget()).unwrap(), k, budget()).unwrap();
    assert!(congruence_equiv(&left, &right, budget()).unwrap().is_proved());
}

#[test]
fn disproofs_survive_larger_budgets() {
    let rels = ["x <= y", "1 <= x", "x^2 <= x + 1", "x + y <= 1", "0 <= x", "x == 1", "x*y <= x", "x^2 <= y^2 + y + y + 1"];
    for name in corpus::NAMES {
        let p = corpus::by_name(name).unwrap();
        if p.generators.len() < 2 {
            continue;
        }
        let rename = |s: &str| s.replace('x', &p.generators[0]).replace('y', &p.generators[1]);
        for rel in rels {
            let r = p.parse_relation(&rename(rel)).unwrap();
            let small = [DerivationBudget::new(1, 2, 1).unwrap(), DerivationBudget::new(2, 4, 3).unwrap()];
            if small.iter().any(|&b| derives(&p, &r, b).is_disproved()) {
                for k in [1, 2, 3] {
                    let v = derives(&p, &r, budget().scaled(k));
                    assert!(!v.is_proved(), "{name}: {rel} disproved at a small budget but proved at scale {k}");
                }
            }
        }
    }
}

fn max_twice_at(p: &Presentation, w: &BTreeMap<String, Q>) -> bool {
    // every ideal generator attains its maximum term value at least twice
    p.subaddition.iter().all(|r| {
        let vals: Vec<Q> = r
            .lhs
            .terms
            .iter()
            .chain(&r.rhs.terms)
            .filter(|m| !m.is_zero())
            .map(|m| m.exps.iter().fold(q(1), |acc, (g, e)| acc * num_traits::pow(w[g].clone(), *e as usize)))
            .collect();
        common::max_twice(&vals)
    })
}

#[test]
fn valuations_on_rings_match_the_max_twice_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let t = GroundTag::Trop;
    let values: Vec<Q> = vec![q(0), qf(1, 4), qf(1, 2), q(1), q(2), q(4)];
    let mut agreed = 0;
    for name in ["line", "conic", "sqrt4"] {
        let p = corpus::by_name(name).unwrap();
        let base = BaseValuation::trivial(p.ground, t).unwrap();
        for _ in 0..3400 {
            let w: BTreeMap<String, Q> =
                p.generators.iter().map(|g| (g.clone(), values[rng.gen_range(0..values.len())].clone())).collect();
            let assign = w.iter().map(|(g, x)| (g.clone(), GroundValue::rational(t, x.clone()).unwrap())).collect();
            let spec = ValuationSpec::new(p.clone(), base.clone(), assign).unwrap();
            let v = is_valuation(&spec, budget()).unwrap();
            assert!(!v.is_unknown());
            assert_eq!(v.is_proved(), max_twice_at(&p, &w), "{name} at {w:?}");
            agreed += 1;
        }
    }
    assert!(agreed >= 10_000);
}

#[test]
fn krull_valuations_follow_the_lex_max_rule() {
    let t = GroundTag::OrdGroup { rank: 2, idempotent: true };
    let p = corpus::by_name("line").unwrap();
    let base = BaseValuation::trivial(p.ground, t).unwrap();
    let words: Vec<Option<Vec<i64>>> =
        vec![None, Some(vec![0, 0]), Some(vec![0, 1]), Some(vec![0, -1]), Some(vec![1, 0]), Some(vec![-1, 3])];
    let val = |w: &Option<Vec<i64>>| match w {
        None => GroundValue::zero(t),
        Some(e) => GroundValue::word(t, e.clone()).unwrap(),
    };
    for x in &words {
        for y in &words {
            let assign = [("x".to_string(), val(x)), ("y".to_string(), val(y))].into();
            let spec = ValuationSpec::new(p.clone(), base.clone(), assign).unwrap();
            let got = is_valuation(&spec, budget()).unwrap().is_proved();
            // lex max of {x, y, 1} attained twice, with the formal zero below everything
            let key = |w: &Option<Vec<i64>>| w.clone().map(|e| (1, e)).unwrap_or((0, vec![]));
            let mut ks = [key(x), key(y), key(&Some(vec![0, 0]))];
            ks.sort();
            assert_eq!(got, ks[1] == ks[2], "x={x:?} y={y:?}");
        }
    }
}
