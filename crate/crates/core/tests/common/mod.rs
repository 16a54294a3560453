//! Shared generators and oracles for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use bluebend::functors::{apply_functor, tensor_over_ground, FunctorTag};
use bluebend::ground::{g_leq_sum, q, qf, BaseValuation, Q};
use bluebend::presentation::{congruence_equiv, derives};
use bluebend::valuation::{eval_sum, is_valuation, ValuationSpec};
use bluebend::{DerivationBudget, GroundTag, GroundValue, OrderMode, Presentation, RelMode};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const MONOMIALS: &[&str] = &["1", "x", "y", "x^2", "x*y", "y^2"];

pub fn budget() -> DerivationBudget {
    DerivationBudget::default()
}

/// Text of a relation between small monomials in `x`, `y`.
pub fn relation_text() -> impl Strategy<Value = String> {
    let m = || prop::sample::select(MONOMIALS);
    (m(), m(), prop::option::of(m()), prop::bool::weighted(0.2)).prop_map(|(a, b, c, eq)| {
        let rhs = match c {
            Some(c) => format!("{b} + {c}"),
            None => b.to_string(),
        };
        format!("{a} {} {rhs}", if eq { "==" } else { "<=" })
    })
}

/// A presentation on `x`, `y` over `ground` with up to three relations.
pub fn presentation(ground: GroundTag) -> impl Strategy<Value = Presentation> {
    prop::collection::vec(relation_text(), 0..=3).prop_map(move |rels| {
        rels.iter().fold(Presentation::new(ground, &["x", "y"]), |p, r| p.rel(r).expect("generated relation parses"))
    })
}

pub fn tropical_value() -> impl Strategy<Value = Q> {
    prop::sample::select(vec![q(0), qf(1, 2), q(1), q(2), q(3)])
}

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

/// A decision reached at some budget is kept at a larger one.
pub fn budget_monotone(p: &Presentation, rel: &str) -> Result<(), TestCaseError> {
    let r = p.parse_relation(rel).unwrap();
    let small = DerivationBudget::new(3, 6, 4).unwrap();
    let v1 = derives(p, &r, small);
    let v2 = derives(p, &r, budget());
    if (v1.is_proved() && !v2.is_proved()) || (v1.is_disproved() && !v2.is_disproved()) {
        return Err(fail(format!("{rel} in {p:?}: {} at small budget, {} at default", v1.label(), v2.label())));
    }
    Ok(())
}

/// A proved relation holds at every point that is a proved valuation.
pub fn proved_is_true(p: &Presentation, rel: &str, x: Q, y: Q) -> Result<(), TestCaseError> {
    let t = GroundTag::Trop;
    let assign: BTreeMap<String, GroundValue> =
        [("x".to_string(), GroundValue::rational(t, x).unwrap()), ("y".to_string(), GroundValue::rational(t, y).unwrap())]
            .into();
    let spec = ValuationSpec::new(p.clone(), BaseValuation::trivial(p.ground, t).unwrap(), assign).unwrap();
    if !is_valuation(&spec, budget()).unwrap().is_proved() {
        return Ok(());
    }
    let r = p.parse_relation(rel).unwrap();
    if !derives(p, &r, budget()).is_proved() {
        return Ok(());
    }
    let (l, rr) = (eval_sum(&spec, &r.lhs).unwrap(), eval_sum(&spec, &r.rhs).unwrap());
    let mut ok = g_leq_sum(OrderMode::Pos, &l, &rr).unwrap();
    if r.mode == RelMode::Eq {
        ok &= g_leq_sum(OrderMode::Pos, &rr, &l).unwrap();
    }
    if !ok {
        return Err(fail(format!("{rel} proved in {p:?} but false at {:?}", spec.assignment)));
    }
    Ok(())
}

/// Applying POS or HULL twice gives the same blueprint as applying it once.
pub fn functor_idempotent(p: &Presentation, f: FunctorTag) -> Result<(), TestCaseError> {
    let once = apply_functor(p, f).unwrap();
    let twice = apply_functor(&once, f).unwrap();
    let v = congruence_equiv(&once, &twice, budget()).unwrap();
    if !v.is_proved() {
        return Err(fail(format!("{f:?} not idempotent on {p:?}: {v:?}")));
    }
    Ok(())
}

/// `B ⊗ k = B` and `B ⊗ C = C ⊗ B` over the ground `k`.
pub fn tensor_laws(p: &Presentation, other: &Presentation) -> Result<(), TestCaseError> {
    let k = p.ground;
    let unit = tensor_over_ground(p, &Presentation::new(k, &[]), k, budget()).unwrap();
    let v = congruence_equiv(&unit, p, budget()).unwrap();
    if !v.is_proved() {
        return Err(fail(format!("unit law fails for {p:?}: {v:?}")));
    }
    let bc = tensor_over_ground(p, other, k, budget()).unwrap();
    let cb = tensor_over_ground(other, p, k, budget()).unwrap();
    let v = congruence_equiv(&bc, &cb, budget()).unwrap();
    if !v.is_proved() {
        return Err(fail(format!("commutativity fails for {p:?} and {other:?}: {v:?}")));
    }
    Ok(())
}

/// Renames `x`, `y` to `u`, `v`.
pub fn renamed(p: &Presentation) -> Presentation {
    let text = p.to_json_string().replace("\"x\"", "\"u\"").replace("\"y\"", "\"v\"");
    Presentation::from_json_str(&text).unwrap()
}

/// The tropical maximum of the values is attained at least twice.
pub fn max_twice(vals: &[Q]) -> bool {
    let m = vals.iter().max().unwrap();
    vals.iter().filter(|v| *v == m).count() >= 2
}

/// Lexicographic version of [`max_twice`] on tuples.
pub fn lex_max_twice(vals: &[Vec<Q>]) -> bool {
    let m = vals.iter().max().unwrap();
    vals.iter().filter(|v| *v == m).count() >= 2
}
