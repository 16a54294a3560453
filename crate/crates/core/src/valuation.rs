//! Valuations as morphisms: extensions `w: B -> T` of a base valuation.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ground::{g_leq_sum, BaseValuation, GroundTag, GroundValue, OrderMode};
use crate::lattice::lattice_index;
use crate::presentation::{DerivationBudget, FormalSum, Monomial, Presentation, Verdict, Witness};

/// A base valuation together with values for the generators.
#[derive(Clone, Debug)]
pub struct ValuationSpec {
    pub source: Presentation,
    pub base: BaseValuation,
    pub target: GroundTag,
    pub assignment: BTreeMap<String, GroundValue>,
}

impl ValuationSpec {
    pub fn new(
        source: Presentation,
        base: BaseValuation,
        assignment: BTreeMap<String, GroundValue>,
    ) -> Result<Self> {
        if base.source != source.ground {
            return Err(Error::TagMismatch(format!("base valuation on {} for a {} presentation", base.source, source.ground)));
        }
        for (g, v) in &assignment {
            if !source.has_generator(g) {
                return Err(Error::Invalid(format!("unknown generator {g}")));
            }
            if v.tag() != base.target {
                return Err(Error::TagMismatch(format!("value {v} for {g} is not in {}", base.target)));
            }
        }
        let target = base.target;
        Ok(ValuationSpec { source, base, target, assignment })
    }
}

/// `v(coeff) · Π w(g)^e`.
pub fn eval_monomial(spec: &ValuationSpec, m: &Monomial) -> Result<GroundValue> {
    if m.is_zero() {
        return Ok(GroundValue::zero(spec.target));
    }
    let mut out = spec.base.apply(&m.coeff)?;
    for (g, e) in &m.exps {
        let x = spec.assignment.get(g).ok_or_else(|| Error::UnassignedGenerator(g.clone()))?;
        out = out.mul(&x.pow(*e))?;
    }
    Ok(out)
}

pub fn eval_sum(spec: &ValuationSpec, s: &FormalSum) -> Result<Vec<GroundValue>> {
    s.terms.iter().map(|m| eval_monomial(spec, m)).collect()
}

fn failing(spec: &ValuationSpec, relation: String) -> Verdict {
    Verdict::Disproved(Witness::Failing {
        relation,
        inner: Box::new(Witness::Countermodel {
            target: spec.target,
            mode: OrderMode::Pos,
            assignment: spec.assignment.clone(),
        }),
    })
}

/// Terms of `rhs - lhs` with like monomials collected (ring sources).
pub(crate) fn ring_terms(lhs: &FormalSum, rhs: &FormalSum) -> Result<Vec<Monomial>> {
    let mut acc: BTreeMap<BTreeMap<String, u32>, GroundValue> = BTreeMap::new();
    for (side, neg) in [(rhs, false), (lhs, true)] {
        for m in &side.terms {
            let c = if neg { m.coeff.neg()? } else { m.coeff.clone() };
            let tag = c.tag();
            let entry = acc.entry(m.exps.clone()).or_insert_with(|| GroundValue::zero(tag));
            let x = entry.to_rational().unwrap() + c.to_rational().unwrap();
            *entry = GroundValue::rational(tag, x)?;
        }
    }
    Ok(acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(e, c)| Monomial::new(c, e)).collect())
}

/// The bend criterion on a list of values: each value is bounded by the sum
/// of the others in the positive order.
pub fn bend_holds(vals: &[GroundValue]) -> Result<bool> {
    for i in 0..vals.len() {
        let rest: Vec<GroundValue> = vals.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| v.clone()).collect();
        if !g_leq_sum(OrderMode::Pos, &vals[i..=i], &rest)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Decides whether the assignment extends the base valuation to a morphism
/// `B^mon -> T^pos`. Exact on ring sources presented by a principal set of
/// ideal generators and on left-monomial generators; otherwise may be Unknown.
pub fn is_valuation(spec: &ValuationSpec, _b: DerivationBudget) -> Result<Verdict> {
    let t = spec.target;
    if !t.is_idempotent() && !t.has_pos_order() {
        return Err(Error::RegimeUnsupported(format!("{t} is neither idempotent nor totally positive")));
    }
    let p = &spec.source;
    for (a, b) in &p.monoid_relations {
        if eval_monomial(spec, a)? != eval_monomial(spec, b)? {
            return Ok(failing(spec, format!("{a} = {b}")));
        }
    }
    let mut unknown = None;
    for r in &p.subaddition {
        if p.ground.has_minus_one() {
            let terms = ring_terms(&r.lhs, &r.rhs)?;
            let vals: Vec<GroundValue> = terms.iter().map(|m| eval_monomial(spec, m)).collect::<Result<_>>()?;
            if !bend_holds(&vals)? {
                return Ok(failing(spec, r.to_string()));
            }
            continue;
        }
        for (l, rr) in r.orientations() {
            let holds = g_leq_sum(OrderMode::Pos, &eval_sum(spec, &l)?, &eval_sum(spec, &rr)?)?;
            if holds {
                continue;
            }
            if l.len() <= 1 {
                return Ok(failing(spec, format!("{l} <= {rr}")));
            }
            unknown.get_or_insert_with(|| format!("{l} <= {rr} fails termwise but is not left-monomial"));
        }
    }
    Ok(match unknown {
        Some(why) => Verdict::Unknown(why),
        None => Verdict::Proved(vec![format!(
            "{} monoid relations and {} subaddition generators preserved",
            p.monoid_relations.len(),
            p.subaddition.len()
        )]),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum ValuationClass {
    Seminorm,
    NonarchSeminorm,
    Krull { surjective: bool },
    Character,
    Generic,
}

/// Names the classical notion a valuation specializes to.
pub fn classify_valuation(spec: &ValuationSpec, b: DerivationBudget) -> Result<ValuationClass> {
    let t = spec.target;
    if matches!(t, GroundTag::F1Sq | GroundTag::Int | GroundTag::Rat) {
        if !spec.source.subaddition.is_empty() {
            return Err(Error::NotAValuation("characters need a multiplicative source".into()));
        }
        for (a, bb) in &spec.source.monoid_relations {
            if eval_monomial(spec, a)? != eval_monomial(spec, bb)? {
                return Err(Error::NotAValuation(format!("{a} = {bb} is not respected")));
            }
        }
        return Ok(ValuationClass::Character);
    }
    let v = is_valuation(spec, b)?;
    if !v.is_proved() {
        return Err(Error::NotAValuation(format!("is_valuation is {}", v.label())));
    }
    Ok(match t {
        GroundTag::RPlus => ValuationClass::Seminorm,
        GroundTag::Trop | GroundTag::OTrop | GroundTag::TropN(_) => ValuationClass::NonarchSeminorm,
        GroundTag::OrdGroup { rank, idempotent: true } => {
            let words: Vec<Vec<BigInt>> = spec
                .assignment
                .values()
                .filter_map(|x| x.word_exps())
                .map(|e| e.iter().map(|&k| BigInt::from(k)).collect())
                .collect();
            let surjective = lattice_index(&words, rank as usize).is_some_and(|i| i == BigInt::from(1));
            ValuationClass::Krull { surjective }
        }
        _ => ValuationClass::Generic,
    })
}
