//! Bend relations, tropicalizations, tropical point tests and hypersurfaces,
//! Macpherson analytification and Maclagan-Rincón weights.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ground::{BaseValuation, GroundTag, GroundValue};
use crate::presentation::{congruence_equiv, DerivationBudget, FormalSum, Monomial, Presentation, Prover, Relation, Verdict};
use crate::valuation::ring_terms;

mod gg;
mod hypersurface;
mod macpherson;
mod svg;
mod weights;

pub use gg::{gg_congruence, ideal_circuits};
pub use hypersurface::{tropical_hypersurface, Cell, PolyhedralComplex};
pub use macpherson::{macpherson_an, spans_embed_tropically, AnFragment, KDesignation, Span};
pub use svg::render_svg;
pub use weights::mr_weight;

/// The bend of a presentation along a base valuation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BendPresentation {
    pub underlying: Presentation,
    pub source: Presentation,
    pub base: BaseValuation,
    /// False when some source generator was not left-monomial and had to be
    /// skipped, so the generator set may miss relations.
    pub complete: bool,
}

pub(crate) fn push_monomial(m: &Monomial, v: &BaseValuation) -> Result<Monomial> {
    Ok(Monomial::new(v.apply(&m.coeff)?, m.exps.clone()))
}

pub(crate) fn push_sum(s: &FormalSum, v: &BaseValuation) -> Result<FormalSum> {
    Ok(FormalSum::new(s.terms.iter().map(|m| push_monomial(m, v)).collect::<Result<_>>()?))
}

fn check_base(p: &Presentation, v: &BaseValuation, t: GroundTag) -> Result<()> {
    if v.source != p.ground || v.target != t {
        return Err(Error::Incompatible(format!(
            "base valuation {}->{} does not fit {}->{}",
            v.source, v.target, p.ground, t
        )));
    }
    Ok(())
}

/// Left-monomial relations `a <= Σb` read off the generators, pushed through `v`.
/// For ring sources each term of a generator is bounded by the others.
fn left_monomial_images(p: &Presentation, v: &BaseValuation) -> Result<(Vec<(Monomial, FormalSum)>, bool)> {
    let mut out = Vec::new();
    let mut complete = true;
    for r in &p.subaddition {
        if p.ground.has_minus_one() {
            let terms = ring_terms(&r.lhs, &r.rhs)?;
            for i in 0..terms.len() {
                let rest: Vec<Monomial> =
                    terms.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, m)| m.clone()).collect();
                out.push((push_monomial(&terms[i], v)?, push_sum(&FormalSum::new(rest), v)?));
            }
            continue;
        }
        for (l, rr) in r.orientations() {
            match l.terms.len() {
                0 => {}
                1 => out.push((push_monomial(&l.terms[0], v)?, push_sum(&rr, v)?)),
                _ => complete = false,
            }
        }
    }
    Ok((out, complete))
}

fn pushed_base(p: &Presentation, v: &BaseValuation, t: GroundTag) -> Result<Presentation> {
    let mut out = Presentation::new(t, &[]);
    out.generators = p.generators.clone();
    out.budget_default = p.budget_default;
    for (a, b) in &p.monoid_relations {
        out.monoid_relations.push((push_monomial(a, v)?, push_monomial(b, v)?));
    }
    Ok(out)
}

/// `Bend_v(B)`: one relation `a + Σb ≡ Σb` per left-monomial generator `a <= Σb`.
pub fn bend(p: &Presentation, v: &BaseValuation, t: GroundTag) -> Result<BendPresentation> {
    if !t.is_idempotent() {
        return Err(Error::NotIdempotentTarget(t.name()));
    }
    check_base(p, v, t)?;
    let mut out = pushed_base(p, v, t)?;
    let (rels, complete) = left_monomial_images(p, v)?;
    for (a, rhs) in rels {
        if a.is_zero() {
            continue;
        }
        let lhs = rhs.plus(&FormalSum::single(a));
        let r = Relation::eq(lhs, rhs);
        if !out.subaddition.contains(&r) {
            out.subaddition.push(r);
        }
    }
    out.validate()?;
    Ok(BendPresentation { underlying: out, source: p.clone(), base: v.clone(), complete })
}

/// Tropicalization over a totally positive target: the left-monomial part of
/// `p` base-changed to `T` with `0 <= 1`. The flag reports completeness.
pub fn trop_tp(p: &Presentation, v: &BaseValuation, t: GroundTag) -> Result<(Presentation, bool)> {
    let ok = matches!(
        t,
        GroundTag::Bool | GroundTag::Trop | GroundTag::OTrop | GroundTag::TropN(_) | GroundTag::OrdGroup { .. } | GroundTag::RPlus
    );
    if !ok {
        return Err(Error::RegimeUnsupported(format!("{t} has no positive tropical view")));
    }
    check_base(p, v, t)?;
    let mut out = pushed_base(p, v, t)?;
    let (rels, complete) = left_monomial_images(p, v)?;
    for (a, rhs) in rels {
        let r = Relation::le(FormalSum::single(a), rhs);
        if !out.subaddition.contains(&r) {
            out.subaddition.push(r);
        }
    }
    out.subaddition.push(Relation::le(FormalSum::zero(), FormalSum::single(Monomial::one(t))));
    out.validate()?;
    Ok((out, complete))
}

/// The algebraic core of `trop_tp` over an idempotent target, restricted to the
/// candidates `a + Σb ≡ Σb` coming from its left-monomial generators. Each
/// candidate is kept only once it is proved in `trop_tp` itself.
pub fn core_of_trop_tp(tp: &Presentation, b: DerivationBudget) -> Result<(Presentation, Verdict)> {
    let pr = Prover::new(tp, b)?;
    let mut out = tp.clone();
    out.subaddition.clear();
    let mut verdict = Verdict::Proved(vec![]);
    for r in &tp.subaddition {
        if r.lhs.is_empty() || r.lhs.len() != 1 {
            continue;
        }
        let cand = Relation::eq(r.rhs.plus(&r.lhs), r.rhs.clone());
        let v = pr.derives(&cand);
        let label = cand.to_string();
        if v.is_proved() && !out.subaddition.contains(&cand) {
            out.subaddition.push(cand);
        }
        verdict = verdict.and(v.about(&label));
    }
    Ok((out, verdict))
}

/// Compares the bend with the core of the totally positive tropicalization.
pub fn bend_matches_tropicalization(p: &Presentation, v: &BaseValuation, t: GroundTag, b: DerivationBudget) -> Result<Verdict> {
    let bp = bend(p, v, t)?;
    let (tp, _) = trop_tp(p, v, t)?;
    let (core, built) = core_of_trop_tp(&tp, b)?;
    if !built.is_proved() {
        return Ok(built);
    }
    congruence_equiv(&bp.underlying, &core, b)
}

/// Evaluates `m` at `w` with coefficients already in the target.
pub fn eval_in_target(m: &Monomial, w: &BTreeMap<String, GroundValue>) -> Result<GroundValue> {
    let mut out = m.coeff.clone();
    for (g, e) in &m.exps {
        let x = w.get(g).ok_or_else(|| Error::UnassignedGenerator(g.clone()))?;
        out = out.mul(&x.pow(*e))?;
    }
    Ok(out)
}

fn fold_sum(s: &FormalSum, w: &BTreeMap<String, GroundValue>, t: GroundTag) -> Result<GroundValue> {
    let mut acc = GroundValue::zero(t);
    for m in &s.terms {
        acc = acc.add(&eval_in_target(m, w)?)?;
    }
    Ok(acc)
}

/// Whether `w` is a `T`-point of the bend: every generator holds under evaluation.
pub fn point_in_trop(bp: &BendPresentation, w: &BTreeMap<String, GroundValue>) -> Result<bool> {
    let p = &bp.underlying;
    let t = p.ground;
    if !matches!(t, GroundTag::Trop | GroundTag::OTrop | GroundTag::Bool | GroundTag::TropN(_) | GroundTag::OrdGroup { idempotent: true, .. }) {
        return Err(Error::RegimeUnsupported(format!("point tests need a totally ordered idempotent ground, not {t}")));
    }
    for g in &p.generators {
        let x = w.get(g).ok_or_else(|| Error::UnassignedGenerator(g.clone()))?;
        if x.tag() != t {
            return Err(Error::TagMismatch(format!("value {x} for {g} is not in {t}")));
        }
    }
    for (a, b) in &p.monoid_relations {
        if eval_in_target(a, w)? != eval_in_target(b, w)? {
            return Ok(false);
        }
    }
    for r in &p.subaddition {
        if fold_sum(&r.lhs, w, t)? != fold_sum(&r.rhs, w, t)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Terms of `f` attaining the maximum at `w`, with coefficient 1 over BOOL.
pub fn mr_initial_form(f: &FormalSum, w: &BTreeMap<String, GroundValue>) -> Result<FormalSum> {
    let vals: Vec<GroundValue> = f.terms.iter().map(|m| eval_in_target(m, w)).collect::<Result<_>>()?;
    let Some(t) = vals.first().map(|v| v.tag()) else { return Ok(FormalSum::zero()) };
    if t != GroundTag::Trop {
        return Err(Error::TagMismatch(format!("initial forms are taken over TROP, not {t}")));
    }
    let max = vals.iter().fold(GroundValue::zero(t), |a, b| a.add(b).unwrap());
    if max.is_zero() {
        return Ok(FormalSum::zero());
    }
    let mut terms: Vec<Monomial> = f
        .terms
        .iter()
        .zip(&vals)
        .filter(|(_, v)| **v == max)
        .map(|(m, _)| Monomial::new(GroundValue::one(GroundTag::Bool), m.exps.clone()))
        .collect();
    terms.sort();
    terms.dedup();
    Ok(FormalSum::new(terms))
}

#[cfg(test)]
mod tests;
