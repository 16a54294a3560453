//! Endofunctors on presentations, derived-predicate views, tensor products
//! and localizations.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ground::{GroundTag, GroundValue};
use crate::presentation::{
    derives, map_monomial, morphism_verdict, transfer, DerivationBudget, DisproofPolicy, FormalSum, Monomial,
    Presentation, Prover, RelMode, Relation, Verdict,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FunctorTag {
    Pos,
    Hull,
    Inv,
    Idem,
    Core,
    Mon,
    Padd,
    Conic,
    Plus,
}

impl FunctorTag {
    pub fn is_view(self) -> bool {
        matches!(self, FunctorTag::Core | FunctorTag::Mon | FunctorTag::Padd | FunctorTag::Conic | FunctorTag::Plus)
    }
}

impl FromStr for FunctorTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "pos" => FunctorTag::Pos,
            "hull" => FunctorTag::Hull,
            "inv" => FunctorTag::Inv,
            "idem" => FunctorTag::Idem,
            "core" => FunctorTag::Core,
            "mon" => FunctorTag::Mon,
            "padd" => FunctorTag::Padd,
            "conic" => FunctorTag::Conic,
            "plus" => FunctorTag::Plus,
            _ => return Err(Error::Parse(format!("unknown functor {s:?}"))),
        })
    }
}

impl fmt::Display for FunctorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = format!("{self:?}").to_ascii_lowercase();
        f.write_str(&s)
    }
}

fn fresh_name(p: &Presentation, base: &str) -> String {
    let mut name = base.to_string();
    while p.has_generator(&name) {
        name.push('\'');
    }
    name
}

fn one_sum(tag: GroundTag) -> FormalSum {
    FormalSum::single(Monomial::one(tag))
}

/// Rewrites every coefficient of `p` into the ground `to`.
fn change_ground(p: &Presentation, to: GroundTag) -> Result<Presentation> {
    let id: BTreeMap<String, Monomial> = p.generators.iter().map(|g| (g.clone(), Monomial::var(to, g))).collect();
    let mut out = Presentation::new(to, &[]);
    out.generators = p.generators.clone();
    out.budget_default = p.budget_default;
    for (a, b) in &p.monoid_relations {
        out.monoid_relations.push((map_monomial(a, to, &id)?, map_monomial(b, to, &id)?));
    }
    for r in &p.subaddition {
        out.subaddition.push(crate::presentation::map_relation(r, to, &id)?);
    }
    Ok(out)
}

/// Presentation-level functors: POS, HULL, INV, IDEM. Generators are kept,
/// so the canonical morphism is the identity on generator names.
pub fn apply_functor(p: &Presentation, f: FunctorTag) -> Result<Presentation> {
    let tag = p.ground;
    let mut out = p.clone();
    match f {
        FunctorTag::Pos => out.subaddition.push(Relation::le(FormalSum::zero(), one_sum(tag))),
        FunctorTag::Hull => {
            for r in &mut out.subaddition {
                r.mode = RelMode::Eq;
            }
        }
        FunctorTag::Idem => {
            let two = FormalSum::new(vec![Monomial::one(tag), Monomial::one(tag)]);
            out.subaddition.push(Relation::eq(two, one_sum(tag)));
        }
        FunctorTag::Inv => match tag {
            GroundTag::F1Sq | GroundTag::Int | GroundTag::Rat => {}
            GroundTag::F1 => out = change_ground(p, GroundTag::F1Sq)?,
            GroundTag::Nat => out = change_ground(p, GroundTag::Int)?,
            _ => {
                let neg = fresh_name(p, "minus_one");
                out.generators.push(neg.clone());
                out.monoid_relations.push((Monomial::power(tag, &neg, 2), Monomial::one(tag)));
                let s = FormalSum::new(vec![Monomial::one(tag), Monomial::var(tag, &neg)]);
                out.subaddition.push(Relation::eq(s, FormalSum::zero()));
            }
        },
        view => return Err(Error::Invalid(format!("{view} is a view; use holds_in_view"))),
    }
    out.validate()?;
    Ok(out)
}

/// Keeps the generators that have a single monomial on the smaller side.
fn monomial_part(p: &Presentation, eq_only: bool) -> Presentation {
    let mut out = p.clone();
    out.subaddition.clear();
    for r in &p.subaddition {
        match r.mode {
            RelMode::Eq if eq_only => {
                if r.lhs.len() <= 1 || r.rhs.len() <= 1 {
                    out.subaddition.push(r.clone());
                }
            }
            _ if eq_only => {}
            _ => {
                for (l, rr) in r.orientations() {
                    if l.len() <= 1 {
                        out.subaddition.push(Relation::le(l, rr));
                    }
                }
            }
        }
    }
    out
}

/// Sufficient check for rings: each left term is matched by a group of right
/// terms, with the leftover group summing to zero.
fn ring_partition(p: &Prover, lhs: &FormalSum, rhs: &FormalSum) -> bool {
    let k = lhs.len();
    let n = rhs.len();
    if k == 0 {
        return p.derives_le(&FormalSum::zero(), rhs).is_proved();
    }
    let groups = k + 1;
    let total = (groups as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    if total > 50_000 {
        return false;
    }
    for code in 0..total {
        let mut parts: Vec<Vec<Monomial>> = vec![vec![]; groups];
        let mut c = code;
        for t in &rhs.terms {
            parts[(c % groups as u64) as usize].push(t.clone());
            c /= groups as u64;
        }
        let ok = (0..k).all(|i| {
            p.derives_le(&FormalSum::single(lhs.terms[i].clone()), &FormalSum::new(parts[i].clone())).is_proved()
        }) && p.derives_le(&FormalSum::zero(), &FormalSum::new(parts[k].clone())).is_proved();
        if ok {
            return true;
        }
    }
    false
}

fn view_le(p: &Presentation, pr: &Prover, view: FunctorTag, l: &FormalSum, r: &FormalSum, b: DerivationBudget) -> Verdict {
    let full = pr.derives_le(l, r);
    if full.is_disproved() {
        // every view is contained in the full subaddition
        return full;
    }
    if p.ground.has_minus_one() {
        if l.len() <= 1 {
            return full;
        }
        return if ring_partition(pr, l, r) {
            Verdict::Proved(vec![format!("{l} <= {r} splits into left-monomial relations")])
        } else {
            Verdict::Unknown(format!("no monomial decomposition of {l} <= {r} found"))
        };
    }
    let sub = monomial_part(p, view == FunctorTag::Padd);
    derives(&sub, &Relation::le(l.clone(), r.clone()), b)
}

/// Strictly conic closure: `A ≐ B` follows from `A + C ≤ B` and `B + D ≤ A`.
fn conic_eq(pr: &Prover, a: &FormalSum, bb: &FormalSum) -> bool {
    let mut pads: Vec<FormalSum> = vec![FormalSum::zero()];
    let mut atoms: Vec<Monomial> = a.terms.iter().chain(&bb.terms).cloned().collect();
    atoms.sort();
    atoms.dedup();
    for x in &atoms {
        pads.push(FormalSum::single(x.clone()));
        for y in &atoms {
            if x <= y {
                pads.push(FormalSum::new(vec![x.clone(), y.clone()]));
            }
        }
    }
    let ok = |l: &FormalSum, r: &FormalSum| pads.iter().any(|c| pr.derives_le(&l.plus(c), r).is_proved());
    ok(a, bb) && ok(bb, a)
}

/// Decides `r` in a derived view of `p`.
pub fn holds_in_view(p: &Presentation, view: FunctorTag, r: &Relation, b: DerivationBudget) -> Verdict {
    let pr = match view {
        FunctorTag::Conic => Prover::with_policy(p, b, DisproofPolicy::countermodels_only()),
        _ => Prover::new(p, b),
    };
    let pr = match pr {
        Ok(x) => x,
        Err(e) => return Verdict::Unknown(e.to_string()),
    };
    match view {
        FunctorTag::Core => pr.derives(&Relation::eq(r.lhs.clone(), r.rhs.clone())),
        FunctorTag::Plus => pr.derives(r),
        FunctorTag::Mon | FunctorTag::Padd => {
            let mut v = view_le(p, &pr, view, &r.lhs, &r.rhs, b);
            if r.mode == RelMode::Eq && !v.is_disproved() {
                v = v.and(view_le(p, &pr, view, &r.rhs, &r.lhs, b));
            }
            v
        }
        FunctorTag::Conic => {
            let direct = pr.derives(r);
            if direct.is_proved() {
                return direct;
            }
            if conic_eq(&pr, &r.lhs, &r.rhs) {
                return Verdict::Proved(vec![format!("{} and {} are padded both ways", r.lhs, r.rhs)]);
            }
            direct
        }
        other => Verdict::Unknown(format!("{other} is not a view")),
    }
}

/// Common ground of two presentations over a base ground.
pub fn pushout_ground(a: GroundTag, b: GroundTag) -> Option<GroundTag> {
    use GroundTag::*;
    let pick = |x: GroundTag, y: GroundTag| -> Option<GroundTag> {
        match (x, y) {
            _ if x == y => Some(x),
            (F1, _) => Some(y),
            (F1Sq, Int | Rat) | (Nat, Int | Rat) | (Int, Rat) => Some(y),
            (F1Sq, Nat) => Some(Int),
            (Nat, _) | (Bool, _) if y.is_idempotent() => Some(y),
            (Nat, RPlus) => Some(RPlus),
            (OTrop, Trop) => Some(Trop),
            _ => None,
        }
    };
    pick(a, b).or_else(|| pick(b, a))
}

/// Tensor product `B ⊗_D C` along generator maps `fb: D -> B`, `fc: D -> C`.
pub fn tensor(
    pb: &Presentation,
    pc: &Presentation,
    pd: &Presentation,
    fb: &BTreeMap<String, Monomial>,
    fc: &BTreeMap<String, Monomial>,
    budget: DerivationBudget,
) -> Result<Presentation> {
    let g = pushout_ground(pb.ground, pc.ground)
        .ok_or_else(|| Error::GroundMismatch(format!("{} and {}", pb.ground, pc.ground)))?;
    for x in [pb.ground, pc.ground] {
        if transfer(&GroundValue::one(pd.ground), x).is_none() {
            return Err(Error::GroundMismatch(format!("{} is not an algebra over {}", x, pd.ground)));
        }
    }
    for (target, f) in [(pb, fb), (pc, fc)] {
        let pr = Prover::new(target, budget)?;
        let v = morphism_verdict(pd, &pr, f)?;
        if !v.is_proved() {
            return Err(Error::NotAMorphism(format!("generator map into {}: {}", target.ground, v.label())));
        }
    }
    // rename clashing generators of C
    let mut out = Presentation::new(g, &[]);
    out.generators = pb.generators.clone();
    out.budget_default = pb.budget_default;
    let mut ren_c: BTreeMap<String, Monomial> = BTreeMap::new();
    for x in &pc.generators {
        let name = fresh_name(&out, x);
        out.generators.push(name.clone());
        ren_c.insert(x.clone(), Monomial::var(g, &name));
    }
    let id_b: BTreeMap<String, Monomial> = pb.generators.iter().map(|x| (x.clone(), Monomial::var(g, x))).collect();
    for (src, f) in [(pb, &id_b), (pc, &ren_c)] {
        for (a, b) in &src.monoid_relations {
            out.monoid_relations.push((map_monomial(a, g, f)?, map_monomial(b, g, f)?));
        }
        for r in &src.subaddition {
            out.subaddition.push(crate::presentation::map_relation(r, g, f)?);
        }
    }
    for d in &pd.generators {
        let ib = fb.get(d).ok_or_else(|| Error::GeneratorMismatch(format!("no image of {d} in B")))?;
        let ic = fc.get(d).ok_or_else(|| Error::GeneratorMismatch(format!("no image of {d} in C")))?;
        out.monoid_relations.push((map_monomial(ib, g, &id_b)?, map_monomial(ic, g, &ren_c)?));
    }
    out.validate()?;
    Ok(out)
}

/// Tensor over the base ground with no generators on the base.
pub fn tensor_over_ground(pb: &Presentation, pc: &Presentation, base: GroundTag, b: DerivationBudget) -> Result<Presentation> {
    let pd = Presentation::new(base, &[]);
    tensor(pb, pc, &pd, &BTreeMap::new(), &BTreeMap::new(), b)
}

fn inverse_name(m: &Monomial) -> String {
    if m.exps.len() == 1 && m.degree() == 1 {
        return format!("{}_inv", m.exps.keys().next().unwrap());
    }
    let parts: Vec<String> =
        m.exps.iter().map(|(g, e)| if *e == 1 { g.clone() } else { format!("{g}{e}") }).collect();
    format!("inv_{}", parts.join("_"))
}

/// Adjoins an inverse for each element; units are skipped.
pub fn localize(p: &Presentation, elems: &[Monomial]) -> Result<Presentation> {
    let tag = p.ground;
    let pr = Prover::new(p, p.budget_default)?;
    let mut out = p.clone();
    for m in elems {
        let n = pr.normalize(m)?;
        if n.is_zero() {
            return Err(Error::ZeroInverted);
        }
        let inv = n
            .coeff
            .inverse()
            .ok_or_else(|| Error::Invalid(format!("coefficient {} of {m} is not a unit", n.coeff)))?;
        if n.exps.is_empty() {
            continue;
        }
        let name = fresh_name(&out, &inverse_name(&n));
        out.generators.push(name.clone());
        let lhs = Monomial::new(GroundValue::one(tag), n.exps.clone()).mul(&Monomial::var(tag, &name))?;
        out.monoid_relations.push((lhs, Monomial::constant(inv)));
    }
    out.validate()?;
    Ok(out)
}

/// Adds free generators.
pub fn free_extension(p: &Presentation, names: &[&str]) -> Result<Presentation> {
    let mut out = p.clone();
    for n in names {
        if out.has_generator(n) {
            return Err(Error::NameClash(n.to_string()));
        }
        out.generators.push(n.to_string());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{congruence_equiv, equal_in_quotient, isomorphic};

    fn b() -> DerivationBudget {
        DerivationBudget::default()
    }

    #[test]
    fn pos_collapses_rings() {
        for tag in [GroundTag::Int, GroundTag::Rat] {
            let p = apply_functor(&Presentation::new(tag, &[]), FunctorTag::Pos).unwrap();
            assert!(equal_in_quotient(&p, &p.zero(), &p.one(), b()).is_proved());
        }
    }

    #[test]
    fn pos_and_hull_are_idempotent() {
        let p = Presentation::new(GroundTag::Bool, &["T"]).rel("T + 1 <= T").unwrap();
        for f in [FunctorTag::Pos, FunctorTag::Hull] {
            let once = apply_functor(&p, f).unwrap();
            let twice = apply_functor(&once, f).unwrap();
            assert!(congruence_equiv(&once, &twice, b()).unwrap().is_proved(), "{f}");
        }
    }

    #[test]
    fn idem_on_naturals() {
        let p = apply_functor(&Presentation::new(GroundTag::Nat, &[]), FunctorTag::Idem).unwrap();
        let two = p.parse_monomial("2").unwrap();
        assert!(equal_in_quotient(&p, &two, &p.one(), b()).is_proved());
        let five = p.parse_monomial("5").unwrap();
        assert!(equal_in_quotient(&p, &five, &p.one(), b()).is_proved());
    }

    #[test]
    fn inv_swaps_grounds() {
        let p = Presentation::new(GroundTag::F1, &["x"]);
        assert_eq!(apply_functor(&p, FunctorTag::Inv).unwrap().ground, GroundTag::F1Sq);
        let t = apply_functor(&Presentation::new(GroundTag::Trop, &[]), FunctorTag::Inv).unwrap();
        assert_eq!(t.generators, vec!["minus_one".to_string()]);
    }

    #[test]
    fn views() {
        let t = Presentation::new(GroundTag::Trop, &[]);
        let r = t.parse_relation("3 == 5").unwrap();
        assert!(holds_in_view(&t, FunctorTag::Core, &r, b()).is_disproved());
        let tp = apply_functor(&t, FunctorTag::Pos).unwrap();
        let r = tp.parse_relation("3 + 5 == 5").unwrap();
        assert!(holds_in_view(&tp, FunctorTag::Conic, &r, b()).is_proved());
        let z = Presentation::new(GroundTag::Int, &["x", "y"]).rel("x + y + 1 == 0").unwrap();
        let r = z.parse_relation("x <= -y - 1").unwrap();
        assert!(holds_in_view(&z, FunctorTag::Mon, &r, b()).is_proved());
        let r = z.parse_relation("x <= y").unwrap();
        assert!(holds_in_view(&z, FunctorTag::Mon, &r, b()).is_disproved());
    }

    #[test]
    fn tensor_examples() {
        let px = Presentation::new(GroundTag::F1, &["x"]);
        let py = Presentation::new(GroundTag::F1, &["y"]);
        let t = tensor_over_ground(&px, &py, GroundTag::F1, b()).unwrap();
        let pxy = Presentation::new(GroundTag::F1, &["x", "y"]);
        assert!(congruence_equiv(&t, &pxy, b()).unwrap().is_proved());

        let n = Presentation::new(GroundTag::Nat, &[]);
        let bo = Presentation::new(GroundTag::Bool, &[]);
        let nb = tensor_over_ground(&n, &bo, GroundTag::F1, b()).unwrap();
        let idem = apply_functor(&n, FunctorTag::Idem).unwrap();
        let e = BTreeMap::new();
        assert!(isomorphic(&nb, &idem, &e, &e, b()).unwrap().is_proved());

        // B ⊗_B B with both maps the identity
        let id: BTreeMap<String, Monomial> = [("x".to_string(), px.var("x"))].into();
        let bb = tensor(&px, &px, &px, &id, &id, b()).unwrap();
        let phi: BTreeMap<String, Monomial> =
            [("x".to_string(), px.var("x")), ("x'".to_string(), px.var("x"))].into();
        assert!(isomorphic(&bb, &px, &phi, &id, b()).unwrap().is_proved());
    }

    #[test]
    fn localizations() {
        let p = Presentation::new(GroundTag::Bool, &["T"]).rel("T + 1 == T").unwrap().rel("T == T^2").unwrap();
        let l = localize(&p, &[p.var("T")]).unwrap();
        assert!(equal_in_quotient(&l, &l.var("T"), &l.one(), b()).is_proved());
        let one = localize(&p, &[p.one()]).unwrap();
        assert_eq!(one, p);
        assert!(matches!(localize(&p, &[p.zero()]), Err(Error::ZeroInverted)));
    }

    #[test]
    fn free_extensions() {
        let b0 = Presentation::new(GroundTag::Bool, &[]);
        let bx = free_extension(&b0, &["x"]).unwrap();
        assert!(derives(&bx, &bx.parse_relation("1 + 1 == 1").unwrap(), b()).is_proved());
        assert!(matches!(free_extension(&bx, &["x"]), Err(Error::NameClash(_))));
        let two = free_extension(&free_extension(&b0, &["x"]).unwrap(), &["y"]).unwrap();
        assert_eq!(two, free_extension(&b0, &["x", "y"]).unwrap());
    }
}
