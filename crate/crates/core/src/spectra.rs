//! Prime k-ideal spectra, globalization of local presentations, affine Kato
//! fans and extended cones.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::functors::localize;
use crate::ground::{BaseValuation, GroundTag, GroundValue, Q};
use crate::presentation::{congruence_equiv, DerivationBudget, FormalSum, Monomial, Presentation, Prover, Relation, Verdict};
use crate::trop::bend;

const MAX_GENERATORS: usize = 16;

/// A prime k-ideal, given by the generators it contains: its elements are the
/// monomials whose support meets this set, together with 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PrimeKIdeal {
    pub generators: BTreeSet<String>,
    /// Some k-ideal test was Unknown under the budget.
    pub tentative: bool,
}

impl PrimeKIdeal {
    pub fn contains(&self, m: &Monomial) -> bool {
        m.is_zero() || m.exps.keys().any(|g| self.generators.contains(g))
    }

    /// Generator list as printed, with `<zero>` for the zero ideal.
    pub fn labels(&self) -> Vec<String> {
        if self.generators.is_empty() {
            vec!["<zero>".to_string()]
        } else {
            self.generators.iter().cloned().collect()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    pub primes: Vec<PrimeKIdeal>,
}

impl Spectrum {
    pub fn tentative(&self) -> bool {
        self.primes.iter().any(|p| p.tentative)
    }

    /// Primes not strictly contained in another prime.
    pub fn maximal(&self) -> Vec<&PrimeKIdeal> {
        self.primes
            .iter()
            .filter(|p| !self.primes.iter().any(|q| q.generators.len() > p.generators.len() && p.generators.is_subset(&q.generators)))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "primes": self.primes.iter().map(|p| p.labels()).collect::<Vec<_>>(),
            "tentative": self.tentative(),
        })
    }
}

/// Subsets of `0..n` ordered by size, then lexicographically.
fn subsets(n: usize) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = (0u32..(1u32 << n)).map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect()).collect();
    all.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    all
}

/// A generator set defines a prime monoid ideal when every monoid relation
/// has both sides inside it or both outside it.
fn support_consistent(p: &Presentation, s: &BTreeSet<String>) -> bool {
    let inside = |m: &Monomial| m.is_zero() || m.exps.keys().any(|g| s.contains(g));
    p.monoid_relations.iter().all(|(a, b)| inside(a) == inside(b))
}

fn check_generators(p: &Presentation) -> Result<()> {
    if p.generators.len() > MAX_GENERATORS {
        return Err(Error::TooManyGenerators(p.generators.len()));
    }
    Ok(())
}

/// Enumerates prime k-ideals among the ideals generated by generator subsets.
/// A candidate is rejected when setting its generators to 0 forces a monomial
/// of the complement to vanish, tested on the squarefree and squared products
/// of the complement generators.
pub fn prime_k_ideals(p: &Presentation, b: DerivationBudget) -> Result<Spectrum> {
    check_generators(p)?;
    p.validate()?;
    let n = p.generators.len();
    let mut primes = Vec::new();
    for idx in subsets(n) {
        let s: BTreeSet<String> = idx.iter().map(|&i| p.generators[i].clone()).collect();
        if !support_consistent(p, &s) {
            continue;
        }
        let mut q = p.clone();
        for g in &s {
            q.subaddition.push(Relation::eq(FormalSum::single(p.var(g)), FormalSum::zero()));
        }
        let pr = Prover::new(&q, b)?;
        let mut tentative = false;
        let mut rejected = false;
        for e in [1u32, 2] {
            let exps: BTreeMap<String, u32> = p.generators.iter().filter(|g| !s.contains(*g)).map(|g| (g.clone(), e)).collect();
            let top = FormalSum::single(Monomial::new(GroundValue::one(p.ground), exps));
            match pr.derives(&Relation::eq(top, FormalSum::zero())) {
                Verdict::Proved(_) => {
                    rejected = true;
                    break;
                }
                Verdict::Unknown(_) => tentative = true,
                Verdict::Disproved(_) => {}
            }
        }
        if !rejected {
            primes.push(PrimeKIdeal { generators: s, tentative });
        }
    }
    Ok(Spectrum { primes })
}

/// Generators with an inverse among the generators.
fn unit_generators(p: &Presentation, pr: &Prover) -> Result<BTreeSet<String>> {
    let mut out = BTreeSet::new();
    for g in &p.generators {
        for h in &p.generators {
            if pr.normalize(&p.var(g).mul(&p.var(h))?)?.exps.is_empty() {
                out.insert(g.clone());
            }
        }
    }
    Ok(out)
}

/// The localization at a prime: generators outside it become invertible.
pub fn localize_at_prime(p: &Presentation, prime: &PrimeKIdeal) -> Result<Presentation> {
    let pr = Prover::new(p, p.budget_default)?;
    let units = unit_generators(p, &pr)?;
    let elems: Vec<Monomial> = p
        .generators
        .iter()
        .filter(|g| !prime.generators.contains(*g) && !units.contains(*g))
        .map(|g| p.var(g))
        .collect();
    localize(p, &elems)
}

/// Global sections with the canonical map, for spectra with a unique closed
/// point: then every open cover contains the whole spectrum and the sections
/// are the stalk at that point.
#[derive(Clone, Debug)]
pub struct Globalization {
    pub sections: Presentation,
    pub closed_point: PrimeKIdeal,
}

pub fn globalize(p: &Presentation, b: DerivationBudget) -> Result<Globalization> {
    let spec = prime_k_ideals(p, b)?;
    if spec.tentative() {
        return Err(Error::Unstable("some prime k-ideal test was Unknown".into()));
    }
    let max = spec.maximal();
    if max.len() != 1 {
        return Err(Error::NotPrincipallyCovered(format!(
            "{} closed points; only spectra with a unique closed point are globalized",
            max.len()
        )));
    }
    let m = max[0].clone();
    let sections = localize_at_prime(p, &m)?;
    Ok(Globalization { sections, closed_point: m })
}

/// An affine Kato fan: the prime ideals of a monoid and, for each principal
/// open `U_h` (and the whole space under `1`), the sharpened localization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KatoFan {
    pub points: Vec<BTreeSet<String>>,
    pub sections: BTreeMap<String, Presentation>,
}

impl KatoFan {
    pub fn to_json(&self) -> Value {
        json!({
            "points": self.points.iter().map(|s| s.iter().cloned().collect::<Vec<_>>()).collect::<Vec<_>>(),
            "sections": self.sections.iter().map(|(h, s)| (h.clone(), serde_json::to_value(s.to_json()).unwrap())).collect::<serde_json::Map<_, _>>(),
        })
    }
}

fn check_monoid(m: &Presentation) -> Result<()> {
    if m.ground != GroundTag::F1 || !m.subaddition.is_empty() {
        return Err(Error::NotAMonoid(format!("a monoid presentation is over F1 without subaddition; got {}", m.ground)));
    }
    Ok(())
}

/// Sets the generators outside `keep` to 1 and drops trivial relations.
fn sharpen(m: &Presentation, keep: &BTreeSet<String>) -> Presentation {
    let mut out = Presentation::new(m.ground, &[]);
    out.generators = m.generators.iter().filter(|g| keep.contains(*g)).cloned().collect();
    let restrict = |x: &Monomial| {
        let exps = x.exps.iter().filter(|(g, _)| keep.contains(*g)).map(|(g, e)| (g.clone(), *e)).collect();
        Monomial::new(x.coeff.clone(), exps)
    };
    for (a, b) in &m.monoid_relations {
        let (a, b) = (restrict(a), restrict(b));
        if a != b && !out.monoid_relations.contains(&(a.clone(), b.clone())) {
            out.monoid_relations.push((a, b));
        }
    }
    out
}

pub fn kato_fan(m: &Presentation) -> Result<KatoFan> {
    check_monoid(m)?;
    check_generators(m)?;
    let points: Vec<BTreeSet<String>> = subsets(m.generators.len())
        .into_iter()
        .map(|idx| idx.iter().map(|&i| m.generators[i].clone()).collect())
        .filter(|s| support_consistent(m, s))
        .collect();
    let mut sections = BTreeMap::new();
    for h in std::iter::once(None).chain(m.generators.iter().map(Some)) {
        // units of the localization are the generators outside every prime of U_h
        let nonunits: BTreeSet<String> =
            points.iter().filter(|s| h.is_none_or(|h| !s.contains(h))).flat_map(|s| s.iter().cloned()).collect();
        sections.insert(h.cloned().unwrap_or_else(|| "1".to_string()), sharpen(m, &nonunits));
    }
    Ok(KatoFan { points, sections })
}

/// Membership in `Hom(M, [0,1])`: values in OTROP and every relation exact.
pub fn extended_cone_membership(m: &Presentation, point: &BTreeMap<String, GroundValue>) -> Result<bool> {
    check_monoid(m)?;
    for g in &m.generators {
        let x = point.get(g).ok_or_else(|| Error::UnassignedGenerator(g.clone()))?;
        let r = x.to_rational().ok_or_else(|| Error::TagMismatch(format!("{g} = {x} is not a rational value")))?;
        if x.tag() != GroundTag::OTrop {
            return Err(Error::TagMismatch(format!("{g} = {x} is not in OTROP")));
        }
        if r < Q::zero() || r > Q::one() {
            return Ok(false);
        }
    }
    let eval = |x: &Monomial| -> Result<Q> {
        if x.is_zero() {
            return Ok(Q::zero());
        }
        let mut v = Q::one();
        for (g, e) in &x.exps {
            let r = point[g].to_rational().unwrap();
            for _ in 0..*e {
                v *= &r;
            }
        }
        Ok(v)
    };
    for (a, b) in &m.monoid_relations {
        if eval(a)? != eval(b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn to_f1(p: &Presentation) -> Result<Presentation> {
    let mut out = Presentation::new(GroundTag::F1, &[]);
    out.generators = p.generators.clone();
    let conv = |m: &Monomial| {
        let c = if m.is_zero() { GroundValue::zero(GroundTag::F1) } else { GroundValue::one(GroundTag::F1) };
        Monomial::new(c, m.exps.clone())
    };
    for (a, b) in &p.monoid_relations {
        out.monoid_relations.push((conv(a), conv(b)));
    }
    out.validate()?;
    Ok(out)
}

/// The fan of the underlying monoid of the trivial BOOL bend, compared with
/// the fan of the designated monoid (the monoid relations of `p`).
pub fn recover_kato_from_bend(p: &Presentation, b: DerivationBudget) -> Result<(KatoFan, Verdict)> {
    if !p.ground.has_minus_one() {
        return Err(Error::UnsupportedGround(format!("{} has no -1", p.ground)));
    }
    if !p.subaddition.is_empty() {
        return Err(Error::MonodromyUnsupported("the presentation is not a monoid algebra".into()));
    }
    for (a, c) in &p.monoid_relations {
        for m in [a, c] {
            if !m.is_zero() && !m.coeff.is_one() {
                return Err(Error::MonodromyUnsupported(format!("{m} is not a monomial of the designated monoid")));
            }
        }
    }
    let v = BaseValuation::trivial(p.ground, GroundTag::Bool)?;
    let bp = bend(p, &v, GroundTag::Bool)?;
    let recovered = kato_fan(&to_f1(&bp.underlying)?)?;
    let designated = kato_fan(&to_f1(p)?)?;
    let mut verdict = Verdict::Proved(vec![format!("{} points agree", recovered.points.len())]);
    if recovered.points != designated.points || recovered.sections.keys().ne(designated.sections.keys()) {
        return Ok((recovered, Verdict::Disproved(crate::presentation::Witness::Computed("point sets differ".into()))));
    }
    for (h, s) in &recovered.sections {
        let t = &designated.sections[h];
        verdict = verdict.and(congruence_equiv(s, t, b)?.about(&format!("section on U_{h}")));
    }
    Ok((recovered, verdict))
}
