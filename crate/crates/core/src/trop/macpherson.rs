//! A finite fragment of the Macpherson analytification: monomially generated
//! spans with join and product, and their images as tropical polynomials.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::ground::{p_adic_abs, BaseValuation, GroundTag, GroundValue, Q, ValuationKind};
use crate::presentation::{DerivationBudget, FormalSum, Monomial, Presentation, Prover, Relation, Verdict, Witness};

const SPAN_CAP: usize = 5000;

/// Which scalars count as bounded by 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KDesignation {
    /// The ground itself, with `0 <= 1` and `1 + 1 <= 1` where applicable.
    Ground,
    /// The valuation ring of a p-adic valuation on a rational ground.
    Valued(BaseValuation),
}

/// A span given by its minimal monomial generators.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub generators: Vec<Monomial>,
}

impl std::fmt::Display for Span {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let g: Vec<String> = self.generators.iter().map(|m| m.to_string()).collect();
        write!(f, "<{}>", g.join(", "))
    }
}

#[derive(Clone, Debug)]
pub struct AnFragment {
    pub candidates: Vec<Monomial>,
    pub spans: Vec<Span>,
    pub join: Vec<Vec<Span>>,
    pub product: Vec<Vec<Span>>,
    /// Set when some membership query was Unknown and treated as false.
    pub tentative: bool,
}

impl AnFragment {
    pub fn index_of(&self, s: &Span) -> Option<usize> {
        self.spans.iter().position(|x| x == s)
    }
}

enum Order {
    /// Coordinatewise: same exponents and the coefficient ratio lies in the
    /// valuation ring (exponent p; p = 0 means any ratio).
    Free { p: u64 },
    Derived(Box<Prover>),
}

struct Oracle {
    order: Order,
    ground: GroundTag,
    normal: Prover,
    cache: RefCell<HashMap<(Vec<Monomial>, Monomial), bool>>,
    unknown: RefCell<bool>,
}

impl Oracle {
    fn covers(&self, m: &[Monomial], a: &Monomial) -> bool {
        if a.is_zero() {
            return true;
        }
        let key = (m.to_vec(), a.clone());
        if let Some(&x) = self.cache.borrow().get(&key) {
            return x;
        }
        let x = match &self.order {
            Order::Free { p } => m.iter().any(|b| {
                b.exps == a.exps
                    && (*p == 0 || {
                        let ratio = a.coeff.to_rational().unwrap() / b.coeff.to_rational().unwrap();
                        p_adic_abs(&ratio, *p) <= Q::from_integer(1.into())
                    })
            }),
            Order::Derived(pr) => {
                let v = pr.derives_le(&FormalSum::single(a.clone()), &FormalSum::new(m.to_vec()));
                if v.is_unknown() {
                    *self.unknown.borrow_mut() = true;
                }
                v.is_proved()
            }
        };
        self.cache.borrow_mut().insert(key, x);
        x
    }

    fn reduce(&self, mut s: Vec<Monomial>) -> Span {
        s.retain(|m| !m.is_zero());
        s.sort();
        s.dedup();
        'again: loop {
            for i in 0..s.len() {
                let rest: Vec<Monomial> = s.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, m)| m.clone()).collect();
                if self.covers(&rest, &s[i]) {
                    s = rest;
                    continue 'again;
                }
            }
            break;
        }
        Span { generators: s }
    }

    fn normalize(&self, m: &Monomial) -> Result<Monomial> {
        self.normal.normalize(m)
    }
}

fn monomials(p: &Presentation, d: u32) -> Vec<BTreeMap<String, u32>> {
    let mut out = vec![BTreeMap::new()];
    for g in &p.generators {
        let mut next = Vec::new();
        for m in &out {
            let used: u32 = m.values().sum();
            for e in 0..=(d - used) {
                let mut m2 = m.clone();
                if e > 0 {
                    m2.insert(g.clone(), e);
                }
                next.push(m2);
            }
        }
        out = next;
    }
    out
}

fn oracle(p: &Presentation, k: &KDesignation, b: DerivationBudget) -> Result<Oracle> {
    let order = match k {
        KDesignation::Valued(v) => {
            if !matches!(p.ground, GroundTag::Rat) || !p.subaddition.is_empty() || !p.monoid_relations.is_empty() {
                return Err(Error::RegimeUnsupported("valued spans need a free algebra over RAT".into()));
            }
            match v.kind {
                ValuationKind::PAdic { p } => Order::Free { p },
                ValuationKind::Trivial => Order::Free { p: 0 },
                _ => return Err(Error::RegimeUnsupported("valued spans need a trivial or p-adic valuation".into())),
            }
        }
        KDesignation::Ground if p.ground.has_minus_one() && !p.subaddition.is_empty() => {
            return Err(Error::RegimeUnsupported("spans over a ring ground need a presentation without subaddition".into()));
        }
        // without subaddition, a <= ΣM holds iff a occurs in M: the support
        // of a sum is monotone under 0 <= 1 and 1 + 1 <= 1
        KDesignation::Ground if p.subaddition.is_empty() => Order::Free { p: 0 },
        KDesignation::Ground => {
            let mut q = p.clone();
            let one = FormalSum::single(Monomial::one(p.ground));
            q.subaddition.push(Relation::le(FormalSum::zero(), one.clone()));
            if p.ground.has_addition() && !p.ground.is_idempotent() {
                q.subaddition.push(Relation::le(one.plus(&one), one));
            }
            Order::Derived(Box::new(Prover::new(&q, b)?))
        }
    };
    Ok(Oracle { order, ground: p.ground, normal: Prover::new(p, b)?, cache: RefCell::new(HashMap::new()), unknown: RefCell::new(false) })
}

fn candidates(p: &Presentation, k: &KDesignation, max_degree: u32, o: &Oracle) -> Result<Vec<Monomial>> {
    let coeffs: Vec<GroundValue> = match k {
        KDesignation::Valued(BaseValuation { kind: ValuationKind::PAdic { p: pr }, .. }) => {
            let pr = *pr as i64;
            [crate::ground::qf(1, pr), crate::ground::qf(1, 1), crate::ground::qf(pr, 1)]
                .into_iter()
                .map(|c| GroundValue::rational(o.ground, c))
                .collect::<Result<_>>()?
        }
        _ => vec![GroundValue::one(o.ground)],
    };
    let mut out = Vec::new();
    for e in monomials(p, max_degree) {
        for c in &coeffs {
            let m = o.normalize(&Monomial::new(c.clone(), e.clone()))?;
            if !m.is_zero() && !out.contains(&m) {
                out.push(m);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Spans with at most `size_bound` generators among the monomials of degree
/// at most `max_degree`, with their joins and products.
pub fn macpherson_an(
    p: &Presentation,
    k: &KDesignation,
    max_degree: u32,
    size_bound: usize,
    b: DerivationBudget,
) -> Result<AnFragment> {
    let o = oracle(p, k, b)?;
    let cands = candidates(p, k, max_degree, &o)?;
    let mut spans: Vec<Span> = vec![Span { generators: vec![] }];
    let mut frontier: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..size_bound {
        let mut next = Vec::new();
        for s in &frontier {
            let start = s.last().map_or(0, |&i| i + 1);
            for i in start..cands.len() {
                let mut t = s.clone();
                t.push(i);
                let gens: Vec<Monomial> = t.iter().map(|&j| cands[j].clone()).collect();
                let red = o.reduce(gens.clone());
                if red.generators.len() == gens.len() {
                    if !spans.contains(&red) {
                        spans.push(red);
                    }
                    next.push(t);
                }
                if spans.len() > SPAN_CAP {
                    return Err(Error::EnumerationBoundExceeded(format!("more than {SPAN_CAP} spans")));
                }
            }
        }
        frontier = next;
    }
    spans.sort();
    let mut join = Vec::new();
    let mut product = Vec::new();
    for s in &spans {
        let mut jr = Vec::new();
        let mut pr = Vec::new();
        for t in &spans {
            jr.push(o.reduce(s.generators.iter().chain(&t.generators).cloned().collect()));
            let mut prods = Vec::new();
            for a in &s.generators {
                for c in &t.generators {
                    prods.push(o.normalize(&a.mul(c)?)?);
                }
            }
            pr.push(o.reduce(prods));
        }
        join.push(jr);
        product.push(pr);
    }
    let tentative = *o.unknown.borrow();
    Ok(AnFragment { candidates: cands, spans, join, product, tentative })
}

type Collected = BTreeMap<BTreeMap<String, u32>, GroundValue>;
type AbsFn = Box<dyn Fn(&GroundValue) -> Result<GroundValue>>;

fn image(s: &Span, k: &KDesignation) -> Result<Collected> {
    let (tag, abs): (GroundTag, AbsFn) = match k {
        KDesignation::Valued(v) => {
            let v2 = BaseValuation { kind: v.kind.clone(), source: v.source, target: GroundTag::Trop };
            (GroundTag::Trop, Box::new(move |c| v2.apply(c)))
        }
        KDesignation::Ground => (GroundTag::Bool, Box::new(|_| Ok(GroundValue::one(GroundTag::Bool)))),
    };
    let mut out = Collected::new();
    for m in &s.generators {
        let c = abs(&m.coeff)?;
        let e = out.entry(m.exps.clone()).or_insert_with(|| GroundValue::zero(tag));
        *e = e.add(&c)?;
    }
    Ok(out)
}

fn add(a: &Collected, b: &Collected) -> Result<Collected> {
    let mut out = a.clone();
    for (e, c) in b {
        match out.get_mut(e) {
            Some(x) => *x = x.add(c)?,
            None => {
                out.insert(e.clone(), c.clone());
            }
        }
    }
    Ok(out)
}

fn mul(a: &Collected, b: &Collected) -> Result<Collected> {
    let mut out = Collected::new();
    for (e1, c1) in a {
        for (e2, c2) in b {
            let mut e = e1.clone();
            for (g, k) in e2 {
                *e.entry(g.clone()).or_insert(0) += k;
            }
            let c = c1.mul(c2)?;
            match out.get_mut(&e) {
                Some(x) => *x = x.add(&c)?,
                None => {
                    out.insert(e, c);
                }
            }
        }
    }
    Ok(out)
}

fn show(c: &Collected) -> String {
    let t: Vec<String> = c.iter().map(|(e, x)| Monomial::new(x.clone(), e.clone()).to_string()).collect();
    if t.is_empty() {
        "0".into()
    } else {
        t.join(" + ")
    }
}

/// Checks that sending a span to the sum of the images of its generators is
/// injective on the fragment and turns join into sum and product into
/// product of tropical polynomials (BOOL for the ground designation, TROP
/// with p-adic absolute values for a valued one).
pub fn spans_embed_tropically(frag: &AnFragment, k: &KDesignation) -> Result<Verdict> {
    let imgs: Vec<Collected> = frag.spans.iter().map(|s| image(s, k)).collect::<Result<_>>()?;
    let fail = |what: String| Verdict::Disproved(Witness::Computed(what));
    for i in 0..imgs.len() {
        for j in (i + 1)..imgs.len() {
            if imgs[i] == imgs[j] {
                return Ok(fail(format!("{} and {} have the same image {}", frag.spans[i], frag.spans[j], show(&imgs[i]))));
            }
        }
    }
    for i in 0..imgs.len() {
        for j in 0..imgs.len() {
            let js = image(&frag.join[i][j], k)?;
            if js != add(&imgs[i], &imgs[j])? {
                return Ok(fail(format!("join of {} and {} maps to {}", frag.spans[i], frag.spans[j], show(&js))));
            }
            let ps = image(&frag.product[i][j], k)?;
            if ps != mul(&imgs[i], &imgs[j])? {
                return Ok(fail(format!("product of {} and {} maps to {}", frag.spans[i], frag.spans[j], show(&ps))));
            }
        }
    }
    let n = imgs.len();
    let msg = format!("{n} spans, {} joins and {} products agree with their images", n * n, n * n);
    if frag.tentative {
        return Ok(Verdict::Unknown(format!("{msg}, but some memberships were Unknown")));
    }
    Ok(Verdict::Proved(vec![msg]))
}
