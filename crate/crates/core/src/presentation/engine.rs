//! Three-valued bounded prover for derivability in a presentation.
//!
//! Grounds with -1 reduce derivability to ideal membership. Other grounds
//! run a bidirectional breadth-first search over canonical sums, refuting
//! through countermodels in small grounds or exhaustive saturation.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::OnceLock;

use num_traits::ToPrimitive;

use super::monoid::{degree, divides, Elem, Exps, MonoidRules};
use super::ring::{self, Poly};
use super::{DerivationBudget, FormalSum, Monomial, Presentation, RelMode, Relation, Verdict, Witness};
use crate::error::{Error, Result};
use crate::ground::{g_leq_sum, qf, GroundTag, GroundValue, OrderMode, Q};

const STATE_CAP: usize = 40_000;
const MODEL_ASSIGNMENT_CAP: usize = 4_096;
const GROEBNER_PAIR_CAP: usize = 4_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    /// Multisets of monomials (F1, NAT, ordered groups without addition).
    Formal,
    /// Sets of monomials (BOOL).
    Set,
    /// One coefficient per monomial, collected by maximum.
    Max,
    /// One coefficient per monomial, collected by addition (RPLUS).
    Additive,
    /// Grounds with -1: ideal membership.
    Ring,
}

fn kind_of(tag: GroundTag) -> Kind {
    if tag.has_minus_one() {
        return Kind::Ring;
    }
    match tag {
        GroundTag::Bool => Kind::Set,
        GroundTag::F1 | GroundTag::Nat | GroundTag::OrdGroup { idempotent: false, .. } => Kind::Formal,
        GroundTag::RPlus => Kind::Additive,
        _ => Kind::Max,
    }
}

/// Which refutation methods may be used. Restricting to countermodels keeps
/// refutations valid for extensions by rules that every model satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DisproofPolicy {
    pub countermodels: bool,
    pub saturation: bool,
    pub ideal: bool,
}

impl Default for DisproofPolicy {
    fn default() -> Self {
        DisproofPolicy { countermodels: true, saturation: true, ideal: true }
    }
}

impl DisproofPolicy {
    pub fn countermodels_only() -> Self {
        DisproofPolicy { countermodels: true, saturation: false, ideal: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Term {
    e: Exps,
    c: GroundValue,
}

type Sum = Vec<Term>;

struct Step {
    l: Sum,
    r: Sum,
    label: String,
}

#[derive(Clone, Copy, Debug)]
enum CoeffMap {
    Coerce,
    Support,
}

struct ModelSpec {
    target: GroundTag,
    mode: OrderMode,
    coeff: CoeffMap,
    values: Vec<GroundValue>,
}

struct ValidModel {
    spec: usize,
    assignment: Vec<GroundValue>,
}

/// A compiled presentation ready to answer derivability queries. Safe to
/// share between threads; lazily built caches are write-once.
pub struct Prover {
    pres: Presentation,
    idx: BTreeMap<String, usize>,
    rules: MonoidRules,
    kind: Kind,
    budget: DerivationBudget,
    policy: DisproofPolicy,
    steps: Vec<Step>,
    step_keys: HashSet<(Sum, Sum)>,
    standard: OnceLock<(Vec<Exps>, bool)>,
    specs: Vec<ModelSpec>,
    models: OnceLock<Vec<ValidModel>>,
    ring_gens: Vec<Poly>,
    groebner: OnceLock<Option<Vec<Poly>>>,
}

fn rq(n: i64, d: i64) -> Q {
    qf(n, d)
}

fn model_specs(tag: GroundTag) -> Vec<ModelSpec> {
    use GroundTag::*;
    let vals = |t: GroundTag, xs: &[(i64, i64)]| -> Vec<GroundValue> {
        xs.iter().map(|&(n, d)| GroundValue::rational(t, rq(n, d)).unwrap()).collect()
    };
    let bools = || vals(Bool, &[(0, 1), (1, 1)]);
    let trops = || vals(Trop, &[(0, 1), (1, 2), (1, 1), (2, 1)]);
    let spec = |target, mode, coeff, values| ModelSpec { target, mode, coeff, values };
    let both = |target: GroundTag, coeff: CoeffMap, values: Vec<GroundValue>| {
        vec![
            spec(target, OrderMode::Pos, coeff, values.clone()),
            spec(target, OrderMode::Alg, coeff, values),
        ]
    };
    let mut out = Vec::new();
    match tag {
        F1 => {
            out.push(spec(F1, OrderMode::Alg, CoeffMap::Coerce, vals(F1, &[(0, 1), (1, 1)])));
            out.extend(both(Bool, CoeffMap::Coerce, bools()));
            out.extend(both(Nat, CoeffMap::Coerce, vals(Nat, &[(0, 1), (1, 1), (2, 1)])));
            out.extend(both(Trop, CoeffMap::Coerce, trops()));
        }
        Bool => {
            out.extend(both(Bool, CoeffMap::Coerce, bools()));
            out.extend(both(Trop, CoeffMap::Coerce, trops()));
        }
        Nat => {
            out.extend(both(Nat, CoeffMap::Coerce, vals(Nat, &[(0, 1), (1, 1), (2, 1)])));
            out.extend(both(Bool, CoeffMap::Coerce, bools()));
            out.extend(both(Trop, CoeffMap::Coerce, trops()));
            out.extend(both(RPlus, CoeffMap::Coerce, vals(RPlus, &[(0, 1), (1, 2), (1, 1), (2, 1)])));
        }
        RPlus | Trop => {
            out.extend(both(tag, CoeffMap::Coerce, vals(tag, &[(0, 1), (1, 2), (1, 1), (2, 1)])));
            out.extend(both(Bool, CoeffMap::Support, bools()));
        }
        OTrop => {
            out.extend(both(OTrop, CoeffMap::Coerce, vals(OTrop, &[(0, 1), (1, 4), (1, 2), (1, 1)])));
            out.extend(both(Trop, CoeffMap::Coerce, trops()));
            out.extend(both(Bool, CoeffMap::Support, bools()));
        }
        TropN(n) => {
            let n = n as usize;
            let mut values = vec![GroundValue::zero(tag), GroundValue::one(tag)];
            for x in [rq(2, 1), rq(1, 2)] {
                let mut v = vec![rq(1, 1); n];
                v[0] = x.clone();
                values.push(GroundValue::tuple(tag, v).unwrap());
                if n > 1 {
                    let mut w = vec![rq(1, 1); n];
                    w[n - 1] = x;
                    values.push(GroundValue::tuple(tag, w).unwrap());
                }
            }
            out.extend(both(tag, CoeffMap::Coerce, values));
            out.extend(both(Bool, CoeffMap::Support, bools()));
        }
        OrdGroup { rank, .. } => {
            let r = rank as usize;
            let mut values = vec![GroundValue::zero(tag), GroundValue::one(tag)];
            for i in 0..r.min(2) {
                for s in [1i64, -1] {
                    let mut e = vec![0; r];
                    e[i] = s;
                    values.push(GroundValue::word(tag, e).unwrap());
                }
            }
            out.extend(both(tag, CoeffMap::Coerce, values));
            out.extend(both(Bool, CoeffMap::Support, bools()));
        }
        F1Sq | Int | Rat => {}
    }
    out
}

fn map_coeff(c: &GroundValue, target: GroundTag, how: CoeffMap) -> Option<GroundValue> {
    match how {
        CoeffMap::Coerce => c.coerce(target),
        CoeffMap::Support => Some(if c.is_zero() { GroundValue::zero(target) } else { GroundValue::one(target) }),
    }
}

impl Prover {
    pub fn new(p: &Presentation, budget: DerivationBudget) -> Result<Self> {
        Self::with_policy(p, budget, DisproofPolicy::default())
    }

    pub fn with_policy(p: &Presentation, budget: DerivationBudget, policy: DisproofPolicy) -> Result<Self> {
        p.validate()?;
        let idx: BTreeMap<String, usize> = p.generators.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
        let n = p.generators.len();
        let kind = kind_of(p.ground);
        let to_elem = |m: &Monomial| -> Elem {
            if m.is_zero() {
                return None;
            }
            let mut e = vec![0; n];
            for (g, x) in &m.exps {
                e[idx[g]] += x;
            }
            Some((m.coeff.clone(), e))
        };
        let pairs: Vec<(Elem, Elem)> = p.monoid_relations.iter().map(|(a, b)| (to_elem(a), to_elem(b))).collect();
        let max_in = p
            .monoid_relations
            .iter()
            .map(|(a, b)| a.degree().max(b.degree()))
            .max()
            .unwrap_or(0);
        let cap = (2 * max_in).max(budget.max_degree).max(8) + 4;
        let rules = MonoidRules::complete(p.ground, n, pairs, cap)?;
        let mut prover = Prover {
            pres: p.clone(),
            idx,
            rules,
            kind,
            budget,
            policy,
            steps: vec![],
            step_keys: HashSet::new(),
            standard: OnceLock::new(),
            specs: model_specs(p.ground),
            models: OnceLock::new(),
            ring_gens: vec![],
            groebner: OnceLock::new(),
        };
        if kind == Kind::Ring {
            let mut gens = Vec::new();
            for r in &p.subaddition {
                gens.push(prover.poly_diff(&r.lhs, &r.rhs)?);
            }
            for (a, b) in &p.monoid_relations {
                gens.push(prover.poly_diff(&FormalSum::single(a.clone()), &FormalSum::single(b.clone()))?);
            }
            prover.ring_gens = gens;
        }
        let mut steps = Vec::new();
        let mut keys = HashSet::new();
        for r in &p.subaddition {
            for (l, rr) in r.orientations() {
                let ls = prover.sum(&l)?;
                let rs = prover.sum(&rr)?;
                if ls == rs || !keys.insert((ls.clone(), rs.clone())) {
                    continue;
                }
                steps.push(Step { l: ls, r: rs, label: format!("{l} <= {rr}") });
            }
        }
        prover.steps = steps;
        prover.step_keys = keys;
        Ok(prover)
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn budget(&self) -> DerivationBudget {
        self.budget
    }

    fn exps_of(&self, m: &Monomial) -> Result<Exps> {
        let mut e = vec![0; self.pres.generators.len()];
        for (g, x) in &m.exps {
            let i = self.idx.get(g).ok_or_else(|| Error::Invalid(format!("unknown generator {g}")))?;
            e[*i] += x;
        }
        Ok(e)
    }

    fn term(&self, m: &Monomial) -> Result<Option<Term>> {
        if m.tag() != self.pres.ground {
            return Err(Error::TagMismatch(format!("{} in a {} presentation", m.tag(), self.pres.ground)));
        }
        if m.is_zero() {
            return Ok(None);
        }
        let e = self.exps_of(m)?;
        Ok(self.rules.nf(m.coeff.clone(), e).map(|(c, e)| Term { e, c }))
    }

    fn sum(&self, s: &FormalSum) -> Result<Sum> {
        let mut ts = Vec::new();
        for m in &s.terms {
            if let Some(t) = self.term(m)? {
                ts.push(t);
            }
        }
        Ok(self.canon(ts))
    }

    fn monomial_of(&self, t: &Term) -> Monomial {
        let exps = t
            .e
            .iter()
            .enumerate()
            .filter(|(_, x)| **x > 0)
            .map(|(i, x)| (self.pres.generators[i].clone(), *x))
            .collect();
        Monomial::new(t.c.clone(), exps)
    }

    fn show(&self, s: &Sum) -> String {
        FormalSum::new(s.iter().map(|t| self.monomial_of(t)).collect()).to_string()
    }

    /// Normal form of a monomial under the completed monoid relations.
    pub fn normalize(&self, m: &Monomial) -> Result<Monomial> {
        Ok(match self.term(m)? {
            None => Monomial::zero(self.pres.ground),
            Some(t) => self.monomial_of(&t),
        })
    }

    fn canon(&self, ts: Vec<Term>) -> Sum {
        let tag = self.pres.ground;
        let mut ts: Vec<Term> = ts.into_iter().filter(|t| !t.c.is_zero()).collect();
        match self.kind {
            Kind::Formal => {
                if tag == GroundTag::Nat {
                    let one = GroundValue::one(tag);
                    let mut out = Vec::new();
                    for t in ts {
                        let n = t.c.to_rational().and_then(|x| x.to_integer().to_usize()).unwrap_or(1).min(10_000);
                        for _ in 0..n {
                            out.push(Term { e: t.e.clone(), c: one.clone() });
                        }
                    }
                    ts = out;
                }
                ts.sort();
                ts
            }
            Kind::Set => {
                let one = GroundValue::one(tag);
                let mut es: Vec<Exps> = ts.into_iter().map(|t| t.e).collect();
                es.sort();
                es.dedup();
                es.into_iter().map(|e| Term { e, c: one.clone() }).collect()
            }
            Kind::Max | Kind::Additive | Kind::Ring => {
                let mut map: BTreeMap<Exps, GroundValue> = BTreeMap::new();
                for t in ts {
                    match map.get_mut(&t.e) {
                        None => {
                            map.insert(t.e, t.c);
                        }
                        Some(c) => {
                            *c = if self.kind == Kind::Ring {
                                let x = c.to_rational().unwrap() + t.c.to_rational().unwrap();
                                GroundValue::rational(tag, x).unwrap()
                            } else {
                                c.add(&t.c).expect("semiring ground")
                            };
                        }
                    }
                }
                map.into_iter().filter(|(_, c)| !c.is_zero()).map(|(e, c)| Term { e, c }).collect()
            }
        }
    }

    fn scale(&self, s: &Sum, m: &Term) -> Sum {
        let ts = s
            .iter()
            .filter_map(|t| {
                let c = t.c.mul(&m.c).ok()?;
                let e: Exps = t.e.iter().zip(&m.e).map(|(a, b)| a + b).collect();
                self.rules.nf(c, e).map(|(c, e)| Term { e, c })
            })
            .collect();
        self.canon(ts)
    }

    fn standard(&self) -> &(Vec<Exps>, bool) {
        self.standard.get_or_init(|| self.rules.standard_monomials(self.budget.max_degree))
    }

    fn poly_diff(&self, lhs: &FormalSum, rhs: &FormalSum) -> Result<Poly> {
        let mut p = Poly::default();
        for (s, sign) in [(rhs, 1i64), (lhs, -1i64)] {
            for m in &s.terms {
                if m.is_zero() {
                    continue;
                }
                let c = m.coeff.to_rational().ok_or_else(|| Error::UnsupportedGround(self.pres.ground.name()))?;
                p.add_term(self.exps_of(m)?, c * Q::from_integer(sign.into()));
            }
        }
        Ok(p)
    }

    /// Multipliers `m` with `m · pat` landing on the monomial of `t`.
    fn multipliers_into(&self, pat: &Term, t: &Term, out: &mut Vec<Term>) {
        let tag = self.pres.ground;
        let coeff = |k: &GroundValue| -> Option<GroundValue> {
            match self.kind {
                Kind::Set => Some(GroundValue::one(tag)),
                Kind::Formal if !matches!(tag, GroundTag::OrdGroup { .. }) => Some(GroundValue::one(tag)),
                _ => t.c.div(&k.mul(&pat.c).ok()?),
            }
        };
        if self.rules.is_free() {
            if divides(&pat.e, &t.e) {
                let e: Exps = t.e.iter().zip(&pat.e).map(|(a, b)| a - b).collect();
                if degree(&e) <= self.budget.max_degree {
                    if let Some(c) = coeff(&GroundValue::one(tag)) {
                        out.push(Term { e, c });
                    }
                }
            }
            return;
        }
        for m in &self.standard().0 {
            let e: Exps = m.iter().zip(&pat.e).map(|(a, b)| a + b).collect();
            if let Some((k, e2)) = self.rules.nf(GroundValue::one(tag), e) {
                if e2 == t.e {
                    if let Some(c) = coeff(&k) {
                        out.push(Term { e: m.clone(), c });
                    }
                }
            }
        }
    }

    fn candidates(&self, l: &Sum, r: &Sum, s: &Sum, goal: &Sum) -> Vec<Term> {
        let mut out = Vec::new();
        if l.is_empty() {
            out.push(Term { e: vec![0; self.pres.generators.len()], c: GroundValue::one(self.pres.ground) });
            for pat in r {
                for t in goal.iter().chain(s) {
                    self.multipliers_into(pat, t, &mut out);
                }
            }
        } else {
            let pats: &[Term] = if matches!(self.kind, Kind::Max | Kind::Additive) { l } else { &l[..1] };
            for pat in pats {
                for t in s {
                    self.multipliers_into(pat, t, &mut out);
                }
            }
        }
        let mut seen = HashSet::new();
        out.retain(|t| seen.insert(t.clone()));
        out
    }

    /// All results of rewriting `cl` inside `s` into `cr`.
    fn rewrite(&self, s: &Sum, cl: &Sum, cr: &Sum) -> Vec<Sum> {
        match self.kind {
            Kind::Formal => {
                let mut rest = s.clone();
                for t in cl {
                    match rest.iter().position(|x| x == t) {
                        Some(i) => {
                            rest.remove(i);
                        }
                        None => return vec![],
                    }
                }
                rest.extend(cr.iter().cloned());
                vec![self.canon(rest)]
            }
            Kind::Set | Kind::Max => {
                let mut droppable = Vec::new();
                for t in cl {
                    let Some(x) = s.iter().find(|x| x.e == t.e) else { return vec![] };
                    match x.c.cmp_order(&t.c) {
                        Some(std::cmp::Ordering::Less) | None => return vec![],
                        Some(std::cmp::Ordering::Equal) => droppable.push(t.e.clone()),
                        Some(std::cmp::Ordering::Greater) => {}
                    }
                }
                let k = droppable.len().min(12);
                let mut outs = Vec::new();
                for mask in 0u32..(1 << k) {
                    let dropped: Vec<&Exps> = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| &droppable[i]).collect();
                    let mut v: Vec<Term> = s.iter().filter(|x| !dropped.contains(&&x.e)).cloned().collect();
                    v.extend(cr.iter().cloned());
                    outs.push(self.canon(v));
                }
                outs
            }
            Kind::Additive => {
                let mut map: BTreeMap<Exps, Q> = s.iter().map(|t| (t.e.clone(), t.c.to_rational().unwrap())).collect();
                for t in cl {
                    let Some(x) = map.get_mut(&t.e) else { return vec![] };
                    *x -= t.c.to_rational().unwrap();
                    if *x < Q::from_integer(0.into()) {
                        return vec![];
                    }
                }
                let mut v: Vec<Term> = map
                    .into_iter()
                    .map(|(e, c)| Term { e, c: GroundValue::rational(self.pres.ground, c).unwrap() })
                    .collect();
                v.extend(cr.iter().cloned());
                vec![self.canon(v)]
            }
            Kind::Ring => vec![],
        }
    }

    fn too_big(&self, s: &Sum) -> bool {
        s.len() > self.budget.max_sum_len || s.iter().any(|t| degree(&t.e) > self.budget.max_degree)
    }

    fn successors(&self, s: &Sum, backward: bool, goal: &Sum, cut: &mut bool) -> Vec<(Sum, String)> {
        let mut out = Vec::new();
        for step in &self.steps {
            let (l, r) = if backward { (&step.r, &step.l) } else { (&step.l, &step.r) };
            for m in self.candidates(l, r, s, goal) {
                let cl = self.scale(l, &m);
                let cr = self.scale(r, &m);
                for next in self.rewrite(s, &cl, &cr) {
                    if next == *s {
                        continue;
                    }
                    if self.too_big(&next) {
                        *cut = true;
                        continue;
                    }
                    let mult = self.monomial_of(&m);
                    out.push((next, format!("{} by {}", mult, step.label)));
                }
            }
        }
        out
    }

    fn search(&self, s0: &Sum, t0: &Sum) -> (Option<Vec<String>>, bool) {
        type Parents = HashMap<Sum, Option<(Sum, String)>>;
        let mut cut = false;
        let mut fwd: Parents = HashMap::new();
        let mut bwd: Parents = HashMap::new();
        fwd.insert(s0.clone(), None);
        bwd.insert(t0.clone(), None);
        let mut ff = vec![s0.clone()];
        let mut fb = vec![t0.clone()];
        let path = |fwd: &Parents, bwd: &Parents, meet: &Sum| -> Vec<String> {
            let mut left = Vec::new();
            let mut cur = meet.clone();
            while let Some(Some((prev, label))) = fwd.get(&cur) {
                left.push(format!("{} -> {}  [{}]", self.show(prev), self.show(&cur), label));
                cur = prev.clone();
            }
            left.reverse();
            let mut cur = meet.clone();
            while let Some(Some((next, label))) = bwd.get(&cur) {
                left.push(format!("{} -> {}  [{}]", self.show(&cur), self.show(next), label));
                cur = next.clone();
            }
            left
        };
        let mut meet: Option<Sum> = None;
        'layers: for _ in 0..self.budget.max_depth {
            let backward = match (ff.is_empty(), fb.is_empty()) {
                (true, true) => break,
                (true, false) => true,
                (false, true) => false,
                (false, false) => fb.len() < ff.len(),
            };
            let (frontier, mine, other, goal) =
                if backward { (&mut fb, &mut bwd, &fwd, s0) } else { (&mut ff, &mut fwd, &bwd, t0) };
            let mut next_frontier = Vec::new();
            for s in frontier.iter() {
                for (n, label) in self.successors(s, backward, goal, &mut cut) {
                    if mine.contains_key(&n) {
                        continue;
                    }
                    mine.insert(n.clone(), Some((s.clone(), label)));
                    if other.contains_key(&n) {
                        meet = Some(n);
                        break 'layers;
                    }
                    next_frontier.push(n);
                    if mine.len() + other.len() > STATE_CAP {
                        return (None, true);
                    }
                }
            }
            *frontier = next_frontier;
        }
        if let Some(n) = meet {
            return (Some(path(&fwd, &bwd, &n)), cut);
        }
        (None, cut)
    }

    fn saturation_applies(&self) -> bool {
        if self.steps.is_empty() {
            return true;
        }
        if !matches!(self.kind, Kind::Formal | Kind::Set) {
            return false;
        }
        let has_zero_rules = self.rules.rules.iter().any(|r| r.rhs.is_none());
        let monoid_ok = self.rules.is_free() || self.standard().1;
        monoid_ok && !has_zero_rules && self.steps.iter().all(|s| !s.l.is_empty())
    }

    /// Explores every sum reachable from `s0`. `Some(true)` if `t0` is reached,
    /// `Some(false)` if the exploration completed without it.
    fn saturate(&self, s0: &Sum, t0: &Sum) -> (Option<bool>, usize) {
        let mut seen: HashSet<Sum> = HashSet::new();
        seen.insert(s0.clone());
        let mut frontier = vec![s0.clone()];
        let mut cut = false;
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for s in &frontier {
                let succ = self.successors(s, false, t0, &mut cut);
                if cut {
                    return (None, seen.len());
                }
                for (n, _) in succ {
                    if n == *t0 {
                        return (Some(true), seen.len());
                    }
                    if seen.insert(n.clone()) {
                        next.push(n);
                    }
                    if seen.len() > STATE_CAP {
                        return (None, seen.len());
                    }
                }
            }
            frontier = next;
        }
        (Some(false), seen.len())
    }

    fn eval(&self, spec: &ModelSpec, a: &[GroundValue], m: &Monomial) -> Option<GroundValue> {
        let mut v = map_coeff(&m.coeff, spec.target, spec.coeff)?;
        for (g, e) in &m.exps {
            v = v.mul(&a[self.idx[g]].pow(*e)).ok()?;
        }
        Some(v)
    }

    fn eval_sum(&self, spec: &ModelSpec, a: &[GroundValue], s: &FormalSum) -> Option<Vec<GroundValue>> {
        s.terms.iter().map(|m| self.eval(spec, a, m)).collect()
    }

    fn holds(&self, spec: &ModelSpec, a: &[GroundValue], l: &FormalSum, r: &FormalSum) -> bool {
        match (self.eval_sum(spec, a, l), self.eval_sum(spec, a, r)) {
            (Some(x), Some(y)) => g_leq_sum(spec.mode, &x, &y).unwrap_or(false),
            _ => false,
        }
    }

    fn is_model(&self, spec: &ModelSpec, a: &[GroundValue]) -> bool {
        for (u, v) in &self.pres.monoid_relations {
            if self.eval(spec, a, u) != self.eval(spec, a, v) {
                return false;
            }
        }
        self.pres.subaddition.iter().all(|r| r.orientations().iter().all(|(l, rr)| self.holds(spec, a, l, rr)))
    }

    fn models(&self) -> &Vec<ValidModel> {
        self.models.get_or_init(|| {
            let n = self.pres.generators.len();
            let mut out = Vec::new();
            for (si, spec) in self.specs.iter().enumerate() {
                let k = spec.values.len();
                let mut digits = vec![0usize; n];
                for _ in 0..MODEL_ASSIGNMENT_CAP {
                    let a: Vec<GroundValue> = digits.iter().map(|&d| spec.values[d].clone()).collect();
                    if self.is_model(spec, &a) {
                        out.push(ValidModel { spec: si, assignment: a });
                    }
                    let mut i = 0;
                    loop {
                        if i == n {
                            break;
                        }
                        digits[i] += 1;
                        if digits[i] < k {
                            break;
                        }
                        digits[i] = 0;
                        i += 1;
                    }
                    if i == n {
                        break;
                    }
                }
            }
            out
        })
    }

    fn countermodel(&self, l: &FormalSum, r: &FormalSum) -> Option<Witness> {
        for m in self.models() {
            let spec = &self.specs[m.spec];
            if !self.holds(spec, &m.assignment, l, r) {
                let assignment = self.pres.generators.iter().cloned().zip(m.assignment.iter().cloned()).collect();
                return Some(Witness::Countermodel { target: spec.target, mode: spec.mode, assignment });
            }
        }
        None
    }

    fn ring_verdict(&self, l: &FormalSum, r: &FormalSum) -> Verdict {
        let f = match self.poly_diff(l, r) {
            Ok(f) => f,
            Err(e) => return Verdict::Unknown(e.to_string()),
        };
        if f.is_zero() {
            return Verdict::Proved(vec!["both sides agree".into()]);
        }
        let gb = self.groebner.get_or_init(|| ring::groebner(&self.ring_gens, GROEBNER_PAIR_CAP));
        let n = self.pres.generators.len();
        match self.pres.ground {
            GroundTag::Rat => match gb {
                Some(gb) if ring::in_ideal(gb, &f) => Verdict::Proved(vec![format!("{} - ({}) lies in the ideal", r, l)]),
                Some(_) if self.policy.ideal => Verdict::Disproved(Witness::IdealNonMembership),
                Some(_) => Verdict::Unknown("ideal non-membership not admissible here".into()),
                None => Verdict::Unknown("Groebner basis exceeded its pair budget".into()),
            },
            _ => {
                if let Some(gb) = gb {
                    if !ring::in_ideal(gb, &f) {
                        return if self.policy.ideal {
                            Verdict::Disproved(Witness::IdealNonMembership)
                        } else {
                            Verdict::Unknown("ideal non-membership not admissible here".into())
                        };
                    }
                }
                let top = self.ring_gens.iter().map(|g| g.degree()).max().unwrap_or(0).max(f.degree());
                let d = (top + 2).min(self.budget.max_degree.max(top));
                if ring::in_integer_span(&self.ring_gens, &f, n, d) {
                    Verdict::Proved(vec![format!("{} - ({}) is an integer combination up to degree {d}", r, l)])
                } else {
                    Verdict::Unknown(format!("no integer certificate up to degree {d} ({})", self.budget))
                }
            }
        }
    }

    /// Decides `l ≤ r`.
    pub fn derives_le(&self, l: &FormalSum, r: &FormalSum) -> Verdict {
        let (s0, t0) = match (self.sum(l), self.sum(r)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => return Verdict::Unknown(e.to_string()),
        };
        if s0 == t0 {
            return Verdict::Proved(vec![format!("{} and {} have the same normal form", l, r)]);
        }
        if self.step_keys.contains(&(s0.clone(), t0.clone())) {
            return Verdict::Proved(vec![format!("{l} <= {r} is a generator")]);
        }
        if self.kind == Kind::Ring {
            return self.ring_verdict(l, r);
        }
        // a countermodel does not depend on the budget and is cheap to find
        if self.policy.countermodels {
            if let Some(w) = self.countermodel(l, r) {
                return Verdict::Disproved(w);
            }
        }
        let (found, cut) = self.search(&s0, &t0);
        if let Some(trace) = found {
            return Verdict::Proved(trace);
        }
        if self.policy.saturation && self.saturation_applies() {
            match self.saturate(&s0, &t0) {
                (Some(false), states) => return Verdict::Disproved(Witness::Saturated { states }),
                (Some(true), _) => return Verdict::Proved(vec![format!("{l} <= {r} found by saturation")]),
                (None, _) => {}
            }
        }
        let why = if cut { "search cut off" } else { "search space exhausted at depth" };
        Verdict::Unknown(format!("{why} ({})", self.budget))
    }

    pub fn derives(&self, r: &Relation) -> Verdict {
        let mut v = self.derives_le(&r.lhs, &r.rhs);
        if r.mode == RelMode::Eq && !v.is_disproved() {
            v = v.and(self.derives_le(&r.rhs, &r.lhs));
        }
        v
    }

    pub fn equal(&self, a: &Monomial, b: &Monomial) -> Verdict {
        self.derives(&Relation::eq(FormalSum::single(a.clone()), FormalSum::single(b.clone())))
    }
}

/// Normal form of `m` under the completed monoid relations of `p`.
pub fn normalize_monomial(p: &Presentation, m: &Monomial) -> Result<Monomial> {
    Prover::new(p, p.budget_default)?.normalize(m)
}

/// Bounded decision of whether `r` holds in `p`.
pub fn derives(p: &Presentation, r: &Relation, b: DerivationBudget) -> Verdict {
    match Prover::new(p, b) {
        Ok(pr) => pr.derives(r),
        Err(e) => Verdict::Unknown(e.to_string()),
    }
}

/// `a ≐ b` in the proper quotient.
pub fn equal_in_quotient(p: &Presentation, a: &Monomial, b: &Monomial, budget: DerivationBudget) -> Verdict {
    match Prover::new(p, budget) {
        Ok(pr) => pr.equal(a, b),
        Err(e) => Verdict::Unknown(e.to_string()),
    }
}

fn check_all(target: &Prover, rels: &[Relation], mons: &[(Monomial, Monomial)]) -> Verdict {
    let mut out = Verdict::Proved(vec![]);
    for r in rels {
        out = out.and(target.derives(r).about(&r.to_string()));
        if out.is_disproved() {
            return out;
        }
    }
    for (a, b) in mons {
        let v = match (target.normalize(a), target.normalize(b)) {
            (Ok(x), Ok(y)) if x == y => Verdict::Proved(vec![]),
            _ => target.equal(a, b),
        };
        out = out.and(v.about(&format!("{a} = {b}")));
        if out.is_disproved() {
            return out;
        }
    }
    out
}

/// Both presentations define the same ordered blueprint on the same generators.
pub fn congruence_equiv(p1: &Presentation, p2: &Presentation, b: DerivationBudget) -> Result<Verdict> {
    if p1.ground != p2.ground {
        return Err(Error::GroundMismatch(format!("{} vs {}", p1.ground, p2.ground)));
    }
    let s1: std::collections::BTreeSet<&String> = p1.generators.iter().collect();
    let s2: std::collections::BTreeSet<&String> = p2.generators.iter().collect();
    if s1 != s2 {
        return Err(Error::GeneratorMismatch(format!("{:?} vs {:?}", p1.generators, p2.generators)));
    }
    let pr1 = Prover::new(p1, b)?;
    let pr2 = Prover::new(p2, b)?;
    let v = check_all(&pr2, &p1.subaddition, &p1.monoid_relations);
    if v.is_disproved() {
        return Ok(v);
    }
    Ok(v.and(check_all(&pr1, &p2.subaddition, &p2.monoid_relations)))
}

/// Image of a scalar along the structure map between grounds. BOOL maps
/// into any ground as the monoid map {0,1}; additivity is checked separately.
pub(crate) fn transfer(c: &GroundValue, to: GroundTag) -> Option<GroundValue> {
    c.coerce(to).or_else(|| {
        if c.tag() == GroundTag::Bool {
            Some(if c.is_zero() { GroundValue::zero(to) } else { GroundValue::one(to) })
        } else {
            None
        }
    })
}

pub(crate) fn map_monomial(m: &Monomial, to: GroundTag, f: &BTreeMap<String, Monomial>) -> Result<Monomial> {
    let c = transfer(&m.coeff, to).ok_or_else(|| Error::GroundMismatch(format!("no map from {} to {to}", m.tag())))?;
    let mut out = Monomial::constant(c);
    for (g, e) in &m.exps {
        let img = f.get(g).ok_or_else(|| Error::GeneratorMismatch(format!("no image for {g}")))?;
        for _ in 0..*e {
            out = out.mul(img)?;
        }
    }
    Ok(out)
}

fn map_sum(s: &FormalSum, to: GroundTag, f: &BTreeMap<String, Monomial>) -> Result<FormalSum> {
    Ok(FormalSum::new(s.terms.iter().map(|m| map_monomial(m, to, f)).collect::<Result<_>>()?))
}

/// Image of a relation under a generator map into a presentation over `to`.
pub(crate) fn map_relation(r: &Relation, to: GroundTag, f: &BTreeMap<String, Monomial>) -> Result<Relation> {
    Ok(Relation { mode: r.mode, lhs: map_sum(&r.lhs, to, f)?, rhs: map_sum(&r.rhs, to, f)? })
}

pub(crate) fn morphism_verdict(src: &Presentation, dst: &Prover, f: &BTreeMap<String, Monomial>) -> Result<Verdict> {
    let to = dst.presentation().ground;
    let mut rels = Vec::new();
    for r in &src.subaddition {
        rels.push(map_relation(r, to, f)?);
    }
    let mut mons = Vec::new();
    for (a, b) in &src.monoid_relations {
        mons.push((map_monomial(a, to, f)?, map_monomial(b, to, f)?));
    }
    if src.ground.is_idempotent() && !to.is_idempotent() {
        let one = Monomial::one(to);
        rels.push(Relation::eq(FormalSum::new(vec![one.clone(), one.clone()]), FormalSum::single(one)));
    }
    Ok(check_all(dst, &rels, &mons))
}

/// Checks that `phi: p1 -> p2` and `psi: p2 -> p1` (generator images) are
/// mutually inverse morphisms of ordered blueprints.
pub fn isomorphic(
    p1: &Presentation,
    p2: &Presentation,
    phi: &BTreeMap<String, Monomial>,
    psi: &BTreeMap<String, Monomial>,
    b: DerivationBudget,
) -> Result<Verdict> {
    let (g1, g2) = (p1.ground, p2.ground);
    let probe1 = GroundValue::one(g1);
    let probe2 = GroundValue::one(g2);
    if transfer(&probe1, g2).is_none() || transfer(&probe2, g1).is_none() {
        return Err(Error::GroundMismatch(format!("{g1} vs {g2}")));
    }
    let pr1 = Prover::new(p1, b)?;
    let pr2 = Prover::new(p2, b)?;
    let mut v = morphism_verdict(p1, &pr2, phi)?;
    if v.is_disproved() {
        return Ok(v);
    }
    v = v.and(morphism_verdict(p2, &pr1, psi)?);
    for g in &p1.generators {
        let back = map_monomial(&map_monomial(&Monomial::var(g1, g), g2, phi)?, g1, psi)?;
        v = v.and(pr1.equal(&back, &Monomial::var(g1, g)).about(&format!("psi(phi({g})) = {g}")));
    }
    for g in &p2.generators {
        let back = map_monomial(&map_monomial(&Monomial::var(g2, g), g1, psi)?, g2, phi)?;
        v = v.and(pr2.equal(&back, &Monomial::var(g2, g)).about(&format!("phi(psi({g})) = {g}")));
    }
    Ok(v)
}
