//! Finitely presented ordered blueprints and the bounded derivation engine.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ground::{GroundTag, GroundValue};

mod engine;
mod json;
mod monoid;
mod parse;
mod ring;

pub use engine::{
    congruence_equiv, derives, equal_in_quotient, isomorphic, normalize_monomial, DisproofPolicy, Prover,
};
pub(crate) use engine::{map_monomial, map_relation, morphism_verdict, transfer};
pub use json::{MonomialJson, PresentationJson, RelationJson};
pub use monoid::MonoidRules;

/// `coeff · Π gen^exp`. The zero monomial has an empty exponent map.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub coeff: GroundValue,
    pub exps: BTreeMap<String, u32>,
}

impl Monomial {
    pub fn new(coeff: GroundValue, exps: BTreeMap<String, u32>) -> Self {
        let mut m = Monomial { coeff, exps };
        m.canonicalize();
        m
    }

    pub fn constant(coeff: GroundValue) -> Self {
        Monomial { coeff, exps: BTreeMap::new() }
    }

    pub fn one(tag: GroundTag) -> Self {
        Self::constant(GroundValue::one(tag))
    }

    pub fn zero(tag: GroundTag) -> Self {
        Self::constant(GroundValue::zero(tag))
    }

    pub fn var(tag: GroundTag, name: &str) -> Self {
        Self::power(tag, name, 1)
    }

    pub fn power(tag: GroundTag, name: &str, e: u32) -> Self {
        Monomial::new(GroundValue::one(tag), [(name.to_string(), e)].into_iter().collect())
    }

    fn canonicalize(&mut self) {
        if self.coeff.is_zero() {
            self.exps.clear();
        }
        self.exps.retain(|_, e| *e > 0);
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn degree(&self) -> u32 {
        self.exps.values().sum()
    }

    pub fn tag(&self) -> GroundTag {
        self.coeff.tag()
    }

    pub fn mul(&self, o: &Monomial) -> Result<Monomial> {
        let coeff = self.coeff.mul(&o.coeff)?;
        let mut exps = self.exps.clone();
        for (g, e) in &o.exps {
            *exps.entry(g.clone()).or_insert(0) += e;
        }
        Ok(Monomial::new(coeff, exps))
    }

    pub fn with_coeff(&self, coeff: GroundValue) -> Monomial {
        Monomial::new(coeff, self.exps.clone())
    }

    /// Same exponents, coefficient one.
    pub fn support(&self) -> Monomial {
        self.with_coeff(GroundValue::one(self.tag()))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        if !self.coeff.is_one() || self.exps.is_empty() {
            parts.push(self.coeff.to_string());
        }
        for (g, e) in &self.exps {
            if *e == 1 {
                parts.push(g.clone());
            } else {
                parts.push(format!("{g}^{e}"));
            }
        }
        f.write_str(&parts.join("*"))
    }
}

/// A formal sum of monomials; the empty sum is 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FormalSum {
    pub terms: Vec<Monomial>,
}

impl FormalSum {
    pub fn new(terms: Vec<Monomial>) -> Self {
        FormalSum { terms: terms.into_iter().filter(|m| !m.is_zero()).collect() }
    }

    pub fn zero() -> Self {
        FormalSum { terms: vec![] }
    }

    pub fn single(m: Monomial) -> Self {
        FormalSum::new(vec![m])
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn plus(&self, o: &FormalSum) -> FormalSum {
        FormalSum::new(self.terms.iter().chain(&o.terms).cloned().collect())
    }

    pub fn times(&self, o: &FormalSum) -> Result<FormalSum> {
        let mut out = Vec::new();
        for a in &self.terms {
            for b in &o.terms {
                out.push(a.mul(b)?);
            }
        }
        Ok(FormalSum::new(out))
    }

    pub fn scale(&self, m: &Monomial) -> Result<FormalSum> {
        self.times(&FormalSum::single(m.clone()))
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|m| m.degree()).max().unwrap_or(0)
    }
}

impl fmt::Display for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|m| m.to_string()).collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelMode {
    Le,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    pub mode: RelMode,
    pub lhs: FormalSum,
    pub rhs: FormalSum,
}

impl Relation {
    pub fn le(lhs: FormalSum, rhs: FormalSum) -> Self {
        Relation { mode: RelMode::Le, lhs, rhs }
    }

    pub fn eq(lhs: FormalSum, rhs: FormalSum) -> Self {
        Relation { mode: RelMode::Eq, lhs, rhs }
    }

    /// The one-sided inequalities this relation stands for.
    pub fn orientations(&self) -> Vec<(FormalSum, FormalSum)> {
        match self.mode {
            RelMode::Le => vec![(self.lhs.clone(), self.rhs.clone())],
            RelMode::Eq => vec![(self.lhs.clone(), self.rhs.clone()), (self.rhs.clone(), self.lhs.clone())],
        }
    }

    /// `a ≤ Σb` with a single (or no) term on the left.
    pub fn is_left_monomial(&self) -> bool {
        self.mode == RelMode::Le && self.lhs.len() <= 1
    }

    pub fn plus(&self, o: &Relation) -> Relation {
        let mode = if self.mode == RelMode::Eq && o.mode == RelMode::Eq { RelMode::Eq } else { RelMode::Le };
        Relation { mode, lhs: self.lhs.plus(&o.lhs), rhs: self.rhs.plus(&o.rhs) }
    }

    pub fn times(&self, o: &Relation) -> Result<Relation> {
        let mode = if self.mode == RelMode::Eq && o.mode == RelMode::Eq { RelMode::Eq } else { RelMode::Le };
        Ok(Relation { mode, lhs: self.lhs.times(&o.lhs)?, rhs: self.rhs.times(&o.rhs)? })
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.mode {
            RelMode::Le => "<=",
            RelMode::Eq => "==",
        };
        write!(f, "{} {} {}", self.lhs, op, self.rhs)
    }
}

/// Bounds for the derivation search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DerivationBudget {
    pub max_depth: usize,
    pub max_sum_len: usize,
    pub max_degree: u32,
}

impl Default for DerivationBudget {
    fn default() -> Self {
        DerivationBudget { max_depth: 8, max_sum_len: 12, max_degree: 8 }
    }
}

impl DerivationBudget {
    pub fn new(max_depth: usize, max_sum_len: usize, max_degree: u32) -> Result<Self> {
        if max_depth == 0 || max_sum_len == 0 || max_degree == 0 {
            return Err(Error::Invalid("budget bounds must be >= 1".into()));
        }
        Ok(DerivationBudget { max_depth, max_sum_len, max_degree })
    }

    pub fn scaled(&self, k: usize) -> Self {
        DerivationBudget {
            max_depth: self.max_depth * k,
            max_sum_len: self.max_sum_len * k,
            max_degree: self.max_degree * k as u32,
        }
    }
}

impl fmt::Display for DerivationBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "depth {}, sum length {}, degree {}", self.max_depth, self.max_sum_len, self.max_degree)
    }
}

/// Why a relation was refuted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A model of the presentation in which the relation fails.
    Countermodel {
        target: GroundTag,
        mode: crate::ground::OrderMode,
        assignment: BTreeMap<String, GroundValue>,
    },
    /// Exhaustive exploration of every sum derivable from the left side.
    Saturated { states: usize },
    /// The difference of the two sides is outside the ideal (rings).
    IdealNonMembership,
    /// A direct finite computation that exhibits the failure.
    Computed(String),
    /// A named sub-relation failed.
    Failing { relation: String, inner: Box<Witness> },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Countermodel { target, mode, assignment } => {
                let a: Vec<String> = assignment.iter().map(|(k, v)| format!("{k}={v}")).collect();
                write!(f, "countermodel in {target} ({mode:?}) at {{{}}}", a.join(", "))
            }
            Witness::Saturated { states } => write!(f, "saturated after {states} sums"),
            Witness::IdealNonMembership => f.write_str("difference is not in the ideal"),
            Witness::Computed(s) => f.write_str(s),
            Witness::Failing { relation, inner } => write!(f, "{relation}: {inner}"),
        }
    }
}

/// Three-valued result of a bounded derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Proved(Vec<String>),
    Disproved(Witness),
    Unknown(String),
}

impl Verdict {
    pub fn is_proved(&self) -> bool {
        matches!(self, Verdict::Proved(_))
    }

    pub fn is_disproved(&self) -> bool {
        matches!(self, Verdict::Disproved(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Proved(_) => "proved",
            Verdict::Disproved(_) => "disproved",
            Verdict::Unknown(_) => "unknown",
        }
    }

    /// Conjunction: any refutation wins, then any unknown.
    pub fn and(self, o: Verdict) -> Verdict {
        match (self, o) {
            (d @ Verdict::Disproved(_), _) | (_, d @ Verdict::Disproved(_)) => d,
            (u @ Verdict::Unknown(_), _) | (_, u @ Verdict::Unknown(_)) => u,
            (Verdict::Proved(mut a), Verdict::Proved(b)) => {
                a.extend(b);
                Verdict::Proved(a)
            }
        }
    }

    /// Tags a refutation with the relation it concerns.
    pub fn about(self, relation: &str) -> Verdict {
        match self {
            Verdict::Disproved(w) => {
                Verdict::Disproved(Witness::Failing { relation: relation.to_string(), inner: Box::new(w) })
            }
            v => v,
        }
    }
}

/// A finitely presented ordered blueprint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub ground: GroundTag,
    pub generators: Vec<String>,
    pub monoid_relations: Vec<(Monomial, Monomial)>,
    pub subaddition: Vec<Relation>,
    pub budget_default: DerivationBudget,
}

impl Presentation {
    pub fn new(ground: GroundTag, generators: &[&str]) -> Self {
        Presentation {
            ground,
            generators: generators.iter().map(|s| s.to_string()).collect(),
            monoid_relations: vec![],
            subaddition: vec![],
            budget_default: DerivationBudget::default(),
        }
    }

    /// Adds a subaddition generator written as text, e.g. `"x + y + 1 == 0"`.
    pub fn rel(mut self, text: &str) -> Result<Self> {
        let r = self.parse_relation(text)?;
        self.subaddition.push(r);
        Ok(self)
    }

    /// Adds a monoid relation written as text, e.g. `"x^2 == x^3"`.
    pub fn mon(mut self, text: &str) -> Result<Self> {
        let r = self.parse_relation(text)?;
        if r.lhs.len() > 1 || r.rhs.len() > 1 {
            return Err(Error::Invalid(format!("monoid relation {text:?} must relate single monomials")));
        }
        let side = |s: &FormalSum| s.terms.first().cloned().unwrap_or_else(|| Monomial::zero(self.ground));
        let pair = (side(&r.lhs), side(&r.rhs));
        self.monoid_relations.push(pair);
        Ok(self)
    }

    pub fn one(&self) -> Monomial {
        Monomial::one(self.ground)
    }

    pub fn zero(&self) -> Monomial {
        Monomial::zero(self.ground)
    }

    pub fn var(&self, name: &str) -> Monomial {
        Monomial::var(self.ground, name)
    }

    pub fn has_generator(&self, g: &str) -> bool {
        self.generators.iter().any(|x| x == g)
    }

    /// Checks names, tags, and that monoid-relation coefficients are units.
    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for g in &self.generators {
            if !seen.insert(g) {
                return Err(Error::Invalid(format!("duplicate generator {g}")));
            }
        }
        let check = |m: &Monomial| -> Result<()> {
            if m.tag() != self.ground {
                return Err(Error::TagMismatch(format!("monomial {m} over {} in {} presentation", m.tag(), self.ground)));
            }
            for g in m.exps.keys() {
                if !self.has_generator(g) {
                    return Err(Error::Invalid(format!("unknown generator {g}")));
                }
            }
            Ok(())
        };
        for (a, b) in &self.monoid_relations {
            check(a)?;
            check(b)?;
            for m in [a, b] {
                if !m.is_zero() && m.coeff.inverse().is_none() {
                    return Err(Error::Invalid(format!("monoid relation coefficient {} is not a unit", m.coeff)));
                }
            }
        }
        for r in &self.subaddition {
            for m in r.lhs.terms.iter().chain(&r.rhs.terms) {
                check(m)?;
            }
        }
        Ok(())
    }

    pub fn parse_monomial(&self, text: &str) -> Result<Monomial> {
        let s = self.parse_sum(text)?;
        match s.terms.len() {
            0 => Ok(self.zero()),
            1 => Ok(s.terms[0].clone()),
            _ => Err(Error::Parse(format!("{text:?} is not a single monomial"))),
        }
    }

    pub fn parse_sum(&self, text: &str) -> Result<FormalSum> {
        parse::parse_sum(self.ground, &self.generators, text)
    }

    pub fn parse_relation(&self, text: &str) -> Result<Relation> {
        parse::parse_relation(self.ground, &self.generators, text)
    }

    pub fn to_json(&self) -> PresentationJson {
        PresentationJson::from_presentation(self)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: PresentationJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        raw.into_presentation()
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ground {}", self.ground)?;
        writeln!(f, "generators [{}]", self.generators.join(", "))?;
        for (a, b) in &self.monoid_relations {
            writeln!(f, "monoid {a} = {b}")?;
        }
        for r in &self.subaddition {
            writeln!(f, "relation {r}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
