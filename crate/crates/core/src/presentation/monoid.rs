//! Bounded completion of commutative monoid relations (with zero and unit
//! coefficients) into a confluent rewrite system on exponent vectors.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::ground::{GroundTag, GroundValue};

pub type Exps = Vec<u32>;

/// `x^lhs -> factor · x^rhs`, or `x^lhs -> 0` when `rhs` is `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Exps,
    pub factor: GroundValue,
    pub rhs: Option<Exps>,
}

/// A term of the monoid: `None` is zero.
pub type Elem = Option<(GroundValue, Exps)>;

#[derive(Clone, Debug)]
pub struct MonoidRules {
    pub tag: GroundTag,
    pub n: usize,
    pub rules: Vec<Rule>,
}

pub fn degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

pub fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Degree first, then lexicographic with the first generator most significant.
pub fn term_greater(a: &[u32], b: &[u32]) -> bool {
    (degree(a), a) > (degree(b), b)
}

fn add(a: &[u32], b: &[u32]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[u32], b: &[u32]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn lcm(a: &[u32], b: &[u32]) -> Exps {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn overlap(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).any(|(x, y)| *x > 0 && *y > 0)
}

impl MonoidRules {
    pub fn free(tag: GroundTag, n: usize) -> Self {
        MonoidRules { tag, n, rules: vec![] }
    }

    /// Completes the given identifications. Fails when a rule exceeds
    /// `degree_cap` or the rule count explodes.
    pub fn complete(tag: GroundTag, n: usize, pairs: Vec<(Elem, Elem)>, degree_cap: u32) -> Result<Self> {
        let mut rs = MonoidRules::free(tag, n);
        let mut queue: VecDeque<(Elem, Elem)> = pairs.into();
        let mut steps = 0usize;
        while let Some((a, b)) = queue.pop_front() {
            steps += 1;
            if steps > 20_000 {
                return Err(Error::CompletionBudgetExceeded("too many critical pairs".into()));
            }
            let a = a.and_then(|(c, e)| rs.nf(c, e));
            let b = b.and_then(|(c, e)| rs.nf(c, e));
            let rule = match (a, b) {
                (None, None) => continue,
                (Some((_, e)), None) | (None, Some((_, e))) => Rule { lhs: e, factor: GroundValue::one(tag), rhs: None },
                (Some((c1, e1)), Some((c2, e2))) => {
                    if e1 == e2 {
                        if c1 == c2 {
                            continue;
                        }
                        return Err(Error::CompletionBudgetExceeded(format!(
                            "a monomial is fixed by the non-trivial scalar {}",
                            c1.div(&c2).map(|x| x.to_string()).unwrap_or_default()
                        )));
                    }
                    let ((cb, eb), (cs, es)) = if term_greater(&e1, &e2) { ((c1, e1), (c2, e2)) } else { ((c2, e2), (c1, e1)) };
                    let factor = cs
                        .div(&cb)
                        .ok_or_else(|| Error::Invalid(format!("monoid relation coefficient {cb} is not a unit")))?;
                    Rule { lhs: eb, factor, rhs: Some(es) }
                }
            };
            if degree(&rule.lhs) > degree_cap || rs.rules.len() > 400 {
                return Err(Error::CompletionBudgetExceeded(format!(
                    "rule of degree {} exceeds cap {degree_cap}",
                    degree(&rule.lhs)
                )));
            }
            let mut keep = Vec::new();
            for r in rs.rules.drain(..) {
                if divides(&rule.lhs, &r.lhs) {
                    let one = GroundValue::one(tag);
                    queue.push_back((Some((one, r.lhs)), r.rhs.map(|e| (r.factor, e))));
                } else {
                    keep.push(r);
                }
            }
            rs.rules = keep;
            for r in &rs.rules {
                if overlap(&r.lhs, &rule.lhs) {
                    let w = lcm(&r.lhs, &rule.lhs);
                    queue.push_back((apply(&rule, &w), apply(r, &w)));
                }
            }
            rs.rules.push(rule);
        }
        // right-hand sides in normal form
        for i in 0..rs.rules.len() {
            let r = rs.rules[i].clone();
            if let Some(e) = r.rhs {
                match rs.nf(r.factor.clone(), e) {
                    Some((c, e)) => {
                        rs.rules[i].factor = c;
                        rs.rules[i].rhs = Some(e);
                    }
                    None => rs.rules[i].rhs = None,
                }
            }
        }
        rs.rules.sort_by(|a, b| (degree(&a.lhs), &a.lhs).cmp(&(degree(&b.lhs), &b.lhs)));
        Ok(rs)
    }

    pub fn is_free(&self) -> bool {
        self.rules.is_empty()
    }

    /// Normal form of `c · x^e`; `None` for zero.
    pub fn nf(&self, mut c: GroundValue, mut e: Exps) -> Elem {
        if c.is_zero() {
            return None;
        }
        'outer: loop {
            for r in &self.rules {
                if divides(&r.lhs, &e) {
                    let rhs = r.rhs.as_ref()?;
                    e = add(&sub(&e, &r.lhs), rhs);
                    c = c.mul(&r.factor).expect("rule factors share the ground");
                    continue 'outer;
                }
            }
            return Some((c, e));
        }
    }

    pub fn is_standard(&self, e: &[u32]) -> bool {
        !self.rules.iter().any(|r| divides(&r.lhs, e))
    }

    /// Per-generator exponent bounds when every generator has a pure-power rule.
    fn power_bounds(&self) -> Option<Vec<u32>> {
        (0..self.n)
            .map(|i| {
                self.rules
                    .iter()
                    .filter(|r| r.lhs.iter().enumerate().all(|(j, &x)| (j == i) == (x > 0)))
                    .map(|r| r.lhs[i])
                    .min()
            })
            .collect()
    }

    /// Standard exponent vectors of degree at most `max_degree`. The flag is
    /// true when this is every standard vector (finite monoid).
    pub fn standard_monomials(&self, max_degree: u32) -> (Vec<Exps>, bool) {
        let bounds = self.power_bounds();
        let finite = bounds.is_some();
        let caps: Vec<u32> = match &bounds {
            Some(b) => b.iter().map(|x| x.saturating_sub(1)).collect(),
            None => vec![max_degree; self.n],
        };
        let mut out = Vec::new();
        let mut e = vec![0u32; self.n];
        loop {
            if (finite || degree(&e) <= max_degree) && self.is_standard(&e) {
                out.push(e.clone());
            }
            let mut i = 0;
            loop {
                if i == self.n {
                    out.sort_by(|a, b| (degree(a), a).cmp(&(degree(b), b)));
                    return (out, finite);
                }
                if e[i] < caps[i] {
                    e[i] += 1;
                    break;
                }
                e[i] = 0;
                i += 1;
            }
        }
    }
}

fn apply(r: &Rule, w: &[u32]) -> Elem {
    let rhs = r.rhs.as_ref()?;
    Some((r.factor.clone(), add(&sub(w, &r.lhs), rhs)))
}
