//! Degree-bounded Giansiracusa bend congruence from the circuits of an ideal.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ground::{BaseValuation, GroundTag, GroundValue, Q};
use crate::lattice::{kernel, rref};
use crate::presentation::{FormalSum, Monomial, Presentation, Relation};

use super::push_monomial;

const SUBSET_CAP: usize = 200_000;

type Exps = BTreeMap<String, u32>;

fn monomials_up_to(gens: &[String], d: u32) -> Vec<Exps> {
    let mut out = vec![Exps::new()];
    for g in gens {
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
    out.sort_by(|a, b| a.values().sum::<u32>().cmp(&b.values().sum::<u32>()).then(a.cmp(b)));
    out
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r: usize = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

fn subsets(n: usize, k: usize, out: &mut Vec<Vec<usize>>) {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut Vec::new(), out);
}

/// Circuits of the degree-`d` part of the ideal generated by `ideal_gens`:
/// support-minimal vectors of the span of all multiples of degree at most `d`,
/// scaled so the first nonzero coefficient is 1.
pub fn ideal_circuits(gens: &[String], ideal_gens: &[FormalSum], ground: GroundTag, d: u32) -> Result<Vec<FormalSum>> {
    if !ground.has_minus_one() {
        return Err(Error::UnsupportedGround(format!("circuits need a ring ground, not {ground}")));
    }
    let maxdeg = ideal_gens.iter().map(|f| f.degree()).max().unwrap_or(0);
    if d < maxdeg {
        return Err(Error::DegreeBoundTooSmall(format!("bound {d} is below generator degree {maxdeg}")));
    }
    let cols = monomials_up_to(gens, d);
    let index: BTreeMap<&Exps, usize> = cols.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for f in ideal_gens {
        for g in f.terms.iter().flat_map(|m| m.exps.keys()) {
            if !gens.contains(g) {
                return Err(Error::Invalid(format!("unknown generator {g}")));
            }
        }
        for m in monomials_up_to(gens, d - f.degree()) {
            let mut row = vec![Q::zero(); cols.len()];
            for t in &f.terms {
                let mut e = t.exps.clone();
                for (g, k) in &m {
                    *e.entry(g.clone()).or_insert(0) += k;
                }
                row[index[&e]] += t.coeff.to_rational().expect("ring coefficient");
            }
            rows.push(row);
        }
    }
    let (basis, _) = rref(&rows);
    let r = basis.len();
    if r == 0 {
        return Ok(vec![]);
    }
    let n = cols.len();
    if binom(n, r - 1) > SUBSET_CAP {
        return Err(Error::EnumerationBoundExceeded(format!("{} column subsets", binom(n, r - 1))));
    }
    let mut subs = Vec::new();
    subsets(n, r - 1, &mut subs);
    let mut cands: Vec<Vec<Q>> = Vec::new();
    for s in subs {
        // combinations λ of the basis vanishing on the columns in s
        let m: Vec<Vec<Q>> = s.iter().map(|&c| basis.iter().map(|row| row[c].clone()).collect()).collect();
        let ker = if m.is_empty() { (0..r).map(|i| unit(r, i)).collect() } else { kernel(&m, r) };
        if ker.len() != 1 {
            continue;
        }
        let mut v = vec![Q::zero(); n];
        for (lam, row) in ker[0].iter().zip(&basis) {
            for (x, y) in v.iter_mut().zip(row) {
                *x += lam * y;
            }
        }
        let lead = v.iter().find(|x| !x.is_zero()).cloned().unwrap();
        for x in v.iter_mut() {
            *x /= &lead;
        }
        if !cands.contains(&v) {
            cands.push(v);
        }
    }
    let support = |v: &Vec<Q>| -> Vec<usize> { (0..v.len()).filter(|&i| !v[i].is_zero()).collect() };
    let minimal: Vec<&Vec<Q>> = cands
        .iter()
        .filter(|v| {
            let s = support(v);
            !cands.iter().any(|w| {
                let t = support(w);
                t.len() < s.len() && t.iter().all(|i| s.contains(i))
            })
        })
        .collect();
    let mut out = Vec::new();
    for v in minimal {
        let terms = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| Ok(Monomial::new(GroundValue::rational(ground, c.clone())?, cols[i].clone())))
            .collect::<Result<Vec<_>>>()?;
        out.push(FormalSum::new(terms));
    }
    Ok(out)
}

fn unit(r: usize, i: usize) -> Vec<Q> {
    (0..r).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()
}

/// `GG_{≤d}(I)`: bend relations of every circuit of the degree-bounded ideal.
pub fn gg_congruence(
    gens: &[String],
    ideal_gens: &[FormalSum],
    v: &BaseValuation,
    t: GroundTag,
    degree_bound: u32,
) -> Result<Presentation> {
    if !t.is_idempotent() {
        return Err(Error::NotIdempotentTarget(t.name()));
    }
    let ground = ideal_gens.iter().flat_map(|f| f.terms.first()).map(|m| m.tag()).next().unwrap_or(v.source);
    if ground != v.source || v.target != t {
        return Err(Error::Incompatible(format!("base valuation {}->{} for {}->{}", v.source, v.target, ground, t)));
    }
    let circuits = ideal_circuits(gens, ideal_gens, ground, degree_bound)?;
    let mut out = Presentation::new(t, &[]);
    out.generators = gens.to_vec();
    for c in circuits {
        for i in 0..c.terms.len() {
            let rest = FormalSum::new(
                c.terms.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, m)| push_monomial(m, v)).collect::<Result<_>>()?,
            );
            let lhs = rest.plus(&FormalSum::single(push_monomial(&c.terms[i], v)?));
            let r = Relation::eq(lhs, rest);
            if !out.subaddition.contains(&r) {
                out.subaddition.push(r);
            }
        }
    }
    out.validate()?;
    Ok(out)
}
