//! Ideal membership for presentations over grounds with -1: Gröbner bases
//! over Q, and degree-bounded lattice membership for integer coefficients.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::monoid::{degree, divides, Exps};
use crate::ground::Q;
use crate::lattice;

/// Polynomial over Q keyed by (degree, exponents); the last key leads.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    pub terms: BTreeMap<(u32, Exps), Q>,
}

impl Poly {
    pub fn from_terms(terms: impl IntoIterator<Item = (Exps, Q)>) -> Self {
        let mut p = Poly::default();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: Exps, c: Q) {
        let k = (degree(&e), e);
        let v = self.terms.entry(k.clone()).or_insert_with(Q::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lead(&self) -> Option<(&Exps, &Q)> {
        self.terms.iter().next_back().map(|((_, e), c)| (e, c))
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|(d, _)| *d).max().unwrap_or(0)
    }

    fn monic(mut self) -> Self {
        if let Some((_, c)) = self.lead() {
            let inv = c.recip();
            for v in self.terms.values_mut() {
                *v *= &inv;
            }
        }
        self
    }

    /// `self - c · x^m · g`
    fn sub_scaled(&mut self, c: &Q, m: &[u32], g: &Poly) {
        for ((_, e), gc) in &g.terms {
            let e2: Exps = e.iter().zip(m).map(|(a, b)| a + b).collect();
            self.add_term(e2, -(c * gc));
        }
    }

    fn shifted(&self, m: &[u32]) -> Poly {
        Poly::from_terms(self.terms.iter().map(|((_, e), c)| (e.iter().zip(m).map(|(a, b)| a + b).collect(), c.clone())))
    }
}

fn reduce(f: &Poly, basis: &[Poly]) -> Poly {
    let mut p = f.clone();
    let mut r = Poly::default();
    while let Some((e, c)) = p.lead().map(|(e, c)| (e.clone(), c.clone())) {
        match basis.iter().find(|g| divides(g.lead().unwrap().0, &e)) {
            Some(g) => {
                let (ge, gc) = g.lead().unwrap();
                let m: Exps = e.iter().zip(ge).map(|(a, b)| a - b).collect();
                p.sub_scaled(&(c / gc), &m, g);
            }
            None => {
                p.terms.remove(&(degree(&e), e.clone()));
                r.add_term(e, c);
            }
        }
    }
    r
}

fn s_poly(f: &Poly, g: &Poly) -> Poly {
    let (fe, fc) = f.lead().unwrap();
    let (ge, gc) = g.lead().unwrap();
    let l: Exps = fe.iter().zip(ge).map(|(a, b)| *a.max(b)).collect();
    let mf: Exps = l.iter().zip(fe).map(|(a, b)| a - b).collect();
    let mg: Exps = l.iter().zip(ge).map(|(a, b)| a - b).collect();
    let mut s = Poly::default();
    s.sub_scaled(&(-fc.recip()), &mf, f);
    s.sub_scaled(&gc.recip(), &mg, g);
    s
}

/// Reduced Gröbner basis, or `None` when `max_pairs` S-polynomials were not enough.
pub fn groebner(gens: &[Poly], max_pairs: usize) -> Option<Vec<Poly>> {
    let mut g: Vec<Poly> = gens.iter().filter(|p| !p.is_zero()).cloned().map(Poly::monic).collect();
    let mut pairs: Vec<(usize, usize)> = (0..g.len()).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    let mut processed = 0;
    while let Some((i, j)) = pairs.pop() {
        let (ei, ej) = (g[i].lead().unwrap().0.clone(), g[j].lead().unwrap().0.clone());
        if ei.iter().zip(&ej).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        processed += 1;
        if processed > max_pairs {
            return None;
        }
        let r = reduce(&s_poly(&g[i], &g[j]), &g);
        if !r.is_zero() {
            let k = g.len();
            g.push(r.monic());
            pairs.extend((0..k).map(|i| (i, k)));
        }
    }
    // minimal, then reduced
    let mut min: Vec<Poly> = Vec::new();
    for (i, p) in g.iter().enumerate() {
        let e = p.lead().unwrap().0;
        let redundant = g.iter().enumerate().any(|(j, q)| {
            let f = q.lead().unwrap().0;
            j != i && divides(f, e) && (f != e || j < i)
        });
        if !redundant {
            min.push(p.clone());
        }
    }
    let reduced: Vec<Poly> = (0..min.len())
        .map(|i| {
            let others: Vec<Poly> = min.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
            let (e, c) = min[i].lead().map(|(e, c)| (e.clone(), c.clone())).unwrap();
            let mut tail = min[i].clone();
            tail.terms.remove(&(degree(&e), e.clone()));
            let mut out = reduce(&tail, &others);
            out.add_term(e, c);
            out.monic()
        })
        .collect();
    Some(reduced)
}

pub fn in_ideal(gb: &[Poly], f: &Poly) -> bool {
    reduce(f, gb).is_zero()
}

fn exps_up_to(n: usize, d: u32) -> Vec<Exps> {
    let mut out = vec![];
    let mut e = vec![0u32; n];
    loop {
        if degree(&e) <= d {
            out.push(e.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            if e[i] < d {
                e[i] += 1;
                break;
            }
            e[i] = 0;
            i += 1;
        }
    }
}

/// Is `f` an integer combination of `x^m · g_i` with every product of degree <= `d`?
pub fn in_integer_span(gens: &[Poly], f: &Poly, n: usize, d: u32) -> bool {
    let cols: Vec<Exps> = exps_up_to(n, d);
    let index: BTreeMap<&Exps, usize> = cols.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let to_row = |p: &Poly| -> Option<Vec<BigInt>> {
        let l = p.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut row = vec![BigInt::zero(); cols.len()];
        for ((_, e), c) in &p.terms {
            let i = *index.get(e)?;
            row[i] = (c * Q::from_integer(l.clone())).to_integer();
        }
        Some(row)
    };
    // generators must already be integral; scale each by its content denominators
    let mut rows = Vec::new();
    for g in gens {
        let gd = g.degree();
        if gd > d {
            continue;
        }
        for m in exps_up_to(n, d - gd) {
            if let Some(r) = to_row(&g.shifted(&m)) {
                rows.push(r);
            }
        }
    }
    if f.terms.values().any(|c| !c.is_integer()) {
        return false;
    }
    let Some(target) = to_row(f) else { return false };
    let basis = lattice::hnf_rows(&rows);
    lattice::in_row_lattice(&basis, &target)
}
