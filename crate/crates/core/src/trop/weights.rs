//! Maclagan-Rincón multiplicities: the number of monomial classes of the
//! initial congruence at a point of a tropical variety.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ground::{qf, GroundTag, GroundValue, Q};
use crate::lattice::{hnf_rows, integer_kernel, kernel, primitive, rref, to_q};
use crate::presentation::{DerivationBudget, FormalSum, Monomial, Presentation, Prover, Relation};

use super::{gg_congruence, mr_initial_form, point_in_trop, BendPresentation};

fn exps_vec(gens: &[String], m: &Monomial) -> Vec<BigInt> {
    gens.iter().map(|g| BigInt::from(m.exps.get(g).copied().unwrap_or(0))).collect()
}

fn initial_relations(rels: &[Relation], w: &BTreeMap<String, GroundValue>) -> Result<Vec<(FormalSum, FormalSum)>> {
    let mut out = Vec::new();
    for r in rels {
        let a = mr_initial_form(&r.lhs, w)?;
        let b = mr_initial_form(&r.rhs, w)?;
        if a != b && !out.contains(&(a.clone(), b.clone())) {
            out.push((a, b));
        }
    }
    Ok(out)
}

/// Ideal generators of a ring source, or `None` for other sources.
fn ideal_of(bp: &BendPresentation) -> Result<Option<Vec<FormalSum>>> {
    let src = &bp.source;
    if !src.ground.has_minus_one() || src.subaddition.is_empty() {
        return Ok(None);
    }
    let ideal = src
        .subaddition
        .iter()
        .map(|r| Ok(FormalSum::new(crate::valuation::ring_terms(&r.lhs, &r.rhs)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Some(ideal))
}

/// Canonical representative of `v` modulo the lattice with echelon basis `h`.
fn reduce(h: &[Vec<BigInt>], v: &[BigInt]) -> Vec<BigInt> {
    let mut v = v.to_vec();
    for row in h {
        let pc = row.iter().position(|x| !x.is_zero()).unwrap();
        let f = v[pc].div_floor(&row[pc]);
        for (x, y) in v.iter_mut().zip(row) {
            *x -= &f * y;
        }
    }
    v
}

/// Multiplicity at `w` of the tropicalization presented by a TROP bend.
///
/// Initial forms are taken of the bend relations and, for ring sources, of
/// the bends of all circuits of the ideal up to some degree `d`: generators
/// alone miss consequences such as `x^3 = y^3` from `x^2 + xy + y^2`.
/// Monomials occurring together in an initial relation span the tie lattice
/// `D`, and its saturation `D_sat` carries the restricted variables. Pairs
/// proved equal in the initial congruence over BOOL generate a lattice of
/// monomial identifications, which must have full rank in `D_sat`. The
/// weight at degree `d` is the BOOL-dimension of the quotient of the free
/// semimodule on the finitely many monomial classes by the initial
/// relations: the largest set of classes whose sub-sums are pairwise
/// distinct. `d` grows from the generator degree until two consecutive
/// degrees up to `degree_bound` agree.
pub fn mr_weight(bp: &BendPresentation, w: &BTreeMap<String, GroundValue>, degree_bound: u32) -> Result<u64> {
    let p = &bp.underlying;
    if p.ground != GroundTag::Trop {
        return Err(Error::RegimeUnsupported(format!("weights are computed over TROP, not {}", p.ground)));
    }
    if degree_bound < 1 {
        return Err(Error::Invalid("degree bound must be >= 1".into()));
    }
    if w.values().any(|x| x.is_zero()) || !point_in_trop(bp, w)? {
        return Err(Error::NotInTrop);
    }
    let Some(ideal) = ideal_of(bp)? else {
        return weight_from(bp, w, &p.subaddition);
    };
    let top = ideal.iter().map(|f| f.degree()).max().unwrap_or(0);
    let mut last: Option<Result<u64>> = None;
    for d in top..=degree_bound.max(top) {
        let gg = gg_congruence(&p.generators, &ideal, &bp.base, GroundTag::Trop, d)?;
        let mut rels = p.subaddition.clone();
        rels.extend(gg.subaddition);
        let now = weight_from(bp, w, &rels);
        if let Err(e) = &now {
            if !matches!(e, Error::NotStabilized(_)) {
                return now;
            }
        }
        if let (Some(Ok(a)), Ok(b)) = (&last, &now) {
            if a == b {
                return now;
            }
        }
        last = Some(now);
    }
    match last {
        Some(Err(e)) => Err(e),
        _ => Err(Error::NotStabilized(format!("weight still changing at degree {degree_bound}"))),
    }
}

fn weight_from(bp: &BendPresentation, w: &BTreeMap<String, GroundValue>, rels: &[Relation]) -> Result<u64> {
    let p = &bp.underlying;
    let gens = &p.generators;
    let n = gens.len();
    let init = initial_relations(rels, w)?;
    let mut ip = Presentation::new(GroundTag::Bool, &[]);
    ip.generators = gens.clone();
    let mut pairs: Vec<(Monomial, Monomial)> = Vec::new();
    for (a, b) in &init {
        ip.subaddition.push(Relation::eq(a.clone(), b.clone()));
        let ms: BTreeSet<&Monomial> = a.terms.iter().chain(&b.terms).collect();
        let ms: Vec<&Monomial> = ms.into_iter().collect();
        for m in &ms[1..] {
            pairs.push((ms[0].clone(), (*m).clone()));
        }
    }
    let diff = |a: &Monomial, b: &Monomial| -> Vec<BigInt> {
        exps_vec(gens, a).iter().zip(exps_vec(gens, b)).map(|(x, y)| x - y).collect()
    };
    let mut d_rows: Vec<Vec<BigInt>> = Vec::new();
    let mut lam: Vec<Vec<BigInt>> = Vec::new();
    for (a, b) in &p.monoid_relations {
        d_rows.push(diff(a, b));
        lam.push(diff(a, b));
    }
    let pr = Prover::new(&ip, DerivationBudget::default())?;
    for (a, b) in &pairs {
        d_rows.push(diff(a, b));
        if pr.equal(a, b).is_proved() {
            lam.push(diff(a, b));
        }
    }
    d_rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    if d_rows.is_empty() {
        return Err(Error::NotInTrop);
    }
    check_tie_space(bp, rels, w, &init, &d_rows)?;
    let perp = integer_kernel(&d_rows, n);
    let dsat: Vec<Vec<BigInt>> = if perp.is_empty() {
        (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect()).collect()
    } else {
        integer_kernel(&perp, n)
    };
    let r = dsat.len();
    let coords = lam.iter().map(|v| dsat_coords(&dsat, v)).collect::<Result<Vec<_>>>()?;
    let h = if coords.is_empty() { vec![] } else { hnf_rows(&coords) };
    if h.len() < r {
        return Err(Error::NotStabilized(format!(
            "monomial identifications have rank {} in a tie lattice of rank {r}",
            h.len()
        )));
    }
    let classes = class_group(&h, r)?;
    let index: BTreeMap<&Vec<BigInt>, usize> = classes.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let class_of = |v: &[BigInt]| index[&reduce(&h, v)];
    // initial relations as pairs of class subsets, one per shift by a class
    let mut gen_pairs: BTreeSet<(u32, u32)> = BTreeSet::new();
    for (a, b) in &init {
        let base = a.terms.first().or(b.terms.first()).unwrap();
        let rel_coords = |s: &FormalSum| -> Result<Vec<Vec<BigInt>>> {
            s.terms.iter().map(|m| dsat_coords(&dsat, &diff(m, base))).collect()
        };
        let (ca, cb) = (rel_coords(a)?, rel_coords(b)?);
        for g in &classes {
            let mask = |cs: &[Vec<BigInt>]| {
                cs.iter().fold(0u32, |acc, c| {
                    let shifted: Vec<BigInt> = c.iter().zip(g).map(|(x, y)| x + y).collect();
                    acc | (1 << class_of(&shifted))
                })
            };
            let (ma, mb) = (mask(&ca), mask(&cb));
            if ma != mb {
                gen_pairs.insert((ma, mb));
            }
        }
    }
    Ok(bool_dimension(classes.len(), &gen_pairs))
}

const CLASS_CAP: usize = 12;

/// Coordinates of `v` in the basis `dsat`; `v` must lie in its span over Z.
fn dsat_coords(dsat: &[Vec<BigInt>], v: &[BigInt]) -> Result<Vec<BigInt>> {
    let (n, r) = (v.len(), dsat.len());
    let aug: Vec<Vec<Q>> = (0..n)
        .map(|k| dsat.iter().map(|b| Q::from_integer(b[k].clone())).chain([Q::from_integer(v[k].clone())]).collect())
        .collect();
    let (m, piv) = rref(&aug);
    if piv.contains(&r) {
        return Err(Error::TieSpaceNotLinear("relation outside the tie lattice".into()));
    }
    let mut c = vec![BigInt::zero(); r];
    for (row, &pc) in m.iter().zip(&piv) {
        let x = &row[r];
        if !x.is_integer() {
            return Err(Error::TieSpaceNotLinear("tie lattice basis is not saturated".into()));
        }
        c[pc] = x.to_integer();
    }
    Ok(c)
}

/// Canonical representatives of `Z^r` modulo the full-rank lattice `h`.
fn class_group(h: &[Vec<BigInt>], r: usize) -> Result<Vec<Vec<BigInt>>> {
    let mut seen: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    let mut todo = vec![vec![BigInt::zero(); r]];
    while let Some(c) = todo.pop() {
        let c = reduce(h, &c);
        if !seen.insert(c.clone()) {
            continue;
        }
        if seen.len() > CLASS_CAP {
            return Err(Error::EnumerationBoundExceeded(format!("more than {CLASS_CAP} monomial classes")));
        }
        for i in 0..r {
            let mut d = c.clone();
            d[i] += 1;
            todo.push(d);
        }
    }
    Ok(seen.into_iter().collect())
}

/// Dimension over BOOL of the free join-semilattice on `k` atoms modulo the
/// join-congruence generated by `pairs` of atom sets (as bitmasks).
fn bool_dimension(k: usize, pairs: &BTreeSet<(u32, u32)>) -> u64 {
    let size = 1usize << k;
    let mut parent: Vec<usize> = (0..size).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut root = x;
        while parent[root] != root {
            root = parent[root];
        }
        let mut y = x;
        while parent[y] != root {
            let next = parent[y];
            parent[y] = root;
            y = next;
        }
        root
    }
    for &(a, b) in pairs {
        for s in 0..size {
            let (x, y) = (find(&mut parent, a as usize | s), find(&mut parent, b as usize | s));
            if x != y {
                parent[x] = y;
            }
        }
    }
    let class: Vec<usize> = (0..size).map(|x| find(&mut parent, x)).collect();
    // largest atom set whose sub-sums are pairwise distinct
    let mut best = 0;
    for s in 0..size {
        let bits = (s as u32).count_ones() as u64;
        if bits <= best {
            continue;
        }
        let mut seen = BTreeSet::new();
        let mut t = s;
        let mut ok = true;
        loop {
            if !seen.insert(class[t]) {
                ok = false;
                break;
            }
            if t == 0 {
                break;
            }
            t = (t - 1) & s;
        }
        if ok {
            best = bits;
        }
    }
    best
}

/// Moving `w` slightly along the orthogonal complement of the tie lattice
/// must not change any initial relation.
fn check_tie_space(
    bp: &BendPresentation,
    rels: &[Relation],
    w: &BTreeMap<String, GroundValue>,
    init: &[(FormalSum, FormalSum)],
    d_rows: &[Vec<BigInt>],
) -> Result<()> {
    let gens = &bp.underlying.generators;
    let rows: Vec<Vec<Q>> = d_rows.iter().map(|r| to_q(r)).collect();
    let step = GroundValue::rational(GroundTag::Trop, qf(1001, 1000))?;
    for l in kernel(&rows, gens.len()) {
        let l = primitive(&l);
        for sign in [1i64, -1] {
            let mut w2 = w.clone();
            for (g, k) in gens.iter().zip(&l) {
                let e = (k * sign).to_i64().unwrap();
                let f = if e >= 0 { step.pow(e as u32) } else { step.inverse().unwrap().pow((-e) as u32) };
                let x = w2.get_mut(g).unwrap();
                *x = x.mul(&f)?;
            }
            if initial_relations(rels, &w2)? != init {
                return Err(Error::TieSpaceNotLinear(format!("initial forms change along {l:?}")));
            }
        }
    }
    Ok(())
}
