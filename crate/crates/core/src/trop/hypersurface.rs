//! Tropical hypersurfaces of polynomials in one to three variables, computed
//! exactly in log coordinates with lattice-length weights.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ground::{fmt_rational, BaseValuation, Q};
use crate::lattice::{dot, integer_kernel, kernel, primitive, rank, rref, to_q};
use crate::presentation::FormalSum;

/// A maximal cell: the closure of the locus where exactly the terms in `tie`
/// attain the maximum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub dim: usize,
    pub vertices: Vec<usize>,
    pub rays: Vec<usize>,
    pub weight: u64,
    pub tie: Vec<usize>,
    /// Primitive direction of the dual Newton edge; the cell is orthogonal to it.
    pub normal: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyhedralComplex {
    pub ambient_dim: usize,
    pub variables: Vec<String>,
    pub log_base: u64,
    /// Exponent vector and log-absolute-value of each term.
    pub terms: Vec<(Vec<u32>, Q)>,
    pub vertices: Vec<Vec<Q>>,
    pub rays: Vec<Vec<BigInt>>,
    pub cells: Vec<Cell>,
}

/// Vertex and ray indices of an edge.
type EdgeKey = (Vec<usize>, Vec<usize>);
/// Direction, incident cells and a point on an edge.
type EdgeData = (Vec<BigInt>, Vec<usize>, Row);

type Row = Vec<Q>;

fn qi(x: i64) -> Q {
    Q::from_integer(BigInt::from(x))
}

fn solve_unique(rows: &[Row], rhs: &[Q]) -> Option<Vec<Q>> {
    let n = rows.first()?.len();
    let aug: Vec<Row> = rows.iter().zip(rhs).map(|(r, b)| r.iter().cloned().chain([b.clone()]).collect()).collect();
    let (m, piv) = rref(&aug);
    if piv.contains(&n) || piv.len() != n {
        return None;
    }
    Some(m.iter().map(|r| r[n].clone()).collect())
}

fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(s: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in s..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

struct Terms {
    exps: Vec<Row>,
    logs: Vec<Q>,
}

impl Terms {
    fn height(&self, k: usize, u: &[Q]) -> Q {
        &self.logs[k] + dot(&self.exps[k], u)
    }

    fn tie_at(&self, u: &[Q]) -> Vec<usize> {
        let hs: Vec<Q> = (0..self.exps.len()).map(|k| self.height(k, u)).collect();
        let max = hs.iter().max().unwrap().clone();
        (0..hs.len()).filter(|&k| hs[k] == max).collect()
    }

    /// Vertices and extreme rays of `{h_i = h_j >= h_k}`.
    fn region(&self, i: usize, j: usize) -> (Vec<Row>, Vec<Row>) {
        let n = self.exps[0].len();
        let eq = sub(&self.exps[i], &self.exps[j]);
        let eq_rhs = &self.logs[j] - &self.logs[i];
        let others: Vec<usize> = (0..self.exps.len()).filter(|&k| k != i && k != j).collect();
        let ineq: Vec<(Row, Q)> = others.iter().map(|&k| (sub(&self.exps[k], &self.exps[i]), &self.logs[i] - &self.logs[k])).collect();
        let feasible = |u: &[Q]| ineq.iter().all(|(a, b)| dot(a, u) <= *b);
        let mut verts: Vec<Row> = Vec::new();
        for s in combos(ineq.len(), n - 1) {
            let mut rows = vec![eq.clone()];
            let mut rhs = vec![eq_rhs.clone()];
            for &k in &s {
                rows.push(ineq[k].0.clone());
                rhs.push(ineq[k].1.clone());
            }
            if let Some(u) = solve_unique(&rows, &rhs) {
                if feasible(&u) && !verts.contains(&u) {
                    verts.push(u);
                }
            }
        }
        let mut rays: Vec<Row> = Vec::new();
        if n >= 2 {
            for s in combos(ineq.len(), n - 2) {
                let mut rows = vec![eq.clone()];
                rows.extend(s.iter().map(|&k| ineq[k].0.clone()));
                let ker = kernel(&rows, n);
                if ker.len() != 1 {
                    continue;
                }
                for sign in [1, -1] {
                    let d: Row = to_q(&primitive(&ker[0])).into_iter().map(|x| x * qi(sign)).collect();
                    if ineq.iter().all(|(a, _)| dot(a, &d) <= Q::zero()) && !rays.contains(&d) {
                        rays.push(d);
                    }
                }
            }
        }
        (verts, rays)
    }
}

fn affine_dim(verts: &[Row], rays: &[Row]) -> usize {
    let Some(v0) = verts.first() else { return 0 };
    let mut rows: Vec<Row> = verts[1..].iter().map(|v| sub(v, v0)).collect();
    rows.extend(rays.iter().cloned());
    if rows.is_empty() {
        0
    } else {
        rank(&rows)
    }
}

fn index_of<T: PartialEq + Clone>(list: &mut Vec<T>, x: &T) -> usize {
    if let Some(i) = list.iter().position(|y| y == x) {
        return i;
    }
    list.push(x.clone());
    list.len() - 1
}

/// The tropical hypersurface of `f` in the coordinates `vars`, with term
/// heights `log_p |c| + <e, u>`.
pub fn tropical_hypersurface(f: &FormalSum, vars: &[String], v: &BaseValuation) -> Result<PolyhedralComplex> {
    let n = vars.len();
    if n == 0 || n > 3 {
        return Err(Error::DimensionUnsupported(format!("{n} variables; supported are 1, 2 and 3")));
    }
    let mut collected: BTreeMap<Vec<u32>, Q> = BTreeMap::new();
    for m in &f.terms {
        if m.tag() != v.source {
            return Err(Error::TagMismatch(format!("term {m} is not over {}", v.source)));
        }
        for g in m.exps.keys() {
            if !vars.contains(g) {
                return Err(Error::Invalid(format!("variable {g} is not among the coordinates")));
            }
        }
        let e: Vec<u32> = vars.iter().map(|g| m.exps.get(g).copied().unwrap_or(0)).collect();
        let c = m.coeff.to_rational().ok_or_else(|| Error::UnsupportedGround(format!("{} has no numeric coefficients", v.source)))?;
        *collected.entry(e).or_insert_with(Q::zero) += c;
    }
    collected.retain(|_, c| !c.is_zero());
    if collected.len() < 2 {
        return Err(Error::TooFewTerms);
    }
    let mut terms = Vec::new();
    for (e, c) in &collected {
        let gv = crate::ground::GroundValue::rational(v.source, c.clone())?;
        let l = v.log_abs(&gv).ok_or_else(|| Error::RegimeUnsupported("log coordinates need a trivial or p-adic valuation".into()))?;
        terms.push((e.clone(), l));
    }
    let t = Terms {
        exps: terms.iter().map(|(e, _)| e.iter().map(|&x| qi(x as i64)).collect()).collect(),
        logs: terms.iter().map(|(_, l)| l.clone()).collect(),
    };
    let diffs: Vec<Row> = t.exps[1..].iter().map(|e| sub(e, &t.exps[0])).collect();
    if rank(&diffs) < n {
        return Err(Error::DimensionUnsupported("the Newton polytope is not full dimensional".into()));
    }
    let mut out = PolyhedralComplex {
        ambient_dim: n,
        variables: vars.to_vec(),
        log_base: v.log_base(),
        terms,
        vertices: vec![],
        rays: vec![],
        cells: vec![],
    };
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for i in 0..t.exps.len() {
        for j in (i + 1)..t.exps.len() {
            let (verts, rays) = t.region(i, j);
            if verts.is_empty() || affine_dim(&verts, &rays) != n - 1 {
                continue;
            }
            let mut inner: Row = vec![Q::zero(); n];
            for p in &verts {
                inner = inner.iter().zip(p).map(|(a, b)| a + b).collect();
            }
            let k = qi(verts.len() as i64);
            inner = inner.into_iter().map(|x| x / &k).collect();
            for r in &rays {
                inner = inner.iter().zip(r).map(|(a, b)| a + b).collect();
            }
            let tie = t.tie_at(&inner);
            if !seen.insert(tie.clone()) {
                continue;
            }
            let dir = primitive(&sub(&t.exps[tie[1]], &t.exps[tie[0]]));
            let dq = to_q(&dir);
            let pos: Vec<Q> = tie.iter().map(|&k| dot(&sub(&t.exps[k], &t.exps[tie[0]]), &dq) / dot(&dq, &dq)).collect();
            let weight = (pos.iter().max().unwrap() - pos.iter().min().unwrap()).to_integer().to_u64().unwrap_or(0);
            let vi: Vec<usize> = verts.iter().map(|p| index_of(&mut out.vertices, p)).collect();
            let ri: Vec<usize> = rays.iter().map(|r| index_of(&mut out.rays, &primitive(r))).collect();
            out.cells.push(Cell { dim: n - 1, vertices: vi, rays: ri, weight, tie, normal: dir });
        }
    }
    Ok(out)
}

fn cross(a: &[BigInt], b: &[BigInt]) -> [BigInt; 3] {
    [&a[1] * &b[2] - &a[2] * &b[1], &a[2] * &b[0] - &a[0] * &b[2], &a[0] * &b[1] - &a[1] * &b[0]]
}

impl PolyhedralComplex {
    fn cell_interior(&self, c: &Cell) -> Row {
        let n = self.ambient_dim;
        let mut p: Row = vec![Q::zero(); n];
        for &v in &c.vertices {
            p = p.iter().zip(&self.vertices[v]).map(|(a, b)| a + b).collect();
        }
        let k = qi(c.vertices.len() as i64);
        p = p.into_iter().map(|x| x / &k).collect();
        for &r in &c.rays {
            p = p.iter().zip(to_q(&self.rays[r])).map(|(a, b)| a + b).collect();
        }
        p
    }

    /// Direction from vertex `v` into each incident cell, for curves.
    fn outgoing(&self, c: &Cell, v: usize) -> Option<Vec<BigInt>> {
        if !c.vertices.contains(&v) {
            return None;
        }
        if let Some(&w) = c.vertices.iter().find(|&&w| w != v) {
            return Some(primitive(&sub(&self.vertices[w], &self.vertices[v])));
        }
        c.rays.first().map(|&r| self.rays[r].clone())
    }

    /// Sum of weighted primitive directions around each vertex (curves), or
    /// around each edge modulo the edge direction (surfaces).
    pub fn balancing_defects(&self) -> Vec<String> {
        let mut bad = Vec::new();
        match self.ambient_dim {
            2 => {
                for v in 0..self.vertices.len() {
                    let mut s = [BigInt::zero(), BigInt::zero()];
                    for c in &self.cells {
                        if let Some(d) = self.outgoing(c, v) {
                            for k in 0..2 {
                                s[k] += &d[k] * BigInt::from(c.weight);
                            }
                        }
                    }
                    if s.iter().any(|x| !x.is_zero()) {
                        bad.push(format!("vertex {v}: residual ({}, {})", s[0], s[1]));
                    }
                }
            }
            3 => {
                for (key, (dir, cells, q)) in self.edges() {
                    let mut s = vec![BigInt::zero(); 3];
                    for ci in cells {
                        let u = self.transverse(&self.cells[ci], &dir, &q);
                        for k in 0..3 {
                            s[k] += &u[k] * BigInt::from(self.cells[ci].weight);
                        }
                    }
                    if cross(&s, &dir).iter().any(|x| !x.is_zero()) {
                        bad.push(format!("edge {key:?}: residual {s:?}"));
                    }
                }
            }
            _ => {}
        }
        bad
    }

    pub fn is_balanced(&self) -> bool {
        self.balancing_defects().is_empty()
    }

    /// Edges of the two-dimensional cells, keyed by their vertex and ray
    /// indices, with direction, incident cells and a point on the edge.
    fn edges(&self) -> BTreeMap<EdgeKey, EdgeData> {
        let mut out: BTreeMap<EdgeKey, EdgeData> = BTreeMap::new();
        let te: Vec<Row> = self.terms.iter().map(|(e, _)| e.iter().map(|&x| qi(x as i64)).collect()).collect();
        let tl: Vec<Q> = self.terms.iter().map(|(_, l)| l.clone()).collect();
        for (ci, c) in self.cells.iter().enumerate() {
            let i = c.tie[0];
            for k in 0..te.len() {
                if c.tie.contains(&k) {
                    continue;
                }
                let a = sub(&te[k], &te[i]);
                let b = &tl[i] - &tl[k];
                let vs: Vec<usize> = c.vertices.iter().copied().filter(|&v| dot(&a, &self.vertices[v]) == b).collect();
                let rs: Vec<usize> = c.rays.iter().copied().filter(|&r| dot(&a, &to_q(&self.rays[r])).is_zero()).collect();
                let vrows: Vec<Row> = vs.iter().map(|&v| self.vertices[v].clone()).collect();
                let rrows: Vec<Row> = rs.iter().map(|&r| to_q(&self.rays[r])).collect();
                if vs.is_empty() || affine_dim(&vrows, &rrows) != 1 {
                    continue;
                }
                let dir = if vs.len() >= 2 { primitive(&sub(&vrows[1], &vrows[0])) } else { self.rays[rs[0]].clone() };
                let mut key = (vs.clone(), rs.clone());
                key.0.sort();
                key.1.sort();
                let e = out.entry(key).or_insert_with(|| (dir, vec![], vrows[0].clone()));
                if !e.1.contains(&ci) {
                    e.1.push(ci);
                }
            }
        }
        out
    }

    /// Primitive generator of the cell lattice modulo the edge lattice,
    /// pointing into the cell.
    fn transverse(&self, c: &Cell, d: &[BigInt], q: &[Q]) -> Vec<BigInt> {
        let basis = integer_kernel(std::slice::from_ref(&c.normal), 3);
        let (b1, b2) = (&basis[0], &basis[1]);
        let rows: Vec<Row> = (0..3).map(|k| vec![to_q(b1)[k].clone(), to_q(b2)[k].clone()]).collect();
        let rhs = to_q(d);
        let ab = solve_unique(&rows, &rhs).expect("edge lies in the cell plane");
        let (al, be) = (ab[0].to_integer(), ab[1].to_integer());
        let eg = al.extended_gcd(&be);
        let s = if eg.gcd.is_negative() { -BigInt::one() } else { BigInt::one() };
        // al*x + be*y = 1, so (gamma, delta) = (-y, x) completes (al, be) to a basis
        let (gamma, delta) = (-&eg.y * &s, &eg.x * &s);
        let mut u: Vec<BigInt> = (0..3).map(|k| &gamma * &b1[k] + &delta * &b2[k]).collect();
        let w = sub(&self.cell_interior(c), q);
        let rows: Vec<Row> = (0..3).map(|k| vec![to_q(d)[k].clone(), to_q(&u)[k].clone()]).collect();
        let st = solve_unique(&rows, &w).expect("interior point lies in the cell plane");
        if st[1].is_negative() {
            u = u.into_iter().map(|x| -x).collect();
        }
        u
    }

    pub fn to_json(&self) -> Value {
        let qv = |v: &[Q]| v.iter().map(fmt_rational).collect::<Vec<_>>();
        let bv = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        json!({
            "ambient_dim": self.ambient_dim,
            "variables": self.variables,
            "log_base": self.log_base,
            "terms": self.terms.iter().map(|(e, l)| json!({"exponents": e, "log_abs": fmt_rational(l)})).collect::<Vec<_>>(),
            "vertices": self.vertices.iter().map(|v| qv(v)).collect::<Vec<_>>(),
            "rays": self.rays.iter().map(|r| bv(r)).collect::<Vec<_>>(),
            "cells": self.cells.iter().map(|c| json!({
                "dim": c.dim,
                "vertices": c.vertices,
                "rays": c.rays,
                "weight": c.weight,
                "tie": c.tie,
                "normal": bv(&c.normal),
            })).collect::<Vec<_>>(),
            "balanced": self.is_balanced(),
        })
    }
}
