//! Exact integer and rational linear algebra on small dense matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::ground::Q;

/// Row echelon basis of the lattice spanned by `rows`, zero rows dropped.
/// Pivots are positive and entries above each pivot are reduced.
pub fn hnf_rows(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    for col in 0..ncols {
        loop {
            // pick the row with the smallest nonzero |entry| in this column
            let mut best: Option<usize> = None;
            for (i, r) in m.iter().enumerate() {
                if !r[col].is_zero() && best.is_none_or(|b| r[col].abs() < m[b][col].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            let pivot = m.swap_remove(b);
            let mut done = true;
            for r in m.iter_mut() {
                if !r[col].is_zero() {
                    let f = r[col].div_floor(&pivot[col]);
                    for (x, y) in r.iter_mut().zip(&pivot) {
                        *x -= &f * y;
                    }
                    if !r[col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                let mut pivot = pivot;
                if pivot[col].is_negative() {
                    for x in pivot.iter_mut() {
                        *x = -x.clone();
                    }
                }
                out.push(pivot);
                m.retain(|r| r.iter().any(|x| !x.is_zero()));
                break;
            }
            m.push(pivot);
        }
    }
    // reduce entries above pivots
    for i in 0..out.len() {
        let pc = out[i].iter().position(|x| !x.is_zero()).unwrap();
        for k in 0..i {
            let f = out[k][pc].div_floor(&out[i][pc]);
            if !f.is_zero() {
                let row = out[i].clone();
                for (x, y) in out[k].iter_mut().zip(&row) {
                    *x -= &f * y;
                }
            }
        }
    }
    out
}

/// Membership of `v` in the lattice with echelon basis `basis` (from [`hnf_rows`]).
pub fn in_row_lattice(basis: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    let mut v = v.to_vec();
    for row in basis {
        let pc = row.iter().position(|x| !x.is_zero()).unwrap();
        if v[..pc].iter().any(|x| !x.is_zero()) {
            return false;
        }
        if v[pc].is_zero() {
            continue;
        }
        let (f, r) = v[pc].div_rem(&row[pc]);
        if !r.is_zero() {
            return false;
        }
        for (x, y) in v.iter_mut().zip(row) {
            *x -= &f * y;
        }
    }
    v.iter().all(|x| x.is_zero())
}

/// Basis of the integer kernel `{x : A x = 0}` of an integer matrix with
/// `ncols` columns. The basis spans the saturated lattice.
pub fn integer_kernel(a: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..ncols)
        .map(|i| (0..ncols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    // column operations on m, mirrored on the columns of u
    let col_op = |m: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, f: &BigInt| {
        for r in m.iter_mut() {
            let t = &r[src] * f;
            r[dst] -= t;
        }
        for r in u.iter_mut() {
            let t = &r[src] * f;
            r[dst] -= t;
        }
    };
    let swap = |m: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, i: usize, j: usize| {
        for r in m.iter_mut() {
            r.swap(i, j);
        }
        for r in u.iter_mut() {
            r.swap(i, j);
        }
    };
    let mut k = 0;
    for row in 0..m.len() {
        if k >= ncols {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for c in k..ncols {
                if !m[row][c].is_zero() && best.is_none_or(|b| m[row][c].abs() < m[row][b].abs()) {
                    best = Some(c);
                }
            }
            let Some(b) = best else { break };
            swap(&mut m, &mut u, k, b);
            let mut clean = true;
            for c in (k + 1)..ncols {
                if !m[row][c].is_zero() {
                    let f = m[row][c].div_floor(&m[row][k]);
                    col_op(&mut m, &mut u, c, k, &f);
                    if !m[row][c].is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                k += 1;
                break;
            }
        }
    }
    (k..ncols).map(|c| u.iter().map(|r| r[c].clone()).collect()).collect()
}

/// Index of the lattice spanned by `vectors` in `Z^dim`, if it has full rank.
pub fn lattice_index(vectors: &[Vec<BigInt>], dim: usize) -> Option<BigInt> {
    if dim == 0 {
        return Some(BigInt::one());
    }
    let h = hnf_rows(vectors);
    if h.len() < dim {
        return None;
    }
    let mut det = BigInt::one();
    for row in &h {
        let pc = row.iter().position(|x| !x.is_zero()).unwrap();
        det *= &row[pc];
    }
    Some(det.abs())
}

/// Reduced row echelon form over Q; returns (rows, pivot columns).
pub fn rref(rows: &[Vec<Q>]) -> (Vec<Vec<Q>>, Vec<usize>) {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    rref(rows).1.len()
}

/// Basis of the rational nullspace `{x : A x = 0}`.
pub fn kernel(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let (m, pivots) = rref(rows);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); ncols];
        v[free] = Q::one();
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = -row[free].clone();
        }
        out.push(v);
    }
    out
}

/// Scales a rational vector to a primitive integer vector.
pub fn primitive(v: &[Q]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

pub fn to_q(v: &[BigInt]) -> Vec<Q> {
    v.iter().map(|x| Q::from_integer(x.clone())).collect()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn lattice_membership() {
        let b = hnf_rows(&[bi(&[2, 0]), bi(&[0, 3]), bi(&[4, 6])]);
        assert!(in_row_lattice(&b, &bi(&[2, 3])));
        assert!(!in_row_lattice(&b, &bi(&[1, 0])));
        assert_eq!(lattice_index(&[bi(&[2, 0]), bi(&[0, 3])], 2), Some(BigInt::from(6)));
        assert_eq!(lattice_index(&[bi(&[1, 1])], 2), None);
    }

    #[test]
    fn kernel_is_saturated() {
        // 2x - 2y = 0 has integer kernel spanned by (1,1)
        let k = integer_kernel(&[bi(&[2, -2])], 2);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert_eq!(v[0].abs(), BigInt::one());
        assert_eq!(v[0], v[1]);
    }
}
