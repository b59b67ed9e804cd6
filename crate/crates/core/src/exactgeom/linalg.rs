//! Dense exact linear algebra over the rationals.

use num_traits::{One, Zero};

use super::vector::{dot, primitive, Rational};

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub(crate) fn rref(rows: &[Vec<Rational>], ncols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in 0..ncols {
                    let d = &factor * &m[r][j];
                    m[i][j] = &m[i][j] - d;
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

pub(crate) fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    rref(rows, ncols).0.len()
}

/// Basis of `{x : row . x = 0 for all rows}` in canonical form.
pub(crate) fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let (r, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let basis: Vec<Vec<Rational>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &pc) in r.iter().zip(&pivots) {
                v[pc] = -row[f].clone();
            }
            v
        })
        .collect();
    canonical_basis(&basis, ncols)
}

/// Canonical basis of the span: RREF rows scaled to primitive integer vectors.
pub(crate) fn canonical_basis(vectors: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    rref(vectors, ncols).0.iter().map(|r| primitive(r)).collect()
}

/// Orthogonal basis (Gram-Schmidt, unnormalized) of the span of `vectors`.
pub(crate) fn orthogonal_basis(vectors: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for u in &out {
            let c = dot(&w, u) / dot(u, u);
            for (wi, ui) in w.iter_mut().zip(u) {
                *wi = &*wi - &c * ui;
            }
        }
        if w.iter().any(|x| !x.is_zero()) {
            out.push(w);
        }
    }
    out
}

/// Removes from `v` its orthogonal projection onto the span of the given
/// orthogonal basis.
pub(crate) fn reject(v: &[Rational], orth: &[Vec<Rational>]) -> Vec<Rational> {
    let mut w = v.to_vec();
    for u in orth {
        let c = dot(&w, u) / dot(u, u);
        for (wi, ui) in w.iter_mut().zip(u) {
            *wi = &*wi - &c * ui;
        }
    }
    w
}

pub(crate) fn in_span(v: &[Rational], basis: &[Vec<Rational>], ncols: usize) -> bool {
    let r = rank(basis, ncols);
    let mut ext = basis.to_vec();
    ext.push(v.to_vec());
    rank(&ext, ncols) == r
}

/// Dimension of the intersection of two subspaces given by spanning sets.
pub(crate) fn intersection_dim(a: &[Vec<Rational>], b: &[Vec<Rational>], ncols: usize) -> usize {
    let ra = rank(a, ncols);
    let rb = rank(b, ncols);
    let mut both = a.to_vec();
    both.extend_from_slice(b);
    ra + rb - rank(&both, ncols)
}
