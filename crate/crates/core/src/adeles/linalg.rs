//! Row reduction over a finite field.

use crate::field::{Elem, GaloisField};

/// Reduced row echelon form in place; returns the pivot columns.
pub(crate) fn rref(k: &GaloisField, rows: &mut Vec<Vec<Elem>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(i) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, i);
        let inv = k.inv(rows[r][c]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = k.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c];
                for j in 0..ncols {
                    let t = k.mul(f, rows[r][j]);
                    rows[i][j] = k.sub(rows[i][j], t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub(crate) fn rank(k: &GaloisField, rows: &[Vec<Elem>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(k, &mut m, ncols).len()
}

/// Basis of `{c : sum_i c_i rows[i] = 0}`.
pub(crate) fn left_kernel(k: &GaloisField, rows: &[Vec<Elem>], ncols: usize) -> Vec<Vec<Elem>> {
    let n = rows.len();
    let mut cols: Vec<Vec<Elem>> = (0..ncols).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
    let pivots = rref(k, &mut cols, n);
    let mut out = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Elem::ZERO; n];
        v[free] = Elem::ONE;
        for (row, &pc) in cols.iter().zip(&pivots) {
            v[pc] = k.neg(row[free]);
        }
        out.push(v);
    }
    out
}

/// Enumerates the span of `basis`.
pub(crate) fn span(k: &GaloisField, basis: &[Vec<Elem>], dim: usize) -> Vec<Vec<Elem>> {
    let mut out = vec![vec![Elem::ZERO; dim]];
    for b in basis {
        let mut next = Vec::with_capacity(out.len() * k.order() as usize);
        for v in &out {
            for c in k.elements() {
                next.push(v.iter().zip(b).map(|(x, y)| k.add(*x, k.mul(c, *y))).collect());
            }
        }
        out = next;
    }
    out
}
