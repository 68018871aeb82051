//! Integer row reduction: Hermite normal form, kernels, linear systems.

/// Echelon form `E = U·M` by unimodular row operations; returns `(E, U)`
/// with the zero rows of `E` (and their transforms) at the bottom.
fn echelon(m: &[Vec<i128>], ncols: usize) -> (Vec<Vec<i128>>, Vec<Vec<i128>>) {
    let n = m.len();
    let mut e: Vec<Vec<i128>> = m.to_vec();
    let mut u: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
    let mut r = 0;
    for c in 0..ncols {
        if r == n {
            break;
        }
        loop {
            // smallest nonzero |entry| in column c among rows r.. becomes the pivot
            let Some(best) = (r..n).filter(|&i| e[i][c] != 0).min_by_key(|&i| e[i][c].abs()) else { break };
            e.swap(r, best);
            u.swap(r, best);
            let mut done = true;
            for i in r + 1..n {
                if e[i][c] != 0 {
                    let q = e[i][c].div_euclid(e[r][c]);
                    for j in 0..ncols {
                        e[i][j] -= q * e[r][j];
                    }
                    for j in 0..n {
                        u[i][j] -= q * u[r][j];
                    }
                    done &= e[i][c] == 0;
                }
            }
            if done {
                break;
            }
        }
        if e[r][c] != 0 {
            if e[r][c] < 0 {
                e[r].iter_mut().for_each(|x| *x = -*x);
                u[r].iter_mut().for_each(|x| *x = -*x);
            }
            r += 1;
        }
    }
    (e, u)
}

fn to_i128(m: &[Vec<i64>]) -> Vec<Vec<i128>> {
    m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect()
}

fn to_i64(v: &[i128]) -> Vec<i64> {
    v.iter().map(|&x| i64::try_from(x).expect("integer overflow in lattice reduction")).collect()
}

/// Hermite normal form of the lattice spanned by `rows`: positive pivots,
/// entries above each pivot reduced into `[0, pivot)`.
pub fn hnf(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    let (mut e, _) = echelon(&to_i128(rows), ncols);
    e.retain(|r| r.iter().any(|&x| x != 0));
    let pivots: Vec<usize> = e.iter().map(|r| r.iter().position(|&x| x != 0).unwrap()).collect();
    for k in 0..e.len() {
        let c = pivots[k];
        for i in 0..k {
            let q = e[i][c].div_euclid(e[k][c]);
            if q != 0 {
                let row = e[k].clone();
                for j in 0..ncols {
                    e[i][j] -= q * row[j];
                }
            }
        }
    }
    e.iter().map(|r| to_i64(r)).collect()
}

/// Canonical representative of `v` modulo the lattice with HNF basis `h`.
pub fn reduce(v: &[i64], h: &[Vec<i64>]) -> Vec<i64> {
    let mut out: Vec<i128> = v.iter().map(|&x| x as i128).collect();
    for row in h {
        let c = row.iter().position(|&x| x != 0).unwrap();
        let q = out[c].div_euclid(row[c] as i128);
        for j in 0..out.len() {
            out[j] -= q * row[j] as i128;
        }
    }
    to_i64(&out)
}

/// Basis of `{z in Z^n : z·M = 0}` for `M` with `n` rows.
pub fn left_kernel(m: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    let (e, u) = echelon(&to_i128(m), ncols);
    e.iter().zip(&u).filter(|(r, _)| r.iter().all(|&x| x == 0)).map(|(_, t)| to_i64(t)).collect()
}

/// Some `z` in `Z^n` with `z·M = t`, if one exists.
pub fn solve(m: &[Vec<i64>], t: &[i64], ncols: usize) -> Option<Vec<i64>> {
    let n = m.len();
    let (e, u) = echelon(&to_i128(m), ncols);
    let mut rest: Vec<i128> = t.iter().map(|&x| x as i128).collect();
    let mut w = vec![0i128; n];
    for (i, row) in e.iter().enumerate() {
        let Some(c) = row.iter().position(|&x| x != 0) else { break };
        if rest[c] % row[c] != 0 {
            return None;
        }
        w[i] = rest[c] / row[c];
        for j in 0..ncols {
            rest[j] -= w[i] * row[j];
        }
    }
    if rest.iter().any(|&x| x != 0) {
        return None;
    }
    let z: Vec<i128> = (0..n).map(|j| (0..n).map(|i| w[i] * u[i][j]).sum()).collect();
    Some(to_i64(&z))
}

/// Index of a full-rank lattice given in HNF (product of pivots).
pub fn index(h: &[Vec<i64>], dim: usize) -> Option<i64> {
    (h.len() == dim).then(|| h.iter().map(|r| r.iter().find(|&&x| x != 0).copied().unwrap()).product())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_and_reduce() {
        let h = hnf(&[vec![4, 6], vec![2, 2], vec![0, 10]], 2);
        assert_eq!(h, vec![vec![2, 0], vec![0, 2]]);
        assert_eq!(reduce(&[5, -3], &h), vec![1, 1]);
        assert_eq!(index(&h, 2), Some(4));
    }

    #[test]
    fn kernel_and_solve() {
        let m = vec![vec![2, 3], vec![4, 6], vec![1, 1]];
        let k = left_kernel(&m, 2);
        assert_eq!(k.len(), 1);
        let z = &k[0];
        assert_eq!((0..2).map(|j| (0..3).map(|i| z[i] * m[i][j]).sum::<i64>()).collect::<Vec<_>>(), vec![0, 0]);
        let s = solve(&m, &[5, 7], 2).unwrap();
        assert_eq!((0..2).map(|j| (0..3).map(|i| s[i] * m[i][j]).sum::<i64>()).collect::<Vec<_>>(), vec![5, 7]);
        assert!(solve(&[vec![2]], &[3], 1).is_none());
    }
}
