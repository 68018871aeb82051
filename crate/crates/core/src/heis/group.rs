//! Discrete Heisenberg groups `(H, H', C, <-,->)` and their extensions by `A`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `Z^rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub rank: usize,
    #[serde(default)]
    pub torsion: Vec<i64>,
}

impl AbelianGroup {
    pub fn free(rank: usize) -> Self {
        AbelianGroup { rank, torsion: Vec::new() }
    }

    /// Number of generators.
    pub fn ngens(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Order of generator `i`, 0 for free generators.
    pub fn order(&self, i: usize) -> i64 {
        if i < self.rank {
            0
        } else {
            self.torsion[i - self.rank]
        }
    }

    pub fn normalize(&self, v: &mut [i64]) {
        for (i, d) in self.torsion.iter().enumerate() {
            v[self.rank + i] = v[self.rank + i].rem_euclid(*d);
        }
    }

    fn check(&self, v: &[i64], what: &str) -> Result<()> {
        if v.len() != self.ngens() {
            return Err(Error::Validation(format!("{what} has {} coordinates, expected {}", v.len(), self.ngens())));
        }
        Ok(())
    }

    /// Membership in `2·self`.
    fn is_double(&self, v: &[i64]) -> bool {
        (0..self.ngens()).all(|i| match self.order(i) {
            0 => v[i] % 2 == 0,
            d if d % 2 == 1 => true,
            _ => v[i] % 2 == 0,
        })
    }

    /// Relations `d_i e_i` of the torsion part, as vectors.
    pub fn relations(&self) -> Vec<Vec<i64>> {
        (0..self.torsion.len())
            .map(|i| {
                let mut v = vec![0; self.ngens()];
                v[self.rank + i] = self.torsion[i];
                v
            })
            .collect()
    }
}

/// The data defining `G = H × H' × C` with
/// `(n, p, c)(m, q, a) = (n + m, p + q, c + a + <n, q>)`, together with the
/// offset `r` and the generators of `A ⊂ Hom(H, H')`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeisenbergSpec {
    pub h: AbelianGroup,
    pub h_prime: AbelianGroup,
    pub c: AbelianGroup,
    /// `pairing[i][j]` is `<e_i, e'_j>` in `C`.
    pub pairing: Vec<Vec<Vec<i64>>>,
    #[serde(default)]
    pub r: Vec<i64>,
    /// Each generator `k` of `A` as the images `k[i] = k(e_i)` in `H'`.
    #[serde(default)]
    pub a: Vec<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    pub m: Vec<i64>,
    pub p: Vec<i64>,
    pub c: Vec<i64>,
    /// Coordinates in the generators of `A`; empty means `k = 0`.
    #[serde(default)]
    pub k: Vec<i64>,
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn neg(a: &[i64]) -> Vec<i64> {
    a.iter().map(|x| -x).collect()
}

impl HeisenbergSpec {
    /// `Heis(3, Z)`: `H = H' = C = Z`, `<n, p> = np`, `A = Z`, `r = 1`.
    pub fn heis3() -> Self {
        HeisenbergSpec {
            h: AbelianGroup::free(1),
            h_prime: AbelianGroup::free(1),
            c: AbelianGroup::free(1),
            pairing: vec![vec![vec![1]]],
            r: vec![1],
            a: vec![vec![vec![1]]],
        }
    }

    /// `H = H' = Z^n`, `C = Z`, pairing `diag(d)`, `A` generated by `diag(k)`,
    /// `r = (1, ..., 1)`.
    pub fn diagonal(d: &[i64], k: &[i64]) -> Self {
        let n = d.len();
        let unit = |i: usize, x: i64| (0..n).map(|j| if i == j { x } else { 0 }).collect::<Vec<_>>();
        HeisenbergSpec {
            h: AbelianGroup::free(n),
            h_prime: AbelianGroup::free(n),
            c: AbelianGroup::free(1),
            pairing: (0..n).map(|i| (0..n).map(|j| vec![if i == j { d[i] } else { 0 }]).collect()).collect(),
            r: vec![1; n],
            a: vec![(0..n).map(|i| unit(i, k[i])).collect()],
        }
    }

    /// Checks shapes, torsion compatibility of the pairing, and the two
    /// conditions on each generator of `A`.
    pub fn validate(&self) -> Result<()> {
        let (nh, nhp, nc) = (self.h.ngens(), self.h_prime.ngens(), self.c.ngens());
        for g in [&self.h, &self.h_prime, &self.c] {
            if g.torsion.iter().any(|&d| d < 2) {
                return Err(Error::Validation("torsion invariants must be at least 2".into()));
            }
        }
        if self.pairing.len() != nh || self.pairing.iter().any(|row| row.len() != nhp || row.iter().any(|v| v.len() != nc)) {
            return Err(Error::Validation(format!("pairing must be a {nh} x {nhp} array of {nc}-vectors")));
        }
        for i in 0..nh {
            for j in 0..nhp {
                for d in [self.h.order(i), self.h_prime.order(j)] {
                    if d > 0 {
                        let mut v: Vec<i64> = self.pairing[i][j].iter().map(|x| x * d).collect();
                        self.c.normalize(&mut v);
                        if v.iter().any(|&x| x != 0) {
                            return Err(Error::Validation(format!("pairing of generators ({i}, {j}) is not killed by {d}")));
                        }
                    }
                }
            }
        }
        if !self.a.is_empty() || !self.r.is_empty() {
            self.h.check(&self.r, "r")?;
        }
        for (t, k) in self.a.iter().enumerate() {
            if k.len() != nh || k.iter().any(|v| v.len() != nhp) {
                return Err(Error::Validation(format!("generator {t} of A must map each of the {nh} generators of H into H'")));
            }
            for i in 0..nh {
                if self.h.order(i) > 0 {
                    let mut v: Vec<i64> = k[i].iter().map(|x| x * self.h.order(i)).collect();
                    self.h_prime.normalize(&mut v);
                    if v.iter().any(|&x| x != 0) {
                        return Err(Error::Validation(format!("generator {t} of A is not defined on torsion of H")));
                    }
                }
            }
            let e = |i: usize| (0..nh).map(|j| i64::from(i == j)).collect::<Vec<_>>();
            for i in 0..nh {
                for j in 0..nh {
                    let lhs = self.pair(&e(i), &k[j]);
                    let rhs = self.pair(&e(j), &k[i]);
                    if lhs != rhs {
                        return Err(Error::Validation(format!("generator {t} of A: <m, k(m')> is not symmetric")));
                    }
                }
                let mut v = self.pair(&add(&e(i), &neg(&self.r)), &k[i]);
                self.c.normalize(&mut v);
                if !self.c.is_double(&v) {
                    return Err(Error::Validation(format!("generator {t} of A: <e_{i} - r, k(e_{i})> is not in 2C")));
                }
            }
        }
        Ok(())
    }

    /// `<n, q>` in `C`, normalized.
    pub fn pair(&self, n: &[i64], q: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.c.ngens()];
        for (i, ni) in n.iter().enumerate().filter(|(_, x)| **x != 0) {
            for (j, qj) in q.iter().enumerate().filter(|(_, x)| **x != 0) {
                for (o, v) in out.iter_mut().zip(&self.pairing[i][j]) {
                    *o += ni * qj * v;
                }
            }
        }
        self.c.normalize(&mut out);
        out
    }

    /// `k(n)` for `k = sum_t kc_t a_t`.
    pub fn apply_a(&self, kc: &[i64], n: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.h_prime.ngens()];
        for (t, ct) in kc.iter().enumerate().filter(|(_, x)| **x != 0) {
            for (i, ni) in n.iter().enumerate().filter(|(_, x)| **x != 0) {
                for (o, v) in out.iter_mut().zip(&self.a[t][i]) {
                    *o += ct * ni * v;
                }
            }
        }
        self.h_prime.normalize(&mut out);
        out
    }

    /// `(1/2)<n - r, k(n)>`, which lies in `C` by the second condition on `A`
    /// when `C` is free.
    pub fn half_twist(&self, kc: &[i64], n: &[i64]) -> Result<Vec<i64>> {
        if !self.c.is_free() {
            return Err(Error::Validation("half-twists need a free C".into()));
        }
        let v = self.pair(&add(n, &neg(&self.r)), &self.apply_a(kc, n));
        if v.iter().any(|x| x % 2 != 0) {
            return Err(Error::Validation("<n - r, k(n)> is odd".into()));
        }
        Ok(v.iter().map(|x| x / 2).collect())
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            m: vec![0; self.h.ngens()],
            p: vec![0; self.h_prime.ngens()],
            c: vec![0; self.c.ngens()],
            k: vec![0; self.a.len()],
        }
    }

    pub fn element(&self, m: &[i64], p: &[i64], c: &[i64], k: &[i64]) -> Result<GroupElement> {
        self.h.check(m, "m")?;
        self.h_prime.check(p, "p")?;
        self.c.check(c, "c")?;
        let k = if k.is_empty() { vec![0; self.a.len()] } else { k.to_vec() };
        if k.len() != self.a.len() {
            return Err(Error::Validation(format!("k has {} coordinates, A has {} generators", k.len(), self.a.len())));
        }
        Ok(self.normalized(GroupElement { m: m.to_vec(), p: p.to_vec(), c: c.to_vec(), k }))
    }

    fn normalized(&self, mut g: GroupElement) -> GroupElement {
        self.h.normalize(&mut g.m);
        self.h_prime.normalize(&mut g.p);
        self.c.normalize(&mut g.c);
        g
    }

    fn is_extended(&self, g: &GroupElement) -> bool {
        g.k.iter().any(|&x| x != 0)
    }

    /// `k(m, p, c) = (m, p + k(m), c + (1/2)<m - r, k(m)>)`.
    pub fn automorphism(&self, kc: &[i64], g: &GroupElement) -> Result<GroupElement> {
        let km = self.apply_a(kc, &g.m);
        let tw = self.half_twist(kc, &g.m)?;
        Ok(self.normalized(GroupElement { m: g.m.clone(), p: add(&g.p, &km), c: add(&g.c, &tw), k: g.k.clone() }))
    }

    /// Product in `G`, or in `G ⋊ A` with `(g, k)(g', k') = (g·(-k)(g'), k + k')`,
    /// the law under which `(g, k)` acts as `π(g)∘π(k)`.
    pub fn group_law(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        let b2 = if self.is_extended(a) { self.automorphism(&neg(&a.k), b)? } else { b.clone() };
        let c = add(&add(&a.c, &b2.c), &self.pair(&a.m, &b2.p));
        Ok(self.normalized(GroupElement { m: add(&a.m, &b2.m), p: add(&a.p, &b2.p), c, k: add(&a.k, &b.k) }))
    }

    pub fn inverse(&self, a: &GroupElement) -> Result<GroupElement> {
        // (g, k)^(-1) = (k(g^(-1)), -k) with (m, p, c)^(-1) = (-m, -p, -c + <m, p>)
        let inv = GroupElement {
            m: neg(&a.m),
            p: neg(&a.p),
            c: add(&neg(&a.c), &self.pair(&a.m, &a.p)),
            k: vec![0; a.k.len()],
        };
        let mut out = if self.is_extended(a) { self.automorphism(&a.k, &inv)? } else { inv };
        out.k = neg(&a.k);
        Ok(self.normalized(out))
    }

    /// `a b a^(-1) b^(-1)`, central with value `<n, q> - <m, p>` for `a = (n, p, c)`,
    /// `b = (m, q, a)`.
    pub fn commutator(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        let ab = self.group_law(a, b)?;
        let ba = self.group_law(b, a)?;
        self.group_law(&ab, &self.inverse(&ba)?)
    }
}
