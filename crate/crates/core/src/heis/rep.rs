//! The induced representation `V_χ` on finitely supported functions of
//! `H/H_χ`, and its finite-dimensional matrices at roots of unity.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use super::character::{stabilizer, Character, Stabilizer};
use super::group::{GroupElement, HeisenbergSpec};
use super::polar::{Polar, PolarSum};
use crate::error::{Error, Result};

/// A function `φ` on `H` with `φ(h + n) = χ_H(h) φ(n)` for `h ∈ H_χ`, stored by
/// its values on canonical coset representatives.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RepVector {
    pub amplitudes: BTreeMap<Vec<i64>, PolarSum>,
}

impl RepVector {
    pub fn delta(coset: Vec<i64>) -> Self {
        let mut amplitudes = BTreeMap::new();
        amplitudes.insert(coset, PolarSum::monomial(Polar::one()));
        RepVector { amplitudes }
    }

    pub fn support(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.amplitudes.keys()
    }

    fn push(&mut self, coset: Vec<i64>, amp: PolarSum) {
        let e = self.amplitudes.entry(coset.clone()).or_default();
        e.add(&amp);
        if e.is_zero() {
            self.amplitudes.remove(&coset);
        }
    }
}

/// `π_χ` together with the data it is built from.
#[derive(Clone, Debug)]
pub struct Representation {
    pub spec: HeisenbergSpec,
    pub chi: Character,
    pub stab: Stabilizer,
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl Representation {
    pub fn new(spec: &HeisenbergSpec, chi: &Character) -> Result<Self> {
        spec.validate()?;
        chi.validate(spec)?;
        Ok(Representation { spec: spec.clone(), chi: chi.clone(), stab: stabilizer(spec, chi) })
    }

    /// `χ_H'(k(n)) χ_C((1/2)<n - r, k(n)>)`, the diagonal of `π̂(k)`.
    pub fn rotation(&self, kc: &[i64], n: &[i64]) -> Result<Polar> {
        let kn = self.spec.apply_a(kc, n);
        Ok(self.chi.chi_h_prime(&kn).mul(&self.chi.chi_c(&self.spec.half_twist(kc, n)?)))
    }

    /// Whether `π̂(k)` is well defined on `V_χ`: the rotation factor must be
    /// trivial on `H_χ`, which contains `k(H_χ) ⊆ Ker χ_H'` for the
    /// symmetric part.
    pub fn check_extension(&self, kc: &[i64]) -> Result<()> {
        if kc.iter().all(|&x| x == 0) {
            return Ok(());
        }
        for h in &self.stab.hnf {
            if !self.rotation(kc, h)?.is_one() {
                return Err(Error::Validation(format!(
                    "k = {kc:?} does not preserve V_chi: rotation factor on {h:?} is {}",
                    self.rotation(kc, h)?
                )));
            }
        }
        Ok(())
    }

    /// `φ(v)` read off from the coset representative of `v`.
    fn factor_to_rep(&self, v: &[i64]) -> (Vec<i64>, Polar) {
        let rep = self.stab.reduce(v);
        let h = sub(v, &rep);
        (rep, self.chi.chi_h(&h))
    }

    /// `(π(m, p, c) π̂(k) φ)(n) = χ_H'(p) χ_C(c + <n, p>) · (π̂(k)φ)(n + m)`.
    pub fn act(&self, g: &GroupElement, v: &RepVector) -> Result<RepVector> {
        self.check_extension(&g.k)?;
        let extended = g.k.iter().any(|&x| x != 0);
        let mut out = RepVector::default();
        for (x, amp) in &v.amplitudes {
            let amp = if extended { amp.scale(&self.rotation(&g.k, x)?) } else { amp.clone() };
            // n + m ≡ x: n = rep(x - m), and n + m = x + h with h ∈ H_χ
            let (n, _) = self.factor_to_rep(&sub(x, &g.m));
            let h = sub(&add(&n, &g.m), x);
            let scalar = self
                .chi
                .chi_h_prime(&g.p)
                .mul(&self.chi.chi_c(&add(&g.c, &self.spec.pair(&n, &g.p))))
                .mul(&self.chi.chi_h(&h));
            out.push(n, amp.scale(&scalar));
        }
        Ok(out)
    }

    /// Diagonal entry of `π̂(g)` at the coset of `n`, when `m ∈ H_χ`.
    fn diagonal(&self, g: &GroupElement, n: &[i64]) -> Result<Polar> {
        let rot = if g.k.iter().any(|&x| x != 0) { self.rotation(&g.k, n)? } else { Polar::one() };
        Ok(rot
            .mul(&self.chi.chi_h(&g.m))
            .mul(&self.chi.chi_h_prime(&g.p))
            .mul(&self.chi.chi_c(&add(&g.c, &self.spec.pair(n, &g.p)))))
    }
}

/// A monomial matrix: column `j` has the single entry `value` in row `row`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMatrix {
    pub entries: Vec<(usize, Polar)>,
}

impl MonomialMatrix {
    pub fn mul(&self, o: &MonomialMatrix) -> MonomialMatrix {
        MonomialMatrix {
            entries: o.entries.iter().map(|(r, v)| (self.entries[*r].0, self.entries[*r].1.mul(v))).collect(),
        }
    }

    pub fn trace(&self) -> PolarSum {
        let mut s = PolarSum::default();
        for (j, (r, v)) in self.entries.iter().enumerate() {
            if *r == j {
                s.add(&PolarSum::monomial(*v));
            }
        }
        s
    }
}

/// Trace of `π̂_χ̂(g)` on a finite-dimensional `V_χ`, by matrix and by the
/// character formula.
#[derive(Clone, Debug, Serialize)]
pub struct FiniteTrace {
    pub dimension: usize,
    pub matrix_trace: [f64; 2],
    pub direct_sum: [f64; 2],
    pub agree: bool,
}

impl FiniteTrace {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.matrix_trace[0], self.matrix_trace[1])
    }
}

/// Basis of `V_χ` when `[H : H_χ]` is finite.
pub fn finite_basis(rep: &Representation) -> Result<Vec<Vec<i64>>> {
    rep.stab
        .cosets(rep.spec.h.ngens())
        .ok_or_else(|| Error::Validation("H_chi has infinite index, V_chi is infinite-dimensional".into()))
}

/// `π̂_χ(g)` on the coset basis.
pub fn finite_matrix(rep: &Representation, basis: &[Vec<i64>], g: &GroupElement) -> Result<MonomialMatrix> {
    let pos: BTreeMap<&Vec<i64>, usize> = basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let mut entries = Vec::with_capacity(basis.len());
    for b in basis {
        let w = rep.act(g, &RepVector::delta(b.clone()))?;
        let (row, amp) = w.amplitudes.iter().next().ok_or_else(|| Error::Validation("zero image of a basis vector".into()))?;
        let (p, c) = amp.terms().next().unwrap();
        if w.amplitudes.len() != 1 || c != 1 {
            return Err(Error::Validation("representation matrix is not monomial".into()));
        }
        entries.push((pos[row], *p));
    }
    Ok(MonomialMatrix { entries })
}

/// Trace of `π̂_χ̂(g)` for `[H : H_χ] < ∞`, including the factor `χ_A(k)`,
/// cross-checked against the summation formula over `H/H_χ`.
pub fn finite_rep_trace(spec: &HeisenbergSpec, chi: &Character, g: &GroupElement) -> Result<FiniteTrace> {
    let rep = Representation::new(spec, chi)?;
    let basis = finite_basis(&rep)?;
    let mat = finite_matrix(&rep, &basis, g)?;
    let ka = chi.chi_a(&g.k);
    let tr = mat.trace().scale(&ka).to_complex(chi.base);
    let mut direct = Complex64::new(0.0, 0.0);
    if rep.stab.contains(&g.m) {
        for n in &basis {
            direct += rep.diagonal(g, n)?.mul(&ka).to_complex(chi.base);
        }
    }
    let agree = (tr - direct).norm() <= 1e-12 * (1.0 + tr.norm());
    Ok(FiniteTrace { dimension: basis.len(), matrix_trace: [tr.re, tr.im], direct_sum: [direct.re, direct.im], agree })
}

/// Checks `π(g1) π(g2) = π(g1 g2)` on all pairs with coordinates in
/// `[0, n)` of a finite-dimensional representation; returns the number of
/// pairs checked.
pub fn finite_homomorphism_check(spec: &HeisenbergSpec, chi: &Character, n: i64) -> Result<usize> {
    let rep = Representation::new(spec, chi)?;
    let basis = finite_basis(&rep)?;
    let coords = |g: &[i64]| -> Vec<Vec<i64>> {
        g.iter().fold(vec![vec![]], |acc, _| acc.into_iter().flat_map(|v| (0..n).map(move |x| [v.clone(), vec![x]].concat())).collect())
    };
    let (nh, nhp, nc) = (spec.h.ngens(), spec.h_prime.ngens(), spec.c.ngens());
    let shape = vec![0; nh + nhp + nc];
    let mut elements = Vec::new();
    for v in coords(&shape) {
        elements.push(spec.element(&v[..nh], &v[nh..nh + nhp], &v[nh + nhp..], &[])?);
    }
    let mats: Vec<MonomialMatrix> = elements.iter().map(|g| finite_matrix(&rep, &basis, g)).collect::<Result<_>>()?;
    let mut count = 0;
    for (g1, m1) in elements.iter().zip(&mats) {
        for (g2, m2) in elements.iter().zip(&mats) {
            let prod = finite_matrix(&rep, &basis, &spec.group_law(g1, g2)?)?;
            if m1.mul(m2) != prod {
                return Err(Error::Validation(format!("pi(g1) pi(g2) != pi(g1 g2) for {g1:?}, {g2:?}")));
            }
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heis(lambda: &str, z: &str) -> (HeisenbergSpec, Character) {
        let s = HeisenbergSpec::heis3();
        let mut chi = Character::new(&s, 0.5);
        chi.c[0] = Polar::parse(lambda).unwrap();
        chi.h_prime[0] = Polar::parse(z).unwrap();
        (s, chi)
    }

    #[test]
    fn identity_and_center() {
        let (s, chi) = heis("1,1/3", "1/2,1/5");
        let rep = Representation::new(&s, &chi).unwrap();
        let v = RepVector::delta(vec![2]);
        assert_eq!(rep.act(&s.identity(), &v).unwrap(), v);
        let c = s.element(&[0], &[0], &[3], &[]).unwrap();
        let w = rep.act(&c, &v).unwrap();
        assert_eq!(w.amplitudes[&vec![2]], PolarSum::monomial(chi.c[0].pow(3)));
    }

    #[test]
    fn homomorphism_infinite() {
        let (s, mut chi) = heis("1,1/3", "1/2,1/5");
        chi.h[0] = Polar::parse("-1,1/7").unwrap();
        let rep = Representation::new(&s, &chi).unwrap();
        let els = [
            s.element(&[1], &[2], &[0], &[1]).unwrap(),
            s.element(&[-3], &[1], &[4], &[0]).unwrap(),
            s.element(&[2], &[-1], &[1], &[-2]).unwrap(),
        ];
        for a in &els {
            for b in &els {
                for x in [-2, 0, 5] {
                    let v = RepVector::delta(vec![x]);
                    let lhs = rep.act(a, &rep.act(b, &v).unwrap()).unwrap();
                    let rhs = rep.act(&s.group_law(a, b).unwrap(), &v).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn gauss_sum_trace() {
        let (s, chi) = heis("0,1/5", "0,0");
        let g = s.element(&[0], &[1], &[0], &[2]).unwrap();
        let t = finite_rep_trace(&s, &chi, &g).unwrap();
        let direct: Complex64 = (0..5).map(|n| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (n * n) as f64 / 5.0)).sum();
        assert!(t.agree);
        assert_eq!(t.dimension, 5);
        assert!((t.value() - direct).norm() < 1e-12);
        assert!((t.value() - Complex64::new(5f64.sqrt(), 0.0)).norm() < 1e-12);

        let c = s.element(&[0], &[0], &[2], &[]).unwrap();
        let t = finite_rep_trace(&s, &chi, &c).unwrap();
        assert!((t.value() - chi.c[0].pow(2).to_complex(0.5) * 5.0).norm() < 1e-12);
        let off = s.element(&[2], &[1], &[0], &[]).unwrap();
        assert!(finite_rep_trace(&s, &chi, &off).unwrap().value().norm() < 1e-15);
    }

    #[test]
    fn finite_homomorphism() {
        let (s, chi) = heis("0,1/4", "0,0");
        assert_eq!(finite_homomorphism_check(&s, &chi, 4).unwrap(), 4096);
    }

    #[test]
    fn extension_precondition() {
        let (s, chi) = heis("0,1/4", "0,1/3");
        let rep = Representation::new(&s, &chi).unwrap();
        assert!(rep.check_extension(&[1]).is_err());
        let (s, chi) = heis("0,1/4", "0,0");
        let rep = Representation::new(&s, &chi).unwrap();
        // (1/2)(4 - 1)·4k must vanish mod 4
        assert!(rep.check_extension(&[1]).is_err());
        rep.check_extension(&[2]).unwrap();
    }
}
