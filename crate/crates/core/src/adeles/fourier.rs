//! Finite Fourier transform on adelic windows, Poisson and Plancherel.

use serde_json::json;

use super::linalg::{rank, rref, span};
use super::rr::{riemann_roch_basis, rr_cohomology};
use super::window::{canonical_divisor, divisor_max, AdeleWindow};
use super::DivisorOnCurve;
use crate::error::{Error, Result};
use crate::field::{Elem, GaloisField};
use crate::reciprocity::VerificationReport;

/// Windows larger than this are not enumerated.
pub const MAX_ENUMERATION: usize = 1 << 12;

/// An element of `Z[ζ_p]` as coefficients of `1, ζ, ..., ζ^(p-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclotomic {
    c: Vec<i64>,
}

impl Cyclotomic {
    pub fn zero(p: u32) -> Self {
        Cyclotomic { c: vec![0; p as usize] }
    }

    pub fn integer(p: u32, n: i64) -> Self {
        let mut z = Self::zero(p);
        z.c[0] = n;
        z
    }

    fn p(&self) -> usize {
        self.c.len()
    }

    /// `self += n ζ^e`.
    pub fn add_root(&mut self, e: u32, n: i64) {
        let p = self.p();
        self.c[e as usize % p] += n;
    }

    pub fn add(&self, o: &Self) -> Self {
        Cyclotomic { c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.p();
        let mut out = Self::zero(p as u32);
        for (i, a) in self.c.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out.c[(i + j) % p] += a * b;
            }
        }
        out
    }

    /// Complex conjugation `ζ -> ζ^(-1)`.
    pub fn conj(&self) -> Self {
        let p = self.p();
        Cyclotomic { c: (0..p).map(|i| self.c[(p - i) % p]).collect() }
    }

    /// The integer this equals, if it is one (`sum ζ^i = 0` is the only relation).
    pub fn as_integer(&self) -> Option<i64> {
        let base = self.c[1 % self.p()];
        if self.p() == 1 {
            return Some(self.c[0]);
        }
        self.c[1..].iter().all(|&x| x == base).then(|| self.c[0] - base)
    }
}

/// Which subgroup of the window is transformed.
#[derive(Clone, Debug)]
pub enum SubgroupSpec {
    Zero,
    All,
    /// Span of explicit coordinate vectors.
    Generators(Vec<Vec<Elem>>),
    /// `A_1(D) / A_1(D_2)` for `D_2 <= D <= D_1`.
    Adelic(DivisorOnCurve),
    /// Image of the Riemann-Roch space `L(D)` for `D <= D_1`.
    Global(DivisorOnCurve),
    /// Image of `K + A_1(D)`, spanned by `A_1(D)` and `L(D_1)`.
    KPlusAdelic(DivisorOnCurve),
}

/// A self-dual window `V = A_1(D_1) / A_1(D_2)` with `D_1 + D_2 = (dx)`,
/// the residue pairing and the character `ψ(a) = ζ_p^a`.
pub struct FourierWindow {
    pub window: AdeleWindow,
    gram: Vec<Vec<Elem>>,
    points: Vec<Vec<Elem>>,
}

impl FourierWindow {
    pub fn new(d1: &DivisorOnCurve, d2: &DivisorOnCurve) -> Result<Self> {
        let k = d1.field();
        let window = AdeleWindow::new(d1, d2)?;
        if d1.add(d2) != canonical_divisor(k) {
            return Err(Error::DegeneratePairing(format!(
                "D1 + D2 = {} differs from (dx) = -2*[inf]",
                d1.add(d2).to_text()
            )));
        }
        let n = window.dim();
        let gram = window.residue_pairing();
        if rank(k, &gram, n) != n {
            return Err(Error::DegeneratePairing("residue pairing is singular on the window".into()));
        }
        let size = (k.order() as usize).checked_pow(n as u32).filter(|&s| s <= MAX_ENUMERATION);
        if size.is_none() {
            return Err(Error::Validation(format!("window of dimension {n} over {k} is too large to enumerate")));
        }
        let unit: Vec<Vec<Elem>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { Elem::ONE } else { Elem::ZERO }).collect()).collect();
        let points = span(k, &unit, n);
        Ok(FourierWindow { window, gram, points })
    }

    /// The self-dual window `A_1(D_1) / A_1((dx) - D_1)` containing `D`.
    pub fn around(d: &DivisorOnCurve) -> Result<Self> {
        let omega = canonical_divisor(d.field());
        let d1 = divisor_max(d, &omega.sub(d));
        Self::new(&d1, &omega.sub(&d1))
    }

    fn k(&self) -> &GaloisField {
        self.window.field()
    }

    pub fn dim(&self) -> usize {
        self.window.dim()
    }

    pub fn points(&self) -> &[Vec<Elem>] {
        &self.points
    }

    pub fn pair(&self, a: &[Elem], b: &[Elem]) -> Elem {
        let k = self.k();
        let mut s = Elem::ZERO;
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                s = k.add(s, k.mul(*ai, k.mul(self.gram[i][j], *bj)));
            }
        }
        s
    }

    /// `F φ(b) = sum_a φ(a) ψ(<a, b>)`, unnormalized, so `F F φ = |V| φ(-·)`.
    pub fn transform(&self, phi: &[Cyclotomic]) -> Vec<Cyclotomic> {
        let k = self.k();
        let p = k.characteristic() as usize;
        let n = self.dim();
        let support: Vec<(&Vec<Elem>, &Cyclotomic)> =
            self.points.iter().zip(phi).filter(|(_, v)| v.c.iter().any(|&x| x != 0)).collect();
        self.points
            .iter()
            .map(|b| {
                let gb: Vec<Elem> = (0..n)
                    .map(|i| (0..n).fold(Elem::ZERO, |s, j| k.add(s, k.mul(self.gram[i][j], b[j]))))
                    .collect();
                let mut acc = Cyclotomic::zero(p as u32);
                for (a, v) in &support {
                    let e = a.iter().zip(&gb).fold(Elem::ZERO, |s, (x, y)| k.add(s, k.mul(*x, *y))).0 as usize;
                    for (i, c) in v.c.iter().enumerate() {
                        acc.c[(i + e) % p] += c;
                    }
                }
                acc
            })
            .collect()
    }

    fn index(&self, v: &[Elem]) -> usize {
        let q = self.k().order() as usize;
        v.iter().fold(0, |acc, x| acc * q + x.0 as usize)
    }

    /// Reflection `a -> -a` as a permutation of [`Self::points`].
    pub fn negate(&self, phi: &[Cyclotomic]) -> Vec<Cyclotomic> {
        let k = self.k();
        self.points.iter().map(|a| phi[self.index(&a.iter().map(|x| k.neg(*x)).collect::<Vec<_>>())].clone()).collect()
    }

    pub fn indicator(&self, basis: &[Vec<Elem>]) -> Vec<Cyclotomic> {
        let p = self.k().characteristic();
        let mut out = vec![Cyclotomic::zero(p); self.points.len()];
        for v in span(self.k(), basis, self.dim()) {
            out[self.index(&v)] = Cyclotomic::integer(p, 1);
        }
        out
    }

    /// Row-reduced basis of a subgroup.
    pub fn subgroup_basis(&self, spec: &SubgroupSpec) -> Result<Vec<Vec<Elem>>> {
        let n = self.dim();
        let mut rows = match spec {
            SubgroupSpec::Zero => Vec::new(),
            SubgroupSpec::All => {
                (0..n).map(|i| (0..n).map(|j| if i == j { Elem::ONE } else { Elem::ZERO }).collect()).collect()
            }
            SubgroupSpec::Generators(g) => {
                if g.iter().any(|v| v.len() != n) {
                    return Err(Error::Validation(format!("generators must have {n} coordinates")));
                }
                g.clone()
            }
            SubgroupSpec::Adelic(d) => {
                let mask = self.window.sub_window(d)?;
                mask.iter()
                    .enumerate()
                    .filter(|(_, &m)| m)
                    .map(|(i, _)| (0..n).map(|j| if i == j { Elem::ONE } else { Elem::ZERO }).collect())
                    .collect()
            }
            SubgroupSpec::Global(d) => {
                if !d.le(self.window.high()) {
                    return Err(Error::Validation(format!("{} is not below the window", d.to_text())));
                }
                riemann_roch_basis(d)?.iter().map(|f| self.window.embed(f).map(|a| a.coords)).collect::<Result<_>>()?
            }
            SubgroupSpec::KPlusAdelic(d) => {
                let mut rows = self.subgroup_basis(&SubgroupSpec::Adelic(d.clone()))?;
                rows.extend(self.subgroup_basis(&SubgroupSpec::Global(self.window.high().clone()))?);
                rows
            }
        };
        rref(self.k(), &mut rows, n);
        Ok(rows)
    }

    /// Brute-force annihilator of the span of `basis`.
    pub fn annihilator(&self, basis: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
        self.points.iter().filter(|b| basis.iter().all(|a| self.pair(a, b).is_zero())).cloned().collect()
    }
}

fn sorted(mut v: Vec<Vec<Elem>>) -> Vec<Vec<Elem>> {
    v.sort();
    v
}

/// Checks `F(δ_W) = |W| δ_{W^⊥}` exactly in `Z[ζ_p]` on `V = A_1(D_1)/A_1(D_2)`,
/// together with `|W| |W^⊥| = |V|`, and the annihilator identities
/// `A_1(D)^⊥ = A_1((dx) - D)`, `L(D_1)^⊥ = L((dx) - D_2)` and
/// `(K + A_1(D))^⊥ = L((dx) - D)` when they apply.
pub fn finite_fourier_poisson(d1: &DivisorOnCurve, d2: &DivisorOnCurve, w: &SubgroupSpec) -> Result<VerificationReport> {
    let fw = FourierWindow::new(d1, d2)?;
    finite_fourier_poisson_on(&fw, w)
}

pub fn finite_fourier_poisson_on(fw: &FourierWindow, w: &SubgroupSpec) -> Result<VerificationReport> {
    let k = fw.k().clone();
    let p = k.characteristic();
    let basis = fw.subgroup_basis(w)?;
    let size_w = span(&k, &basis, fw.dim()).len();
    let perp = fw.annihilator(&basis);
    let ft = fw.transform(&fw.indicator(&basis));
    let mut transform_ok = true;
    for (b, v) in fw.points().iter().zip(&ft) {
        let want = if perp.contains(b) { size_w as i64 } else { 0 };
        transform_ok &= v == &Cyclotomic::integer(p, want) || v.as_integer() == Some(want);
    }
    let mut checks = vec![
        ("F(delta_W) = |W| delta_W_perp".to_string(), format!("|W| = {size_w}, |W_perp| = {}", perp.len()), transform_ok),
        (
            "|W| |W_perp| = |V|".to_string(),
            format!("{} * {} vs {}", size_w, perp.len(), fw.points().len()),
            size_w * perp.len() == fw.points().len(),
        ),
    ];
    let omega = canonical_divisor(&k);
    let expected = match w {
        SubgroupSpec::Adelic(d) => Some(("A_1(D)_perp = A_1((dx) - D)", SubgroupSpec::Adelic(omega.sub(d)))),
        SubgroupSpec::Global(d) if d == fw.window.high() => {
            Some(("L(D_1)_perp = L((dx) - D_2)", SubgroupSpec::Global(omega.sub(fw.window.low()))))
        }
        SubgroupSpec::KPlusAdelic(d) => Some(("(K + A_1(D))_perp = L((dx) - D)", SubgroupSpec::Global(omega.sub(d)))),
        _ => None,
    };
    if let Some((name, spec)) = expected {
        let other = span(&k, &fw.subgroup_basis(&spec)?, fw.dim());
        checks.push((name.to_string(), format!("{} elements", other.len()), sorted(other) == sorted(perp.clone())));
    }
    let inputs = json!({
        "field": k.to_string(),
        "d1": fw.window.high().to_text(),
        "d2": fw.window.low().to_text(),
        "subgroup": describe(w),
        "dim_v": fw.dim(),
    });
    Ok(VerificationReport::checks("finite_fourier_poisson", inputs, checks, json!("exact")))
}

fn describe(w: &SubgroupSpec) -> String {
    match w {
        SubgroupSpec::Zero => "0".into(),
        SubgroupSpec::All => "V".into(),
        SubgroupSpec::Generators(g) => format!("span of {} generators", g.len()),
        SubgroupSpec::Adelic(d) => format!("A_1({})", d.to_text()),
        SubgroupSpec::Global(d) => format!("L({})", d.to_text()),
        SubgroupSpec::KPlusAdelic(d) => format!("K + A_1({})", d.to_text()),
    }
}

/// Plancherel for `δ_{A_1(D)}` and `δ_K` on the self-dual window around `D`,
/// and the resulting `l(D) - l((dx) - D) = deg D + 1`.
pub fn plancherel_rr_check(d: &DivisorOnCurve) -> Result<VerificationReport> {
    let k = d.field().clone();
    let omega = canonical_divisor(&k);
    let dual = omega.sub(d);
    let fw = FourierWindow::around(d)?;
    let n = fw.dim();
    let u = fw.subgroup_basis(&SubgroupSpec::Adelic(d.clone()))?;
    let w = fw.subgroup_basis(&SubgroupSpec::Global(fw.window.high().clone()))?;

    let (phi, chi) = (fw.indicator(&u), fw.indicator(&w));
    let p = k.characteristic();
    let lhs = phi.iter().zip(&chi).fold(Cyclotomic::zero(p), |a, (x, y)| a.add(&x.mul(&y.conj())));
    let (fphi, fchi) = (fw.transform(&phi), fw.transform(&chi));
    let rhs = fphi.iter().zip(&fchi).fold(Cyclotomic::zero(p), |a, (x, y)| a.add(&x.mul(&y.conj())));
    let size_v = fw.points().len() as i64;
    let lhs_n = lhs.as_integer();
    let rhs_n = rhs.as_integer();
    let plancherel = matches!((lhs_n, rhs_n), (Some(a), Some(b)) if a * size_v == b);

    // |U ∩ W| = q^l(D) and |U_perp ∩ W| = q^l((dx) - D)
    let q = k.order() as i64;
    let dim_of = |count: i64| (0..=n as u32).find(|&e| q.pow(e) == count).map(|e| e as i64);
    let cap = dim_of(lhs_n.unwrap_or(-1));
    let u_perp = fw.annihilator(&u);
    let w_all = span(&k, &w, n);
    let cap_dual = dim_of(u_perp.iter().filter(|v| w_all.contains(v)).count() as i64);

    let h = rr_cohomology(d)?;
    let h_dual = rr_cohomology(&dual)?;
    let l = h.h0 as i64;
    let l_dual = h_dual.h0 as i64;
    let checks = vec![
        (
            "<d_A, d_K> |V| = <F d_A, F d_K>".to_string(),
            format!("{} * {} vs {}", fmt_opt(lhs_n), size_v, fmt_opt(rhs_n)),
            plancherel,
        ),
        ("l(D) = dim (U ∩ W)".to_string(), format!("{l} vs {}", fmt_opt(cap)), cap == Some(l)),
        ("l((dx) - D) = dim (U_perp ∩ W)".to_string(), format!("{l_dual} vs {}", fmt_opt(cap_dual)), cap_dual == Some(l_dual)),
        (
            "l(D) - l((dx) - D) = deg D + 1".to_string(),
            format!("{} vs {}", l - l_dual, d.degree() + 1),
            l - l_dual == d.degree() + 1,
        ),
    ];
    let inputs = json!({
        "field": k.to_string(),
        "divisor": d.to_text(),
        "omega": "dx",
        "window": { "d1": fw.window.high().to_text(), "d2": fw.window.low().to_text(), "dim": n },
    });
    Ok(VerificationReport::checks("plancherel_rr", inputs, checks, json!("exact")))
}

fn fmt_opt(v: Option<i64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_else(|| "?".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn div(src: &str, k: &GaloisField) -> DivisorOnCurve {
        DivisorOnCurve::parse(src, k).unwrap()
    }

    #[test]
    fn cyclotomic_identities() {
        let mut z = Cyclotomic::zero(3);
        for e in 0..3 {
            z.add_root(e, 2);
        }
        assert_eq!(z.as_integer(), Some(0));
        let mut w = Cyclotomic::zero(3);
        w.add_root(1, 1);
        assert_eq!(w.mul(&w.conj()).as_integer(), Some(1));
        assert_eq!(w.as_integer(), None);
    }

    #[test]
    fn trivial_subgroups() {
        let k = GaloisField::prime(2).unwrap();
        let d1 = div("1*[x]", &k);
        let d2 = canonical_divisor(&k).sub(&d1);
        for spec in [SubgroupSpec::Zero, SubgroupSpec::All] {
            let r = finite_fourier_poisson(&d1, &d2, &spec).unwrap();
            assert!(r.pass, "{}", r.to_text());
        }
    }

    #[test]
    fn adelic_and_global_annihilators() {
        let k = GaloisField::prime(2).unwrap();
        let d1 = div("1*[x] + 1*[x+1]", &k);
        let d2 = canonical_divisor(&k).sub(&d1);
        let fw = FourierWindow::new(&d1, &d2).unwrap();
        assert_eq!(fw.dim(), 6);
        let r = finite_fourier_poisson_on(&fw, &SubgroupSpec::Adelic(div("1*[x] - 1*[x+1] - 1*[inf]", &k))).unwrap();
        assert!(r.pass, "{}", r.to_text());
        assert_eq!(r.contributions.len(), 3);
        let r = finite_fourier_poisson_on(&fw, &SubgroupSpec::Global(d1.clone())).unwrap();
        assert!(r.pass, "{}", r.to_text());
        assert_eq!(r.contributions.len(), 3);
    }

    #[test]
    fn serre_duality_annihilator() {
        let k = GaloisField::prime(2).unwrap();
        for src in ["0", "2*[x]", "-3*[x]", "1*[x^2+x+1] - 2*[inf]", "-1*[inf]"] {
            let d = div(src, &k);
            let fw = FourierWindow::around(&d).unwrap();
            let r = finite_fourier_poisson_on(&fw, &SubgroupSpec::KPlusAdelic(d)).unwrap();
            assert!(r.pass, "{src}: {}", r.to_text());
            assert_eq!(r.contributions.len(), 3);
        }
    }

    #[test]
    fn degenerate_window_is_rejected() {
        let k = GaloisField::prime(3).unwrap();
        let r = FourierWindow::new(&div("1*[x]", &k), &div("-1*[x]", &k));
        assert!(matches!(r, Err(Error::DegeneratePairing(_))));
    }

    #[test]
    fn fourier_twice_is_reflection() {
        let k = GaloisField::prime(3).unwrap();
        let fw = FourierWindow::around(&div("1*[x]", &k)).unwrap();
        let phi: Vec<Cyclotomic> = (0..fw.points().len()).map(|i| Cyclotomic::integer(3, (i * i % 7) as i64)).collect();
        let twice = fw.transform(&fw.transform(&phi));
        let size = fw.points().len() as i64;
        for (a, b) in twice.iter().zip(fw.negate(&phi)) {
            assert_eq!(a.as_integer(), Some(size * b.as_integer().unwrap()));
        }
    }

    #[test]
    fn plancherel_examples() {
        let k = GaloisField::prime(2).unwrap();
        for src in ["0", "3*[x]", "-1*[inf]", "1*[x^2+x+1] - 1*[x]", "-3*[x]"] {
            let r = plancherel_rr_check(&div(src, &k)).unwrap();
            assert!(r.pass, "{src}: {}", r.to_text());
        }
    }
}
