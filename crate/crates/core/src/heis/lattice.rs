//! Theta functions `θ_Γ(t) = Σ_(γ ∈ Γ) exp(-π t <γ, γ>)` of lattices with a
//! rational Gram matrix.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::trace::{box_radius, certified_min_eigenvalue};
use crate::error::{Error, Result};
use crate::reciprocity::VerificationReport;

/// Enumeration cap for a single theta evaluation.
pub const MAX_LATTICE_TERMS: usize = 50_000_000;

/// `Γ = Γ' ⊕ Γ_tor` with `Γ'` free of rank `n`, Gram matrix `gram`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    #[serde(with = "rational_matrix")]
    pub gram: Vec<Vec<Rational64>>,
    #[serde(default = "one")]
    pub torsion: u64,
}

fn one() -> u64 {
    1
}

/// Entries as strings such as `"3/2"`; integers are accepted on input.
mod rational_matrix {
    use num_rational::Rational64;
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::heis::polar::parse_rational;

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Entry {
        Int(i64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(m: &[Vec<Rational64>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(m.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational64>>, D::Error> {
        let rows: Vec<Vec<Entry>> = Vec::deserialize(d)?;
        rows.into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|e| match e {
                        Entry::Int(x) => Ok(Rational64::from(x)),
                        Entry::Text(t) => parse_rational(t.trim(), 0).map_err(serde::de::Error::custom),
                    })
                    .collect()
            })
            .collect()
    }
}

fn big(x: &Rational64) -> BigRational {
    BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()))
}

/// Exact determinant of a small rational matrix by fraction-free elimination.
fn det(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = BigRational::from_integer(1.into());
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return BigRational::zero() };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        for i in c + 1..n {
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    d
}

/// Inverse by Gauss–Jordan over the rationals.
fn inverse(m: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| BigRational::from_integer(BigInt::from(i64::from(i == j)))));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero()).expect("singular matrix");
        a.swap(p, c);
        let inv = a[c][c].recip();
        a[c].iter_mut().for_each(|x| *x *= &inv);
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let row = a[c].clone();
                for (x, y) in a[i].iter_mut().zip(&row) {
                    *x -= &f * y;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

impl Lattice {
    pub fn new(gram: Vec<Vec<Rational64>>, torsion: u64) -> Result<Self> {
        let l = Lattice { gram, torsion };
        l.validate()?;
        Ok(l)
    }

    pub fn from_integers(gram: &[Vec<i64>], torsion: u64) -> Result<Self> {
        Lattice::new(gram.iter().map(|r| r.iter().map(|&x| Rational64::from(x)).collect()).collect(), torsion)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    fn exact(&self) -> Vec<Vec<BigRational>> {
        self.gram.iter().map(|r| r.iter().map(big).collect()).collect()
    }

    /// Symmetric, positive definite by leading principal minors, torsion ≥ 1.
    pub fn validate(&self) -> Result<()> {
        let n = self.rank();
        if n == 0 || self.gram.iter().any(|r| r.len() != n) {
            return Err(Error::Validation("Gram matrix must be square and nonempty".into()));
        }
        if self.torsion == 0 {
            return Err(Error::Validation("torsion order must be at least 1".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if self.gram[i][j] != self.gram[j][i] {
                    return Err(Error::Validation("Gram matrix is not symmetric".into()));
                }
            }
        }
        let g = self.exact();
        for k in 1..=n {
            let minor: Vec<Vec<BigRational>> = g[..k].iter().map(|r| r[..k].to_vec()).collect();
            let d = det(&minor);
            if d <= BigRational::zero() {
                return Err(Error::NotPositiveDefinite(format!("leading minor {k} is {d}")));
            }
        }
        Ok(())
    }

    pub fn determinant(&self) -> BigRational {
        det(&self.exact())
    }

    /// `Γ'^⊥` with the inverse Gram matrix; `None` if an entry leaves `i64`.
    pub fn dual(&self) -> Option<Lattice> {
        let inv = inverse(&self.exact());
        let gram = inv
            .iter()
            .map(|r| r.iter().map(|x| Some(Rational64::new(x.numer().to_i64()?, x.denom().to_i64()?))).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        Some(Lattice { gram, torsion: 1 })
    }

    /// `Γ ⊕ Γ`.
    pub fn doubled(&self) -> Lattice {
        let n = self.rank();
        let gram = (0..2 * n)
            .map(|i| (0..2 * n).map(|j| if i / n == j / n { self.gram[i % n][j % n] } else { Rational64::zero() }).collect())
            .collect();
        Lattice { gram, torsion: self.torsion * self.torsion }
    }

    fn float(&self) -> DMatrix<f64> {
        let n = self.rank();
        DMatrix::from_fn(n, n, |i, j| self.gram[i][j].to_f64().unwrap())
    }
}

/// A theta value with its truncation data.
#[derive(Clone, Debug, Serialize)]
pub struct ThetaValue {
    pub value: f64,
    pub truncation: i64,
    pub terms: usize,
    pub tail_bound: f64,
}

/// `θ_Γ(t) = #Γ_tor · Σ_(γ ∈ Γ') exp(-π t <γ, γ>)` over a box whose
/// complement is bounded by `ε` through the smallest eigenvalue of the Gram
/// matrix.
pub fn lattice_theta(l: &Lattice, t: f64, eps: f64) -> Result<ThetaValue> {
    l.validate()?;
    if !(t > 0.0 && t.is_finite()) || !(eps > 0.0) {
        return Err(Error::Validation(format!("need t > 0 and eps > 0, got t = {t}, eps = {eps}")));
    }
    let n = l.rank();
    let g = l.float();
    let scaled = &g * (std::f64::consts::PI * t);
    let mu = certified_min_eigenvalue(&scaled).ok_or_else(|| Error::NotPositiveDefinite("no certified eigenvalue bound".into()))?;
    let tors = l.torsion as f64;
    let (j, tail) = box_radius(n, mu, 0.0, eps / tors);
    let side = (2 * j + 1) as usize;
    let terms = side.checked_pow(n as u32).filter(|&x| x <= MAX_LATTICE_TERMS).ok_or_else(|| {
        Error::Inconclusive(format!("box radius {j} in rank {n} exceeds the enumeration cap"))
    })?;
    let mut sum = 0.0;
    let mut v = vec![-j; n];
    for _ in 0..terms {
        let mut q = 0.0;
        for a in 0..n {
            let va = v[a] as f64;
            q += scaled[(a, a)] * va * va;
            for b in a + 1..n {
                q += 2.0 * scaled[(a, b)] * va * v[b] as f64;
            }
        }
        sum += (-q).exp();
        for a in (0..n).rev() {
            v[a] += 1;
            if v[a] <= j {
                break;
            }
            v[a] = -j;
        }
    }
    Ok(ThetaValue { value: tors * sum, truncation: j, terms, tail_bound: tors * tail })
}

/// `θ_Γ'(t) = t^(-n/2) Vol(Γ')^(-1) θ_(Γ'^⊥)(1/t)` with `Vol = √det`.
pub fn functional_equation_check(l: &Lattice, t: f64, tolerance: f64) -> Result<VerificationReport> {
    l.validate()?;
    let free = Lattice { gram: l.gram.clone(), torsion: 1 };
    let dual = free.dual().ok_or_else(|| Error::Validation("dual Gram matrix does not fit in 64-bit rationals".into()))?;
    let n = l.rank() as f64;
    let eps = 1e-15;
    let lhs = lattice_theta(&free, t, eps)?;
    let rhs_theta = lattice_theta(&dual, 1.0 / t, eps)?;
    let vol = free.determinant().to_f64().unwrap().sqrt();
    let rhs = t.powf(-n / 2.0) / vol * rhs_theta.value;
    let rel = (lhs.value - rhs).abs() / lhs.value.abs();
    let checks = vec![(
        "theta(t) = t^(-n/2) vol^(-1) theta_dual(1/t)".to_string(),
        format!("{:.15e} vs {:.15e}, relative difference {rel:.3e}", lhs.value, rhs),
        rel <= tolerance,
    )];
    let inputs = json!({
        "gram": l.gram.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "dual_gram": dual.gram.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "t": t,
        "terms": [lhs.terms, rhs_theta.terms],
    });
    Ok(VerificationReport::checks("lattice_theta_functional_equation", inputs, checks, json!({ "tolerance": tolerance })))
}

/// Fit of `log θ_(Γ⊕Γ)(t)` against `log t` as `t → 0`, compared with
/// `#Γ_tor^2 / det Γ · t^(-n)`.
#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticReport {
    pub rank: usize,
    pub exponent: f64,
    pub expected_exponent: f64,
    pub fitted_constant: f64,
    pub expected_constant: f64,
    pub t_range: [f64; 2],
    pub tolerance: f64,
    pub pass: bool,
}

impl AsymptoticReport {
    pub fn report(&self) -> VerificationReport {
        let inputs = json!({
            "rank": self.rank,
            "t_range": self.t_range,
            "fitted_constant": format!("{:.9e}", self.fitted_constant),
            "expected_constant": format!("{:.9e}", self.expected_constant),
        });
        let checks = vec![(
            "theta of doubled lattice ~ t^(-n)".to_string(),
            format!("fitted exponent {:.6} vs {}", self.exponent, self.expected_exponent),
            self.pass,
        )];
        VerificationReport::checks("lattice_theta_asymptotic", inputs, checks, json!({ "tolerance": self.tolerance }))
    }
}

/// Evaluates the doubled lattice on a geometric range of small `t`, chosen so
/// that the dual-side correction `θ_dual(1/t) - 1` is negligible.
pub fn asymptotic_check(l: &Lattice, tolerance: f64) -> Result<AsymptoticReport> {
    l.validate()?;
    let n = l.rank();
    let d = l.doubled();
    let lam_max = l.float().symmetric_eigen().eigenvalues.max();
    // the shortest dual vector has squared length ≥ 1/λ_max
    let t_hi = (std::f64::consts::PI / lam_max / 12.0).min(0.2);
    let t_lo = t_hi / 4.0;
    let npts = 6;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for i in 0..npts {
        let t = t_lo * (t_hi / t_lo).powf(i as f64 / (npts - 1) as f64);
        xs.push(t.ln());
        ys.push(lattice_theta(&d, t, 1e-12)?.value.ln());
    }
    let m = npts as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let expected = -(n as f64);
    let tors = l.torsion as f64;
    Ok(AsymptoticReport {
        rank: n,
        exponent: slope,
        expected_exponent: expected,
        fitted_constant: (my - slope * mx).exp(),
        expected_constant: tors * tors / l.determinant().to_f64().unwrap(),
        t_range: [t_lo, t_hi],
        tolerance,
        pass: (slope - expected).abs() <= tolerance,
    })
}
