//! Zeta function of `P^1` and the Poisson formula read as a residue formula.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::json;

use super::rr::rr_cohomology;
use super::window::canonical_divisor;
use super::DivisorOnCurve;
use crate::error::{Error, Result};
use crate::field::is_prime;
use crate::reciprocity::VerificationReport;

/// Effective divisor counts `b_0..b_N` of `P^1` over `F_q`.
#[derive(Clone, Debug, Serialize)]
pub struct ZetaSeries {
    pub q: u64,
    #[serde(serialize_with = "as_strings")]
    pub coeffs: Vec<BigInt>,
    pub closed_form: String,
    #[serde(skip)]
    checks: Vec<(String, String, bool)>,
}

fn as_strings<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|b| b.to_string()))
}

fn mobius(mut n: u64) -> i64 {
    let mut m = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            m = -m;
        }
        d += 1;
    }
    if n > 1 {
        m = -m;
    }
    m
}

fn prime_power(q: u64) -> bool {
    (2..=q).find(|d| q % d == 0).is_some_and(|p| {
        let mut r = q;
        while r % p == 0 {
            r /= p;
        }
        r == 1 && is_prime(p)
    })
}

/// Closed points of degree `1..=n` on `P^1`: monic irreducibles from the
/// necklace formula, plus infinity in degree 1.
pub fn closed_point_counts(q: u64, n: usize) -> Vec<BigInt> {
    let qb = BigInt::from(q);
    (1..=n as u64)
        .map(|d| {
            let mut s = BigInt::zero();
            for e in (1..=d).filter(|e| d % e == 0) {
                s += BigInt::from(mobius(e)) * qb.pow((d / e) as u32);
            }
            let mut a = s / BigInt::from(d);
            if d == 1 {
                a += 1;
            }
            a
        })
        .collect()
}

/// `prod_d (1 - z^d)^(-a_d)` up to `z^n`.
fn euler_product(counts: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut series = vec![BigInt::zero(); n + 1];
    series[0] = BigInt::one();
    for (i, a) in counts.iter().enumerate() {
        let d = i + 1;
        // (1 - z^d)^(-a) = sum_m C(a + m - 1, m) z^(dm)
        let mut factor = vec![BigInt::zero(); n + 1];
        let mut c = BigInt::one();
        let mut m = 0;
        while d * m <= n {
            factor[d * m] = c.clone();
            m += 1;
            c = c * (a + BigInt::from(m - 1)) / BigInt::from(m);
        }
        let mut next = vec![BigInt::zero(); n + 1];
        for (i, x) in series.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in factor.iter().enumerate().take(n + 1 - i) {
                next[i + j] += x * y;
            }
        }
        series = next;
    }
    series
}

fn closed_form_coeff(q: u64, n: usize) -> BigInt {
    let qb = BigInt::from(q);
    (qb.pow(n as u32 + 1) - 1) / (qb - 1)
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `Z(z) = P(z) / ((1 - z)(1 - qz))` at a rational point.
fn eval_zeta(numer: &[BigInt], q: u64, z: &BigRational) -> Option<BigRational> {
    let mut p = BigRational::zero();
    for c in numer.iter().rev() {
        p = p * z + BigRational::from_integer(c.clone());
    }
    let den = (rat(1) - z) * (rat(1) - rat(q as i64) * z);
    (!den.is_zero()).then(|| p / den)
}

/// Counts `b_n` from the Euler product over closed points, compared with the
/// closed form `1/((1 - z)(1 - qz))`, the recurrence
/// `b_(n+1) - (q+1) b_n + q b_(n-1) = 0` and `Z(1/(qz)) = q z^2 Z(z)`.
pub fn zeta_series(q: u64, max_degree: usize) -> Result<ZetaSeries> {
    if !prime_power(q) || q > 1 << 20 {
        return Err(Error::Validation(format!("q = {q} is not a supported prime power")));
    }
    let n = max_degree;
    let coeffs = euler_product(&closed_point_counts(q, n), n);
    let mut checks = Vec::new();
    let closed_ok = (0..=n).all(|i| coeffs[i] == closed_form_coeff(q, i));
    checks.push(("Euler product = 1/((1-z)(1-qz))".into(), format!("b_0..b_{n}"), closed_ok));
    let qb = BigInt::from(q);
    let rec_ok = (1..n).all(|i| &coeffs[i + 1] - (&qb + 1) * &coeffs[i] + &qb * &coeffs[i - 1] == BigInt::zero());
    checks.push(("b_(n+1) - (q+1) b_n + q b_(n-1) = 0".into(), format!("n = 1..{}", n.saturating_sub(1)), rec_ok));

    // numerator P(z) = (1 - z)(1 - qz) Z(z), read off the series
    let mut numer: Vec<BigInt> = (0..=n)
        .map(|i| {
            let mut c = coeffs[i].clone();
            if i >= 1 {
                c -= (&qb + 1) * &coeffs[i - 1];
            }
            if i >= 2 {
                c += &qb * &coeffs[i - 2];
            }
            c
        })
        .collect();
    while numer.len() > 1 && numer.last().is_some_and(|c| c.is_zero()) {
        numer.pop();
    }
    let samples = [rat(2), rat(-1), BigRational::new(1.into(), 5.into()), BigRational::new((-3).into(), 7.into())];
    let mut fe_ok = numer.len() == 1;
    for z in &samples {
        let w = (rat(q as i64) * z).recip();
        if let (Some(a), Some(b)) = (eval_zeta(&numer, q, &w), eval_zeta(&numer, q, z)) {
            fe_ok &= a == rat(q as i64) * z * z * b;
        }
    }
    checks.push((
        "Z(1/(qz)) = q z^2 Z(z)".into(),
        format!("numerator {}", numer.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")),
        fe_ok,
    ));
    Ok(ZetaSeries { q, coeffs, closed_form: format!("1/((1-z)(1-{q}z))"), checks })
}

impl ZetaSeries {
    pub fn report(&self) -> VerificationReport {
        let inputs = json!({ "q": self.q, "max_degree": self.coeffs.len() - 1, "coefficients": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(), "closed_form": self.closed_form });
        VerificationReport::checks("zeta_series", inputs, self.checks.clone(), json!("exact"))
    }
}

fn pow_q(q: u64, e: i64) -> BigRational {
    let b = rat(q as i64);
    if e >= 0 {
        num_traits::pow(b, e as usize)
    } else {
        num_traits::pow(b.recip(), (-e) as usize)
    }
}

/// Residues of `ω = (q-1) z^(-d-1) dz / ((1-z)(1-qz))` at `0, 1, 1/q, ∞`.
fn residues(q: u64, d: i64) -> Result<[BigRational; 4]> {
    let qr = rat(q as i64);
    let one = rat(1);
    let res0 = if d >= 0 {
        let b = zeta_series(q, d as usize)?.coeffs[d as usize].clone();
        (&qr - &one) * BigRational::from_integer(b)
    } else {
        BigRational::zero()
    };
    // ω = g(z) dz / (1 - z), g(z) = (q-1) z^(-d-1) / (1 - qz)
    let g1 = (&qr - &one) / (&one - &qr);
    let res1 = -g1;
    // ω = h(z) dz / (1 - qz), h(z) = (q-1) z^(-d-1) / (1 - z)
    let z0 = qr.recip();
    let h = (&qr - &one) * pow_q(q, d + 1) / (&one - &z0);
    let res_q = -h / &qr;
    // z = 1/w: ω = -(q-1) w^(d+1) dw / ((1 - w)(q - w))
    let res_inf = if d <= -2 {
        let m = (-d - 2) as usize;
        let c: BigRational = (0..=m).map(|i| pow_q(q, -(i as i64))).fold(BigRational::zero(), |a, b| a + b);
        -(&qr - &one) / &qr * c
    } else {
        BigRational::zero()
    };
    Ok([res0, res1, res_q, res_inf])
}

/// `#(K ∩ A_1(D)) = res_0 ω + res_1 ω` and the Fourier side
/// `-res_(1/q) ω - res_∞ ω = q^(deg D + 1) #(K ∩ A_1((dx) - D))`.
pub fn poisson_residue_check(d: &DivisorOnCurve) -> Result<VerificationReport> {
    let k = d.field();
    let q = k.order() as u64;
    let deg = d.degree();
    let l = rr_cohomology(d)?.h0 as i64;
    let l_dual = rr_cohomology(&canonical_divisor(k).sub(d))?.h0 as i64;
    let [r0, r1, rq, ri] = residues(q, deg)?;
    let lhs = pow_q(q, l);
    let fourier = pow_q(q, deg + 1 + l_dual);
    let total = &r0 + &r1 + &rq + &ri;
    let fourier_side = -(&rq) - &ri;
    let checks = vec![
        ("sum_K f = res_0 + res_1".to_string(), format!("{lhs} vs {r0} + {r1}"), lhs == &r0 + &r1),
        (
            "-res_(1/q) - res_inf = q^(deg D + 1) q^l((dx) - D)".to_string(),
            format!("{fourier_side} vs {fourier}"),
            fourier_side == fourier,
        ),
        ("poles in {0, 1/q, 1, inf}".to_string(), format!("sum of residues {total}"), total.is_zero()),
    ];
    let inputs = json!({
        "field": k.to_string(),
        "divisor": d.to_text(),
        "degree": deg,
        "form": format!("({}) z^({}) dz / ((1-z)(1-{q}z))", q - 1, -deg - 1),
        "l": l,
        "l_dual": l_dual,
        "residues": { "0": r0.to_string(), "1": r1.to_string(), "1/q": rq.to_string(), "inf": ri.to_string() },
    });
    Ok(VerificationReport::checks("poisson_residue", inputs, checks, json!("exact")))
}
