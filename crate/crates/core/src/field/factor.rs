//! Univariate factorization over `F_q`: squarefree, distinct-degree and
//! equal-degree (Cantor–Zassenhaus) splitting.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Elem, GaloisField, Poly};
use crate::error::{Error, Result};

const SPLIT_SEED: u64 = 0x5eed_fac7;
const EXHAUSTIVE_LIMIT: u64 = 1_000_000;

/// `f = lead * prod g_i^{e_i}` with monic irreducible `g_i`, sorted canonically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub lead: Elem,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn expand(&self, field: &GaloisField) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(field, self.lead), |acc, (g, e)| acc.mul(&g.pow(*e as u64)))
    }
}

fn q_big(field: &GaloisField) -> BigUint {
    BigUint::from(field.order())
}

/// p-th root of a polynomial whose derivative vanishes.
fn pth_root(f: &Poly) -> Poly {
    let field = f.field();
    let p = field.characteristic() as usize;
    // a^(1/p) = a^(p^(m-1)) in F_{p^m}
    let e = (field.order() / field.characteristic()) as i64;
    let c: Vec<Elem> = f
        .coeffs()
        .iter()
        .step_by(p)
        .map(|&a| field.pow(a, e).expect("nonnegative exponent"))
        .collect();
    Poly::new(field, c)
}

/// Distinct roots in the coefficient field; every element when `f = 0`.
pub fn find_roots(f: &Poly) -> Vec<Elem> {
    let k = f.field();
    let mut r: Vec<Elem> = match f.degree() {
        None => k.elements().collect(),
        Some(0) => Vec::new(),
        Some(1) => vec![k.neg(k.div(f.coeff(0), f.coeff(1)).expect("nonzero lead"))],
        Some(_) => factor_univariate(f)
            .expect("nonzero polynomial")
            .factors
            .into_iter()
            .filter(|(g, _)| g.degree() == Some(1))
            .map(|(g, _)| k.neg(g.coeff(0)))
            .collect(),
    };
    r.sort();
    r
}

/// Squarefree decomposition of a monic polynomial.
pub fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, u32)> {
    let field = f.field();
    let mut out = Vec::new();
    let one = Poly::one(field);
    let fp = f.derivative();
    let mut c = f.gcd(&fp);
    let mut w = f.div_exact(&c).expect("gcd divides");
    let mut i = 1u32;
    while w != one {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y).expect("gcd divides");
        if fac != one {
            out.push((fac, i));
        }
        w = y;
        c = c.div_exact(&w).expect("gcd divides");
        i += 1;
    }
    if c != one {
        let root = pth_root(&c);
        let p = field.characteristic();
        for (g, e) in squarefree_decomposition(&root) {
            out.push((g, e * p));
        }
    }
    out
}

/// Distinct-degree factorization of a monic squarefree polynomial.
pub fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field();
    let q = q_big(field);
    let x = Poly::x(field);
    let one = Poly::one(field);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.rem(&rest).expect("nonzero");
    let mut d = 1;
    while rest.deg() >= 2 * d as i64 {
        h = h.pow_mod(&q, &rest);
        let g = h.sub(&x).gcd(&rest);
        if g != one {
            rest = rest.div_exact(&g).expect("gcd divides");
            h = h.rem(&rest).expect("nonzero");
            out.push((g, d));
        }
        d += 1;
    }
    if rest.deg() > 0 {
        let dr = rest.deg() as usize;
        out.push((rest, dr));
    }
    out
}

fn random_poly(field: &GaloisField, deg: usize, rng: &mut ChaCha8Rng) -> Poly {
    let c = (0..deg).map(|_| Elem(rng.gen_range(0..field.order()))).collect();
    Poly::new(field, c)
}

/// Split a product of distinct monic irreducibles, all of degree `d`.
pub fn equal_degree(f: &Poly, d: usize) -> Vec<Poly> {
    let n = f.deg() as usize;
    if n <= d {
        return vec![f.clone()];
    }
    let field = f.field();
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED ^ (n as u64) << 8 ^ d as u64);
    let qd = q_big(field).pow(d as u32);
    let one = Poly::one(field);
    for _ in 0..256 {
        let a = random_poly(field, n, &mut rng);
        if a.deg() < 1 {
            continue;
        }
        let b = if field.characteristic() == 2 {
            // absolute trace map a + a^2 + ... + a^(2^(k-1)) with 2^k = q^d
            let k = field.degree() as usize * d;
            let mut acc = a.rem(f).unwrap();
            let mut cur = acc.clone();
            for _ in 1..k {
                cur = cur.mul_mod(&cur, f);
                acc = acc.add(&cur);
            }
            acc
        } else {
            let e: BigUint = (&qd - 1u32) / 2u32;
            a.pow_mod(&e, f).sub(&one)
        };
        let g = b.gcd(f);
        if g != one && g.deg() < n as i64 {
            let h = f.div_exact(&g).expect("gcd divides");
            let mut out = equal_degree(&g, d);
            out.extend(equal_degree(&h, d));
            return out;
        }
    }
    // Seeded splitting failed; fall back to root search for linear factors.
    if d == 1 && (field.order() as u64) <= EXHAUSTIVE_LIMIT {
        return f.roots().into_iter().map(|r| Poly::linear(field, r)).collect();
    }
    vec![f.clone()]
}

fn canonical_key(g: &Poly) -> (usize, Vec<u32>) {
    (g.coeffs().len(), g.coeffs().iter().rev().map(|e| e.0).collect())
}

/// Complete factorization into monic irreducibles.
pub fn factor_univariate(f: &Poly) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let lead = f.lead();
    let monic = f.monic();
    let mut factors: Vec<(Poly, u32)> = Vec::new();
    for (sf, e) in squarefree_decomposition(&monic) {
        for (g, d) in distinct_degree(&sf) {
            for h in equal_degree(&g, d) {
                if let Some(slot) = factors.iter_mut().find(|(k, _)| *k == h) {
                    slot.1 += e;
                } else {
                    factors.push((h, e));
                }
            }
        }
    }
    factors.sort_by_key(|(g, _)| canonical_key(g));
    Ok(Factorization { lead, factors })
}

/// Rabin irreducibility test over `F_q`.
pub fn is_irreducible(f: &Poly) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let field = f.field();
    let m = f.monic();
    let q = q_big(field);
    let x = Poly::x(field);
    let frob = |k: usize| -> Poly {
        let mut h = x.clone();
        for _ in 0..k {
            h = h.pow_mod(&q, &m);
        }
        h
    };
    if !frob(n).sub(&x).rem(&m).unwrap().is_zero() {
        return false;
    }
    let mut k = n;
    let mut primes = Vec::new();
    let mut d = 2;
    while d * d <= k {
        if k % d == 0 {
            primes.push(d);
            while k % d == 0 {
                k /= d;
            }
        }
        d += 1;
    }
    if k > 1 {
        primes.push(k);
    }
    primes.into_iter().all(|r| frob(n / r).sub(&x).gcd(&m).deg() == 0)
}

/// All monic irreducible polynomials of degree `d` over `field`, in canonical order.
pub fn monic_irreducibles(field: &GaloisField, d: usize) -> Vec<Poly> {
    let q = field.order() as u64;
    let count = q.pow(d as u32);
    let mut out = Vec::new();
    for code in 0..count {
        let mut c = Vec::with_capacity(d + 1);
        let mut v = code;
        for _ in 0..d {
            c.push(Elem((v % q) as u32));
            v /= q;
        }
        c.push(Elem::ONE);
        let g = Poly::new(field, c);
        if is_irreducible(&g) {
            out.push(g);
        }
    }
    out.sort_by_key(canonical_key);
    out
}
