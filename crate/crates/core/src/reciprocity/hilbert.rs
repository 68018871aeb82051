//! Quadratic Hilbert symbols over `Q` and the conic oracle.

use std::fmt;

use num_rational::Rational64;
use serde_json::json;

use super::VerificationReport;
use crate::error::{Error, Result};
use crate::field::{is_prime, legendre_symbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum QPlace {
    Prime(u64),
    Infinity,
}

impl QPlace {
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(QPlace::Prime(p))
        } else {
            Err(Error::NotAPlace(p.to_string()))
        }
    }
}

impl fmt::Display for QPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QPlace::Prime(p) => write!(f, "{p}"),
            QPlace::Infinity => write!(f, "inf"),
        }
    }
}

/// `n = p^v * u` with `p ∤ u`.
fn split_int(mut n: i64, p: i64) -> (i64, i64) {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    (v, n)
}

/// Valuation and unit part (as `num * den`, same square class) of a rational.
fn split(a: Rational64, p: i64) -> (i64, i64) {
    let (vn, un) = split_int(*a.numer(), p);
    let (vd, ud) = split_int(*a.denom(), p);
    (vn - vd, un * ud)
}

fn check_nonzero(a: Rational64, b: Rational64) -> Result<()> {
    if a == Rational64::from(0) || b == Rational64::from(0) {
        return Err(Error::Validation("Hilbert symbol of zero".into()));
    }
    Ok(())
}

/// `(a, b)_v` in `{1, -1}`.
pub fn hilbert_symbol(a: Rational64, b: Rational64, place: QPlace) -> Result<i8> {
    check_nonzero(a, b)?;
    let p = match place {
        QPlace::Infinity => {
            let neg = |x: Rational64| x < Rational64::from(0);
            return Ok(if neg(a) && neg(b) { -1 } else { 1 });
        }
        QPlace::Prime(p) if is_prime(p) => p as i64,
        QPlace::Prime(p) => return Err(Error::NotAPlace(p.to_string())),
    };
    let (alpha, u) = split(a, p);
    let (beta, v) = split(b, p);
    if p == 2 {
        let eps = |x: i64| (x.rem_euclid(4) - 1) / 2;
        let omega = |x: i64| {
            let r = x.rem_euclid(8);
            (r * r - 1) / 8 % 2
        };
        let e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
        return Ok(if e.rem_euclid(2) == 0 { 1 } else { -1 });
    }
    let mut s: i64 = if (alpha * beta).rem_euclid(2) == 1 && (p - 1) / 2 % 2 == 1 { -1 } else { 1 };
    if beta.rem_euclid(2) == 1 {
        s *= legendre_symbol(u, p)? as i64;
    }
    if alpha.rem_euclid(2) == 1 {
        s *= legendre_symbol(v, p)? as i64;
    }
    Ok(s as i8)
}

fn prime_factors(mut n: i64) -> Vec<u64> {
    n = n.abs();
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d as u64);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n as u64);
    }
    out
}

/// `prod_v (a, b)_v` over infinity and the primes dividing `2ab`.
pub fn product_formula_check(a: Rational64, b: Rational64) -> Result<VerificationReport> {
    check_nonzero(a, b)?;
    let mut primes = vec![2u64];
    for n in [*a.numer(), *a.denom(), *b.numer(), *b.denom()] {
        primes.extend(prime_factors(n));
    }
    primes.sort_unstable();
    primes.dedup();
    let mut places: Vec<QPlace> = primes.into_iter().map(QPlace::Prime).collect();
    places.push(QPlace::Infinity);
    let mut entries = Vec::new();
    for v in places {
        entries.push((v.to_string(), hilbert_symbol(a, b, v)?));
    }
    let inputs = json!({ "a": a.to_string(), "b": b.to_string() });
    Ok(VerificationReport::signs("hilbert_product_formula", inputs, entries))
}

/// Squarefree integer in the square class of `a`.
fn squarefree(a: Rational64) -> i64 {
    let mut n = *a.numer() * *a.denom();
    let sign = n.signum();
    n = n.abs();
    let mut out = 1;
    let mut d = 2;
    while d * d <= n {
        while n % (d * d) == 0 {
            n /= d * d;
        }
        if n % d == 0 {
            n /= d;
            out *= d;
        }
        d += 1;
    }
    sign * out * n
}

fn vp(mut n: i64, p: i64) -> u32 {
    if n == 0 {
        return u32::MAX;
    }
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Whether `x^2 - a y^2 - b z^2 = 0` has a nontrivial solution over `Q_v`.
///
/// At a prime this searches primitive solutions modulo `p^k` for
/// `k = 1..=search_bound`: an empty level proves there is none, and a solution
/// with `f ≡ 0 mod p^(2e+1)` where some partial derivative has valuation
/// exactly `e` lifts by Hensel's lemma. Undecided at the bound gives
/// [`Error::Inconclusive`].
pub fn conic_local_solvability(a: Rational64, b: Rational64, place: QPlace, search_bound: u32) -> Result<bool> {
    check_nonzero(a, b)?;
    let p = match place {
        QPlace::Infinity => return Ok(a > Rational64::from(0) || b > Rational64::from(0)),
        QPlace::Prime(p) if is_prime(p) => p as i64,
        QPlace::Prime(p) => return Err(Error::NotAPlace(p.to_string())),
    };
    let (a, b) = (squarefree(a) as i128, squarefree(b) as i128);
    let f = |v: &[i128; 3]| v[0] * v[0] - a * v[1] * v[1] - b * v[2] * v[2];
    let grad = |v: &[i128; 3]| [2 * v[0], -2 * a * v[1], -2 * b * v[2]];
    let p = p as i128;
    // normalized primitive vectors: (1, y, z), (px, 1, z), (px, py, 1)
    let mut level: Vec<[i128; 3]> = Vec::new();
    for y in 0..p {
        for z in 0..p {
            level.push([1, y, z]);
        }
    }
    for z in 0..p {
        level.push([0, 1, z]);
    }
    level.push([0, 0, 1]);
    let mut modulus = p;
    for k in 1..=search_bound as i128 {
        level.retain(|v| f(v).rem_euclid(modulus) == 0);
        if level.is_empty() {
            return Ok(false);
        }
        for v in &level {
            for g in grad(v) {
                let e = vp(g as i64, p as i64) as i128;
                if 2 * e + 1 <= k {
                    return Ok(true);
                }
            }
        }
        if k == search_bound as i128 {
            break;
        }
        // lift every free coordinate by multiples of p^k
        let mut next = Vec::with_capacity(level.len() * (p * p) as usize);
        for v in &level {
            let pivot = (0..3).find(|&i| v[i] % p != 0).expect("primitive");
            let free: Vec<usize> = (0..3).filter(|&i| i != pivot).collect();
            let mut stack = vec![*v];
            for &i in &free {
                let mut grown = Vec::with_capacity(stack.len() * p as usize);
                for w in &stack {
                    for t in 0..p {
                        let mut u = *w;
                        u[i] += t * modulus;
                        grown.push(u);
                    }
                }
                stack = grown;
            }
            next.extend(stack);
        }
        level = next;
        modulus *= p;
    }
    Err(Error::Inconclusive(format!("no decision modulo {p}^{search_bound}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational64 {
        Rational64::from(n)
    }

    #[test]
    fn standard_values() {
        assert_eq!(hilbert_symbol(r(-1), r(-1), QPlace::Infinity).unwrap(), -1);
        assert_eq!(hilbert_symbol(r(-1), r(-1), QPlace::Prime(2)).unwrap(), -1);
        for p in [3, 5, 7, 11, 13] {
            assert_eq!(hilbert_symbol(r(-1), r(-1), QPlace::Prime(p)).unwrap(), 1);
        }
        assert_eq!(hilbert_symbol(r(2), r(7), QPlace::Prime(7)).unwrap(), 1);
        assert_eq!(hilbert_symbol(r(2), r(5), QPlace::Prime(5)).unwrap(), -1);
        assert_eq!(hilbert_symbol(r(3), r(3), QPlace::Prime(3)).unwrap(), -1);
        assert!(matches!(hilbert_symbol(r(1), r(1), QPlace::Prime(9)), Err(Error::NotAPlace(_))));
    }

    #[test]
    fn oracle_examples() {
        assert!(!conic_local_solvability(r(-1), r(-1), QPlace::Prime(2), 6).unwrap());
        assert!(conic_local_solvability(r(2), r(7), QPlace::Prime(5), 4).unwrap());
        for p in [2, 3, 5, 7] {
            assert!(conic_local_solvability(r(1), r(-6), QPlace::Prime(p), 6).unwrap());
        }
    }

    #[test]
    fn symbol_matches_conic_oracle() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            for a in -50i64..=50 {
                for b in -50i64..=50 {
                    if a == 0 || b == 0 {
                        continue;
                    }
                    let place = QPlace::Prime(p);
                    let sym = hilbert_symbol(r(a), r(b), place).unwrap();
                    let sol = conic_local_solvability(r(a), r(b), place, 6).unwrap();
                    assert_eq!(sym == 1, sol, "({a}, {b})_{p}");
                }
            }
        }
    }

    #[test]
    fn product_formula_on_examples() {
        let rep = product_formula_check(r(-1), r(-1)).unwrap();
        assert!(rep.pass);
        let minus: Vec<&str> = rep.contributions.iter().filter(|c| c.value == "-1").map(|c| c.flag.as_str()).collect();
        assert_eq!(minus, vec!["2", "inf"]);
        let rep = product_formula_check(Rational64::new(3, 10), Rational64::new(-7, 9)).unwrap();
        assert!(rep.pass);
    }
}
