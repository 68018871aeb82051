//! Legendre symbol.

use super::gf::is_prime;
use crate::error::{Error, Result};

/// `(a/p)` for an odd prime `p`, via Euler's criterion.
pub fn legendre_symbol(a: i64, p: i64) -> Result<i8> {
    if p <= 2 || !is_prime(p as u64) {
        return Err(Error::NotOddPrime(p));
    }
    let a = a.rem_euclid(p) as u128;
    if a == 0 {
        return Ok(0);
    }
    let p = p as u128;
    let mut e = (p - 1) / 2;
    let (mut acc, mut b) = (1u128, a);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    Ok(if acc == 1 { 1 } else { -1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn squares(p: i64) -> Vec<i64> {
        (1..p).map(|x| x * x % p).collect()
    }

    #[test]
    fn small_values() {
        assert_eq!(legendre_symbol(2, 7).unwrap(), 1);
        assert_eq!(legendre_symbol(3, 7).unwrap(), -1);
        assert_eq!(legendre_symbol(14, 7).unwrap(), 0);
        assert_eq!(legendre_symbol(1, 13).unwrap(), 1);
    }

    #[test]
    fn agrees_with_square_table() {
        for p in [3i64, 5, 7, 11, 13, 17, 19, 23] {
            let sq = squares(p);
            for a in -30i64..30 {
                let expect = if a.rem_euclid(p) == 0 {
                    0
                } else if sq.contains(&a.rem_euclid(p)) {
                    1
                } else {
                    -1
                };
                assert_eq!(legendre_symbol(a, p).unwrap(), expect);
            }
        }
    }

    #[test]
    fn rejects_even_and_composite() {
        assert_eq!(legendre_symbol(1, 2), Err(Error::NotOddPrime(2)));
        assert_eq!(legendre_symbol(1, 9), Err(Error::NotOddPrime(9)));
    }
}
