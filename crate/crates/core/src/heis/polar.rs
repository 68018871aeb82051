//! Exact polar numbers `ρ^r · e^(2πi θ)` with rational `r` and `θ mod 1`.

use std::fmt;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A nonzero complex number with rational log-radius (to a base fixed by the
/// context) and rational angle in turns, normalized to `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Polar {
    pub log_radius: Rational64,
    pub turns: Rational64,
}

fn frac(x: Rational64) -> Rational64 {
    x - x.floor()
}

impl Polar {
    pub fn new(log_radius: Rational64, turns: Rational64) -> Self {
        Polar { log_radius, turns: frac(turns) }
    }

    pub fn one() -> Self {
        Polar::new(Rational64::zero(), Rational64::zero())
    }

    /// Primitive-or-not root of unity `e^(2πi j/n)`.
    pub fn root_of_unity(j: i64, n: i64) -> Self {
        Polar::new(Rational64::zero(), Rational64::new(j, n))
    }

    pub fn is_one(&self) -> bool {
        self.log_radius.is_zero() && self.turns.is_zero()
    }

    pub fn mul(&self, o: &Self) -> Self {
        Polar::new(self.log_radius + o.log_radius, self.turns + o.turns)
    }

    pub fn inv(&self) -> Self {
        Polar::new(-self.log_radius, -self.turns)
    }

    pub fn pow(&self, e: i64) -> Self {
        let e = Rational64::from(e);
        Polar::new(self.log_radius * e, self.turns * e)
    }

    /// `self^(e/2)` for even `e`; the square root of a polar number is not
    /// unique, so odd exponents are refused.
    pub fn pow_half(&self, e: i64) -> Result<Self> {
        if e % 2 != 0 {
            return Err(Error::Validation(format!("half-integer power {e}/2 of a character value")));
        }
        Ok(self.pow(e / 2))
    }

    /// Smallest `n > 0` with `self^n = 1`.
    pub fn order(&self) -> Option<i64> {
        self.log_radius.is_zero().then(|| *self.turns.denom())
    }

    pub fn to_complex(&self, base: f64) -> Complex64 {
        let r = base.powf(*self.log_radius.numer() as f64 / *self.log_radius.denom() as f64);
        let a = 2.0 * std::f64::consts::PI * (*self.turns.numer() as f64 / *self.turns.denom() as f64);
        Complex64::from_polar(r, a)
    }

    /// Parses `"r,θ"` with rationals such as `1/2`.
    pub fn parse(src: &str) -> Result<Self> {
        let (a, b) = src.split_once(',').ok_or_else(|| Error::parse(0, "expected 'log_radius,turns'"))?;
        Ok(Polar::new(parse_rational(a.trim(), 0)?, parse_rational(b.trim(), a.len() + 1)?))
    }
}

pub(crate) fn parse_rational(s: &str, offset: usize) -> Result<Rational64> {
    let bad = || Error::parse(offset, format!("invalid rational '{s}'"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(n, d))
        }
        None => Ok(Rational64::from(s.parse::<i64>().map_err(|_| bad())?)),
    }
}

impl Default for Polar {
    fn default() -> Self {
        Polar::one()
    }
}

impl fmt::Display for Polar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.log_radius, self.turns)
    }
}

impl Serialize for Polar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Polar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Polar::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Integer combination of polar monomials, the amplitude of a vector in the
/// induced representation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PolarSum {
    terms: std::collections::BTreeMap<Polar, i64>,
}

impl PolarSum {
    pub fn monomial(p: Polar) -> Self {
        let mut s = PolarSum::default();
        s.terms.insert(p, 1);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&mut self, o: &PolarSum) {
        for (p, c) in &o.terms {
            let e = self.terms.entry(*p).or_insert(0);
            *e += c;
            if *e == 0 {
                self.terms.remove(p);
            }
        }
    }

    pub fn scale(&self, p: &Polar) -> Self {
        PolarSum { terms: self.terms.iter().map(|(q, c)| (q.mul(p), *c)).collect() }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Polar, i64)> {
        self.terms.iter().map(|(p, c)| (p, *c))
    }

    pub fn to_complex(&self, base: f64) -> Complex64 {
        self.terms.iter().map(|(p, c)| p.to_complex(base) * *c as f64).sum()
    }
}
