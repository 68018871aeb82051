//! Rational functions in one and two variables.

use std::fmt;

use super::{Elem, GaloisField, Poly, Poly2};
use crate::error::{Error, Result};

/// `num / den` in one variable, kept reduced with a monic denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_zero() || g.deg() == 0 {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        let lc = d.lead();
        let inv = d.field().inv(lc)?;
        n = n.scale(inv);
        d = d.scale(inv);
        if n.is_zero() {
            d = Poly::one(d.field());
        }
        Ok(RatFn { num: n, den: d })
    }

    pub fn from_poly(p: Poly) -> Self {
        let one = Poly::one(p.field());
        RatFn { num: p, den: one }
    }

    pub fn zero(field: &GaloisField) -> Self {
        Self::from_poly(Poly::zero(field))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn field(&self) -> &GaloisField {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den)).unwrap()
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.den).sub(&o.num.mul(&self.den)), self.den.mul(&o.den)).unwrap()
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den)).unwrap()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn derivative(&self) -> Self {
        let n = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        Self::new(n, self.den.mul(&self.den)).unwrap()
    }

    /// `deg num - deg den`, i.e. minus the order at infinity.
    pub fn degree(&self) -> i64 {
        self.num.deg() - self.den.deg()
    }

    pub fn eval(&self, x: Elem) -> Result<Elem> {
        let f = self.field();
        f.div(self.num.eval(x), self.den.eval(x))
    }
}

impl RatFn {
    pub fn to_text(&self) -> String {
        let n = self.num.to_text("x");
        if self.den.deg() == 0 {
            return n;
        }
        format!("({n})/({})", self.den.to_text("x"))
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, self.den)
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// `num / den` in two variables. Not normalized: bivariate gcds are out of scope.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFn2 {
    pub num: Poly2,
    pub den: Poly2,
}

impl RatFn2 {
    pub fn new(num: Poly2, den: Poly2) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFn2 { num, den })
    }

    pub fn from_poly(p: Poly2) -> Self {
        let one = Poly2::one(p.field());
        RatFn2 { num: p, den: one }
    }

    pub fn constant(field: &GaloisField, a: Elem) -> Self {
        Self::from_poly(Poly2::constant(field, a))
    }

    pub fn field(&self) -> &GaloisField {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return RatFn2 { num: self.num.add(&o.num), den: self.den.clone() };
        }
        RatFn2 {
            num: self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
        }
    }

    pub fn neg(&self) -> Self {
        RatFn2 { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        RatFn2 { num: self.num.mul(&o.num), den: self.den.mul(&o.den) }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFn2 { num: self.den.clone(), den: self.num.clone() })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        Ok(RatFn2 { num: base.num.pow(k), den: base.den.pow(k) })
    }

    pub fn to_text(&self) -> String {
        match self.den.as_constant() {
            Some(c) if c == Elem::ONE => self.num.to_text(),
            _ => format!("({})/({})", self.num.to_text(), self.den.to_text()),
        }
    }
}

impl fmt::Debug for RatFn2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Display for RatFn2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
