//! Dense univariate polynomials over a [`GaloisField`].

use std::fmt;

use super::{Elem, Embedding, GaloisField};
use crate::error::{Error, Result};

/// Coefficients lowest degree first; never has a trailing zero.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: GaloisField,
    c: Vec<Elem>,
}

impl Poly {
    pub fn new(field: &GaloisField, mut c: Vec<Elem>) -> Self {
        while c.last() == Some(&Elem::ZERO) {
            c.pop();
        }
        Poly { field: field.clone(), c }
    }

    pub fn from_ints(field: &GaloisField, c: &[i64]) -> Self {
        Self::new(field, c.iter().map(|&v| field.from_int(v)).collect())
    }

    pub fn zero(field: &GaloisField) -> Self {
        Poly { field: field.clone(), c: Vec::new() }
    }

    pub fn one(field: &GaloisField) -> Self {
        Self::constant(field, Elem::ONE)
    }

    pub fn constant(field: &GaloisField, a: Elem) -> Self {
        Self::new(field, vec![a])
    }

    pub fn x(field: &GaloisField) -> Self {
        Self::new(field, vec![Elem::ZERO, Elem::ONE])
    }

    /// `x - a`
    pub fn linear(field: &GaloisField, a: Elem) -> Self {
        Self::new(field, vec![field.neg(a), Elem::ONE])
    }

    pub fn monomial(field: &GaloisField, a: Elem, n: usize) -> Self {
        let mut c = vec![Elem::ZERO; n + 1];
        c[n] = a;
        Self::new(field, c)
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.c.get(i).copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn lead(&self) -> Elem {
        self.c.last().copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == Elem::ONE
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.lead()).expect("nonzero lead");
        self.scale(inv)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let f = &self.field;
        Self::new(f, (0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let f = &self.field;
        Self::new(f, (0..n).map(|i| f.sub(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.field, self.c.iter().map(|&a| self.field.neg(a)).collect())
    }

    pub fn scale(&self, a: Elem) -> Self {
        Self::new(&self.field, self.c.iter().map(|&b| self.field.mul(a, b)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.field);
        }
        let f = &self.field;
        let mut r = vec![Elem::ZERO; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                r[i + j] = f.add(r[i + j], f.mul(a, b));
            }
        }
        Self::new(f, r)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(&self.field);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    pub fn shift_up(&self, n: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![Elem::ZERO; n];
        c.extend_from_slice(&self.c);
        Self::new(&self.field, c)
    }

    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        let mut r = self.c.clone();
        let dd = d.c.len() - 1;
        if r.len() <= dd {
            return Ok((Self::zero(f), self.clone()));
        }
        let inv = f.inv(d.lead())?;
        let mut q = vec![Elem::ZERO; r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = f.mul(r[i + dd], inv);
            q[i] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &dj) in d.c.iter().enumerate() {
                r[i + j] = f.sub(r[i + j], f.mul(c, dj));
            }
        }
        r.truncate(dd);
        Ok((Self::new(f, q), Self::new(f, r)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.div_rem(d)?.1)
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d).ok()?;
        r.is_zero().then_some(q)
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: `(g, s, t)` with `s*self + t*o = g`, `g` monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero(f));
        let (mut t0, mut t1) = (Self::zero(f), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = f.inv(r0.lead()).expect("nonzero lead");
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn eval(&self, x: Elem) -> Elem {
        let f = &self.field;
        self.c.iter().rev().fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Evaluate at a point of an extension field reached through `emb`.
    pub fn eval_in(&self, emb: &Embedding, x: Elem) -> Elem {
        let big = emb.big();
        self.c.iter().rev().fold(Elem::ZERO, |acc, &c| big.add(big.mul(acc, x), emb.apply(c)))
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        Self::new(
            f,
            self.c.iter().enumerate().skip(1).map(|(i, &a)| f.mul(f.from_int(i as i64), a)).collect(),
        )
    }

    /// Image under a field embedding.
    pub fn map_into(&self, emb: &Embedding) -> Self {
        Self::new(emb.big(), self.c.iter().map(|&a| emb.apply(a)).collect())
    }

    /// `self(x + a)`.
    pub fn taylor_shift(&self, a: Elem) -> Self {
        let f = &self.field;
        let mut c = self.c.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                c[j] = f.add(c[j], f.mul(a, c[j + 1]));
            }
        }
        Self::new(f, c)
    }

    /// `self^e mod m` by square-and-multiply.
    pub fn pow_mod(&self, e: &num_bigint::BigUint, m: &Self) -> Self {
        let mut acc = Self::one(&self.field).rem(m).expect("nonzero modulus");
        let base = self.rem(m).expect("nonzero modulus");
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m).expect("nonzero modulus");
            if e.bit(i) {
                acc = acc.mul(&base).rem(m).expect("nonzero modulus");
            }
        }
        acc
    }

    pub fn mul_mod(&self, o: &Self, m: &Self) -> Self {
        self.mul(o).rem(m).expect("nonzero modulus")
    }

    /// Roots lying in the coefficient field, by exhaustive search.
    pub fn roots(&self) -> Vec<Elem> {
        self.field.elements().filter(|&a| self.eval(a).is_zero()).collect()
    }

    /// Canonical text form in the variable `var`, highest degree first.
    pub fn to_text(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, &c) in self.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let coeff = self.field.format_elem(c);
            let coeff = if coeff.contains('+') { format!("({coeff})") } else { coeff };
            let t = match i {
                0 => coeff,
                _ => {
                    let mono = if i == 1 { var.to_string() } else { format!("{var}^{i}") };
                    if c == Elem::ONE {
                        mono
                    } else {
                        format!("{coeff}*{mono}")
                    }
                }
            };
            terms.push(t);
        }
        terms.join("+")
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self.to_text("x"), self.field)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text("x"))
    }
}
