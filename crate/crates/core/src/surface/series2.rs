//! Truncated power series in `k[[u, t]]` modulo `(u^U, t^T)`.

use crate::error::{Error, Result};
use crate::field::{Elem, GaloisField, Poly2};
use crate::laurent::Laurent;
use crate::local2d::IteratedSeries;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries2 {
    field: GaloisField,
    u: usize,
    t: usize,
    /// `a[i * t + j]` is the coefficient of `u^i t^j`.
    a: Vec<Elem>,
}

impl PowerSeries2 {
    pub fn zero(field: &GaloisField, u: usize, t: usize) -> Self {
        PowerSeries2 { field: field.clone(), u, t, a: vec![Elem::ZERO; u * t] }
    }

    pub fn constant(field: &GaloisField, c: Elem, u: usize, t: usize) -> Self {
        let mut s = Self::zero(field, u, t);
        if u > 0 && t > 0 {
            s.a[0] = c;
        }
        s
    }

    pub fn monomial(field: &GaloisField, c: Elem, i: usize, j: usize, u: usize, t: usize) -> Self {
        let mut s = Self::zero(field, u, t);
        if i < u && j < t {
            s.a[i * t + j] = c;
        }
        s
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.a[i * self.t + j]
    }

    fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.a[i * self.t + j] = v;
    }

    pub fn t_len(&self) -> usize {
        self.t
    }

    pub fn u_len(&self) -> usize {
        self.u
    }

    pub fn add(&self, o: &Self) -> Self {
        let f = &self.field;
        let a = self.a.iter().zip(&o.a).map(|(&x, &y)| f.add(x, y)).collect();
        PowerSeries2 { a, ..self.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let f = &self.field;
        let a = self.a.iter().zip(&o.a).map(|(&x, &y)| f.sub(x, y)).collect();
        PowerSeries2 { a, ..self.clone() }
    }

    pub fn scale(&self, c: Elem) -> Self {
        let f = &self.field;
        PowerSeries2 { a: self.a.iter().map(|&x| f.mul(c, x)).collect(), ..self.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let f = &self.field;
        let (u, t) = (self.u, self.t);
        let mut r = Self::zero(f, u, t);
        for i in 0..u {
            for j in 0..t {
                let x = self.get(i, j);
                if x.is_zero() {
                    continue;
                }
                for k in 0..u - i {
                    for l in 0..t - j {
                        let y = o.get(k, l);
                        if !y.is_zero() {
                            let idx = (i + k) * t + j + l;
                            r.a[idx] = f.add(r.a[idx], f.mul(x, y));
                        }
                    }
                }
            }
        }
        r
    }

    /// Inverse of a series with nonzero constant term, by Newton iteration.
    pub fn inv(&self) -> Result<Self> {
        let f = &self.field;
        let c0 = self.get(0, 0);
        if c0.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut x = Self::constant(f, f.inv(c0)?, self.u, self.t);
        let two = Self::constant(f, f.from_int(2), self.u, self.t);
        loop {
            let next = x.mul(&two.sub(&self.mul(&x)));
            if next == x {
                return Ok(x);
            }
            x = next;
        }
    }

    /// `d/dt`; the top t-coefficient becomes unknown and is dropped.
    pub fn d_dt(&self) -> Self {
        let f = &self.field;
        let t = self.t.saturating_sub(1);
        let mut r = Self::zero(f, self.u, t);
        for i in 0..self.u {
            for j in 0..t {
                r.set(i, j, f.mul(f.from_int(j as i64 + 1), self.get(i, j + 1)));
            }
        }
        r
    }

    /// `p(x, y)` for a polynomial with coefficients in the same field.
    pub fn eval_poly(p: &Poly2, x: &Self, y: &Self) -> Self {
        let f = &x.field;
        let (u, t) = (x.u, x.t);
        let dx = p.degree_x().max(0) as usize;
        let dy = p.degree_y().max(0) as usize;
        let mut xp = vec![Self::constant(f, Elem::ONE, u, t)];
        for i in 0..dx {
            xp.push(xp[i].mul(x));
        }
        let mut yp = vec![Self::constant(f, Elem::ONE, u, t)];
        for j in 0..dy {
            yp.push(yp[j].mul(y));
        }
        let mut acc = Self::zero(f, u, t);
        for ((i, j), c) in p.terms() {
            let m = xp[i as usize].mul(&yp[j as usize]).scale(c);
            acc = acc.add(&m);
        }
        acc
    }

    /// The same series as an element of `k((u))((t))`.
    pub fn to_iterated(&self) -> IteratedSeries {
        let f = &self.field;
        let rows = (0..self.t)
            .map(|j| {
                let c = (0..self.u).map(|i| self.get(i, j)).collect();
                Laurent::new(f, 0, c, self.u as i64)
            })
            .collect();
        IteratedSeries::new(f, 0, rows, self.t as i64, self.u as i64)
    }
}
