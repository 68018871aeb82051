//! Sparse bivariate polynomials in `x`, `y`.

use std::collections::BTreeMap;
use std::fmt;

use super::{Elem, Embedding, GaloisField, Poly};

/// Map `(i, j) -> coefficient of x^i y^j`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly2 {
    field: GaloisField,
    terms: BTreeMap<(u32, u32), Elem>,
}

impl Poly2 {
    pub fn zero(field: &GaloisField) -> Self {
        Poly2 { field: field.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(field: &GaloisField, a: Elem) -> Self {
        let mut p = Self::zero(field);
        p.add_term(0, 0, a);
        p
    }

    pub fn one(field: &GaloisField) -> Self {
        Self::constant(field, Elem::ONE)
    }

    pub fn x(field: &GaloisField) -> Self {
        Self::monomial(field, Elem::ONE, 1, 0)
    }

    pub fn y(field: &GaloisField) -> Self {
        Self::monomial(field, Elem::ONE, 0, 1)
    }

    pub fn monomial(field: &GaloisField, a: Elem, i: u32, j: u32) -> Self {
        let mut p = Self::zero(field);
        p.add_term(i, j, a);
        p
    }

    /// Build from `(coefficient, i, j)` integer triples.
    pub fn from_terms(field: &GaloisField, terms: &[(i64, u32, u32)]) -> Self {
        let mut p = Self::zero(field);
        for &(c, i, j) in terms {
            p.add_term(i, j, field.from_int(c));
        }
        p
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), Elem)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    pub fn coeff(&self, i: u32, j: u32) -> Elem {
        self.terms.get(&(i, j)).copied().unwrap_or(Elem::ZERO)
    }

    pub fn add_term(&mut self, i: u32, j: u32, a: Elem) {
        let v = self.field.add(self.coeff(i, j), a);
        if v.is_zero() {
            self.terms.remove(&(i, j));
        } else {
            self.terms.insert((i, j), v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; `-1` for the zero polynomial.
    pub fn total_degree(&self) -> i64 {
        self.terms.keys().map(|&(i, j)| (i + j) as i64).max().unwrap_or(-1)
    }

    pub fn degree_x(&self) -> i64 {
        self.terms.keys().map(|&(i, _)| i as i64).max().unwrap_or(-1)
    }

    pub fn degree_y(&self) -> i64 {
        self.terms.keys().map(|&(_, j)| j as i64).max().unwrap_or(-1)
    }

    pub fn constant_term(&self) -> Elem {
        self.coeff(0, 0)
    }

    /// The nonzero constant, if this polynomial is one.
    pub fn as_constant(&self) -> Option<Elem> {
        match self.terms.len() {
            0 => Some(Elem::ZERO),
            1 => self.terms.get(&(0, 0)).copied(),
            _ => None,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (&(i, j), &a) in &o.terms {
            r.add_term(i, j, a);
        }
        r
    }

    pub fn neg(&self) -> Self {
        let mut r = Self::zero(&self.field);
        for (&(i, j), &a) in &self.terms {
            r.add_term(i, j, self.field.neg(a));
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: Elem) -> Self {
        let mut r = Self::zero(&self.field);
        for (&(i, j), &a) in &self.terms {
            r.add_term(i, j, self.field.mul(c, a));
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero(&self.field);
        for (&(i, j), &a) in &self.terms {
            for (&(k, l), &b) in &o.terms {
                r.add_term(i + k, j + l, self.field.mul(a, b));
            }
        }
        r
    }

    pub fn pow(&self, mut e: u32) -> Self {
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

    pub fn partial_x(&self) -> Self {
        let f = &self.field;
        let mut r = Self::zero(f);
        for (&(i, j), &a) in &self.terms {
            if i > 0 {
                r.add_term(i - 1, j, f.mul(f.from_int(i as i64), a));
            }
        }
        r
    }

    pub fn partial_y(&self) -> Self {
        let f = &self.field;
        let mut r = Self::zero(f);
        for (&(i, j), &a) in &self.terms {
            if j > 0 {
                r.add_term(i, j - 1, f.mul(f.from_int(j as i64), a));
            }
        }
        r
    }

    pub fn eval(&self, x: Elem, y: Elem) -> Elem {
        let f = &self.field;
        self.terms.iter().fold(Elem::ZERO, |acc, (&(i, j), &a)| {
            let m = f.mul(f.pow(x, i as i64).unwrap(), f.pow(y, j as i64).unwrap());
            f.add(acc, f.mul(a, m))
        })
    }

    /// Evaluate at a point with coordinates in the extension `emb.big()`.
    pub fn eval_in(&self, emb: &Embedding, x: Elem, y: Elem) -> Elem {
        let big = emb.big();
        self.terms.iter().fold(Elem::ZERO, |acc, (&(i, j), &a)| {
            let m = big.mul(big.pow(x, i as i64).unwrap(), big.pow(y, j as i64).unwrap());
            big.add(acc, big.mul(emb.apply(a), m))
        })
    }

    pub fn map_into(&self, emb: &Embedding) -> Self {
        let mut r = Self::zero(emb.big());
        for (&(i, j), &a) in &self.terms {
            r.add_term(i, j, emb.apply(a));
        }
        r
    }

    /// Substitute `x = a` and view the result as a polynomial in `y`.
    pub fn specialize_x(&self, a: Elem) -> Poly {
        let f = &self.field;
        let mut c = vec![Elem::ZERO; (self.degree_y().max(0) + 1) as usize];
        for (&(i, j), &v) in &self.terms {
            c[j as usize] = f.add(c[j as usize], f.mul(v, f.pow(a, i as i64).unwrap()));
        }
        Poly::new(f, c)
    }

    /// Substitute `y = b` and view the result as a polynomial in `x`.
    pub fn specialize_y(&self, b: Elem) -> Poly {
        let f = &self.field;
        let mut c = vec![Elem::ZERO; (self.degree_x().max(0) + 1) as usize];
        for (&(i, j), &v) in &self.terms {
            c[i as usize] = f.add(c[i as usize], f.mul(v, f.pow(b, j as i64).unwrap()));
        }
        Poly::new(f, c)
    }

    /// Swap the roles of `x` and `y`.
    pub fn swap_xy(&self) -> Self {
        let mut r = Self::zero(&self.field);
        for (&(i, j), &a) in &self.terms {
            r.add_term(j, i, a);
        }
        r
    }

    /// Homogeneous `F(X, Y, Z) = Z^d f(X/Z, Y/Z)` dehomogenized in the given chart.
    ///
    /// Chart 0 is `Z = 1` (identity), chart 1 is `Y = 1` with coordinates
    /// `(X, Z)`, chart 2 is `X = 1` with coordinates `(Y, Z)`.
    pub fn chart(&self, d: u32, chart: usize) -> Self {
        let mut r = Self::zero(&self.field);
        for (&(i, j), &a) in &self.terms {
            let k = d - i - j;
            match chart {
                0 => r.add_term(i, j, a),
                1 => r.add_term(i, k, a),
                2 => r.add_term(j, k, a),
                _ => panic!("chart index out of range"),
            }
        }
        r
    }

    /// Exact quotient by `d`, or `None` when `d` does not divide `self`.
    ///
    /// Division uses the lexicographic order with `x > y`; for an exact divisor
    /// the remainder is zero regardless of the order.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (&lead_d, &lc_d) = d.terms.iter().next_back()?;
        let inv = self.field.inv(lc_d).ok()?;
        let mut r = self.clone();
        let mut q = Self::zero(&self.field);
        while let Some((&(i, j), &a)) = r.terms.iter().next_back() {
            if i < lead_d.0 || j < lead_d.1 {
                return None;
            }
            let c = self.field.mul(a, inv);
            let m = Self::monomial(&self.field, c, i - lead_d.0, j - lead_d.1);
            q = q.add(&m);
            r = r.sub(&m.mul(d));
        }
        Some(q)
    }

    /// Canonical text form: `c*x^i*y^j` terms joined by `+`, highest total degree first.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by(|a, b| (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0)));
        let parts: Vec<String> = keys
            .into_iter()
            .map(|(i, j)| {
                let a = self.terms[&(i, j)];
                let mut factors = Vec::new();
                let coeff = self.field.format_elem(a);
                if a != Elem::ONE || (i == 0 && j == 0) {
                    factors.push(if coeff.contains('+') { format!("({coeff})") } else { coeff });
                }
                for (v, e) in [("x", i), ("y", j)] {
                    match e {
                        0 => {}
                        1 => factors.push(v.to_string()),
                        e => factors.push(format!("{v}^{e}")),
                    }
                }
                factors.join("*")
            })
            .collect();
        parts.join("+")
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self.to_text(), self.field)
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> GaloisField {
        GaloisField::prime(5).unwrap()
    }

    #[test]
    fn exact_division() {
        let f = f5();
        let a = Poly2::from_terms(&f, &[(1, 1, 0), (-1, 0, 1)]); // x - y
        let b = Poly2::from_terms(&f, &[(1, 2, 0), (1, 0, 1), (2, 0, 0)]);
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert!(b.div_exact(&a).is_none());
    }

    #[test]
    fn charts_of_a_conic() {
        let f = f5();
        // x^2 + y^2 - 1, homogeneous X^2 + Y^2 - Z^2
        let c = Poly2::from_terms(&f, &[(1, 2, 0), (1, 0, 2), (-1, 0, 0)]);
        let c1 = c.chart(2, 1); // a^2 + 1 - b^2
        assert_eq!(c1, Poly2::from_terms(&f, &[(1, 2, 0), (1, 0, 0), (-1, 0, 2)]));
        let c2 = c.chart(2, 2); // 1 + a^2 - b^2
        assert_eq!(c2, Poly2::from_terms(&f, &[(1, 0, 0), (1, 2, 0), (-1, 0, 2)]));
        // line at infinity: affine part 1, degree 1; chart 1 gives b
        assert_eq!(Poly2::one(&f).chart(1, 1), Poly2::y(&f));
    }

    #[test]
    fn partials_and_text() {
        let f = f5();
        let c = Poly2::from_terms(&f, &[(1, 0, 2), (-1, 3, 0), (-1, 1, 0)]);
        assert_eq!(c.partial_x().eval(Elem(0), Elem(0)), f.from_int(-1));
        assert_eq!(c.to_text(), "4*x^3+y^2+4*x");
    }
}
