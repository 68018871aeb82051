//! Places of `F_q(x)`, local expansions and divisors on `P^1`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{find_roots, is_irreducible, parse_poly, Elem, Embedding, GaloisField, Poly, RatFn};
use crate::laurent::Laurent;

/// A closed point of `P^1`: a monic irreducible polynomial or infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    Finite(Poly),
    Infinity,
}

impl Place {
    pub fn finite(p: Poly) -> Result<Self> {
        if p.degree().unwrap_or(0) == 0 || p.lead() != Elem::ONE || !is_irreducible(&p) {
            return Err(Error::NotAPlace(p.to_text("x")));
        }
        Ok(Place::Finite(p))
    }

    /// The place `x = a` for `a` in the base field.
    pub fn rational(field: &GaloisField, a: Elem) -> Self {
        Place::Finite(Poly::linear(field, a))
    }

    pub fn degree(&self) -> u32 {
        match self {
            Place::Finite(p) => p.deg() as u32,
            Place::Infinity => 1,
        }
    }

    fn key(&self) -> (u8, i64, Vec<u32>) {
        match self {
            Place::Finite(p) => (0, p.deg(), p.coeffs().iter().rev().map(|c| c.0).collect()),
            Place::Infinity => (1, 1, Vec::new()),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            Place::Finite(p) => p.to_text("x"),
            Place::Infinity => "inf".into(),
        }
    }

    /// Residue field `F_{q^d}` with the base embedded in it.
    pub fn residue_field(&self, base: &GaloisField) -> Result<(GaloisField, Arc<Embedding>)> {
        let d = self.degree();
        let k = if d == 1 { base.clone() } else { GaloisField::new(base.characteristic(), base.degree() * d)? };
        let emb = Embedding::cached(base, &k)?;
        Ok((k, emb))
    }

    /// Exact valuation of a nonzero rational function.
    pub fn valuation(&self, f: &RatFn) -> Result<i64> {
        if f.is_zero() {
            return Err(Error::Validation("valuation of zero".into()));
        }
        Ok(match self {
            Place::Finite(p) => multiplicity(f.num(), p) - multiplicity(f.den(), p),
            Place::Infinity => f.den().deg() - f.num().deg(),
        })
    }

    /// Laurent expansion of `f` in the local parameter (`x - α` with `α` the
    /// smallest root of the place in its residue field, or `1/x` at infinity),
    /// known below `s^prec`.
    pub fn expand(&self, f: &RatFn, prec: i64) -> Result<Laurent> {
        let base = f.field();
        let (k, emb) = self.residue_field(base)?;
        if f.is_zero() {
            return Ok(Laurent::zero(&k, prec));
        }
        let (n, d, shift) = match self {
            Place::Finite(p) => {
                let alpha = *find_roots(&p.map_into(&emb)).first().ok_or_else(|| Error::NotAPlace(p.to_text("x")))?;
                (f.num().map_into(&emb).taylor_shift(alpha), f.den().map_into(&emb).taylor_shift(alpha), 0)
            }
            Place::Infinity => {
                let rev = |q: &Poly| Poly::new(base, q.coeffs().iter().rev().copied().collect());
                (rev(f.num()), rev(f.den()), f.den().deg() - f.num().deg())
            }
        };
        let low = |q: &Poly| q.coeffs().iter().position(|c| !c.is_zero()).unwrap_or(0);
        let (vn, vd) = (low(&n), low(&d));
        let v = shift + vn as i64 - vd as i64;
        let r = prec - v;
        if r <= 0 {
            return Ok(Laurent::zero(&k, prec));
        }
        let unit = |q: &Poly, lo: usize| Laurent::new(&k, 0, q.coeffs()[lo..].to_vec(), r);
        Ok(unit(&n, vn).mul(&unit(&d, vd).inv()?).shift(v))
    }
}

fn multiplicity(f: &Poly, p: &Poly) -> i64 {
    let mut m = 0;
    let mut g = f.clone();
    while let Some(q) = g.div_exact(p) {
        g = q;
        m += 1;
    }
    m
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_text())
    }
}

/// A divisor `sum n_P [P]` on `P^1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorOnCurve {
    field: GaloisField,
    coeffs: BTreeMap<Place, i64>,
}

impl DivisorOnCurve {
    pub fn zero(field: &GaloisField) -> Self {
        DivisorOnCurve { field: field.clone(), coeffs: BTreeMap::new() }
    }

    pub fn from_places(field: &GaloisField, entries: &[(Place, i64)]) -> Self {
        let mut d = Self::zero(field);
        for (p, n) in entries {
            d.add_place(p, *n);
        }
        d
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn add_place(&mut self, p: &Place, n: i64) {
        let e = self.coeffs.entry(p.clone()).or_insert(0);
        *e += n;
        if *e == 0 {
            self.coeffs.remove(p);
        }
    }

    pub fn coeff(&self, p: &Place) -> i64 {
        self.coeffs.get(p).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = (&Place, i64)> {
        self.coeffs.iter().map(|(p, &n)| (p, n))
    }

    pub fn degree(&self) -> i64 {
        self.coeffs.iter().map(|(p, n)| p.degree() as i64 * n).sum()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut d = self.clone();
        for (p, n) in o.support() {
            d.add_place(p, n);
        }
        d
    }

    pub fn neg(&self) -> Self {
        DivisorOnCurve { field: self.field.clone(), coeffs: self.coeffs.iter().map(|(p, n)| (p.clone(), -n)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// `self <= o` coefficientwise.
    pub fn le(&self, o: &Self) -> bool {
        o.sub(self).coeffs.values().all(|&n| n >= 0)
    }

    /// Divisor of a nonzero rational function.
    pub fn principal(f: &RatFn) -> Result<Self> {
        let k = f.field();
        let mut d = Self::zero(k);
        for (poly, sign) in [(f.num(), 1), (f.den(), -1)] {
            if poly.deg() > 0 {
                for (g, e) in crate::field::factor_univariate(poly)?.factors {
                    d.add_place(&Place::Finite(g), sign * e as i64);
                }
            }
        }
        d.add_place(&Place::Infinity, f.den().deg() - f.num().deg());
        Ok(d)
    }

    /// Parses `3*[x] - 1*[inf] + 2*[x^2+x+1]`; `0` is the zero divisor.
    pub fn parse(src: &str, field: &GaloisField) -> Result<Self> {
        let b = src.as_bytes();
        let mut i = 0;
        let skip = |i: &mut usize| {
            while *i < b.len() && b[*i].is_ascii_whitespace() {
                *i += 1;
            }
        };
        let mut d = Self::zero(field);
        skip(&mut i);
        if src.trim() == "0" {
            return Ok(d);
        }
        let mut first = true;
        while i < b.len() {
            let mut sign = 1;
            if b[i] == b'+' || b[i] == b'-' {
                sign = if b[i] == b'-' { -1 } else { 1 };
                i += 1;
                skip(&mut i);
            } else if !first {
                return Err(Error::parse(i, "expected '+' or '-'"));
            }
            first = false;
            let start = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let n: i64 = if i > start {
                let n = src[start..i].parse().map_err(|_| Error::parse(start, "multiplicity out of range"))?;
                skip(&mut i);
                if i < b.len() && b[i] == b'*' {
                    i += 1;
                    skip(&mut i);
                }
                n
            } else {
                1
            };
            if i >= b.len() || b[i] != b'[' {
                return Err(Error::parse(i, "expected '['"));
            }
            let open = i;
            let close = src[open..].find(']').map(|j| open + j).ok_or_else(|| Error::parse(open, "unclosed '['"))?;
            let body = src[open + 1..close].trim();
            let place = if body == "inf" {
                Place::Infinity
            } else {
                let p = parse_poly(body, field).map_err(|e| match e {
                    Error::Parse { pos, msg } => Error::parse(open + 1 + pos, msg),
                    e => e,
                })?;
                Place::finite(p).map_err(|_| Error::parse(open + 1, format!("[{body}] is not monic irreducible")))?
            };
            d.add_place(&place, sign * n);
            i = close + 1;
            skip(&mut i);
        }
        if first {
            return Err(Error::parse(0, "empty divisor"));
        }
        Ok(d)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, (p, &n)) in self.coeffs.iter().enumerate() {
            let s = format!("{}*{}", n.abs(), p);
            match (k, n < 0) {
                (0, false) => out.push_str(&s),
                (0, true) => out.push_str(&format!("-{s}")),
                (_, false) => out.push_str(&format!(" + {s}")),
                (_, true) => out.push_str(&format!(" - {s}")),
            }
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> GaloisField {
        GaloisField::prime(p).unwrap()
    }

    #[test]
    fn parse_and_print() {
        let k = f(2);
        let d = DivisorOnCurve::parse("3*[x] - 1*[inf] + 2*[x^2+x+1]", &k).unwrap();
        assert_eq!(d.degree(), 3 - 1 + 4);
        assert_eq!(d.to_text(), "3*[x] + 2*[x^2+x+1] - 1*[inf]");
        assert_eq!(DivisorOnCurve::parse(&d.to_text(), &k).unwrap(), d);
        assert_eq!(DivisorOnCurve::parse("[x+1] + [x+1]", &k).unwrap().coeff(&Place::rational(&k, Elem::ONE)), 2);
        assert_eq!(DivisorOnCurve::parse("0", &k).unwrap().degree(), 0);
    }

    #[test]
    fn parse_errors() {
        let k = f(2);
        assert!(matches!(DivisorOnCurve::parse("3*[x^2+1]", &k), Err(Error::Parse { .. })));
        assert!(matches!(DivisorOnCurve::parse("3*[x", &k), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(DivisorOnCurve::parse("[x] [inf]", &k), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(DivisorOnCurve::parse("", &k), Err(Error::Parse { .. })));
    }

    #[test]
    fn principal_divisors_have_degree_zero() {
        let k = f(5);
        let r = RatFn::new(Poly::from_ints(&k, &[0, 0, 4, 1]), Poly::from_ints(&k, &[2, 0, 1])).unwrap();
        let d = DivisorOnCurve::principal(&r).unwrap();
        assert_eq!(d.degree(), 0);
        assert_eq!(d.coeff(&Place::rational(&k, Elem::ZERO)), 2);
        assert_eq!(d.coeff(&Place::Infinity), -1);
        for (p, n) in d.support() {
            assert_eq!(p.valuation(&r).unwrap(), n);
        }
    }

    #[test]
    fn expansion_at_degree_two_place() {
        // 1/(x^2 + 1) over F_3 at its own zero: 1/((x - i)(x + i)) = s^-1 / (2i + s)
        let k = f(3);
        let pi = Poly::from_ints(&k, &[1, 0, 1]);
        let place = Place::finite(pi.clone()).unwrap();
        let r = RatFn::new(Poly::one(&k), pi).unwrap();
        let e = place.expand(&r, 3).unwrap();
        assert_eq!(e.valuation(), Some(-1));
        let kp = e.field().clone();
        let s = Laurent::var(&kp, 6);
        let (_, emb) = place.residue_field(&k).unwrap();
        let alpha = find_roots(&Poly::from_ints(&k, &[1, 0, 1]).map_into(&emb))[0];
        let back = s.mul(&s.add(&Laurent::constant(&kp, kp.add(alpha, alpha), 6)));
        assert!(e.mul(&back).eq_at_precision(&Laurent::one(&kp, 6), 2));
    }

    #[test]
    fn expansion_at_infinity() {
        // x/(x+1) = 1/(1 + w) = 1 - w + w^2 - ...
        let k = f(7);
        let r = RatFn::new(Poly::from_ints(&k, &[0, 1]), Poly::from_ints(&k, &[1, 1])).unwrap();
        let e = Place::Infinity.expand(&r, 4).unwrap();
        let want: Vec<Elem> = [1, -1, 1, -1].iter().map(|&c| k.from_int(c)).collect();
        assert_eq!(e.coeffs(), &want[..]);
    }
}
