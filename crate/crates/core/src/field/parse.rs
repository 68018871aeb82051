//! Text parser for polynomials and rational expressions in `x`, `y`.
//!
//! Grammar: sums and differences of products and quotients of powers of
//! integers, `x`, `y`, `a` (the field generator) and parenthesized
//! subexpressions. Integer literals are read modulo the characteristic.

use super::{Elem, GaloisField, Poly, Poly2, RatFn, RatFn2};
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    field: &'a GaloisField,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse::<i64>()
            .map_err(|_| Error::parse(start, "integer out of range"))
    }

    fn expr(&mut self) -> Result<RatFn2> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFn2> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.unary()?);
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                let d = self.unary()?;
                acc = acc.div(&d).map_err(|_| Error::parse(at, "division by zero"))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFn2> {
        if self.eat(b'-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFn2> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            let at = self.pos;
            let e = self.integer()?;
            let e = if neg { -e } else { e };
            return base.pow(e).map_err(|_| Error::parse(at, "negative power of zero"));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFn2> {
        let f = self.field;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(Error::parse(self.pos, "expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(RatFn2::constant(f, f.from_int(n)))
            }
            Some(b'x') => {
                self.pos += 1;
                Ok(RatFn2::from_poly(Poly2::x(f)))
            }
            Some(b'y') => {
                self.pos += 1;
                Ok(RatFn2::from_poly(Poly2::y(f)))
            }
            Some(b'a') if f.degree() > 1 => {
                self.pos += 1;
                Ok(RatFn2::constant(f, f.generator()))
            }
            Some(c) => Err(Error::parse(self.pos, format!("unexpected character '{}'", c as char))),
            None => Err(Error::parse(self.pos, "unexpected end of input")),
        }
    }
}

/// Parse a rational expression in `x`, `y` over `field`.
pub fn parse_rational(src: &str, field: &GaloisField) -> Result<RatFn2> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, field };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::parse(p.pos, "trailing input"));
    }
    Ok(e)
}

/// Parse a polynomial in `x`, `y`; quotients are accepted only by nonzero constants.
pub fn parse_poly2(src: &str, field: &GaloisField) -> Result<Poly2> {
    let r = parse_rational(src, field)?;
    let c = r
        .den
        .as_constant()
        .filter(|c| !c.is_zero())
        .ok_or_else(|| Error::parse(0, "expected a polynomial, found a proper quotient"))?;
    Ok(r.num.scale(field.inv(c)?))
}

/// Parse a polynomial in `x` alone.
pub fn parse_poly(src: &str, field: &GaloisField) -> Result<Poly> {
    let p = parse_poly2(src, field)?;
    if p.degree_y() > 0 {
        return Err(Error::parse(0, "unexpected variable y in a univariate polynomial"));
    }
    Ok(p.specialize_y(Elem::ZERO))
}

/// Parse a rational function in `x` alone.
pub fn parse_ratfn(src: &str, field: &GaloisField) -> Result<RatFn> {
    let r = parse_rational(src, field)?;
    if r.num.degree_y() > 0 || r.den.degree_y() > 0 {
        return Err(Error::parse(0, "unexpected variable y in a function of x"));
    }
    RatFn::new(r.num.specialize_y(Elem::ZERO), r.den.specialize_y(Elem::ZERO))
}
