//! Divisors of functions and 2-forms with declared factored support.

use super::CurveOnSurface;
use crate::error::{Error, Result};
use crate::field::{Poly2, RatFn2};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredDivisor {
    pub entries: Vec<(CurveOnSurface, i64)>,
}

impl FactoredDivisor {
    pub fn multiplicity(&self, c: &CurveOnSurface) -> i64 {
        self.entries.iter().filter(|(d, _)| d.same_curve(c)).map(|(_, m)| m).sum()
    }

    pub fn curves(&self) -> impl Iterator<Item = &CurveOnSurface> {
        self.entries.iter().map(|(c, _)| c)
    }

    pub fn degree(&self) -> i64 {
        self.entries.iter().map(|(c, m)| c.degree() as i64 * m).sum()
    }

    fn push(&mut self, c: &CurveOnSurface, m: i64) {
        if m == 0 {
            return;
        }
        if let Some(e) = self.entries.iter_mut().find(|(d, _)| d.same_curve(c)) {
            e.1 += m;
        } else {
            self.entries.push((c.clone(), m));
        }
        self.entries.retain(|(_, m)| *m != 0);
    }

    pub fn to_text(&self) -> String {
        if self.entries.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self.entries.iter().map(|(c, m)| format!("{m}*{{{}}}", c.to_text())).collect();
        parts.join(" + ")
    }
}

/// Strips powers of the support curves from `p`; the remainder must be constant.
fn factor_over(p: &Poly2, support: &[CurveOnSurface], sign: i64, out: &mut FactoredDivisor) -> Result<()> {
    let mut rest = p.clone();
    for c in support.iter().filter(|c| !c.is_line_at_infinity()) {
        let mut m = 0;
        while let Some(q) = rest.div_exact(c.affine()) {
            rest = q;
            m += 1;
        }
        out.push(c, sign * m);
    }
    if rest.as_constant().is_none() {
        return Err(Error::UnsupportedFactorization(rest.to_text()));
    }
    Ok(())
}

/// Divisor of `f` on `P^2`; the line at infinity balances the degrees.
pub fn divisor_of(f: &RatFn2, support: &[CurveOnSurface]) -> Result<FactoredDivisor> {
    divisor_with_shift(f, support, 0)
}

/// Divisor of `g dx ^ dy`: that of `g` plus `-3` times the line at infinity.
pub fn divisor_of_form(g: &RatFn2, support: &[CurveOnSurface]) -> Result<FactoredDivisor> {
    divisor_with_shift(g, support, -3)
}

fn divisor_with_shift(f: &RatFn2, support: &[CurveOnSurface], shift: i64) -> Result<FactoredDivisor> {
    if f.is_zero() {
        return Err(Error::Validation("divisor of zero".into()));
    }
    let mut d = FactoredDivisor { entries: Vec::new() };
    factor_over(&f.num, support, 1, &mut d)?;
    factor_over(&f.den, support, -1, &mut d)?;
    let inf = CurveOnSurface::line_at_infinity(f.field());
    d.push(&inf, f.den.total_degree() - f.num.total_degree() + shift);
    Ok(d)
}
