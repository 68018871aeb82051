//! Truncated Laurent series in one variable with per-value precision.
//!
//! A series stores the coefficients of `t^v_min .. t^(prec-1)`; everything
//! below `v_min` is zero and everything from `prec` on is unknown.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, Embedding, GaloisField, Poly};

#[derive(Clone, PartialEq, Eq)]
pub struct Laurent {
    field: GaloisField,
    v_min: i64,
    coeffs: Vec<Elem>,
    prec: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
    Inv,
    Derivative,
}

impl Laurent {
    /// Coefficients of `t^v_min, t^(v_min+1), ...`, known up to (excluding) `prec`.
    /// Missing coefficients below `prec` are zero; extra ones are dropped.
    pub fn new(field: &GaloisField, v_min: i64, mut coeffs: Vec<Elem>, prec: i64) -> Self {
        if prec <= v_min {
            return Self::zero(field, prec);
        }
        coeffs.resize((prec - v_min) as usize, Elem::ZERO);
        Laurent { field: field.clone(), v_min, coeffs, prec }
    }

    /// The series known to be zero below `prec`.
    pub fn zero(field: &GaloisField, prec: i64) -> Self {
        Laurent { field: field.clone(), v_min: prec - 1, coeffs: vec![Elem::ZERO], prec }
    }

    pub fn monomial(field: &GaloisField, a: Elem, n: i64, prec: i64) -> Self {
        if n >= prec {
            return Self::zero(field, prec);
        }
        let mut c = vec![Elem::ZERO; (prec - n) as usize];
        c[0] = a;
        Laurent { field: field.clone(), v_min: n, coeffs: c, prec }
    }

    pub fn constant(field: &GaloisField, a: Elem, prec: i64) -> Self {
        Self::monomial(field, a, 0, prec)
    }

    pub fn one(field: &GaloisField, prec: i64) -> Self {
        Self::constant(field, Elem::ONE, prec)
    }

    /// The variable `t` itself.
    pub fn var(field: &GaloisField, prec: i64) -> Self {
        Self::monomial(field, Elem::ONE, 1, prec)
    }

    /// `t^shift * p(t)`, known up to `prec`.
    pub fn from_poly(p: &Poly, shift: i64, prec: i64) -> Self {
        Self::new(p.field(), shift, p.coeffs().to_vec(), prec)
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn v_min(&self) -> i64 {
        self.v_min
    }

    /// Coefficient of `t^n`; fails for `n >= prec`.
    pub fn coeff(&self, n: i64) -> Result<Elem> {
        if n >= self.prec {
            return Err(Error::OutsideWindow(format!("t^{n} with precision {}", self.prec)));
        }
        if n < self.v_min {
            return Ok(Elem::ZERO);
        }
        Ok(self.coeffs[(n - self.v_min) as usize])
    }

    fn c(&self, n: i64) -> Elem {
        if n < self.v_min || n >= self.prec {
            Elem::ZERO
        } else {
            self.coeffs[(n - self.v_min) as usize]
        }
    }

    /// Smallest exponent with a nonzero known coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|i| self.v_min + i as i64)
    }

    /// Valuation, or `prec` for a series indistinguishable from zero.
    pub fn eff_valuation(&self) -> i64 {
        self.valuation().unwrap_or(self.prec)
    }

    /// Coefficient at the valuation.
    pub fn lead(&self) -> Option<Elem> {
        self.valuation().map(|v| self.c(v))
    }

    pub fn is_zero_at_precision(&self) -> bool {
        self.valuation().is_none()
    }

    /// Same series with `v_min` moved up to the valuation.
    pub fn trimmed(&self) -> Self {
        match self.valuation() {
            None => Self::zero(&self.field, self.prec),
            Some(v) => Laurent {
                field: self.field.clone(),
                v_min: v,
                coeffs: self.coeffs[(v - self.v_min) as usize..].to_vec(),
                prec: self.prec,
            },
        }
    }

    /// Forget all coefficients from `prec` on.
    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        let c = (self.v_min..prec).map(|n| self.c(n)).collect();
        Self::new(&self.field, self.v_min, c, prec)
    }

    /// Agreement on every exponent below `n` known to both series.
    pub fn eq_at_precision(&self, o: &Self, n: i64) -> bool {
        let top = n.min(self.prec).min(o.prec);
        let lo = self.v_min.min(o.v_min);
        (lo..top).all(|k| self.c(k) == o.c(k))
    }

    fn check_field(&self, o: &Self) -> Result<()> {
        if self.field != o.field {
            return Err(Error::FieldMismatch(self.field.to_string(), o.field.to_string()));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        let lo = self.v_min.min(o.v_min);
        let c = (lo..prec).map(|n| self.field.add(self.c(n), o.c(n))).collect();
        Self::new(&self.field, lo, c, prec)
    }

    pub fn neg(&self) -> Self {
        let c = self.coeffs.iter().map(|&a| self.field.neg(a)).collect();
        Laurent { field: self.field.clone(), v_min: self.v_min, coeffs: c, prec: self.prec }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, a: Elem) -> Self {
        let c = self.coeffs.iter().map(|&b| self.field.mul(a, b)).collect();
        Laurent { field: self.field.clone(), v_min: self.v_min, coeffs: c, prec: self.prec }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Laurent {
            field: self.field.clone(),
            v_min: self.v_min + k,
            coeffs: self.coeffs.clone(),
            prec: self.prec + k,
        }
    }

    /// Product with precision `min(prec_a + v_b, prec_b + v_a)`.
    pub fn mul(&self, o: &Self) -> Self {
        let a = self.trimmed();
        let b = o.trimmed();
        let va = a.eff_valuation();
        let vb = b.eff_valuation();
        let prec = (a.prec + vb).min(b.prec + va);
        let lo = a.v_min + b.v_min;
        if prec <= lo {
            return Self::zero(&self.field, prec);
        }
        let f = &self.field;
        let mut c = vec![Elem::ZERO; (prec - lo) as usize];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                let k = i + j;
                if k >= c.len() {
                    break;
                }
                c[k] = f.add(c[k], f.mul(x, y));
            }
        }
        Self::new(f, lo, c, prec)
    }

    /// Inverse with precision `prec - 2v`.
    pub fn inv(&self) -> Result<Self> {
        let v = self.valuation().ok_or_else(|| {
            Error::InsufficientPrecision(format!(
                "cannot invert a series that vanishes below t^{}",
                self.prec
            ))
        })?;
        let f = &self.field;
        let unit = self.trimmed();
        let n = (self.prec - v) as usize;
        let b0inv = f.inv(unit.coeffs[0])?;
        let mut c = vec![Elem::ZERO; n];
        c[0] = b0inv;
        for k in 1..n {
            let mut s = Elem::ZERO;
            for i in 1..=k {
                let bi = unit.coeffs[i];
                if !bi.is_zero() {
                    s = f.add(s, f.mul(bi, c[k - i]));
                }
            }
            c[k] = f.neg(f.mul(b0inv, s));
        }
        Ok(Self::new(f, -v, c, self.prec - 2 * v))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e == 0 {
            return Ok(Self::one(&self.field, self.prec - self.eff_valuation()));
        }
        let mut b = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc: Option<Self> = None;
        while k > 0 {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => b.clone(),
                    Some(a) => a.mul(&b),
                });
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc.expect("nonzero exponent"))
    }

    /// `d/dt`, with precision `prec - 1`.
    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let c = (self.v_min..self.prec)
            .map(|n| f.mul(f.from_int(n), self.c(n)))
            .collect();
        Self::new(f, self.v_min - 1, c, self.prec - 1)
    }

    pub fn map_into(&self, emb: &Embedding) -> Self {
        let c = self.coeffs.iter().map(|&a| emb.apply(a)).collect();
        Laurent { field: emb.big().clone(), v_min: self.v_min, coeffs: c, prec: self.prec }
    }

    /// Coefficients from `v_min` to `prec - 1`.
    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn to_text(&self, var: &str) -> String {
        let mut parts = Vec::new();
        for n in self.v_min..self.prec {
            let a = self.c(n);
            if a.is_zero() {
                continue;
            }
            let coeff = self.field.format_elem(a);
            let coeff = if coeff.contains('+') { format!("({coeff})") } else { coeff };
            parts.push(match n {
                0 => coeff,
                _ => format!("{coeff} {var}^{n}"),
            });
        }
        parts.push(format!("O({var}^{})", self.prec));
        parts.join(" + ")
    }
}

/// `series_arith`: one operation under the precision contract.
pub fn series_arith(a: &Laurent, b: Option<&Laurent>, op: SeriesOp) -> Result<Laurent> {
    let need_b = || b.ok_or_else(|| Error::Validation("second operand required".into()));
    match op {
        SeriesOp::Add => {
            let b = need_b()?;
            a.check_field(b)?;
            Ok(a.add(b))
        }
        SeriesOp::Mul => {
            let b = need_b()?;
            a.check_field(b)?;
            Ok(a.mul(b))
        }
        SeriesOp::Inv => a.inv(),
        SeriesOp::Derivative => Ok(a.derivative()),
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text("t"))
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text("t"))
    }
}

/// A one-form `f dt`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneForm {
    pub f: Laurent,
    pub var: String,
}

impl OneForm {
    pub fn new(f: Laurent) -> Self {
        OneForm { f, var: "t".into() }
    }

    /// `g dh = g h' dt`.
    pub fn from_differential(g: &Laurent, h: &Laurent) -> Self {
        OneForm::new(g.mul(&h.derivative()))
    }
}

/// Coefficient of `t^-1` in `omega = f dt`.
pub fn residue_1d(omega: &OneForm) -> Result<Elem> {
    if omega.f.prec <= -1 {
        return Err(Error::OutsideWindow(format!(
            "residue needs t^-1 but precision is {}",
            omega.f.prec
        )));
    }
    omega.f.coeff(-1)
}

/// Signed tame symbol `(-1)^{v(f)v(g)} (f^{v(g)} g^{-v(f)})(0)`.
///
/// Only valuations and leading coefficients enter.
pub fn tame_symbol_1d(f: &Laurent, g: &Laurent) -> Result<Elem> {
    let k = f.field();
    let missing = |s: &Laurent| {
        Error::InsufficientPrecision(format!("no valuation visible below t^{}", s.prec()))
    };
    let a = f.valuation().ok_or_else(|| missing(f))?;
    let b = g.valuation().ok_or_else(|| missing(g))?;
    let alpha = f.lead().unwrap();
    let beta = g.lead().unwrap();
    let mut v = k.mul(k.pow(alpha, b)?, k.pow(beta, -a)?);
    if (a * b).rem_euclid(2) == 1 {
        v = k.neg(v);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u32) -> GaloisField {
        GaloisField::prime(p).unwrap()
    }

    fn series(k: &GaloisField, v: i64, c: &[i64], prec: i64) -> Laurent {
        Laurent::new(k, v, c.iter().map(|&x| k.from_int(x)).collect(), prec)
    }

    #[test]
    fn geometric_series() {
        let k = f(5);
        let s = series(&k, 0, &[1, -1], 3);
        let inv = s.inv().unwrap();
        assert_eq!(inv, series(&k, 0, &[1, 1, 1], 3));
    }

    #[test]
    fn derivative_of_inverse_t() {
        let k = f(7);
        let s = Laurent::monomial(&k, Elem::ONE, -1, 5);
        let d = s.derivative();
        assert_eq!(d.valuation(), Some(-2));
        assert_eq!(d.lead(), Some(k.from_int(-1)));
        assert_eq!(d.prec(), 4);
    }

    #[test]
    fn t_times_inverse_t() {
        let k = f(5);
        let t = Laurent::var(&k, 10);
        let p = t.mul(&t.inv().unwrap());
        assert_eq!(p.valuation(), Some(0));
        assert_eq!(p.lead(), Some(Elem::ONE));
        assert!((1..p.prec()).all(|n| p.coeff(n).unwrap().is_zero()));
    }

    #[test]
    fn precision_contract() {
        let k = f(5);
        let a = series(&k, 1, &[1, 2, 3], 6); // v = 1, prec 6
        let b = series(&k, -2, &[2, 0, 1], 4); // v = -2, prec 4
        assert_eq!(a.add(&b).prec(), 4);
        assert_eq!(a.mul(&b).prec(), (6 - 2).min(4 + 1));
        assert_eq!(b.inv().unwrap().prec(), 4 + 4);
        assert_eq!(a.derivative().prec(), 5);
    }

    #[test]
    fn inverting_zero_reports_precision() {
        let k = f(5);
        assert!(matches!(Laurent::zero(&k, 4).inv(), Err(Error::InsufficientPrecision(_))));
    }

    #[test]
    fn simple_residues() {
        let k = f(5);
        let w = OneForm::new(Laurent::monomial(&k, Elem::ONE, -1, 3));
        assert_eq!(residue_1d(&w).unwrap(), Elem::ONE);
        let w2 = OneForm::new(Laurent::monomial(&k, Elem::ONE, -2, 3));
        assert_eq!(residue_1d(&w2).unwrap(), Elem::ZERO);
        let w3 = OneForm::new(Laurent::monomial(&k, Elem::ONE, 2, 3));
        assert!(residue_1d(&w3).is_ok());
        let w4 = OneForm::new(Laurent::monomial(&k, Elem::ONE, -4, -2));
        assert!(matches!(residue_1d(&w4), Err(Error::OutsideWindow(_))));
    }

    #[test]
    fn log_derivative_residue_is_valuation() {
        let k = f(7);
        // f = t^3 (1 + t); f'/f expanded independently: 3/t + 1/(1+t)
        let s = series(&k, 3, &[1, 1], 12);
        let w = OneForm::new(s.derivative().mul(&s.inv().unwrap()));
        assert_eq!(residue_1d(&w).unwrap(), k.from_int(3));
        let direct = series(&k, -1, &[3, 1, -1, 1, -1], 4);
        assert!(w.f.eq_at_precision(&direct, 4));
    }

    #[test]
    fn tame_symbol_examples() {
        let k = f(5);
        let t = Laurent::var(&k, 4);
        assert_eq!(tame_symbol_1d(&t, &t).unwrap(), Elem(4));
        let c = Laurent::constant(&k, Elem(3), 4);
        assert_eq!(tame_symbol_1d(&t, &c).unwrap(), k.inv(Elem(3)).unwrap());
    }

    fn arb_series(p: u32) -> impl Strategy<Value = Laurent> {
        (-3i64..3, prop::collection::vec(0u32..p, 1..8), 1u32..p).prop_map(move |(v, c, lead)| {
            let k = GaloisField::prime(p).unwrap();
            let mut c: Vec<Elem> = c.into_iter().map(Elem).collect();
            c[0] = Elem(lead);
            let prec = v + c.len() as i64 + 4;
            Laurent::new(&k, v, c, prec)
        })
    }

    fn arb_triple() -> impl Strategy<Value = (Laurent, Laurent, Laurent)> {
        prop::sample::select(vec![5u32, 7])
            .prop_flat_map(|p| (arb_series(p), arb_series(p), arb_series(p)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn tame_symbol_is_bimultiplicative((f1, f2, g) in arb_triple()) {
            let k = f1.field().clone();
            let lhs = tame_symbol_1d(&f1.mul(&f2), &g).unwrap();
            let rhs = k.mul(tame_symbol_1d(&f1, &g).unwrap(), tame_symbol_1d(&f2, &g).unwrap());
            prop_assert_eq!(lhs, rhs);
            let lhs = tame_symbol_1d(&g, &f1.mul(&f2)).unwrap();
            let rhs = k.mul(tame_symbol_1d(&g, &f1).unwrap(), tame_symbol_1d(&g, &f2).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn tame_symbol_is_antisymmetric((f1, g, _) in arb_triple()) {
            let k = f1.field().clone();
            let prod = k.mul(tame_symbol_1d(&f1, &g).unwrap(), tame_symbol_1d(&g, &f1).unwrap());
            prop_assert_eq!(prod, Elem::ONE);
        }

        #[test]
        fn residue_of_derivative_vanishes(s in arb_series(7)) {
            let w = OneForm::new(s.derivative());
            if w.f.prec() > -1 {
                prop_assert_eq!(residue_1d(&w).unwrap(), Elem::ZERO);
            }
        }

        #[test]
        fn residue_is_linear((a, b, _) in arb_triple(), c in 1i64..5) {
            let k = a.field().clone();
            let (a, b) = (a.shift(-2), b.shift(-2));
            let lhs = residue_1d(&OneForm::new(a.add(&b.scale(k.from_int(c))))).unwrap();
            let rhs = k.add(residue_1d(&OneForm::new(a)).unwrap(),
                            k.mul(k.from_int(c), residue_1d(&OneForm::new(b)).unwrap()));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn precision_is_sound((a, b, _) in arb_triple(), extra in prop::collection::vec(0u32..5, 6)) {
            // extend both inputs by more coefficients and recompute
            let k = a.field().clone();
            let grow = |s: &Laurent| {
                let mut c = s.coeffs().to_vec();
                c.extend(extra.iter().map(|&x| Elem(x % k.order())));
                Laurent::new(&k, s.v_min(), c, s.prec() + extra.len() as i64)
            };
            let (a2, b2) = (grow(&a), grow(&b));
            let lo = a.mul(&b);
            let hi = a2.mul(&b2);
            prop_assert!(hi.prec() >= lo.prec());
            prop_assert!(lo.eq_at_precision(&hi, lo.prec()));
            let lo = a.inv().unwrap();
            let hi = a2.inv().unwrap();
            prop_assert!(lo.eq_at_precision(&hi, lo.prec()));
            let lo = a.add(&b);
            prop_assert!(lo.eq_at_precision(&a2.add(&b2), lo.prec()));
        }

        #[test]
        fn steinberg_relation(s in arb_series(5)) {
            let k = s.field().clone();
            let f = s.trimmed();
            let v = f.valuation().unwrap();
            let f = f.shift(1 - v); // force positive valuation
            let one_minus = Laurent::one(&k, f.prec()).sub(&f);
            prop_assert_eq!(tame_symbol_1d(&f, &one_minus).unwrap(), Elem::ONE);
        }
    }
}
