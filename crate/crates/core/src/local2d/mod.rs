//! Two-dimensional local fields `k((u))((t))` with rectangular truncation.

mod heis;
mod symbols;

pub use heis::{commutator_value, local_heis, HeisOp, LocalHeisElement};
pub use symbols::{
    boundary_t, commutator_pairing, parshin_symbol_3, valuation_pair, MilnorSymbol,
};

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Elem, Embedding, GaloisField};
use crate::laurent::Laurent;

/// Element of `k((u))((t))`: one u-Laurent series per t-exponent.
///
/// Coefficients of `t^v_min .. t^(prec-1)` are stored; each carries its own
/// u-precision.
#[derive(Clone, PartialEq, Eq)]
pub struct IteratedSeries {
    field: GaloisField,
    v_min: i64,
    coeffs: Vec<Laurent>,
    prec: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IterOp {
    Add,
    Mul,
    Inv,
}

impl IteratedSeries {
    pub fn new(field: &GaloisField, v_min: i64, coeffs: Vec<Laurent>, prec: i64, u_prec: i64) -> Self {
        if prec <= v_min {
            return Self::zero(field, prec, u_prec);
        }
        let mut coeffs = coeffs;
        coeffs.resize((prec - v_min) as usize, Laurent::zero(field, u_prec));
        IteratedSeries { field: field.clone(), v_min, coeffs, prec }
    }

    pub fn zero(field: &GaloisField, prec: i64, u_prec: i64) -> Self {
        IteratedSeries {
            field: field.clone(),
            v_min: prec - 1,
            coeffs: vec![Laurent::zero(field, u_prec)],
            prec,
        }
    }

    /// `a * u^i * t^j` with the given precisions.
    pub fn monomial(field: &GaloisField, a: Elem, i: i64, j: i64, prec: i64, u_prec: i64) -> Self {
        if j >= prec {
            return Self::zero(field, prec, u_prec);
        }
        let mut c = vec![Laurent::zero(field, u_prec); (prec - j) as usize];
        c[0] = Laurent::monomial(field, a, i, u_prec);
        IteratedSeries { field: field.clone(), v_min: j, coeffs: c, prec }
    }

    pub fn constant(field: &GaloisField, a: Elem, prec: i64, u_prec: i64) -> Self {
        Self::monomial(field, a, 0, 0, prec, u_prec)
    }

    pub fn one(field: &GaloisField, prec: i64, u_prec: i64) -> Self {
        Self::constant(field, Elem::ONE, prec, u_prec)
    }

    /// An element of `k((u))` viewed as a t-constant.
    pub fn from_u_series(s: Laurent, prec: i64) -> Self {
        let field = s.field().clone();
        let u_prec = s.prec();
        Self::new(&field, 0, vec![s], prec, u_prec)
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

    /// Smallest u-precision among stored coefficients.
    pub fn u_prec(&self) -> i64 {
        self.coeffs.iter().map(|c| c.prec()).min().unwrap_or(0)
    }

    /// u-series coefficient of `t^j`; fails for `j >= prec`.
    pub fn t_coeff(&self, j: i64) -> Result<Laurent> {
        if j >= self.prec {
            return Err(Error::OutsideWindow(format!("t^{j} with t-precision {}", self.prec)));
        }
        Ok(self.tc(j))
    }

    fn tc(&self, j: i64) -> Laurent {
        if j < self.v_min || j >= self.prec {
            // below v_min the coefficient is exactly zero; give it the widest precision around
            let up = self.coeffs.iter().map(|c| c.prec()).max().unwrap_or(0);
            Laurent::zero(&self.field, up)
        } else {
            self.coeffs[(j - self.v_min) as usize].clone()
        }
    }

    /// Coefficient of `u^i t^j`.
    pub fn coeff(&self, i: i64, j: i64) -> Result<Elem> {
        if j < self.v_min && j < self.prec {
            return Ok(Elem::ZERO);
        }
        self.t_coeff(j)?.coeff(i)
    }

    /// The t-adic valuation `nu_C`: first t-exponent whose coefficient is
    /// nonzero at its own precision.
    pub fn nu_c(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero_at_precision())
            .map(|i| self.v_min + i as i64)
    }

    fn eff_nu(&self) -> i64 {
        self.nu_c().unwrap_or(self.prec)
    }

    /// Leading t-coefficient: the residue class in `k((u))` of `t^{-nu} * self`.
    pub fn lead_t(&self) -> Option<Laurent> {
        self.nu_c().map(|v| self.tc(v))
    }

    pub fn trimmed(&self) -> Self {
        match self.nu_c() {
            None => Self::zero(&self.field, self.prec, self.u_prec()),
            Some(v) => IteratedSeries {
                field: self.field.clone(),
                v_min: v,
                coeffs: self.coeffs[(v - self.v_min) as usize..].to_vec(),
                prec: self.prec,
            },
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&Laurent) -> Laurent) -> Self {
        IteratedSeries {
            field: self.field.clone(),
            v_min: self.v_min,
            coeffs: self.coeffs.iter().map(f).collect(),
            prec: self.prec,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        let lo = self.v_min.min(o.v_min);
        let c: Vec<Laurent> = (lo..prec).map(|j| self.tc(j).add(&o.tc(j))).collect();
        let up = c.iter().map(|s| s.prec()).min().unwrap_or(0);
        Self::new(&self.field, lo, c, prec, up)
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, a: Elem) -> Self {
        self.map_coeffs(|c| c.scale(a))
    }

    /// Multiplication by `t^k`.
    pub fn shift_t(&self, k: i64) -> Self {
        IteratedSeries {
            field: self.field.clone(),
            v_min: self.v_min + k,
            coeffs: self.coeffs.clone(),
            prec: self.prec + k,
        }
    }

    /// Multiplication by `u^k`.
    pub fn shift_u(&self, k: i64) -> Self {
        self.map_coeffs(|c| c.shift(k))
    }

    /// Product: outer precision `min(prec_a + nu_b, prec_b + nu_a)`; inner
    /// precisions follow from the coefficient convolution.
    pub fn mul(&self, o: &Self) -> Self {
        let a = self.trimmed();
        let b = o.trimmed();
        let prec = (a.prec + b.eff_nu()).min(b.prec + a.eff_nu());
        let lo = a.v_min + b.v_min;
        let up = a.u_prec().min(b.u_prec());
        if prec <= lo {
            return Self::zero(&self.field, prec, up);
        }
        let n = (prec - lo) as usize;
        let mut c: Vec<Option<Laurent>> = vec![None; n];
        for (i, x) in a.coeffs.iter().enumerate() {
            for (j, y) in b.coeffs.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                let p = x.mul(y);
                c[i + j] = Some(match c[i + j].take() {
                    None => p,
                    Some(s) => s.add(&p),
                });
            }
        }
        let c = c.into_iter().map(|s| s.unwrap_or_else(|| Laurent::zero(&self.field, up))).collect();
        Self::new(&self.field, lo, c, prec, up)
    }

    /// Inverse with outer precision `prec - 2 nu`, via
    /// `c_0 = b_0^{-1}`, `c_n = -b_0^{-1} sum_{i=1..n} b_i c_{n-i}`.
    pub fn inv(&self) -> Result<Self> {
        let nu = self.nu_c().ok_or_else(|| {
            Error::InsufficientPrecision(format!(
                "cannot invert: all t-coefficients below t^{} vanish",
                self.prec
            ))
        })?;
        let unit = self.trimmed();
        let n = (self.prec - nu) as usize;
        let b0inv = unit.coeffs[0].inv()?;
        let mut c: Vec<Laurent> = Vec::with_capacity(n);
        c.push(b0inv.clone());
        for k in 1..n {
            let mut s: Option<Laurent> = None;
            for i in 1..=k {
                let p = unit.coeffs[i].mul(&c[k - i]);
                s = Some(match s {
                    None => p,
                    Some(acc) => acc.add(&p),
                });
            }
            c.push(s.unwrap().mul(&b0inv).neg());
        }
        let up = c.iter().map(|s| s.prec()).min().unwrap_or(0);
        Ok(Self::new(&self.field, -nu, c, self.prec - 2 * nu, up))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e == 0 {
            return Ok(Self::one(&self.field, self.prec - self.eff_nu(), self.u_prec()));
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
        Ok(acc.unwrap())
    }

    /// `d/du` applied coefficientwise.
    pub fn d_du(&self) -> Self {
        self.map_coeffs(|c| c.derivative())
    }

    /// `d/dt`.
    pub fn d_dt(&self) -> Self {
        let f = &self.field;
        let c = (self.v_min..self.prec).map(|j| self.tc(j).scale(f.from_int(j))).collect();
        let up = self.u_prec();
        Self::new(f, self.v_min - 1, c, self.prec - 1, up)
    }

    /// Keep t-exponents below `prec` only.
    pub fn truncate_t(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        let c = (self.v_min..prec).map(|j| self.tc(j)).collect();
        Self::new(&self.field, self.v_min, c, prec, self.u_prec())
    }

    /// Agreement on the common known window below `(u_n, t_n)`.
    pub fn eq_at_precision(&self, o: &Self, t_n: i64, u_n: i64) -> bool {
        let top = t_n.min(self.prec).min(o.prec);
        (self.v_min.min(o.v_min)..top).all(|j| self.tc(j).eq_at_precision(&o.tc(j), u_n))
    }

    pub fn map_into(&self, emb: &Embedding) -> Self {
        IteratedSeries {
            field: emb.big().clone(),
            v_min: self.v_min,
            coeffs: self.coeffs.iter().map(|c| c.map_into(emb)).collect(),
            prec: self.prec,
        }
    }

    pub fn to_text(&self) -> String {
        let mut parts = Vec::new();
        for j in self.v_min..self.prec {
            let c = self.tc(j);
            if c.is_zero_at_precision() {
                continue;
            }
            parts.push(format!("({}) t^{j}", c.to_text("u")));
        }
        parts.push(format!("O(t^{})", self.prec));
        parts.join(" + ")
    }

    /// Exponent-indexed JSON form.
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = (self.v_min..self.prec)
            .map(|j| {
                let c = self.tc(j);
                json!({
                    "t": j,
                    "u_min": c.v_min(),
                    "u_prec": c.prec(),
                    "coeffs": c.coeffs().iter().map(|e| self.field.format_elem(*e)).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "field": self.field.to_string(), "t_prec": self.prec, "rows": rows })
    }
}

/// `iter_arith`: one operation under the rectangular precision contract.
pub fn iter_arith(a: &IteratedSeries, b: Option<&IteratedSeries>, op: IterOp) -> Result<IteratedSeries> {
    let need_b = || b.ok_or_else(|| Error::Validation("second operand required".into()));
    match op {
        IterOp::Add => Ok(a.add(need_b()?)),
        IterOp::Mul => Ok(a.mul(need_b()?)),
        IterOp::Inv => a.inv(),
    }
}

impl fmt::Debug for IteratedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// `omega = f du ^ dt`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoForm {
    pub f: IteratedSeries,
}

impl TwoForm {
    pub fn new(f: IteratedSeries) -> Self {
        TwoForm { f }
    }
}

/// `Tr_{k(P)/F_q}` of the coefficient of `u^-1 t^-1`.
pub fn residue_2d(omega: &TwoForm, base: &GaloisField) -> Result<Elem> {
    let a = omega.f.coeff(-1, -1)?;
    let emb = Embedding::cached(base, omega.f.field())?;
    Ok(emb.trace(a))
}

#[cfg(test)]
pub(crate) mod testgen {
    use super::*;
    use proptest::prelude::*;

    /// Random iterated series with a determinable valuation and leading unit.
    pub fn arb_iter(p: u32) -> impl Strategy<Value = IteratedSeries> {
        (
            -2i64..3,
            prop::collection::vec((-2i64..3, prop::collection::vec(0u32..p, 1..5), 1u32..p), 1..5),
        )
            .prop_map(move |(v, rows)| {
                let k = GaloisField::prime(p).unwrap();
                let u_prec = 10;
                let t_len = rows.len() as i64;
                let coeffs = rows
                    .into_iter()
                    .map(|(uv, mut c, lead)| {
                        c[0] = lead;
                        Laurent::new(&k, uv, c.into_iter().map(Elem).collect(), uv + u_prec)
                    })
                    .collect();
                IteratedSeries::new(&k, v, coeffs, v + t_len + 4, u_prec)
            })
    }
}

#[cfg(test)]
mod tests {
    use super::testgen::arb_iter;
    use super::*;
    use proptest::prelude::*;

    fn f5() -> GaloisField {
        GaloisField::prime(5).unwrap()
    }

    #[test]
    fn ut_times_inverse() {
        let k = f5();
        let ut = IteratedSeries::monomial(&k, Elem::ONE, 1, 1, 6, 6);
        let p = ut.mul(&ut.inv().unwrap());
        assert_eq!(p.nu_c(), Some(0));
        assert_eq!(p.coeff(0, 0).unwrap(), Elem::ONE);
        for j in 1..p.prec() {
            assert!(p.t_coeff(j).unwrap().is_zero_at_precision());
        }
    }

    #[test]
    fn inverse_of_t_plus_u() {
        let k = f5();
        let s = IteratedSeries::monomial(&k, Elem::ONE, 0, 1, 6, 8)
            .add(&IteratedSeries::monomial(&k, Elem::ONE, 1, 0, 6, 8));
        let inv = s.inv().unwrap();
        // 1/(u(1 + t/u)) = sum_n (-1)^n u^{-1-n} t^n
        for n in 0..4 {
            let expect = if n % 2 == 0 { Elem::ONE } else { k.from_int(-1) };
            assert_eq!(inv.coeff(-1 - n, n).unwrap(), expect);
            assert_eq!(inv.t_coeff(n).unwrap().trimmed().valuation(), Some(-1 - n));
        }
    }

    #[test]
    fn valuation_ignores_u() {
        let k = f5();
        let s = IteratedSeries::monomial(&k, Elem::ONE, -1, 2, 6, 6);
        assert_eq!(s.nu_c(), Some(2));
    }

    #[test]
    fn simple_two_dimensional_residues() {
        let k = f5();
        let w = TwoForm::new(IteratedSeries::monomial(&k, Elem::ONE, -1, -1, 3, 3));
        assert_eq!(residue_2d(&w, &k).unwrap(), Elem::ONE);
        let w = TwoForm::new(IteratedSeries::monomial(&k, Elem::ONE, -2, -1, 3, 3));
        assert_eq!(residue_2d(&w, &k).unwrap(), Elem::ZERO);
        let w = TwoForm::new(IteratedSeries::monomial(&k, Elem::ONE, 0, 0, -2, 3));
        assert!(residue_2d(&w, &k).is_err());
    }

    #[test]
    fn residue_traces_quadratic_coefficients() {
        let k = f5();
        let k2 = GaloisField::new(5, 2).unwrap();
        let emb = Embedding::new(&k, &k2).unwrap();
        for alpha in k2.elements() {
            let w = TwoForm::new(IteratedSeries::monomial(&k2, alpha, -1, -1, 2, 2));
            assert_eq!(residue_2d(&w, &k).unwrap(), emb.trace(alpha));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn exact_forms_have_no_residue(s in arb_iter(5)) {
            let k = f5();
            let w = TwoForm::new(s.d_du());
            if let Ok(r) = residue_2d(&w, &k) {
                prop_assert_eq!(r, Elem::ZERO);
            }
            let w = TwoForm::new(s.d_dt());
            if let Ok(r) = residue_2d(&w, &k) {
                prop_assert_eq!(r, Elem::ZERO);
            }
        }

        #[test]
        fn product_inverse_is_one(s in arb_iter(7)) {
            let p = s.mul(&s.inv().unwrap());
            prop_assert_eq!(p.nu_c(), Some(0));
            let one = IteratedSeries::one(s.field(), p.prec(), p.u_prec());
            prop_assert!(p.eq_at_precision(&one, p.prec(), p.u_prec()));
        }

        #[test]
        fn multiplication_is_commutative_and_associative(
            a in arb_iter(5), b in arb_iter(5), c in arb_iter(5)
        ) {
            let ab = a.mul(&b);
            let ba = b.mul(&a);
            prop_assert!(ab.eq_at_precision(&ba, ab.prec(), ab.u_prec()));
            let l = ab.mul(&c);
            let r = a.mul(&b.mul(&c));
            let tp = l.prec().min(r.prec());
            let up = l.u_prec().min(r.u_prec());
            prop_assert!(l.eq_at_precision(&r, tp, up));
        }
    }
}
