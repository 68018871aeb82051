//! Finite fields `F_{p^m}` with table-driven arithmetic.
//!
//! An element is stored as its coefficient vector over `F_p` packed into a
//! single integer in base `p` (coefficient of `a^i` is digit `i`). Multiplication
//! and inversion go through discrete log / antilog tables built once per field.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Largest field order we are willing to tabulate.
pub const MAX_FIELD_ORDER: u64 = 1 << 22;

/// Packed element of some [`GaloisField`]. Meaningless without its field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct FieldInner {
    p: u32,
    degree: u32,
    order: u32,
    /// Monic modulus over `F_p`, lowest coefficient first, length `degree + 1`.
    modulus: Vec<u32>,
    /// `exp[i] = g^i` for `i < 2(order-1)`.
    exp: Vec<u32>,
    /// `log[a]` for `a != 0`.
    log: Vec<u32>,
}

/// A finite field `F_{p^m}`. Cheap to clone; equal fields share tables.
#[derive(Clone)]
pub struct GaloisField(Arc<FieldInner>);

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}
impl Eq for GaloisField {}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.degree)
    }
}

impl fmt::Display for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.degree == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{}", self.0.p, self.0.degree)
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn cache() -> &'static Mutex<HashMap<(u32, u32), GaloisField>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), GaloisField>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

// Dense polynomial helpers over the prime field, used only while building tables.
fn pp_trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn pp_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    pp_trim(&mut r);
    let dm = m.len() - 1;
    let inv_lead = mod_inv(m[dm], p);
    while r.len() > dm {
        let lead = r[r.len() - 1];
        let shift = r.len() - 1 - dm;
        let c = (lead as u64 * inv_lead as u64 % p as u64) as u32;
        for (i, &mi) in m.iter().enumerate() {
            let sub = (c as u64 * mi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        pp_trim(&mut r);
    }
    r
}

fn pp_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
    pp_rem(&prod, m, p)
}

fn pp_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut r: Vec<u32> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    pp_trim(&mut r);
    r
}

fn pp_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    pp_trim(&mut x);
    pp_trim(&mut y);
    while !y.is_empty() {
        let r = pp_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// `x^(p^k) mod m` by repeated p-th powering.
fn pp_frobenius_x(m: &[u32], p: u32, k: u32) -> Vec<u32> {
    let mut cur = pp_rem(&[0, 1], m, p);
    for _ in 0..k {
        // raise to the p-th power by square-and-multiply
        let base = cur.clone();
        let mut acc = vec![1u32];
        let mut e = p;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = pp_mulmod(&acc, &b, m, p);
            }
            b = pp_mulmod(&b, &b, m, p);
            e >>= 1;
        }
        cur = acc;
    }
    cur
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin irreducibility test for a monic polynomial over `F_p`.
pub(crate) fn is_irreducible_prime_poly(m: &[u32], p: u32) -> bool {
    let n = (m.len() - 1) as u32;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let x = vec![0, 1];
    let full = pp_frobenius_x(m, p, n);
    if !pp_sub(&full, &x, p).is_empty() {
        return false;
    }
    for r in prime_factors(n as u64) {
        let h = pp_frobenius_x(m, p, n / r as u32);
        let diff = pp_sub(&h, &x, p);
        let g = pp_gcd(m, &diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

pub(crate) fn mod_inv(a: u32, p: u32) -> u32 {
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, a as i64 % p as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    (t.rem_euclid(p as i64)) as u32
}

impl GaloisField {
    /// The field `F_{p^m}` with the lexicographically smallest monic irreducible
    /// modulus (compared as base-`p` integers of the low coefficients).
    pub fn new(p: u32, m: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(Error::InvalidField("extension degree must be positive".into()));
        }
        let order = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
        if order > MAX_FIELD_ORDER {
            return Err(Error::InvalidField(format!("order {p}^{m} too large")));
        }
        if let Some(f) = cache().lock().unwrap().get(&(p, m)) {
            return Ok(f.clone());
        }
        let modulus = if m == 1 {
            vec![0, 1]
        } else {
            let count = (p as u64).pow(m);
            (0..count)
                .map(|code| {
                    let mut v = Vec::with_capacity(m as usize + 1);
                    let mut c = code;
                    for _ in 0..m {
                        v.push((c % p as u64) as u32);
                        c /= p as u64;
                    }
                    v.push(1);
                    v
                })
                .find(|v| v[0] != 0 && is_irreducible_prime_poly(v, p))
                .expect("irreducible polynomials exist in every degree")
        };
        let field = Self::build(p, modulus);
        cache().lock().unwrap().insert((p, m), field.clone());
        Ok(field)
    }

    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1)
    }

    /// Field with an explicitly chosen modulus; checked for irreducibility.
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        let mut m: Vec<u32> = modulus.iter().map(|c| c % p).collect();
        pp_trim(&mut m);
        if m.len() < 2 || m[m.len() - 1] != 1 {
            return Err(Error::InvalidField("modulus must be monic of positive degree".into()));
        }
        if (p as u64).pow(m.len() as u32 - 1) > MAX_FIELD_ORDER {
            return Err(Error::InvalidField("order too large".into()));
        }
        if !is_irreducible_prime_poly(&m, p) {
            return Err(Error::InvalidField(format!("modulus {m:?} is reducible over F_{p}")));
        }
        Ok(Self::build(p, m))
    }

    fn build(p: u32, modulus: Vec<u32>) -> Self {
        let degree = (modulus.len() - 1) as u32;
        let order = p.pow(degree);
        let to_vec = |a: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(degree as usize);
            let mut c = a;
            for _ in 0..degree {
                v.push(c % p);
                c /= p;
            }
            v
        };
        let pack = |v: &[u32]| -> u32 {
            let mut acc = 0u32;
            for &c in v.iter().rev() {
                acc = acc * p + c;
            }
            acc
        };
        let group = (order - 1) as u64;
        let factors = prime_factors(group);
        let mut exp = vec![0u32; 2 * (order as usize - 1).max(1)];
        let mut log = vec![0u32; order as usize];
        'search: for cand in 1..order {
            let g = to_vec(cand);
            // order test on the multiplicative group
            let pow = |e: u64| -> Vec<u32> {
                let mut acc = vec![1u32];
                let mut b = g.clone();
                let mut e = e;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = pp_mulmod(&acc, &b, &modulus, p);
                    }
                    b = pp_mulmod(&b, &b, &modulus, p);
                    e >>= 1;
                }
                acc
            };
            for &f in &factors {
                if pow(group / f) == vec![1u32] {
                    continue 'search;
                }
            }
            let mut cur = vec![1u32];
            for i in 0..(order - 1) as usize {
                let packed = pack(&cur);
                exp[i] = packed;
                log[packed as usize] = i as u32;
                cur = pp_mulmod(&cur, &g, &modulus, p);
            }
            break;
        }
        if order == 2 {
            exp[0] = 1;
        }
        let n = (order - 1) as usize;
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        GaloisField(Arc::new(FieldInner { p, degree, order, modulus, exp, log }))
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.degree
    }

    pub fn order(&self) -> u32 {
        self.0.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// Image of an integer under `Z -> F_p -> F_{p^m}`.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// The generator `a` of the power basis (the class of `x` modulo the modulus).
    pub fn generator(&self) -> Elem {
        if self.0.degree == 1 {
            // x mod (x - 0) is 0 for the default prime-field modulus
            Elem(0)
        } else {
            Elem(self.0.p)
        }
    }

    /// A fixed primitive element (generator of the multiplicative group).
    pub fn primitive_element(&self) -> Elem {
        if self.0.order == 2 {
            Elem(1)
        } else {
            Elem(self.0.exp[1])
        }
    }

    pub fn coefficients(&self, a: Elem) -> Vec<u32> {
        let p = self.0.p;
        let mut v = Vec::with_capacity(self.0.degree as usize);
        let mut c = a.0;
        for _ in 0..self.0.degree {
            v.push(c % p);
            c /= p;
        }
        v
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> Elem {
        let p = self.0.p;
        let mut acc = 0u32;
        for i in (0..self.0.degree as usize).rev() {
            acc = acc * p + coeffs.get(i).copied().unwrap_or(0) % p;
        }
        Elem(acc)
    }

    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.0.order
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.order).map(Elem)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.p;
        if self.0.degree == 1 {
            let s = a.0 + b.0;
            return Elem(if s >= p { s - p } else { s });
        }
        if p == 2 {
            return Elem(a.0 ^ b.0);
        }
        let (mut x, mut y, mut acc, mut place) = (a.0, b.0, 0u32, 1u32);
        while x > 0 || y > 0 {
            let d = (x % p + y % p) % p;
            acc += d * place;
            place *= p;
            x /= p;
            y /= p;
        }
        Elem(acc)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        if self.0.degree == 1 {
            return Elem(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let (mut x, mut acc, mut place) = (a.0, 0u32, 1u32);
        while x > 0 {
            let d = (p - x % p) % p;
            acc += d * place;
            place *= p;
            x /= p;
        }
        Elem(acc)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        if self.0.degree == 1 {
            return Elem((a.0 as u64 * b.0 as u64 % self.0.p as u64) as u32);
        }
        let i = self.0.log[a.0 as usize] + self.0.log[b.0 as usize];
        Elem(self.0.exp[i as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        if self.0.degree == 1 {
            return Ok(Elem(mod_inv(a.0, self.0.p)));
        }
        let n = self.0.order - 1;
        let l = self.0.log[a.0 as usize];
        Ok(Elem(self.0.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` for any integer `e`; `0^0 = 1`, negative powers of zero fail.
    pub fn pow(&self, a: Elem, e: i64) -> Result<Elem> {
        if a.0 == 0 {
            return match e.cmp(&0) {
                std::cmp::Ordering::Equal => Ok(Elem::ONE),
                std::cmp::Ordering::Greater => Ok(Elem::ZERO),
                std::cmp::Ordering::Less => Err(Error::DivisionByZero),
            };
        }
        let n = (self.0.order - 1) as i64;
        if n == 1 {
            return Ok(Elem::ONE);
        }
        let l = self.0.log[a.0 as usize] as i64;
        let idx = (l * (e.rem_euclid(n))).rem_euclid(n);
        Ok(Elem(self.0.exp[idx as usize]))
    }

    /// Frobenius `a -> a^p`.
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.0.p as i64).expect("nonnegative exponent")
    }

    /// Degree over `F_p` of the subfield generated by `a`.
    pub fn element_degree(&self, a: Elem) -> u32 {
        let mut x = self.frobenius(a);
        let mut d = 1;
        while x != a {
            x = self.frobenius(x);
            d += 1;
        }
        d
    }

    /// Whether `a` lies in the prime field.
    pub fn is_prime_field_element(&self, a: Elem) -> bool {
        a.0 < self.0.p
    }

    pub fn format_elem(&self, a: Elem) -> String {
        if self.0.degree == 1 {
            return a.0.to_string();
        }
        let coeffs = self.coefficients(a);
        let mut terms = Vec::new();
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let t = match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "a".to_string(),
                (1, c) => format!("{c}*a"),
                (i, 1) => format!("a^{i}"),
                (i, c) => format!("{c}*a^{i}"),
            };
            terms.push(t);
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

/// Element bundled with its field, for checked arithmetic at API boundaries.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteFieldElement {
    field: GaloisField,
    elem: Elem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    Inv,
    Pow(i64),
}

impl FiniteFieldElement {
    pub fn new(field: &GaloisField, elem: Elem) -> Result<Self> {
        if !field.contains(elem) {
            return Err(Error::Validation(format!("{} is not an element of {field}", elem.0)));
        }
        Ok(FiniteFieldElement { field: field.clone(), elem })
    }

    pub fn from_int(field: &GaloisField, n: i64) -> Self {
        FiniteFieldElement { field: field.clone(), elem: field.from_int(n) }
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn elem(&self) -> Elem {
        self.elem
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(Self { field: self.field.clone(), elem: self.field.add(self.elem, other.elem) })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(Self { field: self.field.clone(), elem: self.field.sub(self.elem, other.elem) })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(Self { field: self.field.clone(), elem: self.field.mul(self.elem, other.elem) })
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(Self { field: self.field.clone(), elem: self.field.inv(self.elem)? })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        Ok(Self { field: self.field.clone(), elem: self.field.pow(self.elem, e)? })
    }

    pub fn is_zero(&self) -> bool {
        self.elem.is_zero()
    }
}

/// `field_arith`: one binary/unary operation with field checks.
pub fn field_arith(
    a: &FiniteFieldElement,
    b: Option<&FiniteFieldElement>,
    op: FieldOp,
) -> Result<FiniteFieldElement> {
    let need_b = || b.ok_or_else(|| Error::Validation("second operand required".into()));
    match op {
        FieldOp::Add => a.checked_add(need_b()?),
        FieldOp::Mul => a.checked_mul(need_b()?),
        FieldOp::Inv => a.inv(),
        FieldOp::Pow(e) => a.pow(e),
    }
}

impl fmt::Debug for FiniteFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.field.format_elem(self.elem), self.field)
    }
}

impl fmt::Display for FiniteFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format_elem(self.elem))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f5 = GaloisField::prime(5).unwrap();
        assert_eq!(f5.add(Elem(2), Elem(3)), Elem(0));
        let f7 = GaloisField::prime(7).unwrap();
        // extended Euclid: 3 * 5 = 15 = 1 mod 7
        assert_eq!(f7.inv(Elem(3)).unwrap(), Elem(5));
        for a in f5.elements() {
            assert_eq!(f5.pow(a, 5).unwrap(), a);
        }
    }

    #[test]
    fn inverse_of_zero_fails() {
        let f = GaloisField::new(3, 2).unwrap();
        assert_eq!(f.inv(Elem::ZERO), Err(Error::DivisionByZero));
    }

    #[test]
    fn field_mismatch_detected() {
        let a = FiniteFieldElement::from_int(&GaloisField::prime(5).unwrap(), 1);
        let b = FiniteFieldElement::from_int(&GaloisField::prime(7).unwrap(), 1);
        assert!(matches!(a.checked_add(&b), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn smallest_modulus_is_chosen() {
        // x^2 + 1 is reducible over F_5 and x^2 + 2 is the first irreducible
        let f = GaloisField::new(5, 2).unwrap();
        assert_eq!(f.modulus(), &[2, 0, 1]);
        let f4 = GaloisField::new(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
    }

    #[test]
    fn frobenius_order_in_extensions() {
        for (p, m) in [(2u32, 3u32), (3, 2), (5, 2), (2, 4), (7, 2), (3, 3)] {
            let f = GaloisField::new(p, m).unwrap();
            for a in f.elements() {
                assert_eq!(f.pow(a, f.order() as i64).unwrap(), a);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
                }
            }
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        assert!(GaloisField::with_modulus(5, &[1, 0, 1]).is_err());
        assert!(GaloisField::with_modulus(3, &[1, 0, 1]).is_ok());
    }

    #[test]
    fn element_degree_counts_generated_subfield() {
        let f = GaloisField::new(2, 4).unwrap();
        let degs: Vec<u32> = f.elements().map(|a| f.element_degree(a)).collect();
        assert_eq!(degs.iter().filter(|&&d| d == 1).count(), 2);
        assert_eq!(degs.iter().filter(|&&d| d == 2).count(), 2);
        assert_eq!(degs.iter().filter(|&&d| d == 4).count(), 12);
    }
}
