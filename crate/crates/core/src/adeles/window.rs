//! Finite-level adeles `A_1(high) / A_1(low)` on `P^1` over a prime field.

use crate::error::{Error, Result};
use crate::field::{Elem, GaloisField, RatFn};

use super::{DivisorOnCurve, Place};

#[derive(Clone, Debug)]
struct Slot {
    place: Place,
    k: GaloisField,
    /// Exponents `lo..hi` of the local parameter are kept.
    lo: i64,
    hi: i64,
}

/// The quotient `A_1(high) / A_1(low)` for `low <= high`, with an explicit
/// `F_p`-basis: places in increasing order, then exponents, then the power
/// basis of the residue field.
#[derive(Clone, Debug)]
pub struct AdeleWindow {
    field: GaloisField,
    high: DivisorOnCurve,
    low: DivisorOnCurve,
    slots: Vec<Slot>,
}

/// An element of an [`AdeleWindow`] in window coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLevelAdele {
    pub coords: Vec<Elem>,
}

impl AdeleWindow {
    pub fn new(high: &DivisorOnCurve, low: &DivisorOnCurve) -> Result<Self> {
        let field = high.field().clone();
        if field.degree() != 1 {
            return Err(Error::Validation(format!("adelic windows need a prime field, got {field}")));
        }
        if !low.le(high) {
            return Err(Error::Validation(format!("window bounds out of order: {} > {}", low.to_text(), high.to_text())));
        }
        let mut places: Vec<Place> = high.support().chain(low.support()).map(|(p, _)| p.clone()).collect();
        places.sort();
        places.dedup();
        let mut slots = Vec::new();
        for p in places {
            let (lo, hi) = (-high.coeff(&p), -low.coeff(&p));
            if lo < hi {
                let (k, _) = p.residue_field(&field)?;
                slots.push(Slot { place: p, k, lo, hi });
            }
        }
        Ok(AdeleWindow { field, high: high.clone(), low: low.clone(), slots })
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn high(&self) -> &DivisorOnCurve {
        &self.high
    }

    pub fn low(&self) -> &DivisorOnCurve {
        &self.low
    }

    /// Dimension over `F_p`, equal to `deg high - deg low`.
    pub fn dim(&self) -> usize {
        self.slots.iter().map(|s| (s.hi - s.lo) as usize * s.place.degree() as usize).sum()
    }

    /// Coordinates `(place, exponent)` of each basis vector.
    pub fn labels(&self) -> Vec<(Place, i64, usize)> {
        let mut out = Vec::new();
        for s in &self.slots {
            for e in s.lo..s.hi {
                for j in 0..s.place.degree() as usize {
                    out.push((s.place.clone(), e, j));
                }
            }
        }
        out
    }

    /// Image of a global function lying in `A_1(high)`.
    pub fn embed(&self, f: &RatFn) -> Result<FiniteLevelAdele> {
        let mut coords = Vec::with_capacity(self.dim());
        for s in &self.slots {
            let d = s.place.degree() as usize;
            if f.is_zero() {
                coords.extend(std::iter::repeat(Elem::ZERO).take((s.hi - s.lo) as usize * d));
                continue;
            }
            if s.place.valuation(f)? < s.lo {
                return Err(Error::OutsideWindow(format!("{} has a pole of order beyond {} at {}", f, -s.lo, s.place)));
            }
            let ser = s.place.expand(f, s.hi)?;
            for e in s.lo..s.hi {
                let mut c = s.k.coefficients(ser.coeff(e)?);
                c.resize(d, 0);
                coords.extend(c.into_iter().map(Elem));
            }
        }
        Ok(FiniteLevelAdele { coords })
    }

    /// Indicator of the coordinates making up `A_1(d) / A_1(low)` for
    /// `low <= d <= high`.
    pub fn sub_window(&self, d: &DivisorOnCurve) -> Result<Vec<bool>> {
        if !self.low.le(d) || !d.le(&self.high) {
            return Err(Error::Validation(format!("{} is not between the window bounds", d.to_text())));
        }
        Ok(self.labels().iter().map(|(p, e, _)| *e >= -d.coeff(p)).collect())
    }

    /// Gram matrix of `<a, b> = sum_P Tr res_P(a b dx)`.
    pub fn residue_pairing(&self) -> Vec<Vec<Elem>> {
        let labels = self.labels();
        let k = &self.field;
        let n = labels.len();
        let mut g = vec![vec![Elem::ZERO; n]; n];
        for (i, (p, e, a)) in labels.iter().enumerate() {
            for (j, (q, f, b)) in labels.iter().enumerate() {
                if p != q {
                    continue;
                }
                g[i][j] = match p {
                    Place::Infinity if e + f == 1 => k.neg(Elem::ONE),
                    Place::Finite(_) if e + f == -1 => {
                        let slot = self.slots.iter().find(|s| &s.place == p).expect("slot");
                        let unit = |m: usize| {
                            let mut c = vec![0; slot.place.degree() as usize];
                            c[m] = 1;
                            slot.k.from_coefficients(&c)
                        };
                        let (_, emb) = p.residue_field(k).expect("residue field");
                        emb.trace(slot.k.mul(unit(*a), unit(*b)))
                    }
                    _ => Elem::ZERO,
                };
            }
        }
        g
    }
}

/// `A_1(D)` for `D = sum n_P [P]` is `{a : ν_P(a_P) >= -n_P}`; the canonical
/// divisor of `dx` is `-2[inf]`.
pub fn canonical_divisor(field: &GaloisField) -> DivisorOnCurve {
    DivisorOnCurve::from_places(field, &[(Place::Infinity, -2)])
}

/// Coefficientwise maximum.
pub fn divisor_max(a: &DivisorOnCurve, b: &DivisorOnCurve) -> DivisorOnCurve {
    let mut out = a.clone();
    for (p, n) in b.support() {
        let m = a.coeff(p);
        if n > m {
            out.add_place(p, n - m);
        }
    }
    for (p, m) in a.support() {
        if b.coeff(p) == 0 && m < 0 {
            out.add_place(p, -m);
        }
    }
    out
}
