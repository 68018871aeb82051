//! Cohomology of the adelic complex `K ⊕ A_1(D) -> A` on `P^1`.

use serde::Serialize;

use super::linalg::{left_kernel, rank};
use super::window::AdeleWindow;
use super::{DivisorOnCurve, Place};
use crate::error::{Error, Result};
use crate::field::{Elem, Poly, RatFn};

/// Largest `N` tried when widening the window `E = D^+ + N·[inf]`.
pub const MAX_WIDENING: i64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Cohomology {
    pub h0: usize,
    pub h1: usize,
    /// Extra degree at infinity of the window at which the values settled.
    pub widening: i64,
}

fn positive_part(d: &DivisorOnCurve) -> DivisorOnCurve {
    let mut out = DivisorOnCurve::zero(d.field());
    for (p, n) in d.support() {
        if n > 0 {
            out.add_place(p, n);
        }
    }
    out
}

/// The functions `x^i / h` spanning `L(E)` for an effective `E`, where `h` is
/// the product of the finite part.
fn polar_basis(e: &DivisorOnCurve) -> Vec<RatFn> {
    let k = e.field();
    let mut h = Poly::one(k);
    for (p, n) in e.support() {
        if let Place::Finite(g) = p {
            h = h.mul(&g.pow(n as u64));
        }
    }
    let top = h.deg() + e.coeff(&Place::Infinity);
    (0..=top)
        .map(|i| RatFn::new(Poly::monomial(k, Elem::ONE, i as usize), h.clone()).expect("nonzero denominator"))
        .collect()
}

/// The map `L(E) -> A_1(E) / A_1(D)` as rows, one per basis function.
fn principal_parts(e: &DivisorOnCurve, d: &DivisorOnCurve) -> Result<(Vec<RatFn>, Vec<Vec<Elem>>, usize)> {
    let w = AdeleWindow::new(e, d)?;
    let basis = polar_basis(e);
    let rows = basis.iter().map(|f| w.embed(f).map(|a| a.coords)).collect::<Result<Vec<_>>>()?;
    Ok((basis, rows, w.dim()))
}

/// `(h0, h1)` of the complex at a fixed window `E >= D`: the kernel of
/// `L(E) -> A_1(E)/A_1(D)` is `L(D)`, the cokernel is `A_1(E)/(L(E) + A_1(D))`.
fn at_window(d: &DivisorOnCurve, n: i64) -> Result<(usize, usize)> {
    let mut e = positive_part(d);
    e.add_place(&Place::Infinity, n);
    let (basis, rows, dim) = principal_parts(&e, d)?;
    let r = rank(d.field(), &rows, dim);
    Ok((basis.len() - r, dim - r))
}

/// Kernel and cokernel dimensions of `K ⊕ A_1(D) -> A`, computed on windows
/// `D^+ + N·[inf]` for `N = 1, 2, 4, ...` until the pair repeats on two
/// successive doublings.
pub fn rr_cohomology(d: &DivisorOnCurve) -> Result<Cohomology> {
    let mut history: Vec<(usize, usize)> = Vec::new();
    let mut n = 1;
    while n <= MAX_WIDENING {
        history.push(at_window(d, n)?);
        let m = history.len();
        if m >= 3 && history[m - 1] == history[m - 2] && history[m - 2] == history[m - 3] {
            let (h0, h1) = history[m - 1];
            return Ok(Cohomology { h0, h1, widening: n });
        }
        n *= 2;
    }
    Err(Error::NoStabilization(format!("rr_cohomology of {} up to N = {MAX_WIDENING}", d.to_text())))
}

/// A basis of the Riemann-Roch space `L(D)`.
pub fn riemann_roch_basis(d: &DivisorOnCurve) -> Result<Vec<RatFn>> {
    let e = positive_part(d);
    let (basis, rows, dim) = principal_parts(&e, d)?;
    let k = d.field();
    let mut out = Vec::new();
    for c in left_kernel(k, &rows, dim) {
        let mut f = RatFn::zero(k);
        for (ci, b) in c.iter().zip(&basis) {
            if !ci.is_zero() {
                f = f.add(&b.mul(&RatFn::from_poly(Poly::constant(k, *ci))));
            }
        }
        out.push(f);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GaloisField;

    fn div(src: &str, p: u32) -> DivisorOnCurve {
        DivisorOnCurve::parse(src, &GaloisField::prime(p).unwrap()).unwrap()
    }

    #[test]
    fn examples() {
        let c = rr_cohomology(&div("0", 3)).unwrap();
        assert_eq!((c.h0, c.h1), (1, 0));
        let c = rr_cohomology(&div("3*[x]", 3)).unwrap();
        assert_eq!((c.h0, c.h1), (4, 0));
        let c = rr_cohomology(&div("-1*[inf]", 3)).unwrap();
        assert_eq!((c.h0, c.h1), (0, 0));
        let c = rr_cohomology(&div("-2*[inf]", 5)).unwrap();
        assert_eq!((c.h0, c.h1), (0, 1));
        let c = rr_cohomology(&div("-3*[x^2+1] + 1*[inf]", 3)).unwrap();
        assert_eq!((c.h0, c.h1), (0, 4));
    }

    #[test]
    fn basis_has_the_right_poles_and_zeros() {
        let d = div("2*[x] - 1*[x+1] + 1*[inf]", 5);
        let basis = riemann_roch_basis(&d).unwrap();
        assert_eq!(basis.len(), 3);
        for f in &basis {
            let div_f = DivisorOnCurve::principal(f).unwrap();
            assert!(div_f.add(&d).support().all(|(_, n)| n >= 0), "{f}");
        }
    }
}
