//! Expansion of global functions and 2-forms into `k(P)((u))((t))`.

use serde::{Deserialize, Serialize};

use super::series2::PowerSeries2;
use super::{chart_form, Flag};
use crate::error::{Error, Result};
use crate::field::{Elem, Poly2, RatFn2};
use crate::local2d::{IteratedSeries, TwoForm};

/// Rectangular precision window: `t`-exponents below `t`, `u`-exponents of
/// power-series inputs below `u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub t: usize,
    pub u: usize,
}

impl Window {
    pub fn new(t: usize, u: usize) -> Self {
        Window { t, u }
    }

    pub fn doubled(self) -> Self {
        Window { t: 2 * self.t, u: 2 * self.u }
    }
}

/// Largest window tried by [`with_escalation`].
pub const MAX_WINDOW: Window = Window { t: 64, u: 128 };

/// Runs `f` at `start`, doubling the window while it reports a precision
/// shortfall. Returns the value and the window that produced it.
pub fn with_escalation<T>(start: Window, mut f: impl FnMut(Window) -> Result<T>) -> Result<(T, Window)> {
    let mut w = start;
    loop {
        match f(w) {
            Err(Error::InsufficientPrecision(_) | Error::OutsideWindow(_))
                if w.t < MAX_WINDOW.t || w.u < MAX_WINDOW.u =>
            {
                let d = w.doubled();
                w = Window { t: d.t.min(MAX_WINDOW.t), u: d.u.min(MAX_WINDOW.u) };
            }
            r => return r.map(|v| (v, w)),
        }
    }
}

/// Chart coordinates as series in `(u, t)` and the Jacobian
/// `d(x, y)/d(u, t)`, all truncated to the window.
fn coordinates(flag: &Flag, w: Window) -> Result<(PowerSeries2, PowerSeries2, PowerSeries2)> {
    let k = flag.residue_field();
    let (uu, tt) = (w.u.max(1), w.t + 1);
    let (x0, y0) = flag.center;
    let c = flag.local_equation();
    let (c_free, free0, fixed0) = if flag.solve_y { (c.partial_y(), y0, x0) } else { (c.partial_x(), x0, y0) };
    let fixed = PowerSeries2::constant(k, fixed0, uu, tt).add(&PowerSeries2::monomial(k, Elem::ONE, 1, 0, uu, tt));
    let t = PowerSeries2::monomial(k, Elem::ONE, 0, 1, uu, tt);
    let base = PowerSeries2::constant(k, free0, uu, tt);
    let place = |free: &PowerSeries2| if flag.solve_y { (fixed.clone(), free.clone()) } else { (free.clone(), fixed.clone()) };
    // Newton iteration for c(x, y) = t in the free coordinate
    let mut free = base;
    let mut rounds = 0;
    loop {
        let (x, y) = place(&free);
        let g = PowerSeries2::eval_poly(c, &x, &y).sub(&t);
        let dg = PowerSeries2::eval_poly(&c_free, &x, &y);
        let next = free.sub(&g.mul(&dg.inv()?));
        if next == free {
            break;
        }
        free = next;
        rounds += 1;
        if rounds > 2 * (uu + tt) + 8 {
            return Err(Error::Divergent("Hensel iteration did not converge".into()));
        }
    }
    let (x, y) = place(&free);
    let dfree = free.d_dt();
    let jac = if flag.solve_y { dfree } else { dfree.scale(k.from_int(-1)) };
    Ok((x, y, jac))
}

fn truncated(s: &PowerSeries2, w: Window) -> IteratedSeries {
    s.to_iterated().truncate_t(w.t as i64)
}

/// Splits off the exact power of the curve equation: `p = c^m * rest`.
fn strip_curve(p: &Poly2, c: &Poly2) -> (Poly2, i64) {
    let mut rest = p.clone();
    let mut m = 0;
    while let Some(q) = rest.div_exact(c) {
        rest = q;
        m += 1;
    }
    (rest, m)
}

/// Expands `f` (already in the chart of the flag). Powers of the curve
/// equation are divided out exactly, since `c(x, y) = t` holds identically,
/// so the leading t-row of each factor is known to be nonzero.
fn expand_chart_function(f: &RatFn2, flag: &Flag, w: Window) -> Result<(IteratedSeries, PowerSeries2)> {
    let emb = flag.embedding();
    let c = flag.curve.chart_poly(flag.chart);
    let (num, a) = strip_curve(&f.num, &c);
    let (den, b) = strip_curve(&f.den, &c);
    let (x, y, jac) = coordinates(flag, w)?;
    let series = |p: &Poly2| -> Result<IteratedSeries> {
        let s = truncated(&PowerSeries2::eval_poly(&p.map_into(emb), &x, &y), w);
        if s.t_coeff(0)?.is_zero_at_precision() {
            return Err(Error::InsufficientPrecision(format!(
                "restriction to {} vanishes below u^{}",
                flag.curve.name, w.u
            )));
        }
        Ok(s)
    };
    let (n, d) = (series(&num)?, series(&den)?);
    Ok((n.div(&d)?.shift_t(a - b), jac))
}

/// Image of a global function (chart `Z = 1` coordinates) in the local field
/// of the flag.
pub fn expand_at_flag(f: &RatFn2, flag: &Flag, w: Window) -> Result<IteratedSeries> {
    if f.is_zero() {
        return Err(Error::Validation("cannot expand the zero function".into()));
    }
    let fc = super::chart_function(f, flag.chart)?;
    Ok(expand_chart_function(&fc, flag, w)?.0)
}

/// `g dx ^ dy` written as `h du ^ dt` at the flag.
pub fn expand_form_at_flag(g: &RatFn2, flag: &Flag, w: Window) -> Result<TwoForm> {
    let gc = chart_form(g, flag.chart)?;
    if gc.is_zero() {
        return Ok(TwoForm::new(IteratedSeries::zero(flag.residue_field(), w.t as i64, w.u as i64)));
    }
    let (h, jac) = expand_chart_function(&gc, flag, w)?;
    Ok(TwoForm::new(h.mul(&truncated(&jac, w))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{parse_poly2, parse_rational, GaloisField};
    use crate::surface::{flag_local_params, CurveOnSurface, SurfacePoint};

    fn setup(curve: &str) -> (GaloisField, Flag) {
        let k = GaloisField::prime(5).unwrap();
        let c = CurveOnSurface::new("C", parse_poly2(curve, &k).unwrap()).unwrap();
        let p = SurfacePoint::affine(&k, Elem::ZERO, Elem::ZERO).unwrap();
        let fl = flag_local_params(&p, &c).unwrap();
        (k, fl)
    }

    fn mono(k: &GaloisField, c: i64, i: i64, j: i64) -> IteratedSeries {
        IteratedSeries::monomial(k, k.from_int(c), i, j, 6, 8)
    }

    #[test]
    fn coordinate_functions() {
        let (k, fl) = setup("y");
        let w = Window::new(6, 8);
        let x = expand_at_flag(&parse_rational("x", &k).unwrap(), &fl, w).unwrap();
        assert!(x.eq_at_precision(&mono(&k, 1, 1, 0), 6, 8));
        let inv_y = expand_at_flag(&parse_rational("1/y", &k).unwrap(), &fl, w).unwrap();
        assert_eq!(inv_y.nu_c(), Some(-1));
        assert_eq!(inv_y.coeff(0, -1).unwrap(), Elem::ONE);
        assert_eq!(inv_y.coeff(1, -1).unwrap(), Elem::ZERO);
    }

    #[test]
    fn geometric_series_in_t_over_u() {
        // u/(u - t) = sum (t/u)^n
        let (k, fl) = setup("y");
        let w = Window::new(5, 12);
        let f = expand_at_flag(&parse_rational("x/(x - y)", &k).unwrap(), &fl, w).unwrap();
        for n in 0..4 {
            assert_eq!(f.coeff(-n, n).unwrap(), Elem::ONE, "t^{n}");
            assert_eq!(f.coeff(-n + 1, n).unwrap(), Elem::ZERO);
        }
    }

    #[test]
    fn jacobian_of_standard_flag_is_one() {
        let (k, fl) = setup("y");
        let w = Window::new(4, 6);
        let g = parse_rational("1", &k).unwrap();
        let om = expand_form_at_flag(&g, &fl, w).unwrap();
        assert!(om.f.eq_at_precision(&IteratedSeries::one(&k, 4, 6), 4, 6));
        let om = expand_form_at_flag(&parse_rational("1/(x*y)", &k).unwrap(), &fl, w).unwrap();
        assert!(om.f.eq_at_precision(&mono(&k, 1, -1, -1), 3, 4));
    }

    #[test]
    fn form_along_a_parabola() {
        // y = t + u^2, so dx^dy/y = du^dt/(t + u^2) = sum (-1)^n t^n u^(-2n-2)
        let (k, fl) = setup("y - x^2");
        assert!(fl.solve_y);
        let w = Window::new(5, 16);
        let om = expand_form_at_flag(&parse_rational("1/y", &k).unwrap(), &fl, w).unwrap();
        for n in 0..4i64 {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(om.f.coeff(-2 * n - 2, n).unwrap(), k.from_int(sign));
            assert_eq!(om.f.coeff(-2 * n - 1, n).unwrap(), Elem::ZERO);
        }
    }

    #[test]
    fn swapped_flag_has_negative_jacobian() {
        let (k, fl) = setup("x");
        assert!(!fl.solve_y);
        let om = expand_form_at_flag(&parse_rational("1/(x*y)", &k).unwrap(), &fl, Window::new(4, 6)).unwrap();
        assert_eq!(om.f.coeff(-1, -1).unwrap(), k.from_int(-1));
    }

    #[test]
    fn escalation_doubles_until_success() {
        let mut seen = Vec::new();
        let (v, w) = with_escalation(Window::new(2, 2), |w| {
            seen.push(w);
            if w.t < 8 {
                Err(Error::InsufficientPrecision("small".into()))
            } else {
                Ok(w.t)
            }
        })
        .unwrap();
        assert_eq!(v, 8);
        assert_eq!(w, Window::new(8, 8));
        assert_eq!(seen.len(), 3);
    }
}
