//! The projective plane over `F_q`: curves, closed points, flags and the
//! expansion of functions and 2-forms at a flag.

mod divisor;
mod enumerate;
mod expand;
mod series2;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Elem, Embedding, GaloisField, Poly2, RatFn2};

pub use divisor::{divisor_of, divisor_of_form, FactoredDivisor};
pub use enumerate::{enumerate_points, intersection_points, lies_on, point_degree};
pub use expand::{expand_at_flag, expand_form_at_flag, with_escalation, Window};
pub use series2::PowerSeries2;

/// A plane curve, stored by its affine equation in the chart `Z = 1`.
///
/// The line at infinity has the constant affine equation `1` and degree 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveOnSurface {
    pub name: String,
    affine: Poly2,
    degree: u32,
}

impl CurveOnSurface {
    pub fn new(name: impl Into<String>, affine: Poly2) -> Result<Self> {
        let d = affine.total_degree();
        if d < 1 {
            return Err(Error::Validation("a curve needs a nonconstant equation".into()));
        }
        Ok(CurveOnSurface { name: name.into(), affine, degree: d as u32 })
    }

    pub fn line_at_infinity(base: &GaloisField) -> Self {
        CurveOnSurface { name: "inf".into(), affine: Poly2::one(base), degree: 1 }
    }

    pub fn is_line_at_infinity(&self) -> bool {
        self.affine.as_constant().is_some()
    }

    pub fn affine(&self) -> &Poly2 {
        &self.affine
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn field(&self) -> &GaloisField {
        self.affine.field()
    }

    /// Equation in the given chart.
    pub fn chart_poly(&self, chart: usize) -> Poly2 {
        self.affine.chart(self.degree, chart)
    }

    /// Same zero set, compared up to a constant factor.
    pub fn same_curve(&self, o: &Self) -> bool {
        if self.degree != o.degree {
            return false;
        }
        let f = self.field();
        let lead = |p: &Poly2| p.terms().last().map(|(_, c)| c).unwrap_or(Elem::ONE);
        let a = self.affine.scale(f.inv(lead(&self.affine)).unwrap_or(Elem::ONE));
        let b = o.affine.scale(f.inv(lead(&o.affine)).unwrap_or(Elem::ONE));
        a == b
    }

    /// Homogeneous form `F(X, Y, Z)` evaluated with its three partials.
    fn homogeneous_jet(&self, emb: &Embedding, h: [Elem; 3]) -> [Elem; 4] {
        let k = emb.big();
        let mut out = [Elem::ZERO; 4];
        for ((i, j), c) in self.affine.terms() {
            let c = emb.apply(c);
            let e = [i, j, self.degree - i - j];
            let mono = |skip: Option<usize>| -> Elem {
                let mut v = c;
                for (idx, &ex) in e.iter().enumerate() {
                    let ex = if Some(idx) == skip {
                        if ex == 0 {
                            return Elem::ZERO;
                        }
                        v = k.mul(v, k.from_int(ex as i64));
                        ex - 1
                    } else {
                        ex
                    };
                    v = k.mul(v, k.pow(h[idx], ex as i64).expect("nonnegative"));
                }
                v
            };
            out[0] = k.add(out[0], mono(None));
            for d in 0..3 {
                out[d + 1] = k.add(out[d + 1], mono(Some(d)));
            }
        }
        out
    }

    /// True when some rational point of `P^2` is a singular point of the curve.
    ///
    /// For conics this decides smoothness, since the singular locus of a
    /// degenerate conic always contains a rational point.
    pub fn has_rational_singularity(&self) -> bool {
        let f = self.field();
        let id = Embedding::cached(f, f).expect("identity embedding");
        projective_points(f).any(|h| self.homogeneous_jet(&id, h).iter().all(|v| v.is_zero()))
    }

    pub fn to_text(&self) -> String {
        if self.is_line_at_infinity() {
            "z".into()
        } else {
            self.affine.to_text()
        }
    }
}

fn projective_points(f: &GaloisField) -> impl Iterator<Item = [Elem; 3]> + '_ {
    let all: Vec<Elem> = f.elements().collect();
    let mut v = Vec::new();
    for &x in &all {
        for &y in &all {
            v.push([x, y, Elem::ONE]);
        }
    }
    for &x in &all {
        v.push([x, Elem::ONE, Elem::ZERO]);
    }
    v.push([Elem::ONE, Elem::ZERO, Elem::ZERO]);
    v.into_iter()
}

/// A closed point of `P^2`, represented by one geometric point over
/// `k(P) = F_{q^m}` in normalized homogeneous coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfacePoint {
    /// Chart in which the representative is normalized: 0 if `Z != 0`,
    /// else 1 if `Y != 0`, else 2.
    pub chart: usize,
    hom: [Elem; 3],
    field: GaloisField,
    pub degree: u32,
}

impl SurfacePoint {
    /// Point from homogeneous coordinates in `k`, which must be exactly the
    /// residue field (the coordinates generate it over the base).
    pub fn from_homogeneous(base: &GaloisField, k: &GaloisField, h: [Elem; 3]) -> Result<Self> {
        let chart = if !h[2].is_zero() {
            0
        } else if !h[1].is_zero() {
            1
        } else if !h[0].is_zero() {
            2
        } else {
            return Err(Error::Validation("[0:0:0] is not a point".into()));
        };
        let s = k.inv(h[2 - chart])?;
        let hom = [k.mul(h[0], s), k.mul(h[1], s), k.mul(h[2], s)];
        let degree = point_degree(base, k, &hom);
        if k.degree() != base.degree() * degree {
            return Err(Error::Validation(format!(
                "coordinates generate a degree-{degree} extension, not {}",
                k.degree() / base.degree()
            )));
        }
        Ok(SurfacePoint { chart, hom, field: k.clone(), degree })
    }

    /// Rational affine point `(x, y)`.
    pub fn affine(base: &GaloisField, x: Elem, y: Elem) -> Result<Self> {
        Self::from_homogeneous(base, base, [x, y, Elem::ONE])
    }

    pub fn residue_field(&self) -> &GaloisField {
        &self.field
    }

    pub fn homogeneous(&self) -> [Elem; 3] {
        self.hom
    }

    pub fn is_at_infinity(&self) -> bool {
        self.chart != 0
    }

    /// Coordinates in a chart, if the point is visible there.
    pub fn in_chart(&self, chart: usize) -> Option<(Elem, Elem)> {
        let k = &self.field;
        let [x, y, z] = self.hom;
        let (d, a, b) = match chart {
            0 => (z, x, y),
            1 => (y, x, z),
            2 => (x, y, z),
            _ => return None,
        };
        let s = k.inv(d).ok()?;
        Some((k.mul(a, s), k.mul(b, s)))
    }

    pub fn charts(&self) -> Vec<usize> {
        (0..3).filter(|&c| self.in_chart(c).is_some()).collect()
    }

    pub fn label(&self) -> String {
        let k = &self.field;
        let c: Vec<String> = self.hom.iter().map(|&a| k.format_elem(a)).collect();
        format!("[{}:{}:{}]", c[0], c[1], c[2])
    }
}

impl fmt::Display for SurfacePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())?;
        if self.degree > 1 {
            write!(f, " (deg {})", self.degree)?;
        }
        Ok(())
    }
}

/// A point on a curve together with local parameters `(u, t)`: `t` is the
/// chart equation of the curve and `u` a coordinate difference.
#[derive(Clone, Debug)]
pub struct Flag {
    pub point: SurfacePoint,
    pub curve: CurveOnSurface,
    pub chart: usize,
    /// Coordinates of the point in `chart`.
    pub center: (Elem, Elem),
    /// `u = x - x_P` and the curve is solved for `y` when true; otherwise
    /// `u = y - y_P` and the curve is solved for `x`.
    pub solve_y: bool,
    local_eq: Poly2,
    emb: Arc<Embedding>,
}

/// Flag at `(P, C)` in the canonical chart of `P`.
pub fn flag_local_params(point: &SurfacePoint, curve: &CurveOnSurface) -> Result<Flag> {
    Flag::in_chart(point, curve, point.chart)
}

impl Flag {
    pub fn in_chart(point: &SurfacePoint, curve: &CurveOnSurface, chart: usize) -> Result<Flag> {
        let center = point
            .in_chart(chart)
            .ok_or_else(|| Error::Validation(format!("{point} is not visible in chart {chart}")))?;
        let k = point.residue_field();
        let emb = Embedding::cached(curve.field(), k)?;
        let local_eq = curve.chart_poly(chart).map_into(&emb);
        if !local_eq.eval(center.0, center.1).is_zero() {
            return Err(Error::NotOnCurve);
        }
        let dy = local_eq.partial_y().eval(center.0, center.1);
        let dx = local_eq.partial_x().eval(center.0, center.1);
        let solve_y = if !dy.is_zero() {
            true
        } else if !dx.is_zero() {
            false
        } else {
            return Err(Error::SingularPoint(format!("{} at {point}", curve.to_text())));
        };
        let flag = Flag { point: point.clone(), curve: curve.clone(), chart, center, solve_y, local_eq, emb };
        debug_assert!(flag.is_valid());
        Ok(flag)
    }

    /// Smoothness and transversality re-checked from scratch.
    pub fn is_valid(&self) -> bool {
        let (x0, y0) = self.center;
        let on = self.local_eq.eval(x0, y0).is_zero();
        let d = if self.solve_y { self.local_eq.partial_y() } else { self.local_eq.partial_x() };
        on && !d.eval(x0, y0).is_zero()
    }

    pub fn residue_field(&self) -> &GaloisField {
        self.point.residue_field()
    }

    pub fn base(&self) -> &GaloisField {
        self.curve.field()
    }

    pub fn embedding(&self) -> &Embedding {
        &self.emb
    }

    /// The equation `t` of the curve in the chart, over `k(P)`.
    pub fn local_equation(&self) -> &Poly2 {
        &self.local_eq
    }

    fn chart_vars(&self) -> (&'static str, &'static str) {
        match self.chart {
            0 => ("x", "y"),
            1 => ("x/y", "z/y"),
            _ => ("y/x", "z/x"),
        }
    }

    /// Human-readable `(u, t)`.
    pub fn describe_params(&self) -> (String, String) {
        let k = self.residue_field();
        let (a, b) = self.chart_vars();
        let (var, c) = if self.solve_y { (a, self.center.0) } else { (b, self.center.1) };
        let u = if c.is_zero() { var.to_string() } else { format!("{var} - ({})", k.format_elem(c)) };
        let mut t = self.local_eq.to_text();
        if self.chart != 0 {
            t = format!("{t} in ({a}, {b}) -> (x, y)");
        }
        (u, t)
    }

    pub fn label(&self) -> String {
        format!("({}, {})", self.point, self.curve.name)
    }
}

/// `f = N/D` from the chart `Z = 1` rewritten in another chart:
/// `N_c * b^(deg D - deg N) / D_c` with `b` the second chart coordinate.
pub fn chart_function(f: &RatFn2, chart: usize) -> Result<RatFn2> {
    if chart == 0 {
        return Ok(f.clone());
    }
    let dn = f.num.total_degree().max(0);
    let dd = f.den.total_degree().max(0);
    let k = f.field();
    let n = f.num.chart(dn as u32, chart);
    let d = f.den.chart(dd as u32, chart);
    let b = Poly2::y(k);
    let e = dd - dn;
    if e >= 0 {
        RatFn2::new(n.mul(&b.pow(e as u32)), d)
    } else {
        RatFn2::new(n, d.mul(&b.pow((-e) as u32)))
    }
}

/// Coefficient of `da ^ db` in the chart for the form `g dx ^ dy`.
///
/// Chart 1 has `x = a/b, y = 1/b`, so `dx ^ dy = -da ^ db / b^3`; chart 2
/// has `x = 1/b, y = a/b`, so `dx ^ dy = da ^ db / b^3`.
pub fn chart_form(g: &RatFn2, chart: usize) -> Result<RatFn2> {
    let gc = chart_function(g, chart)?;
    if chart == 0 {
        return Ok(gc);
    }
    let k = g.field();
    let sign = if chart == 1 { k.from_int(-1) } else { Elem::ONE };
    let jac = RatFn2::new(Poly2::constant(k, sign), Poly2::y(k).pow(3))?;
    Ok(gc.mul(&jac))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::parse_poly2;

    fn f5() -> GaloisField {
        GaloisField::prime(5).unwrap()
    }

    fn curve(k: &GaloisField, s: &str) -> CurveOnSurface {
        CurveOnSurface::new(s, parse_poly2(s, k).unwrap()).unwrap()
    }

    #[test]
    fn flag_on_a_line() {
        let k = f5();
        let p = SurfacePoint::affine(&k, Elem::ZERO, Elem::ZERO).unwrap();
        let fl = flag_local_params(&p, &curve(&k, "y")).unwrap();
        assert!(fl.solve_y);
        assert_eq!(fl.describe_params(), ("x".to_string(), "y".to_string()));
    }

    #[test]
    fn flag_on_a_cubic_uses_y() {
        let k = f5();
        let p = SurfacePoint::affine(&k, Elem::ZERO, Elem::ZERO).unwrap();
        let fl = flag_local_params(&p, &curve(&k, "y^2 - x^3 - x")).unwrap();
        assert!(!fl.solve_y);
        assert_eq!(fl.describe_params().0, "y");
    }

    #[test]
    fn cusp_is_singular() {
        let k = f5();
        let p = SurfacePoint::affine(&k, Elem::ZERO, Elem::ZERO).unwrap();
        let e = flag_local_params(&p, &curve(&k, "y^2 - x^3")).unwrap_err();
        assert!(matches!(e, Error::SingularPoint(_)));
    }

    #[test]
    fn point_off_curve() {
        let k = f5();
        let p = SurfacePoint::affine(&k, Elem::ONE, Elem::ONE).unwrap();
        assert_eq!(flag_local_params(&p, &curve(&k, "y")).unwrap_err(), Error::NotOnCurve);
    }

    #[test]
    fn charts_of_points() {
        let k = f5();
        let p = SurfacePoint::affine(&k, Elem(2), Elem(0)).unwrap();
        assert_eq!(p.charts(), vec![0, 2]);
        assert_eq!(p.in_chart(2), Some((Elem(0), Elem(3))));
        let q = SurfacePoint::from_homogeneous(&k, &k, [Elem(3), Elem(2), Elem(0)]).unwrap();
        assert_eq!(q.chart, 1);
        assert_eq!(q.homogeneous(), [Elem(4), Elem(1), Elem(0)]);
    }

    #[test]
    fn degenerate_conics_are_detected() {
        let k = f5();
        assert!(curve(&k, "x^2 - 2*y^2").has_rational_singularity());
        assert!(curve(&k, "x*y").has_rational_singularity());
        assert!(!curve(&k, "x^2 + y^2 - 1").has_rational_singularity());
        assert!(!curve(&k, "y - x^2").has_rational_singularity());
    }

    #[test]
    fn line_at_infinity_in_charts() {
        let k = f5();
        let l = CurveOnSurface::line_at_infinity(&k);
        assert_eq!(l.chart_poly(1), Poly2::y(&k));
        assert_eq!(l.chart_poly(2), Poly2::y(&k));
        assert_eq!(l.chart_poly(0), Poly2::one(&k));
    }
}
