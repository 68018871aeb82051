//! Closed points on plane curves, one representative per Galois orbit.

use super::{CurveOnSurface, SurfacePoint};
use crate::error::{Error, Result};
use crate::field::{find_roots, Elem, Embedding, GaloisField};

/// `F_{q^m}` over the base `F_q`.
pub(crate) fn extension(base: &GaloisField, m: u32) -> Result<GaloisField> {
    if m == 1 {
        Ok(base.clone())
    } else {
        GaloisField::new(base.characteristic(), base.degree() * m)
    }
}

fn frob(k: &GaloisField, q: u32, h: &[Elem; 3]) -> [Elem; 3] {
    h.map(|a| k.pow(a, q as i64).expect("nonnegative"))
}

/// Degree over the base of the field generated by normalized coordinates.
pub fn point_degree(base: &GaloisField, k: &GaloisField, hom: &[Elem; 3]) -> u32 {
    let q = base.order();
    let mut h = frob(k, q, hom);
    let mut m = 1;
    while h != *hom {
        h = frob(k, q, &h);
        m += 1;
    }
    m
}

/// All geometric points of the curve over `k`, normalized as in [`SurfacePoint`].
fn points_over(curve: &CurveOnSurface, emb: &Embedding) -> Vec<[Elem; 3]> {
    let k = emb.big();
    let mut out = Vec::new();
    if !curve.is_line_at_infinity() {
        let c0 = curve.chart_poly(0).map_into(emb);
        for x in k.elements() {
            for y in find_roots(&c0.specialize_x(x)) {
                out.push([x, y, Elem::ONE]);
            }
        }
    }
    let c1 = curve.chart_poly(1).map_into(emb);
    for a in find_roots(&c1.specialize_y(Elem::ZERO)) {
        out.push([a, Elem::ONE, Elem::ZERO]);
    }
    if curve.chart_poly(2).map_into(emb).eval(Elem::ZERO, Elem::ZERO).is_zero() {
        out.push([Elem::ONE, Elem::ZERO, Elem::ZERO]);
    }
    out
}

/// Closed points of degree `<= max_degree` on the curve, sorted by degree.
pub fn enumerate_points(curve: &CurveOnSurface, max_degree: u32) -> Result<Vec<SurfacePoint>> {
    let base = curve.field();
    let q = base.order();
    let mut out = Vec::new();
    for m in 1..=max_degree {
        let k = extension(base, m)?;
        let emb = Embedding::cached(base, &k)?;
        let mut found: Vec<[Elem; 3]> = points_over(curve, &emb)
            .into_iter()
            .filter(|h| point_degree(base, &k, h) == m)
            .filter(|h| {
                let mut g = frob(&k, q, h);
                while g != *h {
                    if g < *h {
                        return false;
                    }
                    g = frob(&k, q, &g);
                }
                true
            })
            .collect();
        found.sort();
        for h in found {
            out.push(SurfacePoint::from_homogeneous(base, &k, h)?);
        }
    }
    Ok(out)
}

/// True when the point lies on the curve.
pub fn lies_on(point: &SurfacePoint, curve: &CurveOnSurface) -> Result<bool> {
    let k = point.residue_field();
    let emb = Embedding::cached(curve.field(), k)?;
    let (a, b) = point.in_chart(point.chart).expect("canonical chart");
    Ok(curve.chart_poly(point.chart).map_into(&emb).eval(a, b).is_zero())
}

/// Closed points of `a ∩ b`; all of them have degree at most `deg a * deg b`.
pub fn intersection_points(a: &CurveOnSurface, b: &CurveOnSurface) -> Result<Vec<SurfacePoint>> {
    if a.same_curve(b) {
        return Err(Error::Validation(format!("{} meets itself", a.name)));
    }
    let bound = a.degree() * b.degree();
    let mut out = Vec::new();
    for p in enumerate_points(a, bound)? {
        if lies_on(&p, b)? {
            out.push(p);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::parse_poly2;

    fn curve(k: &GaloisField, s: &str) -> CurveOnSurface {
        CurveOnSurface::new(s, parse_poly2(s, k).unwrap()).unwrap()
    }

    #[test]
    fn line_has_q_plus_one_points() {
        let k = GaloisField::prime(5).unwrap();
        let pts = enumerate_points(&curve(&k, "y"), 1).unwrap();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts.iter().filter(|p| p.is_at_infinity()).count(), 1);
    }

    #[test]
    fn degree_two_points_on_projective_line() {
        let k = GaloisField::prime(2).unwrap();
        let pts = enumerate_points(&curve(&k, "y"), 2).unwrap();
        assert_eq!(pts.iter().filter(|p| p.degree == 2).count(), 1);
        let inf = CurveOnSurface::line_at_infinity(&k);
        let pts = enumerate_points(&inf, 3).unwrap();
        // necklace counts for F_2: 3, 1, 2
        let counts: Vec<usize> = (1..=3).map(|d| pts.iter().filter(|p| p.degree == d).count()).collect();
        assert_eq!(counts, vec![3, 1, 2]);
    }

    #[test]
    fn smooth_conics_have_q_plus_one_points() {
        for (p, s) in [(3, "x^2 + y^2 - 1"), (5, "x*y - 1"), (5, "y - x^2"), (7, "x^2 + y^2 + 1"), (2, "x^2 + x*y + y^2 + 1")] {
            let k = GaloisField::prime(p).unwrap();
            let c = curve(&k, s);
            assert!(!c.has_rational_singularity(), "{s}");
            assert_eq!(enumerate_points(&c, 1).unwrap().len(), p as usize + 1, "{s} over F_{p}");
        }
    }

    #[test]
    fn conic_meets_line_in_a_degree_two_point() {
        // x^2 - 2 is irreducible over F_5, so y = 0 meets it in one point of degree 2
        let k = GaloisField::prime(5).unwrap();
        let pts = intersection_points(&curve(&k, "x^2 + y^2 - 2"), &curve(&k, "y")).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].degree, 2);
        let k2 = pts[0].residue_field();
        let [x, _, _] = pts[0].homogeneous();
        assert_eq!(k2.mul(x, x), k2.from_int(2));
    }

    #[test]
    fn intersections_match_brute_force_over_extension() {
        // every closed point of degree d | 4 contributes d geometric points over F_81
        let k = GaloisField::prime(3).unwrap();
        let big = GaloisField::new(3, 4).unwrap();
        let emb = Embedding::new(&k, &big).unwrap();
        for (a, b) in [("x^2 + y^2 - 1", "x*y - 2"), ("x^2 + y^2 - 1", "y - x^2 - 1"), ("x^2 - y", "x*y + 1")] {
            let (ca, cb) = (curve(&k, a), curve(&k, b));
            let (pa, pb) = (ca.affine().map_into(&emb), cb.affine().map_into(&emb));
            let mut brute = 0;
            for x in big.elements() {
                for y in big.elements() {
                    if pa.eval(x, y).is_zero() && pb.eval(x, y).is_zero() {
                        brute += 1;
                    }
                }
            }
            let pts = intersection_points(&ca, &cb).unwrap();
            let affine: u32 = pts.iter().filter(|p| !p.is_at_infinity() && 4 % p.degree == 0).map(|p| p.degree).sum();
            assert_eq!(affine, brute, "{a} / {b}");
        }
    }
}
