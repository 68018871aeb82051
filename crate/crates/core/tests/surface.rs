use adelia::field::{parse_poly2, GaloisField, Poly2, RatFn2};
use adelia::local2d::residue_2d;
use adelia::surface::{
    divisor_of, enumerate_points, expand_at_flag, expand_form_at_flag, flag_local_params, intersection_points, with_escalation,
    CurveOnSurface, Flag, Window,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

const SUPPORT: [&str; 6] = ["x", "y", "x - y", "x + y - 1", "y - x^2", "x^2 + y^2 - 2"];

fn support(k: &GaloisField) -> Vec<CurveOnSurface> {
    SUPPORT.iter().map(|s| CurveOnSurface::new(*s, parse_poly2(s, k).unwrap()).unwrap()).collect()
}

/// `c * prod s_i^{e_i}` over the support list.
fn product(k: &GaloisField, c: u32, exps: &[i32]) -> RatFn2 {
    let s = support(k);
    let (mut num, mut den) = (Poly2::constant(k, k.from_int(c as i64)), Poly2::one(k));
    for (curve, &e) in s.iter().zip(exps) {
        if e > 0 {
            num = num.mul(&curve.affine().pow(e as u32));
        } else if e < 0 {
            den = den.mul(&curve.affine().pow((-e) as u32));
        }
    }
    RatFn2::new(num, den).unwrap()
}

/// Flag on curve `ci` (index 6 is the line at infinity) at its `pi`-th point of degree <= 2.
fn flag(k: &GaloisField, ci: usize, pi: usize) -> Flag {
    let c = if ci < SUPPORT.len() { support(k)[ci].clone() } else { CurveOnSurface::line_at_infinity(k) };
    let pts = enumerate_points(&c, 2).unwrap();
    flag_local_params(&pts[pi % pts.len()], &c).unwrap()
}

fn exps() -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec(prop_oneof![3 => Just(0), 1 => -2i32..=2], SUPPORT.len())
}

#[test]
fn valuation_along_curve_matches_divisor() {
    let k = GaloisField::prime(5).unwrap();
    let s = support(&k);
    let mut runner = TestRunner::new(Config { cases: 100, ..Config::default() });
    runner
        .run(&(exps(), 1u32..5, 0usize..7, 0usize..40), |(e, c, ci, pi)| {
            let f = product(&k, c, &e);
            let fl = flag(&k, ci, pi);
            let d = divisor_of(&f, &s).unwrap();
            let (series, _) = with_escalation(Window::new(4, 8), |w| expand_at_flag(&f, &fl, w)).unwrap();
            prop_assert_eq!(series.nu_c(), Some(d.multiplicity(&fl.curve)));
            Ok(())
        })
        .unwrap();
}

#[test]
fn expansion_is_a_ring_homomorphism() {
    let k = GaloisField::prime(5).unwrap();
    let mut runner = TestRunner::new(Config { cases: 200, ..Config::default() });
    runner
        .run(&(exps(), exps(), 1u32..5, 1u32..5, 0usize..7, 0usize..40), |(e1, e2, c1, c2, ci, pi)| {
            let (f, g) = (product(&k, c1, &e1), product(&k, c2, &e2));
            let fl = flag(&k, ci, pi);
            let (_, w) = with_escalation(Window::new(4, 8), |w| {
                expand_at_flag(&f, &fl, w)?;
                expand_at_flag(&g, &fl, w)?;
                expand_at_flag(&f.mul(&g), &fl, w)
            })
            .unwrap();
            let (ef, eg) = (expand_at_flag(&f, &fl, w).unwrap(), expand_at_flag(&g, &fl, w).unwrap());
            let prod = expand_at_flag(&f.mul(&g), &fl, w).unwrap();
            let expected = ef.mul(&eg);
            prop_assert!(prod.eq_at_precision(&expected, expected.prec(), expected.u_prec()));
            let sum = f.add(&g);
            if !sum.is_zero() {
                let (es, _) = with_escalation(w, |w| expand_at_flag(&sum, &fl, w)).unwrap();
                let expected = ef.add(&eg);
                prop_assert!(es.eq_at_precision(&expected, expected.prec(), expected.u_prec()));
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn residues_do_not_depend_on_the_chart() {
    let k = GaloisField::prime(5).unwrap();
    let mut curves = support(&k);
    curves.push(CurveOnSurface::line_at_infinity(&k));
    let nonzero = std::cell::Cell::new(0);
    let mut runner = TestRunner::new(Config { cases: 50, ..Config::default() });
    runner
        .run(&(exps(), 1u32..5, 0usize..7, 1usize..7, 0usize..8), |(mut e, c, ci, dj, pi)| {
            let cj = (ci + dj) % 7;
            // simple poles along both curves so that residues are typically nonzero
            for i in [ci, cj] {
                if i < e.len() {
                    e[i] = -1;
                }
            }
            let g = product(&k, c, &e);
            let (a, b) = (&curves[ci], &curves[cj]);
            let pts = intersection_points(a, b).unwrap();
            let point = &pts[pi % pts.len()];
            let mut values = Vec::new();
            for ch in point.charts() {
                let fl = Flag::in_chart(point, a, ch).unwrap();
                let (r, _) = with_escalation(Window::new(4, 8), |w| {
                    residue_2d(&expand_form_at_flag(&g, &fl, w)?, &k)
                })
                .unwrap();
                values.push(r);
            }
            if values.len() < 2 {
                return Ok(());
            }
            prop_assert!(values.windows(2).all(|v| v[0] == v[1]), "{:?}", values);
            if !values[0].is_zero() {
                nonzero.set(nonzero.get() + 1);
            }
            Ok(())
        })
        .unwrap();
    assert!(nonzero.get() >= 5, "only {} nonzero residues compared", nonzero.get());
}
