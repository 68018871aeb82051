use adelia::adeles::{
    canonical_divisor, closed_point_counts, finite_fourier_poisson_on, plancherel_rr_check, riemann_roch_basis, rr_cohomology,
    zeta_series, DivisorOnCurve, FourierWindow, Place, SubgroupSpec,
};
use adelia::field::{Elem, GaloisField, Poly};
use num_bigint::BigInt;
use proptest::prelude::*;

/// Divisors over F_3 on `[x]`, `[x - 1]`, `[x^2 + 1]` and infinity.
fn divisor(k: &GaloisField, n: [i64; 4]) -> DivisorOnCurve {
    let places = [
        Place::rational(k, Elem::ZERO),
        Place::rational(k, Elem::ONE),
        Place::finite(Poly::from_ints(k, &[1, 0, 1])).unwrap(),
        Place::Infinity,
    ];
    let entries: Vec<(Place, i64)> = places.into_iter().zip(n).filter(|(_, m)| *m != 0).collect();
    DivisorOnCurve::from_places(k, &entries)
}

fn coeffs() -> impl Strategy<Value = [i64; 4]> {
    [-3i64..=3, -3i64..=3, -2i64..=2, -4i64..=4]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn riemann_roch_and_duality(n in coeffs()) {
        let k = GaloisField::prime(3).unwrap();
        let d = divisor(&k, n);
        let c = rr_cohomology(&d).unwrap();
        prop_assert_eq!(c.h0 as i64 - c.h1 as i64, d.degree() + 1);
        let dual = rr_cohomology(&canonical_divisor(&k).sub(&d)).unwrap();
        prop_assert_eq!(c.h1, dual.h0);
    }

    #[test]
    fn basis_lies_in_riemann_roch_space(n in coeffs()) {
        let k = GaloisField::prime(3).unwrap();
        let d = divisor(&k, n);
        let basis = riemann_roch_basis(&d).unwrap();
        prop_assert_eq!(basis.len(), rr_cohomology(&d).unwrap().h0);
        let zero = DivisorOnCurve::zero(&k);
        for f in &basis {
            prop_assert!(zero.le(&DivisorOnCurve::principal(f).unwrap().add(&d)), "{} not in L({})", f.to_text(), d.to_text());
        }
    }

    #[test]
    fn fourier_poisson_on_random_subgroups(n in [-1i64..=1, -1i64..=1, 0i64..=0, -2i64..=1], gens in prop::collection::vec(prop::collection::vec(0u32..3, 8), 0..3)) {
        let k = GaloisField::prime(3).unwrap();
        let d = divisor(&k, n);
        let Ok(fw) = FourierWindow::around(&d) else { return Ok(()) };
        prop_assume!(fw.dim() <= 4);
        let gens: Vec<Vec<Elem>> = gens.iter().map(|g| g[..fw.dim()].iter().map(|&x| Elem(x)).collect()).collect();
        let r = finite_fourier_poisson_on(&fw, &SubgroupSpec::Generators(gens)).unwrap();
        prop_assert!(r.pass, "{}", r.to_text());
        prop_assert!(plancherel_rr_check(&d).unwrap().pass);
    }
}

/// Closed points of degree `d` counted as elements of exact degree `d` in
/// `F_{q^d}`, divided by `d`.
fn brute_force_points(p: u32, d: u32) -> i64 {
    let big = GaloisField::new(p, d).unwrap();
    let exact = big.elements().filter(|&a| big.element_degree(a) == d).count() as i64;
    exact / d as i64 + if d == 1 { 1 } else { 0 }
}

#[test]
fn closed_point_counts_match_enumeration() {
    for (p, max) in [(2u32, 8u32), (3, 5), (5, 3)] {
        let counts = closed_point_counts(p as u64, max as usize);
        for d in 1..=max {
            assert_eq!(counts[d as usize - 1], BigInt::from(brute_force_points(p, d)), "q = {p}, d = {d}");
        }
    }
}

#[test]
fn zeta_coefficients_count_effective_divisors() {
    for q in [2u64, 3, 4, 5] {
        let z = zeta_series(q, 10).unwrap();
        for (n, c) in z.coeffs.iter().enumerate() {
            // points of P^n = effective divisors of degree n on P^1
            let expected = (q.pow(n as u32 + 1) - 1) / (q - 1);
            assert_eq!(*c, BigInt::from(expected), "q = {q}, n = {n}");
        }
        assert!(z.report().pass);
    }
}

