use adelia::heis::{
    extended_trace, finite_rep_trace, functional_equation_check, lattice_theta, stabilizer, theta_series, Character,
    GroupElement, HeisenbergSpec, Lattice, Polar,
};
use num_complex::Complex64;
use num_rational::Rational64;
use proptest::prelude::*;

fn element(spec: &HeisenbergSpec, v: &[i64]) -> GroupElement {
    let n = spec.h.ngens();
    spec.element(&v[..n], &v[n..2 * n], &v[2 * n..2 * n + 1], &v[2 * n + 1..]).unwrap()
}

fn coords(len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, len)
}

/// `Σ_n w^n q^(n(n-1)/2) = Π_(m≥1) (1 - q^m)(1 + w q^(m-1))(1 + w^(-1) q^m)`.
fn triple_product(w: Complex64, q: Complex64) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    let mut qm = q;
    let mut qm1 = Complex64::new(1.0, 0.0);
    for _ in 0..400 {
        acc *= (1.0 - qm) * (1.0 + w * qm1) * (1.0 + qm / w);
        qm1 = qm;
        qm *= q;
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_axioms(a in coords(4), b in coords(4), c in coords(4)) {
        let spec = HeisenbergSpec::heis3();
        let (a, b, c) = (element(&spec, &a), element(&spec, &b), element(&spec, &c));
        let ab_c = spec.group_law(&spec.group_law(&a, &b).unwrap(), &c).unwrap();
        let a_bc = spec.group_law(&a, &spec.group_law(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert_eq!(spec.group_law(&a, &spec.inverse(&a).unwrap()).unwrap(), spec.identity());
    }

    #[test]
    fn commutator_is_central_pairing(a in coords(5), b in coords(5)) {
        let spec = HeisenbergSpec::diagonal(&[1, 2], &[1, 1]);
        let (mut a, mut b) = (element(&spec, &a), element(&spec, &b));
        a.k = vec![0];
        b.k = vec![0];
        let comm = spec.commutator(&a, &b).unwrap();
        // <n, q> - <m, p> for a = (n, p, c), b = (m, q, c')
        let pair = |x: &[i64], y: &[i64]| x[0] * y[0] + 2 * x[1] * y[1];
        prop_assert_eq!(comm.m, vec![0, 0]);
        prop_assert_eq!(comm.p, vec![0, 0]);
        prop_assert_eq!(comm.c, vec![pair(&a.m, &b.p) - pair(&b.m, &a.p)]);
    }

    #[test]
    fn theta_matches_triple_product(re in -0.6f64..0.6, im in -0.6f64..0.6, wr in 0.4f64..2.0, wa in 0.0f64..std::f64::consts::TAU) {
        let q = Complex64::new(re, im);
        prop_assume!(q.norm() > 0.05 && q.norm() < 0.8);
        let w = Complex64::from_polar(wr, wa);
        let t = theta_series(0, 1, Complex64::new(1.0, 0.0), w, q, 1e-14).unwrap();
        let expected = triple_product(w, q);
        prop_assert!((t.value() - expected).norm() <= 1e-10 * expected.norm().max(1.0), "{} vs {}", t.value(), expected);
    }

    #[test]
    fn lattice_functional_equation(a in 1i64..6, b in -3i64..=3, c in 1i64..6, den in 1i64..4, t in 0.3f64..3.0) {
        prop_assume!(a * c > b * b);
        let r = |x: i64| Rational64::new(x, den);
        let l = Lattice::new(vec![vec![r(a), r(b)], vec![r(b), r(c)]], 1).unwrap();
        let rep = functional_equation_check(&l, t, 1e-10).unwrap();
        prop_assert!(rep.pass, "{}", rep.to_text());
    }

    #[test]
    fn finite_index_trace_agrees_with_matrix(j in 1i64..6, n in 2i64..7, g in coords(3)) {
        prop_assume!(j % n != 0);
        let spec = HeisenbergSpec::heis3();
        let mut chi = Character::new(&spec, 0.5);
        chi.c = vec![Polar::root_of_unity(j, n)];
        chi.h_prime = vec![Polar::root_of_unity(1, 7)];
        let g = spec.element(&g[..1], &g[1..2], &g[2..3], &[]).unwrap();
        let fin = finite_rep_trace(&spec, &chi, &g).unwrap();
        prop_assert!(fin.agree);
        let ext = extended_trace(&spec, &chi, &g).unwrap();
        let m = Complex64::new(fin.matrix_trace[0], fin.matrix_trace[1]);
        prop_assert!((ext.value() - m).norm() <= 1e-12 * (1.0 + m.norm()));
        if !stabilizer(&spec, &chi).contains(&g.m) {
            prop_assert_eq!(ext.value(), Complex64::new(0.0, 0.0));
        }
    }
}

#[test]
fn rank_one_lattice_theta_is_jacobi_theta() {
    // Σ q^(n^2) = Π (1 - q^(2m)) (1 + q^(2m-1))^2 with q = e^(-πt)
    for t in [0.25, 0.5, 1.0, 1.7, 3.0] {
        let l = Lattice::from_integers(&[vec![1]], 1).unwrap();
        let v = lattice_theta(&l, t, 1e-15).unwrap().value;
        let q = (-std::f64::consts::PI * t).exp();
        let prod: f64 = (1..200).map(|m| (1.0 - q.powi(2 * m)) * (1.0 + q.powi(2 * m - 1)).powi(2)).product();
        assert!((v - prod).abs() <= 1e-13 * prod, "t = {t}: {v} vs {prod}");
    }
}

#[test]
fn torsion_scales_theta() {
    let l1 = Lattice::from_integers(&[vec![2, 1], vec![1, 2]], 1).unwrap();
    let l3 = Lattice::from_integers(&[vec![2, 1], vec![1, 2]], 3).unwrap();
    let a = lattice_theta(&l1, 0.8, 1e-14).unwrap().value;
    let b = lattice_theta(&l3, 0.8, 1e-14).unwrap().value;
    assert!((3.0 * a - b).abs() <= 1e-12 * b);
}

#[test]
fn bad_inputs_are_rejected() {
    assert!(Lattice::from_integers(&[vec![1, 2], vec![2, 1]], 1).and_then(|l| lattice_theta(&l, 1.0, 1e-10)).is_err());
    let one = Complex64::new(1.0, 0.0);
    assert!(theta_series(0, 0, one, one, Complex64::new(0.5, 0.0), 1e-12).is_err());
    assert!(theta_series(0, 1, one, one, Complex64::new(1.5, 0.0), 1e-12).is_err());
}
