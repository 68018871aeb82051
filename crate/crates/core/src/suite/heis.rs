use num_complex::Complex64;
use num_rational::Rational64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{fmt_f, Checks, SuiteOptions};
use crate::error::Result;
use crate::heis::{
    asymptotic_check, equivalence_test, extended_trace, finite_homomorphism_check, functional_equation_check,
    limit_check, stabilizer, theta_series, Character, GroupElement, HeisenbergSpec, Lattice, Polar, RepVector,
    Representation,
};
use crate::reciprocity::VerificationReport;

const BASE: f64 = 0.5;
const TRACE_TOLERANCE: f64 = 1e-12;
const LIMIT_TOLERANCE: f64 = 0.02;
const LATTICE_TOLERANCE: f64 = 1e-10;
const ASYMPTOTIC_TOLERANCE: f64 = 0.02;

fn q(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn random_polar(rng: &mut ChaCha8Rng, max_log: i64) -> Polar {
    Polar::new(q(rng.gen_range(-max_log..=max_log), 8), q(rng.gen_range(0..60), 60))
}

/// `|λ| = BASE^r` with `r` in `[3/16, 53/16]`, so `0.1 <= |λ| <= 0.9`.
fn random_lambda(rng: &mut ChaCha8Rng) -> Polar {
    Polar::new(q(rng.gen_range(3..=53), 16), q(rng.gen_range(0..24), 24))
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize, r: i64) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(-r..=r)).collect()
}

fn random_element(rng: &mut ChaCha8Rng, s: &HeisenbergSpec, r: i64, k: i64) -> Result<GroupElement> {
    let m = random_vec(rng, s.h.ngens(), r);
    let p = random_vec(rng, s.h_prime.ngens(), r);
    let c = random_vec(rng, s.c.ngens(), r);
    let kc = random_vec(rng, s.a.len(), k);
    s.element(&m, &p, &c, &kc)
}

fn close(a: Complex64, b: Complex64, tol: f64) -> (f64, bool) {
    let err = (a - b).norm() / b.norm().max(1.0);
    (err, err <= tol)
}

pub(super) fn characters(opts: &SuiteOptions) -> Result<VerificationReport> {
    let mut rng = opts.rng("characters");
    let mut checks = Checks::new();
    let tol = opts.tol(TRACE_TOLERANCE);
    let s = HeisenbergSpec::heis3();

    // trace against λ^c t^k ϑ_{p,k,1}(z, λ)
    let draws = 100;
    let (mut agree, mut worst) = (0, 0.0f64);
    for _ in 0..draws {
        let mut chi = Character::new(&s, BASE);
        chi.c[0] = random_lambda(&mut rng);
        chi.h_prime[0] = random_polar(&mut rng, 12);
        chi.a[0] = random_polar(&mut rng, 8);
        chi.h[0] = random_polar(&mut rng, 8);
        let (p, c, k) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3), rng.gen_range(1..=3));
        let ok = (|| -> Result<(f64, bool)> {
            let g = s.element(&[0], &[p], &[c], &[k])?;
            let tr = extended_trace(&s, &chi, &g)?.value();
            let (lam, z, t) = (chi.c[0].to_complex(BASE), chi.h_prime[0].to_complex(BASE), chi.a[0].to_complex(BASE));
            let th = theta_series(p, k, Complex64::new(1.0, 0.0), z, lam, 1e-16)?.value();
            Ok(close(tr, lam.powi(c as i32) * t.powi(k as i32) * th, tol))
        })();
        if let Ok((err, ok)) = ok {
            worst = worst.max(err);
            agree += ok as usize;
        }
    }
    checks.push(
        "extended trace = lambda^c t^k theta_{p,k,1}(z, lambda)",
        format!("{agree}/{draws}, max relative error {}", fmt_f(worst)),
        agree == draws,
    );

    // π(a)π(b) = π(ab) on δ-vectors
    let specs = [HeisenbergSpec::heis3(), HeisenbergSpec::diagonal(&[1, 1], &[1, 1]), HeisenbergSpec::diagonal(&[1, -1], &[1, 2])];
    let cases = 200;
    let mut hom = 0;
    for i in 0..cases {
        let spec = &specs[i % specs.len()];
        let mut chi = Character::new(spec, BASE);
        chi.c[0] = if i % 4 == 3 { Polar::root_of_unity(rng.gen_range(1..6), 6) } else { random_lambda(&mut rng) };
        for v in chi.h.iter_mut().chain(chi.h_prime.iter_mut()) {
            *v = random_polar(&mut rng, 8);
        }
        let ok = (|| -> Result<bool> {
            let rep = Representation::new(spec, &chi)?;
            let draw = |rng: &mut ChaCha8Rng| -> Result<GroupElement> {
                let mut g = random_element(rng, spec, 3, 2)?;
                if rep.check_extension(&g.k).is_err() {
                    g.k.iter_mut().for_each(|x| *x = 0);
                }
                Ok(g)
            };
            let (a, b) = (draw(&mut rng)?, draw(&mut rng)?);
            let v = RepVector::delta(rep.stab.reduce(&random_vec(&mut rng, spec.h.ngens(), 4)));
            let lhs = rep.act(&a, &rep.act(&b, &v)?)?;
            let rhs = rep.act(&spec.group_law(&a, &b)?, &v)?;
            Ok(lhs == rhs)
        })()
        .unwrap_or(false);
        hom += ok as usize;
    }
    checks.push("pi(a) pi(b) = pi(ab), exact polar arithmetic", format!("{hom}/{cases}"), hom == cases);

    for n in 3..=6 {
        let mut chi = Character::new(&s, BASE);
        chi.c[0] = Polar::root_of_unity(1, n);
        let r = finite_homomorphism_check(&s, &chi, n);
        let want = (n as usize).pow(6);
        checks.push_result(
            format!("finite quotient N = {n}: all pairs of H x H' x C mod N"),
            r.map(|c| (format!("{c} pairs"), c == want)),
        );
    }

    // trace is a class function
    let conj_cases = 50;
    let (mut inv, mut worst) = (0, 0.0f64);
    for _ in 0..conj_cases {
        let mut chi = Character::new(&s, BASE);
        chi.c[0] = random_lambda(&mut rng);
        chi.h_prime[0] = random_polar(&mut rng, 8);
        chi.a[0] = random_polar(&mut rng, 4);
        let r = (|| -> Result<(f64, bool)> {
            let g = s.element(&[0], &[rng.gen_range(-3..=3)], &[rng.gen_range(-3..=3)], &[rng.gen_range(1..=3)])?;
            let h = random_element(&mut rng, &s, 3, 1)?;
            let conj = s.group_law(&s.group_law(&h, &g)?, &s.inverse(&h)?)?;
            let (a, b) = (extended_trace(&s, &chi, &g)?.value(), extended_trace(&s, &chi, &conj)?.value());
            Ok(close(b, a, tol))
        })();
        if let Ok((err, ok)) = r {
            worst = worst.max(err);
            inv += ok as usize;
        }
    }
    checks.push(
        "Tr(h g h^-1) = Tr(g)",
        format!("{inv}/{conj_cases}, max relative error {}", fmt_f(worst)),
        inv == conj_cases,
    );

    equivalence_checks(&mut rng, &s, &mut checks);

    let inputs = json!({ "seed": opts.seed, "base": BASE, "trace_draws": draws, "homomorphism_cases": cases, "conjugation_cases": conj_cases });
    Ok(checks.finish("suite_characters", inputs, json!({ "tolerance": tol })))
}

/// Fifty characters built as translates of ten base characters, half of them
/// with `λ` a root of unity so that `χ_H` matters on `H_χ = NZ`.
fn equivalence_checks(rng: &mut ChaCha8Rng, s: &HeisenbergSpec, checks: &mut Checks) {
    let roots = [(1, 3), (1, 4), (2, 5), (1, 6), (3, 4)];
    let mut bases: Vec<(Character, Option<i64>)> = Vec::new();
    for j in 0..10 {
        let mut chi = Character::new(s, BASE);
        let order = if j % 2 == 0 {
            chi.c[0] = Polar::new(q(j as i64 + 2, 8), q(rng.gen_range(0..24), 24));
            None
        } else {
            let (a, n) = roots[j / 2];
            chi.c[0] = Polar::root_of_unity(a, n);
            Some(n)
        };
        chi.h_prime[0] = random_polar(rng, 8);
        chi.h[0] = Polar::root_of_unity(rng.gen_range(0..12), 12);
        bases.push((chi, order));
    }
    let mut chars: Vec<(usize, Character)> = Vec::new();
    for _ in 0..50 {
        let b = rng.gen_range(0..bases.len());
        let mut chi = bases[b].0.translate(s, &[rng.gen_range(-5..=5)]);
        if rng.gen_bool(0.3) {
            chi.h[0] = Polar::root_of_unity(rng.gen_range(0..12), 12);
        }
        chars.push((b, chi));
    }
    let n = chars.len();
    let eq: Vec<Vec<_>> = chars.iter().map(|(_, a)| chars.iter().map(|(_, b)| equivalence_test(s, a, b)).collect()).collect();
    let e = |i: usize, j: usize| eq[i][j].equivalent;

    let refl = (0..n).filter(|&i| e(i, i)).count();
    checks.push("equivalence: reflexive", format!("{refl}/{n}"), refl == n);
    let pairs = n * (n - 1) / 2;
    let sym = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| e(i, j) == e(j, i)).count();
    checks.push("equivalence: symmetric", format!("{sym}/{pairs}"), sym == pairs);
    let (mut chains, mut closed) = (0, 0);
    for i in 0..n {
        for j in (0..n).filter(|&j| e(i, j)) {
            for l in (0..n).filter(|&l| e(j, l)) {
                chains += 1;
                closed += e(i, l) as usize;
            }
        }
    }
    checks.push("equivalence: transitive", format!("{closed}/{chains} chains"), closed == chains);

    // explicit witnesses, and agreement with the construction
    let (mut witnessed, mut equivalent, mut truth) = (0, 0, 0);
    for i in 0..n {
        for j in 0..n {
            let (bi, a) = &chars[i];
            let (bj, b) = &chars[j];
            if let (true, Some(h)) = (e(i, j), &eq[i][j].witness) {
                equivalent += 1;
                witnessed += (a.translate(s, h).h_prime == b.h_prime) as usize;
            }
            let expected = bi == bj
                && match bases[*bi].1 {
                    None => true,
                    Some(order) => a.h[0].pow(order) == b.h[0].pow(order),
                };
            truth += (expected == e(i, j)) as usize;
        }
    }
    checks.push("equivalence: witnesses translate chi_H'", format!("{witnessed}/{equivalent}"), witnessed == equivalent);
    checks.push("equivalence: matches the construction", format!("{truth}/{}", n * n), truth == n * n);
    let finite = chars.iter().filter(|(_, c)| stabilizer(s, c).index.is_some()).count();
    checks.push("equivalence: characters with finite [H : H_chi]", finite.to_string(), finite > 0 && finite < n);
}

pub(super) fn limit(opts: &SuiteOptions) -> Result<VerificationReport> {
    let tol = opts.tol(LIMIT_TOLERANCE);
    let mut checks = Checks::new();
    for (rank, order, k) in [(1usize, 1i64, 1i64), (1, 3, 1), (2, 1, 1)] {
        let name = format!("rank {rank}, N = {order}, k = {k}: exponent -rk/2");
        checks.push_result(
            name,
            limit_check(rank, order, k, tol).map(|r| {
                let opt = |x: Option<f64>| x.map(fmt_f).unwrap_or_else(|| "n/a".into());
                let value = format!(
                    "exponent {} (expected {}), constant {} vs {} / {}",
                    fmt_f(r.exponent),
                    r.expected_exponent,
                    fmt_f(r.fitted_constant),
                    opt(r.constant_parse_a),
                    opt(r.constant_parse_b)
                );
                (value, r.pass)
            }),
        );
    }
    let inputs = json!({ "seed": opts.seed, "cases": [[1, 1, 1], [1, 3, 1], [2, 1, 1]], "constant": "informational" });
    Ok(checks.finish("suite_limit", inputs, json!({ "tolerance": tol })))
}

fn random_gram(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<Rational64>> {
    // (B^T B + I) / den with B integral
    let b: Vec<Vec<i64>> = (0..n).map(|_| random_vec(rng, n, 2)).collect();
    let den = rng.gen_range(1..=3);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let dot: i64 = (0..n).map(|l| b[l][i] * b[l][j]).sum();
                    q(dot + i64::from(i == j), den)
                })
                .collect()
        })
        .collect()
}

pub(super) fn lattice_theta(opts: &SuiteOptions) -> Result<VerificationReport> {
    let mut rng = opts.rng("lattice-theta");
    let tol = opts.tol(LATTICE_TOLERANCE);
    let mut checks = Checks::new();
    let ts = [0.5, 2.0 / 3.0, 1.0, 1.5, 2.0];
    for i in 0..20 {
        let n = 1 + i % 3;
        let t = ts[rng.gen_range(0..ts.len())];
        let r = Lattice::new(random_gram(&mut rng, n), 1).and_then(|l| {
            let rep = functional_equation_check(&l, t, tol)?;
            let gram: Vec<String> = l.gram.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).collect();
            Ok((gram.join("; "), rep))
        });
        let (name, r) = match r {
            Ok((g, rep)) => (format!("functional equation, rank {n}, t = {t:.4}, Gram [{g}]"), Ok(rep)),
            Err(e) => (format!("functional equation, rank {n}, t = {t:.4}"), Err(e)),
        };
        checks.push_result(name, r.map(|rep| (rep.aggregate.clone(), rep.pass)));
    }
    for (gram, torsion) in [(vec![vec![1]], 1u64), (vec![vec![2, 1], vec![1, 2]], 1)] {
        let n = gram.len();
        let r = Lattice::from_integers(&gram, torsion).and_then(|l| asymptotic_check(&l, ASYMPTOTIC_TOLERANCE));
        checks.push_result(
            format!("doubled lattice, rank {n}: t -> 0 exponent -{n}"),
            r.map(|a| {
                let value = format!(
                    "exponent {} over t in [{}, {}], constant {} vs {}",
                    fmt_f(a.exponent),
                    fmt_f(a.t_range[0]),
                    fmt_f(a.t_range[1]),
                    fmt_f(a.fitted_constant),
                    fmt_f(a.expected_constant)
                );
                (value, a.pass)
            }),
        );
    }
    let inputs = json!({ "seed": opts.seed, "random_grams": 20, "max_rank": 3 });
    Ok(checks.finish("suite_lattice_theta", inputs, json!({ "tolerance": tol, "asymptotic_tolerance": ASYMPTOTIC_TOLERANCE })))
}
