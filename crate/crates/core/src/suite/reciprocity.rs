use num_rational::Rational64;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{nonzero, Checks, SuiteOptions};
use crate::error::Result;
use crate::field::{parse_poly2, Elem, GaloisField, Poly, Poly2, RatFn, RatFn2};
use crate::laurent::Laurent;
use crate::local2d::{
    commutator_pairing, commutator_value, local_heis, parshin_symbol_3, valuation_pair, HeisOp, IteratedSeries,
    LocalHeisElement,
};
use crate::reciprocity::{
    conic_local_solvability, hilbert_symbol, product_formula_check, verify_residue_relations_surface,
    verify_residue_theorem_curve, verify_symbol_reciprocity, QPlace, SurfaceMode, VerificationReport,
};
use crate::surface::{
    divisor_of, divisor_of_form, enumerate_points, expand_at_flag, flag_local_params, intersection_points,
    with_escalation, CurveOnSurface, SurfacePoint, Window,
};

const GOLDEN: &str = include_str!("../../data/commutator_golden.txt");

/// Lines and conics; `y` meets the last conic in a point of degree 2.
const POOL: [&str; 6] = ["x", "y", "x - y", "x + y - 1", "y - x^2", "x^2 + y^2 - 2"];

fn random_poly(k: &GaloisField, rng: &mut ChaCha8Rng, max_deg: usize) -> Poly {
    let d = rng.gen_range(0..=max_deg);
    let mut c: Vec<Elem> = (0..d).map(|_| k.from_int(rng.gen_range(0..k.order() as i64))).collect();
    c.push(nonzero(k, rng));
    Poly::new(k, c)
}

fn random_ratfn(k: &GaloisField, rng: &mut ChaCha8Rng, max_deg: usize) -> Result<RatFn> {
    let num = random_poly(k, rng, max_deg);
    let den = random_poly(k, rng, max_deg).monic();
    RatFn::new(num, den)
}

pub(super) fn curve_residues(opts: &SuiteOptions) -> Result<VerificationReport> {
    let mut rng = opts.rng("curve-residues");
    let mut checks = Checks::new();
    for q in [5u32, 7] {
        let k = GaloisField::prime(q)?;
        for i in 0..25 {
            let f = random_ratfn(&k, &mut rng, 4)?;
            let g = loop {
                let g = random_ratfn(&k, &mut rng, 4)?;
                if g.num().deg() > 0 || g.den().deg() > 0 {
                    break g;
                }
            };
            let seed = rng.gen();
            let name = format!("F_{q} #{i}: ({}) d({})", f.to_text(), g.to_text());
            checks.push_result(
                name,
                verify_residue_theorem_curve(&f, &g, None, seed).map(|r| {
                    let n = r.contributions.iter().filter(|c| !c.off_support).count();
                    (format!("sum {} over {n} places", r.aggregate), r.pass)
                }),
            );
        }
    }
    let inputs = json!({ "seed": opts.seed, "fields": [5, 7], "max_degree": 4, "cases": checks.count() });
    Ok(checks.finish("suite_curve_residues", inputs, json!("exact")))
}

fn pool(k: &GaloisField) -> Result<Vec<CurveOnSurface>> {
    POOL.iter().map(|s| CurveOnSurface::new(*s, parse_poly2(s, k)?)).collect()
}

/// `c * prod s_i^{e_i}`.
fn product(k: &GaloisField, c: Elem, curves: &[CurveOnSurface], exps: &[i32]) -> Result<RatFn2> {
    let (mut num, mut den) = (Poly2::constant(k, c), Poly2::one(k));
    for (s, &e) in curves.iter().zip(exps) {
        if e > 0 {
            num = num.mul(&s.affine().pow(e as u32));
        } else if e < 0 {
            den = den.mul(&s.affine().pow((-e) as u32));
        }
    }
    RatFn2::new(num, den)
}

/// Distinct points where two of the curves meet.
fn crossings(curves: &[CurveOnSurface]) -> Result<Vec<SurfacePoint>> {
    let mut out: Vec<SurfacePoint> = Vec::new();
    for (i, a) in curves.iter().enumerate() {
        for b in &curves[i + 1..] {
            for p in intersection_points(a, b)? {
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
    }
    Ok(out)
}

/// A crossing point, of degree 2 with probability 1/2 when one exists.
fn pick_point(rng: &mut ChaCha8Rng, pts: &[SurfacePoint]) -> Option<SurfacePoint> {
    let quad: Vec<&SurfacePoint> = pts.iter().filter(|p| p.degree == 2).collect();
    if !quad.is_empty() && rng.gen_bool(0.5) {
        return quad.choose(rng).map(|p| (*p).clone());
    }
    pts.choose(rng).cloned()
}

fn has_quadratic_crossing(c: &CurveOnSurface, others: &[CurveOnSurface]) -> Result<bool> {
    for d in others.iter().filter(|d| !d.same_curve(c)) {
        if intersection_points(c, d)?.iter().any(|p| p.degree == 2) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Support of size 2 to 4; even cases keep `y` and the conic through the
/// degree-2 points.
fn random_support(rng: &mut ChaCha8Rng, all: &[CurveOnSurface], force: bool) -> Vec<CurveOnSurface> {
    let mut idx: Vec<usize> = (0..all.len()).collect();
    idx.shuffle(rng);
    let n = rng.gen_range(2..=4);
    let mut pick: Vec<usize> = idx.into_iter().take(n).collect();
    if force {
        for must in [1, 5] {
            if !pick.contains(&must) {
                pick.pop();
                pick.insert(0, must);
            }
        }
    }
    pick.sort_unstable();
    pick.dedup();
    pick.into_iter().map(|i| all[i].clone()).collect()
}

pub(super) fn surface_residues(opts: &SuiteOptions) -> Result<VerificationReport> {
    let mut rng = opts.rng("surface-residues");
    let mut checks = Checks::new();
    let (mut curve_cases, mut point_cases, mut curve_quad, mut point_quad) = (0, 0, 0, 0);
    for q in [3u32, 5] {
        let k = GaloisField::prime(q)?;
        let all = pool(&k)?;
        let (mut i, mut made) = (0, [0usize; 2]);
        while made[0] < 12 || made[1] < 12 {
            i += 1;
            let support = random_support(&mut rng, &all, i % 2 == 0);
            let mut exps: Vec<i32> = support.iter().map(|_| [-2, -1, 1][rng.gen_range(0..3)]).collect();
            if exps.iter().all(|&e| e > 0) {
                exps[0] = -1;
            }
            let g = product(&k, nonzero(&k, &mut rng), &support, &exps)?;
            let polar: Vec<CurveOnSurface> =
                divisor_of_form(&g, &support)?.entries.into_iter().filter(|(_, m)| *m < 0).map(|(c, _)| c).collect();
            let fixed_curve = made[0] < 12;
            let (mode, quad) = if fixed_curve {
                let c = polar.choose(&mut rng).expect("a polar curve").clone();
                let quad = has_quadratic_crossing(&c, &polar)?;
                (SurfaceMode::FixedCurve(c), quad)
            } else {
                let Some(p) = pick_point(&mut rng, &crossings(&polar)?) else { continue };
                let quad = p.degree == 2;
                (SurfaceMode::FixedPoint(p), quad)
            };
            made[usize::from(!fixed_curve)] += 1;
            let label = match &mode {
                SurfaceMode::FixedCurve(c) => format!("along {}", c.to_text()),
                SurfaceMode::FixedPoint(p) => format!("at {p}"),
            };
            if fixed_curve {
                curve_cases += 1;
                curve_quad += quad as usize;
            } else {
                point_cases += 1;
                point_quad += quad as usize;
            }
            let seed = rng.gen();
            let name = format!("F_{q} #{}: ({}) dx^dy {label}", made[0] + made[1], g.to_text());
            checks.push_result(
                name,
                verify_residue_relations_surface(&g, &support, &mode, seed).map(|r| {
                    let n = r.contributions.iter().filter(|c| !c.off_support).count();
                    let tag = if quad { ", degree-2 flags" } else { "" };
                    (format!("sum {} over {n} flags{tag}", r.aggregate), r.pass)
                }),
            );
        }
    }
    checks.push("fixed-curve cases", format!("{curve_cases} ({curve_quad} with degree-2 points)"), curve_cases >= 20 && curve_quad > 0);
    checks.push("fixed-point cases", format!("{point_cases} ({point_quad} at degree-2 points)"), point_cases >= 20 && point_quad > 0);
    let inputs = json!({ "seed": opts.seed, "fields": [3, 5], "pool": POOL, "cases": curve_cases + point_cases });
    Ok(checks.finish("suite_surface_residues", inputs, json!("exact")))
}

/// Curves in the support of any of the functions.
fn support_curves(fs: &[&RatFn2], support: &[CurveOnSurface]) -> Result<Vec<CurveOnSurface>> {
    let mut out: Vec<CurveOnSurface> = Vec::new();
    for f in fs {
        for (c, _) in divisor_of(f, support)?.entries {
            if !out.iter().any(|o| o.same_curve(&c)) {
                out.push(c);
            }
        }
    }
    Ok(out)
}

fn random_monomial_product(k: &GaloisField, rng: &mut ChaCha8Rng, support: &[CurveOnSurface]) -> Result<RatFn2> {
    let exps: Vec<i32> = support.iter().map(|_| rng.gen_range(-1..=1)).collect();
    product(k, nonzero(k, rng), support, &exps)
}

pub(super) fn symbol_reciprocity(opts: &SuiteOptions) -> Result<VerificationReport> {
    let mut rng = opts.rng("symbol-reciprocity");
    let mut checks = Checks::new();
    let mut triples = 0;
    for q in [3u32, 5] {
        let k = GaloisField::prime(q)?;
        let all = pool(&k)?;
        let mut made = 0;
        while made < 6 {
            let support = random_support(&mut rng, &all, made % 2 == 0);
            let fs: Vec<RatFn2> =
                (0..3).map(|_| random_monomial_product(&k, &mut rng, &support)).collect::<Result<_>>()?;
            let curves = support_curves(&[&fs[0], &fs[1], &fs[2]], &support)?;
            if curves.len() < 2 {
                continue;
            }
            let pts = crossings(&curves)?;
            let Some(p) = pick_point(&mut rng, &pts) else { continue };
            let c = curves.choose(&mut rng).expect("nonempty").clone();
            let desc = format!("({}, {}, {})", fs[0].to_text(), fs[1].to_text(), fs[2].to_text());
            for mode in [SurfaceMode::FixedCurve(c.clone()), SurfaceMode::FixedPoint(p.clone())] {
                let label = match &mode {
                    SurfaceMode::FixedCurve(c) => format!("product over points of {}", c.to_text()),
                    SurfaceMode::FixedPoint(p) => format!("product over curves through {p}"),
                };
                let seed = rng.gen();
                checks.push_result(
                    format!("F_{q} triple {made}: {desc}, {label}"),
                    verify_symbol_reciprocity(&fs[0], &fs[1], &fs[2], &support, &mode, seed)
                        .map(|r| (format!("product {} over {} flags", r.aggregate, r.contributions.len()), r.pass)),
                );
            }
            made += 1;
            triples += 1;
        }
    }
    checks.push("triples checked in both modes", triples.to_string(), triples >= 10);

    let k = GaloisField::prime(5)?;
    let all = pool(&k)?;
    let mut flags = Vec::new();
    for c in all.iter().cloned().chain([CurveOnSurface::line_at_infinity(&k)]) {
        for p in enumerate_points(&c, 2)? {
            if let Ok(fl) = flag_local_params(&p, &c) {
                flags.push(fl);
            }
        }
    }
    let (mut tri, mut anti) = (0, 0);
    let mut first_failure = None;
    let cases = 200;
    for i in 0..cases {
        let fl = flags.choose(&mut rng).expect("flags").clone();
        let f: Vec<RatFn2> = (0..4).map(|_| random_monomial_product(&k, &mut rng, &all)).collect::<Result<_>>()?;
        let f12 = f[0].mul(&f[1]);
        let sym = |a: &RatFn2, b: &RatFn2, c: &RatFn2, w: Window| -> Result<Elem> {
            parshin_symbol_3(&expand_at_flag(a, &fl, w)?, &expand_at_flag(b, &fl, w)?, &expand_at_flag(c, &fl, w)?)
        };
        let r = with_escalation(Window::new(4, 8), |w| {
            Ok([
                sym(&f12, &f[2], &f[3], w)?,
                sym(&f[0], &f[2], &f[3], w)?,
                sym(&f[1], &f[2], &f[3], w)?,
                sym(&f[2], &f[0], &f[3], w)?,
                sym(&f[0], &f[3], &f[2], w)?,
            ])
        });
        let kp = fl.residue_field().clone();
        match r {
            Ok(([s12, s1, s2, s21, s13], _)) => {
                let ok_tri = s12 == kp.mul(s1, s2);
                let ok_anti = kp.mul(s21, s1) == Elem::ONE && kp.mul(s13, s1) == Elem::ONE;
                tri += ok_tri as usize;
                anti += ok_anti as usize;
                if !(ok_tri && ok_anti) && first_failure.is_none() {
                    first_failure = Some(format!("case {i} at {}", fl.label()));
                }
            }
            Err(e) => {
                if first_failure.is_none() {
                    first_failure = Some(format!("case {i} at {}: {e}", fl.label()));
                }
            }
        }
    }
    let tail = first_failure.map(|f| format!("; first failure {f}")).unwrap_or_default();
    checks.push("trilinearity (f1 f2, g, h)", format!("{tri}/{cases}{tail}"), tri == cases);
    checks.push("antisymmetry in both swaps", format!("{anti}/{cases}"), anti == cases);
    let inputs = json!({ "seed": opts.seed, "fields": [3, 5], "pool": POOL, "property_cases": cases });
    Ok(checks.finish("suite_symbol_reciprocity", inputs, json!("exact")))
}

const T_PREC: i64 = 10;
const U_PREC: i64 = 14;

/// `c t^a u^b (1 + sum r_j u^j + t * noise)` with the expected leading
/// t-coefficient `c u^b (1 + sum r_j u^j)` built separately in `k((u))`.
fn random_series(k: &GaloisField, rng: &mut ChaCha8Rng, a: i64, b: i64) -> (IteratedSeries, Laurent) {
    let c = nonzero(k, rng);
    let mut lead = Laurent::monomial(k, c, b, U_PREC);
    let mut f = IteratedSeries::monomial(k, c, b, a, T_PREC, U_PREC);
    for j in 1..=3 {
        let r = k.from_int(rng.gen_range(0..k.order() as i64));
        lead = lead.add(&Laurent::monomial(k, k.mul(c, r), b + j, U_PREC));
        f = f.add(&IteratedSeries::monomial(k, k.mul(c, r), b + j, a, T_PREC, U_PREC));
    }
    for _ in 0..3 {
        let s = k.from_int(rng.gen_range(0..k.order() as i64));
        let (i, j) = (rng.gen_range(-2..=3), rng.gen_range(1..=3));
        f = f.add(&IteratedSeries::monomial(k, s, b + i, a + j, T_PREC, U_PREC));
    }
    (f, lead)
}

pub(super) fn commutator(opts: &SuiteOptions) -> Result<VerificationReport> {
    let mut rng = opts.rng("commutator");
    let mut checks = Checks::new();
    let k = GaloisField::prime(7)?;

    let (mut rows, mut agree) = (0, 0);
    let mut first_bad = None;
    for line in GOLDEN.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        let v: Vec<i64> = line.split_whitespace().map(|x| x.parse().expect("golden integer")).collect();
        let [a, b, c, d, nu, heis] = v[..] else { panic!("golden row {line}") };
        rows += 1;
        let (c1, c2) = (nonzero(&k, &mut rng), nonzero(&k, &mut rng));
        let f = IteratedSeries::monomial(&k, c1, b, a, T_PREC, U_PREC);
        let g = IteratedSeries::monomial(&k, c2, d, c, T_PREC, U_PREC);
        let ok = (|| -> Result<bool> {
            let p = commutator_pairing(&f, &g)?;
            let lead = k.mul(k.pow(c1, c)?, k.pow(c2, -a)?);
            let group = local_heis(HeisOp::Commutator(LocalHeisElement::new(a, b, 0), LocalHeisElement::new(c, d, 0)));
            Ok(p.valuation() == Some(nu)
                && p.lead() == Some(lead)
                && valuation_pair(&f, &g)? == heis
                && group.c == heis
                && group.n == 0
                && group.p == 0
                && commutator_value((a, b), (c, d)) == heis
                && nu == -heis)
        })()
        .unwrap_or(false);
        agree += ok as usize;
        if !ok && first_bad.is_none() {
            first_bad = Some(line.to_string());
        }
    }
    let tail = first_bad.map(|l| format!("; first mismatch '{l}'")).unwrap_or_default();
    checks.push("golden monomials: nu_u <f, g> = -[f, g] in Heis(3,Z)", format!("{agree}/{rows} rows{tail}"), agree == rows && rows > 0);

    let cases = 100;
    let (mut formula, mut nu_ok, mut bimult) = (0, 0, 0);
    for _ in 0..cases {
        let mut e = || rng.gen_range(-3i64..=3);
        let (a, b, c, d, a2, b2) = (e(), e(), e(), e(), e(), e());
        let (f, lf) = random_series(&k, &mut rng, a, b);
        let (g, lg) = random_series(&k, &mut rng, c, d);
        let (f2, _) = random_series(&k, &mut rng, a2, b2);
        let r = (|| -> Result<(bool, bool, bool)> {
            let p = commutator_pairing(&f, &g)?;
            let expect = lf.pow(c)?.mul(&lg.pow(-a)?);
            let n = p.prec().min(expect.prec());
            let f_ok = p.eq_at_precision(&expect, n);
            let v_ok = p.valuation() == Some(b * c - a * d) && p.valuation() == Some(-commutator_value((a, b), (c, d)));
            let joint = commutator_pairing(&f.mul(&f2), &g)?;
            let split = p.mul(&commutator_pairing(&f2, &g)?);
            let n = joint.prec().min(split.prec());
            Ok((f_ok, v_ok, joint.eq_at_precision(&split, n)))
        })();
        if let Ok((x, y, z)) = r {
            formula += x as usize;
            nu_ok += y as usize;
            bimult += z as usize;
        }
    }
    checks.push("random pairs: pairing = lead(f)^nu(g) lead(g)^-nu(f)", format!("{formula}/{cases}"), formula == cases);
    checks.push("random pairs: nu_u matches the Heis(3,Z) commutator", format!("{nu_ok}/{cases}"), nu_ok == cases);
    checks.push("random pairs: bimultiplicativity in the first slot", format!("{bimult}/{cases}"), bimult == cases);
    let inputs = json!({ "seed": opts.seed, "field": "F_7", "golden_rows": rows, "random_pairs": cases });
    Ok(checks.finish("suite_commutator", inputs, json!({ "t": T_PREC, "u": U_PREC })))
}

const HILBERT_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];
const CONIC_SEARCH: u32 = 6;

pub(super) fn hilbert(opts: &SuiteOptions) -> Result<VerificationReport> {
    let mut rng = opts.rng("hilbert");
    let mut checks = Checks::new();
    let mut draw = || loop {
        let x = rng.gen_range(-500i64..=500);
        if x != 0 {
            break x;
        }
    };
    let cases = 200;
    let mut pass = 0;
    let mut first_bad = None;
    for _ in 0..cases {
        let (a, b) = (draw(), draw());
        let ok = product_formula_check(Rational64::from(a), Rational64::from(b)).map(|r| r.pass).unwrap_or(false);
        pass += ok as usize;
        if !ok && first_bad.is_none() {
            first_bad = Some(format!("({a}, {b})"));
        }
    }
    let tail = first_bad.map(|p| format!("; first failure {p}")).unwrap_or_default();
    checks.push("product formula, |a|, |b| <= 500", format!("{pass}/{cases}{tail}"), pass == cases);

    let places = HILBERT_PRIMES.iter().map(|&p| QPlace::Prime(p)).chain([QPlace::Infinity]);
    for place in places {
        let (mut n, mut agree) = (0, 0);
        for a in -50i64..=50 {
            for b in -50i64..=50 {
                if a == 0 || b == 0 {
                    continue;
                }
                n += 1;
                let (ra, rb) = (Rational64::from(a), Rational64::from(b));
                let ok = match (hilbert_symbol(ra, rb, place), conic_local_solvability(ra, rb, place, CONIC_SEARCH)) {
                    (Ok(s), Ok(sol)) => (s == 1) == sol,
                    _ => false,
                };
                agree += ok as usize;
            }
        }
        let name = match place {
            QPlace::Prime(p) => format!("conic oracle at {p}"),
            QPlace::Infinity => "conic oracle at inf".to_string(),
        };
        checks.push(name, format!("{agree}/{n}"), agree == n);
    }
    let inputs = json!({ "seed": opts.seed, "pairs": cases, "oracle_range": 50, "oracle_primes": HILBERT_PRIMES });
    Ok(checks.finish("suite_hilbert", inputs, json!("exact")))
}
