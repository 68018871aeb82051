use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{Checks, SuiteOptions};
use crate::adeles::{
    canonical_divisor, finite_fourier_poisson_on, plancherel_rr_check, poisson_residue_check, rr_cohomology,
    zeta_series, DivisorOnCurve, FourierWindow, Place, SubgroupSpec,
};
use crate::error::{Error, Result};
use crate::field::{monic_irreducibles, Elem, GaloisField};
use crate::reciprocity::VerificationReport;

/// Finite places of degree 1 to `max_deg`.
fn finite_places(k: &GaloisField, max_deg: usize) -> Vec<Place> {
    (1..=max_deg).flat_map(|d| monic_irreducibles(k, d)).map(Place::Finite).collect()
}

/// A divisor of the given degree supported on one to three finite places,
/// at least one of degree >= 2, with infinity absorbing the difference.
fn random_divisor(k: &GaloisField, rng: &mut ChaCha8Rng, places: &[Place], degree: i64, span: i64) -> DivisorOnCurve {
    let wide: Vec<&Place> = places.iter().filter(|p| p.degree() >= 2).collect();
    let mut entries: Vec<(Place, i64)> = Vec::new();
    let mut pick = |p: &Place, rng: &mut ChaCha8Rng| {
        let n = loop {
            let n = rng.gen_range(-span..=span);
            if n != 0 {
                break n;
            }
        };
        entries.push((p.clone(), n));
    };
    pick(wide.choose(rng).expect("places of degree >= 2"), rng);
    for _ in 0..rng.gen_range(0..=2) {
        pick(places.choose(rng).expect("places"), rng);
    }
    let mut d = DivisorOnCurve::from_places(k, &entries);
    d.add_place(&Place::Infinity, degree - d.degree());
    d
}

pub(super) fn riemann_roch(opts: &SuiteOptions) -> Result<VerificationReport> {
    let mut rng = opts.rng("riemann-roch");
    let mut checks = Checks::new();
    for (q, per_degree) in [(2u32, 2), (3, 2), (5, 1)] {
        let k = GaloisField::prime(q)?;
        let places = finite_places(&k, if q == 2 { 3 } else { 2 });
        for deg in -5i64..=10 {
            for _ in 0..per_degree {
                let d = random_divisor(&k, &mut rng, &places, deg, 2);
                let r = rr_cohomology(&d).map(|c| {
                    let (h0, h1) = (c.h0 as i64, c.h1 as i64);
                    // genus 0: l(D) = max(0, deg D + 1), h1 = l(-2[inf] - D)
                    let ok = h0 - h1 == deg + 1 && h0 == (deg + 1).max(0) && h1 == (-deg - 1).max(0);
                    (format!("h0 = {h0}, h1 = {h1}, deg + 1 = {}", deg + 1), ok)
                });
                checks.push_result(format!("F_{q}: D = {}", d.to_text()), r);
            }
        }
    }
    let n = checks.count();
    checks.push("divisor count", n.to_string(), n >= 60);
    let inputs = json!({ "seed": opts.seed, "fields": [2, 3, 5], "degrees": [-5, 10], "divisors": n });
    Ok(checks.finish("suite_riemann_roch", inputs, json!("exact")))
}

/// All subspaces of `F_2^n`, each as the set of its members encoded in bits.
fn subspaces_f2(n: usize) -> Vec<Vec<u32>> {
    let size = 1u32 << n;
    let close = |members: &BTreeSet<u32>, v: u32| -> BTreeSet<u32> {
        let mut out = members.clone();
        for &m in members {
            out.insert(m ^ v);
        }
        out
    };
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut frontier = vec![BTreeSet::from([0u32])];
    seen.insert(vec![0]);
    while let Some(w) = frontier.pop() {
        for v in 1..size {
            if w.contains(&v) {
                continue;
            }
            let bigger = close(&w, v);
            let key: Vec<u32> = bigger.iter().copied().collect();
            if seen.insert(key) {
                frontier.push(bigger);
            }
        }
    }
    seen.into_iter().collect()
}

fn bits_to_vector(v: u32, n: usize) -> Vec<Elem> {
    (0..n).map(|i| if v >> i & 1 == 1 { Elem::ONE } else { Elem::ZERO }).collect()
}

pub(super) fn fourier(opts: &SuiteOptions) -> Result<VerificationReport> {
    let mut rng = opts.rng("fourier");
    let mut checks = Checks::new();
    let k = GaloisField::prime(2)?;

    let d1 = DivisorOnCurve::parse("1*[x]", &k)?;
    let d2 = canonical_divisor(&k).sub(&d1);
    let fw = FourierWindow::new(&d1, &d2)?;
    let n = fw.dim();
    let subs = subspaces_f2(n);
    let mut ok = 0;
    let mut first_bad = None;
    for members in &subs {
        let gens: Vec<Vec<Elem>> = members.iter().filter(|&&v| v != 0).map(|&v| bits_to_vector(v, n)).collect();
        let pass = finite_fourier_poisson_on(&fw, &SubgroupSpec::Generators(gens)).map(|r| r.pass).unwrap_or(false);
        ok += pass as usize;
        if !pass && first_bad.is_none() {
            first_bad = Some(format!("{members:?}"));
        }
    }
    let tail = first_bad.map(|m| format!("; first failure {m}")).unwrap_or_default();
    checks.push(
        format!("all subgroups of A_1({}) / A_1({}), dim {n}", d1.to_text(), d2.to_text()),
        format!("{ok}/{} pass{tail}", subs.len()),
        n == 4 && subs.len() == 67 && ok == subs.len(),
    );

    let places = finite_places(&k, 3);
    let mut divisors: Vec<DivisorOnCurve> = Vec::new();
    while divisors.len() < 10 {
        let deg = rng.gen_range(-3..=3);
        let d = random_divisor(&k, &mut rng, &places, deg, 1);
        if divisors.contains(&d) {
            continue;
        }
        match FourierWindow::around(&d) {
            Ok(_) => divisors.push(d),
            Err(Error::Validation(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    for d in &divisors {
        let r = FourierWindow::around(d).and_then(|fw| finite_fourier_poisson_on(&fw, &SubgroupSpec::KPlusAdelic(d.clone())));
        checks.push_result(
            format!("(K + A_1(D))_perp = L((dx) - D) for D = {}", d.to_text()),
            r.map(|r| (format!("{} checks", r.aggregate), r.pass && r.contributions.len() == 3)),
        );
    }
    for d in &divisors {
        checks.push_result(
            format!("Plancherel l(D) - l((dx) - D) = deg D + 1 for D = {}", d.to_text()),
            plancherel_rr_check(d).map(|r| (format!("{} checks", r.aggregate), r.pass)),
        );
    }
    let inputs = json!({ "seed": opts.seed, "field": "F_2", "window_dim": n, "subgroups": subs.len(), "divisors": divisors.len() });
    Ok(checks.finish("suite_fourier", inputs, json!("exact")))
}

pub(super) fn zeta(opts: &SuiteOptions) -> Result<VerificationReport> {
    let mut rng = opts.rng("zeta");
    let mut checks = Checks::new();
    for q in [2u64, 3] {
        checks.push_result(
            format!("Euler product = 1/((1 - z)(1 - {q}z)) to z^12"),
            zeta_series(q, 12).map(|z| {
                let r = z.report();
                (format!("{} checks", r.aggregate), r.pass)
            }),
        );
    }
    let k = GaloisField::prime(2)?;
    let places = finite_places(&k, 3);
    for deg in -3i64..=6 {
        let d = random_divisor(&k, &mut rng, &places, deg, 2);
        checks.push_result(
            format!("Poisson as residue for D = {}", d.to_text()),
            poisson_residue_check(&d).map(|r| (format!("{} checks", r.aggregate), r.pass)),
        );
    }
    let inputs = json!({ "seed": opts.seed, "q": [2, 3], "max_degree": 12, "poisson_degrees": [-3, 6] });
    Ok(checks.finish("suite_zeta", inputs, json!("exact")))
}
