//! Residue relations and symbol reciprocity on `P^2`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{Fold, VerificationReport};
use crate::error::{Error, Result};
use crate::field::{Elem, GaloisField, Poly2, RatFn2};
use crate::local2d::{parshin_symbol_3, residue_2d};
use crate::surface::{
    divisor_of, divisor_of_form, enumerate_points, expand_at_flag, expand_form_at_flag, flag_local_params,
    intersection_points, lies_on, with_escalation, CurveOnSurface, FactoredDivisor, Flag, SurfacePoint, Window,
};

const OFF_SUPPORT_SAMPLES: usize = 5;

/// Which sum is formed: over points of a fixed curve, or over curves through
/// a fixed point.
#[derive(Clone, Debug)]
pub enum SurfaceMode {
    FixedCurve(CurveOnSurface),
    FixedPoint(SurfacePoint),
}

impl SurfaceMode {
    fn describe(&self) -> Value {
        match self {
            SurfaceMode::FixedCurve(c) => json!({ "fixed_curve": c.to_text() }),
            SurfaceMode::FixedPoint(p) => json!({ "fixed_point": p.to_string() }),
        }
    }
}

fn check_support(support: &[CurveOnSurface]) -> Result<()> {
    for c in support {
        if c.degree() == 2 && c.has_rational_singularity() {
            return Err(Error::Validation(format!("support curve {} is a degenerate conic", c.to_text())));
        }
    }
    Ok(())
}

/// Curves appearing in any of the divisors, line at infinity included.
fn curves_of(divs: &[&FactoredDivisor]) -> Vec<CurveOnSurface> {
    let mut out: Vec<CurveOnSurface> = Vec::new();
    for d in divs {
        for c in d.curves() {
            if !out.iter().any(|o| o.same_curve(c)) {
                out.push(c.clone());
            }
        }
    }
    out
}

fn push_point(points: &mut Vec<SurfacePoint>, p: SurfacePoint) {
    if !points.contains(&p) {
        points.push(p);
    }
}

/// Flags where a contribution can be nontrivial, in canonical order.
fn family(curves: &[CurveOnSurface], mode: &SurfaceMode) -> Result<Vec<(SurfacePoint, CurveOnSurface)>> {
    match mode {
        SurfaceMode::FixedCurve(c) => {
            let mut pts = Vec::new();
            for d in curves.iter().filter(|d| !d.same_curve(c)) {
                for p in intersection_points(c, d)? {
                    push_point(&mut pts, p);
                }
            }
            pts.sort_by_key(|p| (p.degree, p.homogeneous()));
            Ok(pts.into_iter().map(|p| (p, c.clone())).collect())
        }
        SurfaceMode::FixedPoint(p) => {
            let mut out = Vec::new();
            for c in curves {
                if lies_on(p, c)? {
                    out.push((p.clone(), c.clone()));
                }
            }
            Ok(out)
        }
    }
}

/// Flags outside the family where the contribution must be neutral.
fn off_support(
    base: &GaloisField,
    curves: &[CurveOnSurface],
    mode: &SurfaceMode,
    chosen: &[(SurfacePoint, CurveOnSurface)],
    seed: u64,
) -> Result<Vec<(SurfacePoint, CurveOnSurface)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match mode {
        SurfaceMode::FixedCurve(c) => {
            let mut pts: Vec<SurfacePoint> = enumerate_points(c, 2)?
                .into_iter()
                .filter(|p| !chosen.iter().any(|(q, _)| q == p))
                .collect();
            pts.shuffle(&mut rng);
            pts.truncate(OFF_SUPPORT_SAMPLES);
            Ok(pts.into_iter().map(|p| (p, c.clone())).collect())
        }
        SurfaceMode::FixedPoint(p) => {
            let k = base;
            let mut out: Vec<(SurfacePoint, CurveOnSurface)> = Vec::new();
            let monomials = [(2, 0), (1, 1), (0, 2), (1, 0), (0, 1), (0, 0)];
            for _ in 0..500_000 {
                if out.len() == OFF_SUPPORT_SAMPLES {
                    break;
                }
                let mut poly = Poly2::zero(k);
                for &(i, j) in &monomials {
                    poly.add_term(i, j, k.from_int(rng.gen_range(0..k.order() as i64)));
                }
                if poly.total_degree() < 1 {
                    continue;
                }
                let name = format!("sample{}", out.len());
                let c = CurveOnSurface::new(name, poly)?;
                // a split conic may contain a support curve
                if c.degree() == 2 && c.has_rational_singularity() {
                    continue;
                }
                let fresh = !curves.iter().chain(out.iter().map(|(_, c)| c)).any(|d| d.same_curve(&c));
                if fresh && lies_on(p, &c)? && flag_local_params(p, &c).is_ok() {
                    out.push((p.clone(), c));
                }
            }
            Ok(out)
        }
    }
}

/// Starting window from the divisor data: largest pole order along a curve
/// plus 2 in `t`, total pole order plus 2 in `u`.
fn initial_window(divs: &[&FactoredDivisor]) -> Window {
    let mut t = 0;
    let mut u = 0;
    for d in divs {
        for (_, m) in &d.entries {
            if *m < 0 {
                t = t.max(-m);
                u += -m;
            }
        }
    }
    Window::new((t + 2) as usize, (u + 2) as usize)
}

fn merge(a: Window, b: Window) -> Window {
    Window::new(a.t.max(b.t), a.u.max(b.u))
}

/// `sum res_{P,C}(ω)` for `ω = g dx ^ dy` over a fixed curve or point.
pub fn verify_residue_relations_surface(
    g: &RatFn2,
    support: &[CurveOnSurface],
    mode: &SurfaceMode,
    seed: u64,
) -> Result<VerificationReport> {
    check_support(support)?;
    let base = g.field().clone();
    let div = divisor_of_form(g, support)?;
    let polar: Vec<CurveOnSurface> =
        div.entries.iter().filter(|(_, m)| *m < 0).map(|(c, _)| c.clone()).collect();
    let start = initial_window(&[&div]);
    let mut used = start;
    let mut entries = Vec::new();
    let flags = family(&polar, mode)?;
    let extra = off_support(&base, &polar, mode, &flags, seed)?;
    for (i, (p, c)) in flags.iter().chain(extra.iter()).enumerate() {
        let fl = flag_local_params(p, c)?;
        let (r, w) = with_escalation(start, |w| residue_2d(&expand_form_at_flag(g, &fl, w)?, &base))?;
        used = merge(used, w);
        entries.push((fl.label(), r, i >= flags.len()));
    }
    let inputs = json!({
        "field": base.to_string(),
        "form": format!("({}) dx^dy", g.to_text()),
        "divisor": div.to_text(),
        "mode": mode.describe(),
    });
    let precision = json!({ "t": used.t, "u": used.u });
    Ok(VerificationReport::over_field("residue_relations_surface", inputs, &base, Fold::Sum, entries, precision))
}

fn normed_symbol(f: &RatFn2, g: &RatFn2, h: &RatFn2, fl: &Flag, w: Window) -> Result<Elem> {
    let e = |x: &RatFn2| expand_at_flag(x, fl, w);
    let v = parshin_symbol_3(&e(f)?, &e(g)?, &e(h)?)?;
    Ok(fl.embedding().norm(v))
}

/// `prod N_{k(P)/F_q} (f, g, h)_{P,C}` over a fixed curve or point.
pub fn verify_symbol_reciprocity(
    f: &RatFn2,
    g: &RatFn2,
    h: &RatFn2,
    support: &[CurveOnSurface],
    mode: &SurfaceMode,
    seed: u64,
) -> Result<VerificationReport> {
    check_support(support)?;
    let base = f.field().clone();
    let divs = [divisor_of(f, support)?, divisor_of(g, support)?, divisor_of(h, support)?];
    let refs: Vec<&FactoredDivisor> = divs.iter().collect();
    let curves = curves_of(&refs);
    let start = initial_window(&refs);
    let mut used = start;
    let flags = family(&curves, mode)?;
    let extra = off_support(&base, &curves, mode, &flags, seed)?;
    let mut entries = Vec::new();
    for (i, (p, c)) in flags.iter().chain(extra.iter()).enumerate() {
        let fl = flag_local_params(p, c)?;
        let (v, w) = with_escalation(start, |w| normed_symbol(f, g, h, &fl, w))?;
        used = merge(used, w);
        entries.push((fl.label(), v, i >= flags.len()));
    }
    let inputs = json!({
        "field": base.to_string(),
        "f": f.to_text(),
        "g": g.to_text(),
        "h": h.to_text(),
        "divisors": divs.iter().map(|d| d.to_text()).collect::<Vec<_>>(),
        "mode": mode.describe(),
    });
    let precision = json!({ "t": used.t, "u": used.u });
    Ok(VerificationReport::over_field("symbol_reciprocity", inputs, &base, Fold::Product, entries, precision))
}
