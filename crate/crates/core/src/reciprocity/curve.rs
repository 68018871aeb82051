//! The residue theorem on `P^1`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{Fold, VerificationReport};
use crate::adeles::{DivisorOnCurve, Place};
use crate::error::Result;
use crate::field::{monic_irreducibles, Elem, RatFn};
use crate::laurent::{residue_1d, OneForm};

const OFF_SUPPORT_SAMPLES: usize = 5;

/// `Tr_{k(P)/F_q} res_P(f dg)`.
pub fn residue_at_place(f: &RatFn, g: &RatFn, place: &Place) -> Result<Elem> {
    let (_, emb) = place.residue_field(f.field())?;
    if f.is_zero() || g.is_zero() {
        return Ok(Elem::ZERO);
    }
    let vf = place.valuation(f)?;
    let vg = place.valuation(g)?;
    let fs = place.expand(f, 3 + vg.abs())?;
    let gs = place.expand(g, 3 + vf.abs())?;
    let r = residue_1d(&OneForm::from_differential(&fs, &gs))?;
    Ok(emb.trace(r))
}

/// Residues of `f dg` at the places of the support (every pole of `f dg` must
/// be there) plus a few sampled places outside it; passes iff the sum is 0 and
/// the sampled residues vanish.
pub fn verify_residue_theorem_curve(f: &RatFn, g: &RatFn, support: Option<&[Place]>, seed: u64) -> Result<VerificationReport> {
    let k = f.field();
    let mut places: Vec<Place> = match support {
        Some(s) => s.to_vec(),
        None => {
            let mut v = Vec::new();
            for h in [f, g] {
                if !h.is_zero() {
                    v.extend(DivisorOnCurve::principal(h)?.support().map(|(p, _)| p.clone()));
                }
            }
            v
        }
    };
    places.push(Place::Infinity);
    places.sort();
    places.dedup();

    let mut entries = Vec::new();
    for p in &places {
        entries.push((p.to_string(), residue_at_place(f, g, p)?, false));
    }
    let mut pool = Vec::new();
    for d in 1..=4 {
        pool.extend(monic_irreducibles(k, d).into_iter().map(Place::Finite).filter(|p| !places.contains(p)));
        if pool.len() >= 4 * OFF_SUPPORT_SAMPLES {
            break;
        }
    }
    pool.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    pool.truncate(OFF_SUPPORT_SAMPLES);
    pool.sort();
    for p in &pool {
        entries.push((p.to_string(), residue_at_place(f, g, p)?, true));
    }
    let inputs = json!({
        "field": k.to_string(),
        "f": f.to_string(),
        "g": g.to_string(),
        "places": places.iter().map(|p| p.to_text()).collect::<Vec<_>>(),
    });
    Ok(VerificationReport::over_field("residue_theorem_curve", inputs, k, Fold::Sum, entries, json!("exact")))
}
