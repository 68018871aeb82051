//! The t-adic boundary map on Milnor K-groups and the symbols built from it.

use super::IteratedSeries;
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::laurent::{tame_symbol_1d, Laurent};

/// Formal product of symbols over `k((u))`, written additively as
/// `sum e_i {x_i1, ..., x_il}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MilnorSymbol {
    pub level: u8,
    pub entries: Vec<(Vec<Laurent>, i64)>,
}

fn split(x: &IteratedSeries) -> Result<(i64, Laurent)> {
    let missing = || {
        Error::InsufficientPrecision(format!("no t-valuation visible below t^{}", x.prec()))
    };
    let a = x.nu_c().ok_or_else(missing)?;
    let eps = x.lead_t().ok_or_else(missing)?;
    if eps.is_zero_at_precision() {
        return Err(missing());
    }
    Ok((a, eps))
}

/// Boundary `d_t` for the t-adic valuation.
///
/// Each entry is written `t^a * unit`; expanding multilinearly with
/// `d{t, x, y} = {x̄, ȳ}`, `d{units} = 0` and `{t, t} = {t, -1}` gives, for
/// `x = t^a ε`, `y = t^b η`, `z = t^c ζ`:
///
/// * `d{x, y} = a{η̄} - b{ε̄} + ab{-1}`
/// * `d{x, y, z} = c{ε̄,η̄} - b{ε̄,ζ̄} + a{η̄,ζ̄} + bc{-1,ε̄} - ac{-1,η̄} + ab{-1,ζ̄} - abc{-1,-1}`
pub fn boundary_t(sym: &[IteratedSeries]) -> Result<MilnorSymbol> {
    let parts: Vec<(i64, Laurent)> = sym.iter().map(split).collect::<Result<_>>()?;
    let field = sym
        .first()
        .ok_or_else(|| Error::Validation("empty symbol".into()))?
        .field()
        .clone();
    let minus_one = |prec: i64| Laurent::constant(&field, field.from_int(-1), prec);
    let mut entries = match parts.as_slice() {
        [(a, e), (b, h)] => {
            let m1 = minus_one(e.prec().max(h.prec()));
            vec![(vec![h.clone()], *a), (vec![e.clone()], -b), (vec![m1], a * b)]
        }
        [(a, e), (b, h), (c, z)] => {
            let m1 = minus_one(e.prec().max(h.prec()).max(z.prec()));
            vec![
                (vec![e.clone(), h.clone()], *c),
                (vec![e.clone(), z.clone()], -b),
                (vec![h.clone(), z.clone()], *a),
                (vec![m1.clone(), e.clone()], b * c),
                (vec![m1.clone(), h.clone()], -a * c),
                (vec![m1.clone(), z.clone()], a * b),
                (vec![m1.clone(), m1], -a * b * c),
            ]
        }
        _ => return Err(Error::Validation("boundary_t takes 2 or 3 entries".into())),
    };
    entries.retain(|(_, e)| *e != 0);
    Ok(MilnorSymbol { level: (sym.len() - 1) as u8, entries })
}

/// Three-multiplicative symbol `(f, g, h)` with values in `k(P)*`: the u-stage
/// signed tame symbol applied to `d_t{f, g, h}`.
pub fn parshin_symbol_3(f: &IteratedSeries, g: &IteratedSeries, h: &IteratedSeries) -> Result<Elem> {
    let k = f.field().clone();
    let b = boundary_t(&[f.clone(), g.clone(), h.clone()])?;
    let mut acc = Elem::ONE;
    for (pair, e) in &b.entries {
        let v = tame_symbol_1d(&pair[0], &pair[1])?;
        acc = k.mul(acc, k.pow(v, *e)?);
    }
    Ok(acc)
}

/// `nu_u` of `d_t{f, g}`: the integer-valued symbol.
pub fn valuation_pair(f: &IteratedSeries, g: &IteratedSeries) -> Result<i64> {
    let b = boundary_t(&[f.clone(), g.clone()])?;
    let mut acc = 0;
    for (x, e) in &b.entries {
        let v = x[0].valuation().ok_or_else(|| {
            Error::InsufficientPrecision(format!("no u-valuation below u^{}", x[0].prec()))
        })?;
        acc += e * v;
    }
    Ok(acc)
}

/// Unsigned pairing `f^{nu(g)} g^{-nu(f)} mod t`, an element of `k((u))*`.
pub fn commutator_pairing(f: &IteratedSeries, g: &IteratedSeries) -> Result<Laurent> {
    let (a, e) = split(f)?;
    let (b, h) = split(g)?;
    Ok(e.pow(b)?.mul(&h.pow(-a)?))
}

#[cfg(test)]
mod tests {
    use super::super::testgen::arb_iter;
    use super::*;
    use crate::field::GaloisField;
    use proptest::prelude::*;

    fn f5() -> GaloisField {
        GaloisField::prime(5).unwrap()
    }

    fn mono(k: &GaloisField, a: i64, i: i64, j: i64) -> IteratedSeries {
        IteratedSeries::monomial(k, k.from_int(a), i, j, 8, 8)
    }

    /// Two-stage oracle for monomials `c t^a u^b`: read off valuations and
    /// leading constants directly and apply the closed formulas.
    fn monomial_parshin(k: &GaloisField, x: (i64, i64, i64), y: (i64, i64, i64), z: (i64, i64, i64)) -> Elem {
        // (coefficient, u-exponent, t-exponent)
        let tame = |p: (Elem, i64), q: (Elem, i64)| -> Elem {
            let mut v = k.mul(k.pow(p.0, q.1).unwrap(), k.pow(q.0, -p.1).unwrap());
            if (p.1 * q.1).rem_euclid(2) == 1 {
                v = k.neg(v);
            }
            v
        };
        let m1 = (k.from_int(-1), 0);
        let (e, h, zz) = ((k.from_int(x.0), x.1), (k.from_int(y.0), y.1), (k.from_int(z.0), z.1));
        let (a, b, c) = (x.2, y.2, z.2);
        let terms = [
            (tame(e, h), c),
            (tame(e, zz), -b),
            (tame(h, zz), a),
            (tame(m1, e), b * c),
            (tame(m1, h), -a * c),
            (tame(m1, zz), a * b),
            (tame(m1, m1), -a * b * c),
        ];
        terms.iter().fold(Elem::ONE, |acc, &(v, e)| k.mul(acc, k.pow(v, e).unwrap()))
    }

    #[test]
    fn boundary_of_t_and_unit() {
        let k = f5();
        let t = mono(&k, 1, 0, 1);
        let g = mono(&k, 3, 2, 0);
        let b = boundary_t(&[t.clone(), g.clone()]).unwrap();
        assert_eq!(b.entries.len(), 1);
        assert_eq!(b.entries[0].1, 1);
        assert_eq!(b.entries[0].0[0], g.lead_t().unwrap());
        let units = boundary_t(&[g.clone(), mono(&k, 2, 1, 0)]).unwrap();
        assert!(units.entries.is_empty());
    }

    #[test]
    fn boundary_of_t_t_is_minus_one() {
        let k = f5();
        let t = mono(&k, 1, 0, 1);
        let b = boundary_t(&[t.clone(), t.clone()]).unwrap();
        let value = b.entries.iter().fold(Elem::ONE, |acc, (x, e)| {
            k.mul(acc, k.pow(x[0].lead().unwrap(), *e).unwrap())
        });
        assert_eq!(value, k.from_int(-1));
        // direct tame-symbol oracle
        let tu = Laurent::var(&k, 4);
        assert_eq!(tame_symbol_1d(&tu, &tu).unwrap(), k.from_int(-1));
    }

    #[test]
    fn golden_parshin_t_u_c() {
        let k = f5();
        for c in 1..5 {
            let v = parshin_symbol_3(&mono(&k, 1, 0, 1), &mono(&k, 1, 1, 0), &mono(&k, c, 0, 0)).unwrap();
            assert_eq!(v, k.inv(k.from_int(c)).unwrap());
        }
    }

    #[test]
    fn golden_valuation_pair() {
        let k = f5();
        let t = mono(&k, 1, 0, 1);
        let u = mono(&k, 1, 1, 0);
        assert_eq!(valuation_pair(&t, &u).unwrap(), 1);
        assert_eq!(valuation_pair(&u, &t).unwrap(), -1);
        assert_eq!(valuation_pair(&u, &u).unwrap(), 0);
    }

    #[test]
    fn commutator_of_t_and_u() {
        let k = f5();
        let p = commutator_pairing(&mono(&k, 1, 0, 1), &mono(&k, 1, 1, 0)).unwrap();
        assert_eq!(p.valuation(), Some(-1));
        assert_eq!(p.lead(), Some(Elem::ONE));
    }

    #[test]
    fn monomial_symbols_match_oracle() {
        let k = GaloisField::prime(7).unwrap();
        let vals = [(1, 0, 1), (3, 1, 0), (2, -1, 2), (5, 2, -1), (6, 1, 1)];
        for &x in &vals {
            for &y in &vals {
                for &z in &vals {
                    let got = parshin_symbol_3(
                        &mono(&k, x.0, x.1, x.2),
                        &mono(&k, y.0, y.1, y.2),
                        &mono(&k, z.0, z.1, z.2),
                    )
                    .unwrap();
                    assert_eq!(got, monomial_parshin(&k, x, y, z));
                }
            }
        }
    }

    #[test]
    fn golden_commutator_convention() {
        // nu_u <t^a u^b, t^c u^d> = bc - ad = -(commutator of (a,b),(c,d) in Heis(3,Z))
        let k = f5();
        for a in -2..3 {
            for b in -2..3 {
                for c in -2..3 {
                    for d in -2..3 {
                        let f = mono(&k, 1, b, a);
                        let g = mono(&k, 1, d, c);
                        let p = commutator_pairing(&f, &g).unwrap();
                        let heis = super::super::heis::commutator_value((a, b), (c, d));
                        assert_eq!(p.valuation(), Some(b * c - a * d));
                        assert_eq!(p.valuation(), Some(-heis));
                        assert_eq!(p.lead(), Some(Elem::ONE));
                    }
                }
            }
        }
    }

    fn triple() -> impl Strategy<Value = (IteratedSeries, IteratedSeries, IteratedSeries, IteratedSeries)> {
        (arb_iter(5), arb_iter(5), arb_iter(5), arb_iter(5))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn parshin_is_trilinear((f1, f2, g, h) in triple()) {
            let k = f5();
            let lhs = parshin_symbol_3(&f1.mul(&f2), &g, &h).unwrap();
            let rhs = k.mul(parshin_symbol_3(&f1, &g, &h).unwrap(), parshin_symbol_3(&f2, &g, &h).unwrap());
            prop_assert_eq!(lhs, rhs);
            let lhs = parshin_symbol_3(&g, &f1.mul(&f2), &h).unwrap();
            let rhs = k.mul(parshin_symbol_3(&g, &f1, &h).unwrap(), parshin_symbol_3(&g, &f2, &h).unwrap());
            prop_assert_eq!(lhs, rhs);
            let lhs = parshin_symbol_3(&g, &h, &f1.mul(&f2)).unwrap();
            let rhs = k.mul(parshin_symbol_3(&g, &h, &f1).unwrap(), parshin_symbol_3(&g, &h, &f2).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn parshin_is_alternating((f, g, h, _) in triple()) {
            let k = f5();
            let v = parshin_symbol_3(&f, &g, &h).unwrap();
            let inv = k.inv(v).unwrap();
            prop_assert_eq!(parshin_symbol_3(&g, &f, &h).unwrap(), inv);
            prop_assert_eq!(parshin_symbol_3(&f, &h, &g).unwrap(), inv);
            prop_assert_eq!(parshin_symbol_3(&h, &g, &f).unwrap(), inv);
            let ff = parshin_symbol_3(&f, &f, &h).unwrap();
            prop_assert!(ff == Elem::ONE || ff == k.from_int(-1));
        }

        #[test]
        fn valuation_pair_is_antisymmetric_and_bilinear((f, g, h, _) in triple()) {
            prop_assert_eq!(valuation_pair(&f, &g).unwrap() + valuation_pair(&g, &f).unwrap(), 0);
            prop_assert_eq!(
                valuation_pair(&f.mul(&h), &g).unwrap(),
                valuation_pair(&f, &g).unwrap() + valuation_pair(&h, &g).unwrap()
            );
        }

        #[test]
        fn commutator_pairing_is_antisymmetric((f, g, _, _) in triple()) {
            let p = commutator_pairing(&f, &g).unwrap().mul(&commutator_pairing(&g, &f).unwrap());
            prop_assert_eq!(p.valuation(), Some(0));
            prop_assert_eq!(p.lead(), Some(Elem::ONE));
            prop_assert!((1..p.prec()).all(|n| p.coeff(n).unwrap().is_zero()));
        }
    }
}
