//! Characters of `G = H × H' × C`, stabilizers `H_χ` and equivalence of the
//! induced representations.

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::group::{AbelianGroup, HeisenbergSpec};
use super::intlat;
use super::polar::Polar;
use crate::error::{Error, Result};

/// Values of `χ_H`, `χ_H'`, `χ_C`, `χ_A` on the fixed generators, with
/// log-radii relative to `base`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Character {
    pub base: f64,
    pub h: Vec<Polar>,
    pub h_prime: Vec<Polar>,
    pub c: Vec<Polar>,
    #[serde(default)]
    pub a: Vec<Polar>,
}

fn eval(vals: &[Polar], v: &[i64]) -> Polar {
    vals.iter().zip(v).fold(Polar::one(), |acc, (x, &e)| acc.mul(&x.pow(e)))
}

fn check_values(g: &AbelianGroup, vals: &[Polar], what: &str) -> Result<()> {
    if vals.len() != g.ngens() {
        return Err(Error::Validation(format!("{what} has {} values, the group has {} generators", vals.len(), g.ngens())));
    }
    for (i, d) in g.torsion.iter().enumerate() {
        if !vals[g.rank + i].pow(*d).is_one() {
            return Err(Error::Validation(format!("{what} sends a generator of order {d} to a value of other order")));
        }
    }
    Ok(())
}

impl Character {
    /// `χ_H = 1`, `χ_H'(e'_l) = z_l`, `χ_C(e_j) = λ_j`, `χ_A = 1`.
    pub fn new(spec: &HeisenbergSpec, base: f64) -> Self {
        Character {
            base,
            h: vec![Polar::one(); spec.h.ngens()],
            h_prime: vec![Polar::one(); spec.h_prime.ngens()],
            c: vec![Polar::one(); spec.c.ngens()],
            a: vec![Polar::one(); spec.a.len()],
        }
    }

    pub fn validate(&self, spec: &HeisenbergSpec) -> Result<()> {
        if !(self.base > 0.0 && self.base.is_finite() && self.base != 1.0) {
            return Err(Error::Validation(format!("base {} must be positive, finite and not 1", self.base)));
        }
        check_values(&spec.h, &self.h, "chi_H")?;
        check_values(&spec.h_prime, &self.h_prime, "chi_H'")?;
        check_values(&spec.c, &self.c, "chi_C")?;
        if self.a.len() != spec.a.len() {
            return Err(Error::Validation(format!("chi_A has {} values, A has {} generators", self.a.len(), spec.a.len())));
        }
        Ok(())
    }

    pub fn chi_h(&self, m: &[i64]) -> Polar {
        eval(&self.h, m)
    }

    pub fn chi_h_prime(&self, p: &[i64]) -> Polar {
        eval(&self.h_prime, p)
    }

    pub fn chi_c(&self, c: &[i64]) -> Polar {
        eval(&self.c, c)
    }

    pub fn chi_a(&self, k: &[i64]) -> Polar {
        eval(&self.a, k)
    }

    /// `h(χ_H')`: the translate `p ↦ χ_H'(p) χ_C(<h, p>)`.
    pub fn translate(&self, spec: &HeisenbergSpec, h: &[i64]) -> Character {
        let mut out = self.clone();
        for (l, v) in out.h_prime.iter_mut().enumerate() {
            let e: Vec<i64> = (0..spec.h_prime.ngens()).map(|j| i64::from(j == l)).collect();
            *v = v.mul(&self.chi_c(&spec.pair(h, &e)));
        }
        out
    }
}

/// `H_χ` as an HNF basis (including the torsion relations of `H`), so that
/// `G_χ = H_χ · H' · C`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stabilizer {
    pub hnf: Vec<Vec<i64>>,
    /// `[H : H_χ]`, absent when infinite.
    pub index: Option<i64>,
}

impl Stabilizer {
    pub fn contains(&self, v: &[i64]) -> bool {
        intlat::reduce(v, &self.hnf).iter().all(|&x| x == 0)
    }

    /// Canonical representative of `v + H_χ`.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        intlat::reduce(v, &self.hnf)
    }

    /// Generators of `H_χ` other than the torsion relations.
    pub fn generators(&self) -> &[Vec<i64>] {
        &self.hnf
    }

    /// Whether `(m, p, c)` lies in `G_χ`.
    pub fn contains_element(&self, m: &[i64]) -> bool {
        self.contains(m)
    }

    /// Canonical coset representatives, when the index is finite.
    pub fn cosets(&self, dim: usize) -> Option<Vec<Vec<i64>>> {
        self.index?;
        let pivots: Vec<i64> = self.hnf.iter().map(|r| r.iter().copied().find(|&x| x != 0).unwrap()).collect();
        let mut out = vec![vec![0i64; dim]];
        for (i, d) in pivots.iter().enumerate() {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..*d).map(move |x| {
                        let mut w = v.clone();
                        w[i] = x;
                        w
                    })
                })
                .collect();
        }
        Some(out)
    }
}

/// Integer system for `h ↦ (χ_C(<h, e'_l>))_l`: log-radius columns that must
/// vanish and angle columns that must be integral, scaled by a common
/// denominator `den`, followed by the rows `-den` that absorb the integers.
struct RuleSystem {
    rows: Vec<Vec<i64>>,
    ncols: usize,
    den: i64,
}

fn rule_system(spec: &HeisenbergSpec, chi: &Character) -> RuleSystem {
    let nh = spec.h.ngens();
    let nl = spec.h_prime.ngens();
    let mut alpha = vec![vec![Rational64::zero(); nl]; nh];
    let mut beta = vec![vec![Rational64::zero(); nl]; nh];
    for i in 0..nh {
        for l in 0..nl {
            for (j, v) in spec.pairing[i][l].iter().enumerate() {
                alpha[i][l] += chi.c[j].log_radius * *v;
                beta[i][l] += chi.c[j].turns * *v;
            }
        }
    }
    let den = alpha.iter().chain(&beta).flatten().fold(1i64, |d, x| d.lcm(x.denom()));
    let ncols = 2 * nl;
    let mut rows: Vec<Vec<i64>> = (0..nh)
        .map(|i| {
            let mut r: Vec<i64> = alpha[i].iter().map(|x| (x * den).to_integer()).collect();
            r.extend(beta[i].iter().map(|x| (x * den).to_integer()));
            r
        })
        .collect();
    for l in 0..nl {
        let mut r = vec![0; ncols];
        r[nl + l] = -den;
        rows.push(r);
    }
    RuleSystem { rows, ncols, den }
}

/// Kernel `H_χ` of `h ↦ (h' ↦ χ_C(<h, h'>))`, by integer linear algebra on
/// the exact polar data.
pub fn stabilizer(spec: &HeisenbergSpec, chi: &Character) -> Stabilizer {
    let nh = spec.h.ngens();
    let sys = rule_system(spec, chi);
    let mut gens: Vec<Vec<i64>> = intlat::left_kernel(&sys.rows, sys.ncols).into_iter().map(|z| z[..nh].to_vec()).collect();
    gens.extend(spec.h.relations());
    let hnf = intlat::hnf(&gens, nh);
    let index = intlat::index(&hnf, nh);
    Stabilizer { hnf, index }
}

/// Outcome of comparing `V_χ` with `V_χ'`, with the translating `h` when it
/// exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Equivalence {
    pub equivalent: bool,
    pub same_central: bool,
    pub witness: Option<Vec<i64>>,
    pub agree_on_stabilizer: bool,
}

/// The three conditions: `χ_C = χ'_C`; `χ'_H' = h(χ_H')` for some `h`;
/// `χ'_H = χ_H` on `H_χ`.
pub fn equivalence_test(spec: &HeisenbergSpec, chi: &Character, other: &Character) -> Equivalence {
    let mut out = Equivalence { equivalent: false, same_central: false, witness: None, agree_on_stabilizer: false };
    if chi.base != other.base || chi.c != other.c {
        return out;
    }
    out.same_central = true;
    let nh = spec.h.ngens();
    let nl = spec.h_prime.ngens();
    let sys = rule_system(spec, chi);
    let ratio: Vec<Polar> = other.h_prime.iter().zip(&chi.h_prime).map(|(b, a)| b.mul(&a.inv())).collect();
    let den = ratio.iter().fold(sys.den, |d, x| d.lcm(x.log_radius.denom()).lcm(x.turns.denom()));
    let scale = den / sys.den;
    let rows: Vec<Vec<i64>> = sys.rows.iter().map(|r| r.iter().map(|x| x * scale).collect()).collect();
    let mut target: Vec<i64> = ratio.iter().map(|x| (x.log_radius * den).to_integer()).collect();
    target.extend(ratio.iter().map(|x| (x.turns * den).to_integer()));
    debug_assert_eq!(target.len(), 2 * nl);
    if let Some(z) = intlat::solve(&rows, &target, sys.ncols) {
        let mut h = z[..nh].to_vec();
        spec.h.normalize(&mut h);
        out.witness = Some(h);
    }
    let stab = stabilizer(spec, chi);
    out.agree_on_stabilizer = stab.hnf.iter().all(|g| chi.chi_h(g) == other.chi_h(g));
    out.equivalent = out.witness.is_some() && out.agree_on_stabilizer;
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heis_char(lambda: &str, z: &str) -> (HeisenbergSpec, Character) {
        let s = HeisenbergSpec::heis3();
        let mut chi = Character::new(&s, 0.5);
        chi.c[0] = Polar::parse(lambda).unwrap();
        chi.h_prime[0] = Polar::parse(z).unwrap();
        (s, chi)
    }

    #[test]
    fn stabilizer_examples() {
        let (s, chi) = heis_char("1,1/7", "0,0");
        let st = stabilizer(&s, &chi);
        assert!(st.hnf.is_empty());
        assert_eq!(st.index, None);
        let (s, chi) = heis_char("0,2/5", "0,0");
        let st = stabilizer(&s, &chi);
        assert_eq!(st.hnf, vec![vec![5]]);
        assert_eq!(st.cosets(1).unwrap().len(), 5);
        let (s, chi) = heis_char("0,0", "0,0");
        assert_eq!(stabilizer(&s, &chi).hnf, vec![vec![1]]);
    }

    #[test]
    fn stabilizer_with_torsion() {
        let s = HeisenbergSpec {
            h: AbelianGroup { rank: 1, torsion: vec![6] },
            h_prime: AbelianGroup::free(1),
            c: AbelianGroup { rank: 0, torsion: vec![6] },
            pairing: vec![vec![vec![1]], vec![vec![1]]],
            r: vec![],
            a: vec![],
        };
        s.validate().unwrap();
        let mut chi = Character::new(&s, 0.5);
        chi.c[0] = Polar::root_of_unity(1, 3);
        chi.validate(&s).unwrap();
        let st = stabilizer(&s, &chi);
        assert_eq!(st.index, Some(3));
        assert!(st.contains(&[3, 0]) && st.contains(&[1, 2]) && !st.contains(&[1, 0]));
    }

    #[test]
    fn equivalence_examples() {
        let (s, chi) = heis_char("1,1/7", "1/3,1/4");
        let moved = chi.translate(&s, &[-4]);
        let e = equivalence_test(&s, &chi, &moved);
        assert!(e.equivalent);
        assert_eq!(e.witness, Some(vec![-4]));
        let (_, other) = heis_char("1,2/7", "1/3,1/4");
        assert!(!equivalence_test(&s, &chi, &other).equivalent);
        let (_, other) = heis_char("1,1/7", "1/2,1/4");
        assert!(!equivalence_test(&s, &chi, &other).equivalent);

        // finite stabilizer: χ_H only matters on H_χ = 3Z
        let (s, mut chi) = heis_char("0,1/3", "0,1/5");
        chi.h[0] = Polar::root_of_unity(1, 6);
        let mut other = chi.translate(&s, &[1]);
        other.h[0] = Polar::root_of_unity(1, 2);
        assert!(equivalence_test(&s, &chi, &other).equivalent);
        other.h[0] = Polar::root_of_unity(1, 4);
        assert!(!equivalence_test(&s, &chi, &other).equivalent);
    }
}
