//! Traces of the extended representation `π̂_χ̂`, theta series and the
//! behaviour of the trace near roots of unity.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use serde_json::json;

use super::character::Character;
use super::group::{GroupElement, HeisenbergSpec};
use super::polar::Polar;
use super::rep::{finite_rep_trace, Representation};
use crate::error::{Error, Result};
use crate::reciprocity::VerificationReport;

/// Tail tolerance for truncated lattice sums.
pub const TRACE_EPSILON: f64 = 1e-14;
/// Largest number of lattice points summed before giving up.
pub const MAX_TERMS: usize = 50_000_000;
/// Largest rank handled by the trace machinery.
pub const MAX_RANK: usize = 3;

/// A truncated sum with its certified remainder bound.
#[derive(Clone, Debug, Serialize)]
pub struct TraceValue {
    pub re: f64,
    pub im: f64,
    pub terms: usize,
    pub truncation: i64,
    pub tail_bound: f64,
}

impl TraceValue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    fn exact(v: Complex64, terms: usize) -> Self {
        TraceValue { re: v.re, im: v.im, terms, truncation: 0, tail_bound: 0.0 }
    }
}

/// The summand `n ↦ χ_H'(k(n)) χ_C(<n, p> + (1/2)<n - r, k(n)>)` for `C = Z`,
/// written as `ρ^E(n) e^(2πi Θ(n))` with `E`, `Θ` exact quadratics.
struct Summand {
    rank: usize,
    /// `<e_i, k(e_j)>`.
    s: Vec<Vec<i128>>,
    /// Linear part of the `C`-argument, doubled: `2<e_i, p> - <r, k(e_i)>`.
    lin2: Vec<i128>,
    /// `χ_H'(k(e_i))` exponents.
    z_log: Vec<Rational64>,
    z_turns: Vec<Rational64>,
    c: Polar,
    den: i128,
}

impl Summand {
    fn new(spec: &HeisenbergSpec, chi: &Character, p: &[i64], kc: &[i64]) -> Self {
        let r = spec.h.ngens();
        let e = |i: usize| (0..r).map(|j| i64::from(i == j)).collect::<Vec<_>>();
        let ke: Vec<Vec<i64>> = (0..r).map(|i| spec.apply_a(kc, &e(i))).collect();
        let s: Vec<Vec<i128>> = (0..r).map(|i| (0..r).map(|j| spec.pair(&e(i), &ke[j])[0] as i128).collect()).collect();
        let lin2 = (0..r)
            .map(|i| 2 * spec.pair(&e(i), p)[0] as i128 - if spec.r.is_empty() { 0 } else { spec.pair(&spec.r, &ke[i])[0] as i128 })
            .collect();
        let z: Vec<Polar> = ke.iter().map(|v| chi.chi_h_prime(v)).collect();
        let c = chi.c[0];
        let den = z.iter().map(|x| *x.turns.denom()).fold(*c.turns.denom(), |a, b| a.lcm(&b)) as i128;
        // χ_H'(k(e_i)) was reduced mod 1; rebuild the exact linear turns from the generators
        let z_turns = ke
            .iter()
            .map(|v| v.iter().zip(&chi.h_prime).fold(Rational64::zero(), |a, (x, q)| a + q.turns * *x))
            .collect();
        let z_log = z.iter().map(|x| x.log_radius).collect();
        Summand { rank: r, s, lin2, z_log, z_turns, c, den }
    }

    /// `<n, p> + (1/2)<n - r, k(n)>` as an integer.
    fn c_arg(&self, n: &[i64]) -> i128 {
        let mut twice = 0i128;
        for i in 0..self.rank {
            let ni = n[i] as i128;
            twice += self.lin2[i] * ni;
            for j in 0..self.rank {
                twice += self.s[i][j] * ni * n[j] as i128;
            }
        }
        debug_assert!(twice % 2 == 0);
        twice / 2
    }

    fn eval(&self, n: &[i64], ln_base: f64) -> Complex64 {
        let x = self.c_arg(n);
        let mut log = self.c.log_radius.to_f64().unwrap() * x as f64;
        let mut turns = Rational64::zero();
        for i in 0..self.rank {
            log += self.z_log[i].to_f64().unwrap() * n[i] as f64;
            turns += self.z_turns[i] * n[i];
        }
        // Θ(n)·den mod den, exactly
        let ct = (self.c.turns * Rational64::from(self.den as i64)).to_integer() as i128;
        let mut num = (ct * x).rem_euclid(self.den);
        num += (turns * Rational64::from(self.den as i64)).to_integer() as i128;
        let frac = num.rem_euclid(self.den) as f64 / self.den as f64;
        Complex64::from_polar((log * ln_base).exp(), 2.0 * std::f64::consts::PI * frac)
    }

    /// `-log|summand|` is `n^T M n - b·n` with `M = -(1/2) a_C ln ρ S`.
    fn decay(&self, ln_base: f64) -> (DMatrix<f64>, Vec<f64>) {
        let a = self.c.log_radius.to_f64().unwrap() * ln_base;
        let m = DMatrix::from_fn(self.rank, self.rank, |i, j| -0.5 * a * self.s[i][j] as f64);
        let b = (0..self.rank).map(|i| a * self.lin2[i] as f64 / 2.0 + self.z_log[i].to_f64().unwrap() * ln_base).collect();
        (m, b)
    }
}

/// Largest `μ > 0` (up to 1%) with `M - μ I` positive definite, confirmed by
/// a Cholesky factorization.
pub(crate) fn certified_min_eigenvalue(m: &DMatrix<f64>) -> Option<f64> {
    let lam = m.clone().symmetric_eigen().eigenvalues.min();
    if !(lam > 0.0) {
        return None;
    }
    let mut mu = 0.99 * lam;
    for _ in 0..60 {
        let shifted = m - DMatrix::identity(m.nrows(), m.ncols()) * mu;
        if shifted.cholesky().is_some() {
            return Some(mu);
        }
        mu *= 0.5;
    }
    None
}

/// Smallest box radius `J` such that the lattice points outside `[-J, J]^r`
/// contribute at most `target`, given `|term(n)| ≤ exp(-μ|n|^2 + β|n|_2)`.
pub(crate) fn box_radius(rank: usize, mu: f64, beta: f64, target: f64) -> (i64, f64) {
    let r = rank as i32;
    let sr = (rank as f64).sqrt();
    let shell = |j: f64| ((2.0 * j + 1.0).powi(r) - (2.0 * j - 1.0).powi(r)) * (-mu * j * j + beta * sr * j).exp();
    // shells are summed from far to near so that each suffix is a bound
    let peak = (beta * sr / (2.0 * mu)).max(0.0);
    let mut far = peak.ceil() as i64 + 1;
    while shell(far as f64) > 0.0 && -mu * (far * far) as f64 + beta * sr * far as f64 > -800.0 {
        far += 1 + far / 8;
    }
    let mut suffix = 0.0;
    let mut j = far;
    while j > 0 {
        let s = suffix + shell(j as f64);
        if s > target || (j as f64) <= peak {
            break;
        }
        suffix = s;
        j -= 1;
    }
    (j, suffix)
}

fn lattice_points(rank: usize, j: i64) -> impl Iterator<Item = Vec<i64>> {
    let side = (2 * j + 1) as usize;
    let total = side.pow(rank as u32);
    (0..total).map(move |mut idx| {
        let mut v = vec![0i64; rank];
        for c in (0..rank).rev() {
            v[c] = (idx % side) as i64 - j;
            idx /= side;
        }
        v
    })
}

/// `Tr π̂_χ̂(m, p, c, k)`: `0` if `m ∉ H_χ`, otherwise
/// `χ_A(k) χ_H(m) χ_H'(p) χ_C(c) Σ_(n ∈ H/H_χ) χ_H'(k(n)) χ_C(<n, p> + (1/2)<n - r, k(n)>)`.
///
/// Needs torsion-free `H`, `H'` of rank at most 3 and `C = Z`; `H_χ` must be
/// of finite index or zero. An infinite sum is certified to [`TRACE_EPSILON`].
pub fn extended_trace(spec: &HeisenbergSpec, chi: &Character, g: &GroupElement) -> Result<TraceValue> {
    if !spec.h.is_free() || !spec.h_prime.is_free() || spec.c != super::group::AbelianGroup::free(1) {
        return Err(Error::Validation("traces need torsion-free H, H' and C = Z".into()));
    }
    if spec.h.rank > MAX_RANK {
        return Err(Error::Validation(format!("rank of H is {}, at most {MAX_RANK} is supported", spec.h.rank)));
    }
    let rep = Representation::new(spec, chi)?;
    if !rep.stab.contains(&g.m) {
        return Ok(TraceValue::exact(Complex64::new(0.0, 0.0), 0));
    }
    let kc = if g.k.is_empty() { vec![0; spec.a.len()] } else { g.k.clone() };
    rep.check_extension(&kc)?;
    let prefactor = chi.chi_a(&kc).mul(&chi.chi_h(&g.m)).mul(&chi.chi_h_prime(&g.p)).mul(&chi.chi_c(&g.c));
    let pre = prefactor.to_complex(chi.base);
    let summand = Summand::new(spec, chi, &g.p, &kc);
    let ln_base = chi.base.ln();
    let r = spec.h.rank;

    if let Some(cosets) = rep.stab.cosets(r) {
        let sum: Complex64 = cosets.iter().map(|n| summand.eval(n, ln_base)).sum();
        return Ok(TraceValue::exact(pre * sum, cosets.len()));
    }
    if !rep.stab.hnf.is_empty() {
        return Err(Error::Validation("H_chi must be zero or of finite index".into()));
    }
    let (m, b) = summand.decay(ln_base);
    let mu = certified_min_eigenvalue(&m).ok_or_else(|| {
        Error::Divergent(format!("-log|chi_C(<n, k(n)>)| is not positive definite on H (k = {kc:?})"))
    })?;
    let beta = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = TRACE_EPSILON / 10.0 / pre.norm().max(f64::MIN_POSITIVE);
    let (j, tail) = box_radius(r, mu, beta, target);
    let terms = ((2 * j + 1) as usize).checked_pow(r as u32).unwrap_or(usize::MAX);
    if terms > MAX_TERMS {
        return Err(Error::Inconclusive(format!("{terms} lattice points needed for the requested tail bound")));
    }
    let sum: Complex64 = lattice_points(r, j).map(|n| summand.eval(&n, ln_base)).sum();
    Ok(TraceValue { re: (pre * sum).re, im: (pre * sum).im, terms, truncation: j, tail_bound: tail * pre.norm() })
}

/// `ϑ_(p,k,a)(z, λ) = z^p Σ_(n ∈ Z) a^n z^(kn) λ^(np + kn(n-1)/2)` for `k > 0`,
/// `0 < |λ| < 1`, truncated so that each one-sided tail is at most `ε/2`.
pub fn theta_series(p: i64, k: i64, a: Complex64, z: Complex64, lambda: Complex64, eps: f64) -> Result<TraceValue> {
    let lnl = lambda.norm().ln();
    if k <= 0 {
        return Err(Error::Validation(format!("theta series needs k > 0, got {k}")));
    }
    if !(lambda.norm() > 0.0 && lambda.norm() < 1.0) || a.norm() == 0.0 || z.norm() == 0.0 {
        return Err(Error::Validation("theta series needs 0 < |lambda| < 1 and nonzero a, z".into()));
    }
    if !(eps > 0.0) {
        return Err(Error::Validation("tolerance must be positive".into()));
    }
    let (la, lz, ll) = (a.ln(), z.ln(), lambda.ln());
    let kf = k as f64;
    // log|term(n)| = αn^2 + βn
    let alpha = kf / 2.0 * lnl;
    let beta = a.norm().ln() + kf * z.norm().ln() + (p as f64 - kf / 2.0) * lnl;
    let log_mag = |n: f64| alpha * n * n + beta * n;
    let term = |n: i64| {
        let e = n as f64 * la + (k * n) as f64 * lz + (n * p) as f64 * ll + ((k * n * (n - 1)) / 2) as f64 * ll;
        e.exp()
    };
    // beyond n ≥ N past the peak, successive ratios are at most exp(α(2N+1) + β) < 1
    let center = -beta / (2.0 * alpha);
    let side = |dir: f64| -> (i64, f64) {
        let mut n = (center * dir).ceil().max(0.0) as i64 + 1;
        loop {
            let nf = dir * n as f64;
            let q = (alpha * (2.0 * n as f64 + 1.0) + dir * beta).exp();
            let bound = log_mag(nf).exp() / (1.0 - q);
            if q < 1.0 && bound <= eps / 2.0 {
                return (n, bound);
            }
            n += 1;
        }
    };
    let (hi, t1) = side(1.0);
    let (lo, t2) = side(-1.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for n in -(lo - 1)..hi {
        sum += term(n);
    }
    let v = z.powi(p as i32) * sum;
    let zp = z.norm().powi(p as i32);
    Ok(TraceValue { re: v.re, im: v.im, terms: (hi + lo - 1) as usize, truncation: hi.max(lo), tail_bound: (t1 + t2) * zp })
}

/// One point on the radial path `λ = e^(-s) ζ`.
#[derive(Clone, Debug, Serialize)]
pub struct LimitSample {
    pub s: f64,
    pub trace_abs: f64,
    pub terms: usize,
}

/// Fit of `log|Tr|` against `log(-log|λ|)` near a root of unity, for
/// `H = H' = Z^r` with identity pairing, `A = Z·kI`, `r = (1, ..., 1)`,
/// `χ_H = χ_H' = 1`, `g = (0, 0, 0, 1)`.
#[derive(Clone, Debug, Serialize)]
pub struct LimitReport {
    pub rank: usize,
    pub order: i64,
    pub k: i64,
    pub exponent: f64,
    pub expected_exponent: f64,
    pub fitted_constant: f64,
    /// `|Tr_0| [H : H_χ0]^(-1) (Det Q)^(-1/2) (√π/2)^rk`.
    pub constant_parse_a: Option<f64>,
    /// `|Tr_0| [H : H_χ0]^(-1) (Det Q)^(-1/2) (√π)^rk 2^(rk/2)`, the reading
    /// with `(log|λ|^(-1) / 2)^(-rk/2)`.
    pub constant_parse_b: Option<f64>,
    pub finite_trace: Option<[f64; 2]>,
    pub samples: Vec<LimitSample>,
    pub tolerance: f64,
    pub pass: bool,
}

/// Limit of the trace as `λ = ρζ → ζ = e^(2πi/N)` radially.
pub fn limit_check(rank: usize, order: i64, k: i64, tolerance: f64) -> Result<LimitReport> {
    if !(1..=2).contains(&rank) || order < 1 || k < 1 {
        return Err(Error::Validation("limit check needs rank 1 or 2, N ≥ 1 and k ≥ 1".into()));
    }
    let spec = HeisenbergSpec::diagonal(&vec![1; rank], &vec![k; rank]);
    let g = spec.element(&vec![0; rank], &vec![0; rank], &[0], &[1])?;
    let zeta = Polar::root_of_unity(1, order);
    let npts = 8;
    let mut samples = Vec::new();
    for i in 0..npts {
        let s = 1e-3 * 10f64.powf(i as f64 / (npts - 1) as f64);
        let mut chi = Character::new(&spec, (-s).exp());
        chi.c[0] = Polar::new(Rational64::from(1), zeta.turns);
        let t = extended_trace(&spec, &chi, &g)?;
        samples.push(LimitSample { s, trace_abs: t.value().norm(), terms: t.terms });
    }
    if samples.iter().any(|x| !(x.trace_abs > 0.0)) {
        return Err(Error::Inconclusive("trace vanishes on the path, no fit possible".into()));
    }
    let xs: Vec<f64> = samples.iter().map(|x| x.s.ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|x| x.trace_abs.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;

    let mut chi0 = Character::new(&spec, 0.5);
    chi0.c[0] = zeta;
    let finite = finite_rep_trace(&spec, &chi0, &g).ok();
    let rk = rank as i32;
    let base = finite.as_ref().map(|f| f.value().norm() / (order.pow(rank as u32) as f64) / (k as f64).powf(rank as f64 / 2.0));
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let expected = -(rank as f64) / 2.0;
    Ok(LimitReport {
        rank,
        order,
        k,
        exponent: slope,
        expected_exponent: expected,
        fitted_constant: intercept.exp(),
        constant_parse_a: base.map(|b| b * (sqrt_pi / 2.0).powi(rk)),
        constant_parse_b: base.map(|b| b * sqrt_pi.powi(rk) * 2f64.powf(rank as f64 / 2.0)),
        finite_trace: finite.map(|f| f.matrix_trace),
        samples,
        tolerance,
        pass: (slope - expected).abs() <= tolerance,
    })
}

impl LimitReport {
    pub fn report(&self) -> VerificationReport {
        let inputs = json!({
            "rank": self.rank,
            "N": self.order,
            "k": self.k,
            "fitted_constant": format!("{:.6e}", self.fitted_constant),
            "constant_parse_a": self.constant_parse_a.map(|x| format!("{x:.6e}")),
            "constant_parse_b": self.constant_parse_b.map(|x| format!("{x:.6e}")),
            "samples": self.samples.iter().map(|x| json!({"s": format!("{:.6e}", x.s), "abs_trace": format!("{:.12e}", x.trace_abs)})).collect::<Vec<_>>(),
        });
        let checks = vec![(
            "divergence exponent = -rk(H)/2".to_string(),
            format!("fitted {:.6} vs {:.1} (tolerance {})", self.exponent, self.expected_exponent, self.tolerance),
            self.pass,
        )];
        VerificationReport::checks("limit_formula", inputs, checks, json!({ "tolerance": self.tolerance }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heis_chi(base: f64, z: &str, lambda: &str, t: &str) -> (HeisenbergSpec, Character) {
        let s = HeisenbergSpec::heis3();
        let mut chi = Character::new(&s, base);
        chi.h_prime[0] = Polar::parse(z).unwrap();
        chi.c[0] = Polar::parse(lambda).unwrap();
        chi.a[0] = Polar::parse(t).unwrap();
        (s, chi)
    }

    #[test]
    fn theta_small_lambda() {
        let one = Complex64::new(1.0, 0.0);
        let v = theta_series(0, 1, one, one, Complex64::new(1e-6, 0.0), 1e-15).unwrap();
        assert!((v.value() - Complex64::new(2.0, 0.0)).norm() < 1e-5);
        assert!(theta_series(0, 0, one, one, Complex64::new(0.5, 0.0), 1e-15).is_err());
        assert!(theta_series(0, 1, one, one, Complex64::new(1.0, 0.0), 1e-15).is_err());
    }

    #[test]
    fn theta_quasi_periodicity() {
        let a = Complex64::new(0.7, 0.4);
        let z = Complex64::from_polar(1.3, 0.9);
        let lambda = Complex64::from_polar(0.4, 2.1);
        for (p, k, n) in [(0, 1, 1), (1, 2, -1), (2, 3, 2)] {
            let f = |z: Complex64| theta_series(p, k, a, z, lambda, 1e-16).unwrap().value();
            let phi = a.powi(-n as i32) * z.powi(-(k * n) as i32) * lambda.powf(-0.5 * (k * n * (n - 1)) as f64);
            let lhs = f(lambda.powi(n as i32) * z);
            let rhs = phi * f(z);
            assert!((lhs - rhs).norm() < 1e-12 * rhs.norm().max(1.0), "{p} {k} {n}: {lhs} {rhs}");
        }
    }

    #[test]
    fn trace_is_theta() {
        let (s, chi) = heis_chi(0.5, "-1/3,1/7", "1,2/9", "1/2,1/4");
        for (p, c, k) in [(0, 0, 1), (1, -2, 2), (-3, 1, 3)] {
            let g = s.element(&[0], &[p], &[c], &[k]).unwrap();
            let tr = extended_trace(&s, &chi, &g).unwrap();
            let lam = chi.c[0].to_complex(0.5);
            let th = theta_series(p, k, Complex64::new(1.0, 0.0), chi.h_prime[0].to_complex(0.5), lam, 1e-16).unwrap();
            let expect = lam.powi(c as i32) * chi.a[0].to_complex(0.5).powi(k as i32) * th.value();
            assert!((tr.value() - expect).norm() < 1e-12 * expect.norm().max(1.0), "{:?} vs {expect}", tr.value());
            assert!(tr.tail_bound <= TRACE_EPSILON / 10.0);
        }
        let off = s.element(&[1], &[0], &[0], &[1]).unwrap();
        assert_eq!(extended_trace(&s, &chi, &off).unwrap().value(), Complex64::new(0.0, 0.0));
        let flat = s.element(&[0], &[0], &[0], &[0]).unwrap();
        assert!(matches!(extended_trace(&s, &chi, &flat), Err(Error::Divergent(_))));
        let back = s.element(&[0], &[0], &[0], &[-1]).unwrap();
        assert!(matches!(extended_trace(&s, &chi, &back), Err(Error::Divergent(_))));
    }

    #[test]
    fn finite_index_trace() {
        let (s, chi) = heis_chi(0.5, "0,0", "0,1/5", "0,0");
        let g = s.element(&[0], &[1], &[0], &[2]).unwrap();
        let t = extended_trace(&s, &chi, &g).unwrap();
        assert!((t.value() - Complex64::new(5f64.sqrt(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn limit_exponents() {
        let r = limit_check(1, 1, 1, 0.01).unwrap();
        assert!(r.pass, "{}", r.exponent);
        // Σ exp(-s n(n-1)/2) ~ √(2π/s)
        assert!((r.fitted_constant - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-2);
        assert!((r.constant_parse_b.unwrap() - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-12);
        let r = limit_check(1, 3, 1, 0.02).unwrap();
        assert!(r.pass, "{}", r.exponent);
    }
}
