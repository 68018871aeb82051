//! Executes a [`TaskConfig`] and wraps the outcome in a report envelope.

use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use num_rational::Rational64;
use serde::Serialize;
use serde_json::{json, Value};

use super::config::{prime_power, Format, ModeKind, Task, TaskConfig};
use crate::adeles::{
    canonical_divisor, finite_fourier_poisson_on, plancherel_rr_check, poisson_residue_check, rr_cohomology,
    zeta_series, DivisorOnCurve, FourierWindow, Place, SubgroupSpec,
};
use crate::error::{Error, Result};
use crate::field::{parse_poly, parse_poly2, parse_ratfn, parse_rational, GaloisField, RatFn2};
use crate::heis::{asymptotic_check, extended_trace, functional_equation_check, lattice_theta, limit_check, theta_series, GroupElement, HeisenbergSpec, TRACE_EPSILON};
use crate::local2d::{parshin_symbol_3, valuation_pair};
use crate::reciprocity::{product_formula_check, verify_residue_relations_surface, verify_residue_theorem_curve, verify_symbol_reciprocity, SurfaceMode, VerificationReport};
use crate::suite::{run_suite, SuiteOptions, DEFAULT_SEED, SUITES};
use crate::surface::{expand_at_flag, flag_local_params, intersection_points, with_escalation, CurveOnSurface, SurfacePoint, Window};

pub const TOOL: &str = "adelia";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

const DEFAULT_PRECISION_T: usize = 8;
const DEFAULT_PRECISION_U: usize = 16;
/// Default tolerance for floating-point checks outside the suites.
const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Output of one task.
#[derive(Clone, Debug, Serialize)]
pub struct Envelope {
    pub tool: &'static str,
    pub version: &'static str,
    pub config_hash: String,
    pub task: String,
    pub pass: bool,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
    #[serde(skip)]
    pub text: String,
}

impl Envelope {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).unwrap_or_default(),
            Format::Text => {
                let mut s = format!("{} {} [{}]\n", self.task, if self.pass { "PASS" } else { "FAIL" }, &self.config_hash[..12]);
                s.push_str(&self.text);
                if let Some(t) = self.wall_time_s {
                    s.push_str(&format!("wall time: {t:.3}s\n"));
                }
                s
            }
        }
    }
}

struct Outcome {
    pass: bool,
    result: Value,
    text: String,
}

impl Outcome {
    fn report(r: VerificationReport) -> Self {
        Outcome { pass: r.pass, text: r.to_text(), result: r.to_json() }
    }

    fn value(result: Value, text: String) -> Self {
        Outcome { pass: true, result, text }
    }
}

/// Runs the task; `timing` adds the wall time, which makes output depend on
/// the machine.
pub fn run_task(cfg: &TaskConfig, timing: bool) -> Result<Envelope> {
    let start = Instant::now();
    let out = execute(cfg)?;
    Ok(Envelope {
        tool: TOOL,
        version: VERSION,
        config_hash: cfg.hash(),
        task: cfg.task.kind().into(),
        pass: out.pass,
        result: out.result,
        wall_time_s: timing.then(|| start.elapsed().as_secs_f64()),
        text: out.text,
    })
}

fn field(q: u32) -> Result<GaloisField> {
    let (p, m) = prime_power(q)?;
    GaloisField::new(p, m)
}

/// `"inf"` or a monic irreducible polynomial in `x`.
fn place(src: &str, k: &GaloisField) -> Result<Place> {
    if src.trim() == "inf" {
        return Ok(Place::Infinity);
    }
    Place::finite(parse_poly(src, k)?)
}

/// `"z"` is the line at infinity; anything else is an affine equation.
fn curve(src: &str, k: &GaloisField) -> Result<CurveOnSurface> {
    let s = src.trim();
    if s == "z" {
        return Ok(CurveOnSurface::line_at_infinity(k));
    }
    CurveOnSurface::new(s, parse_poly2(s, k)?)
}

fn curves(srcs: &[String], k: &GaloisField) -> Result<Vec<CurveOnSurface>> {
    srcs.iter().map(|s| curve(s, k)).collect()
}

/// `"x,y"` (affine), `"[X:Y:Z]"` (projective, rational), or `"C1 & C2 #i"`
/// for the i-th closed point of an intersection, counted from 0.
pub fn point(src: &str, k: &GaloisField) -> Result<SurfacePoint> {
    let s = src.trim();
    let int = |t: &str, at: usize| -> Result<i64> {
        t.trim().parse::<i64>().map_err(|_| Error::parse(at, format!("expected an integer, got '{}'", t.trim())))
    };
    if let Some((lhs, idx)) = s.split_once('#') {
        let (a, b) = lhs.split_once('&').ok_or_else(|| Error::parse(0, "expected 'C1 & C2 #i'"))?;
        let i = int(idx, lhs.len() + 1)? as usize;
        let pts = intersection_points(&curve(a, k)?, &curve(b, k)?)?;
        let n = pts.len();
        return pts.into_iter().nth(i).ok_or_else(|| Error::Validation(format!("intersection has {n} points, index {i} requested")));
    }
    if let Some(inner) = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
        let parts: Vec<&str> = inner.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::parse(1, "expected [X:Y:Z]"));
        }
        let mut h = [k.zero(); 3];
        let mut at = 1;
        for (i, t) in parts.iter().enumerate() {
            h[i] = k.from_int(int(t, at)?);
            at += t.len() + 1;
        }
        if h.iter().all(|e| e.is_zero()) {
            return Err(Error::Validation("[0:0:0] is not a point".into()));
        }
        return SurfacePoint::from_homogeneous(k, k, h);
    }
    let (x, y) = s.split_once(',').ok_or_else(|| Error::parse(0, "expected 'x,y', '[X:Y:Z]' or 'C1 & C2 #i'"))?;
    SurfacePoint::affine(k, k.from_int(int(x, 0)?), k.from_int(int(y, x.len() + 1)?))
}

fn mode(kind: ModeKind, curve_src: &Option<String>, point_src: &Option<String>, k: &GaloisField) -> Result<SurfaceMode> {
    match kind {
        ModeKind::Curve => {
            let c = curve_src.as_deref().ok_or_else(|| Error::Validation("mode \"curve\" needs `curve`".into()))?;
            Ok(SurfaceMode::FixedCurve(curve(c, k)?))
        }
        ModeKind::Point => {
            let p = point_src.as_deref().ok_or_else(|| Error::Validation("mode \"point\" needs `point`".into()))?;
            Ok(SurfaceMode::FixedPoint(point(p, k)?))
        }
    }
}

fn rational(s: &str) -> Result<Rational64> {
    Rational64::from_str(s.trim()).map_err(|_| Error::parse(0, format!("invalid rational '{s}'")))
}

/// `"re,im"` or a real number.
pub fn complex(s: &str) -> Result<Complex64> {
    let num = |t: &str, at: usize| t.trim().parse::<f64>().map_err(|_| Error::parse(at, format!("invalid number '{}'", t.trim())));
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(num(re, 0)?, num(im, re.len() + 1)?)),
        None => Ok(Complex64::new(num(s, 0)?, 0.0)),
    }
}

/// Integer coordinates `m, p, c[, k]` separated by commas or semicolons and
/// split by the ranks of the spec.
pub fn group_element(spec: &HeisenbergSpec, src: &str) -> Result<GroupElement> {
    let mut vals = Vec::new();
    let mut at = 0;
    for t in src.split([',', ';']) {
        vals.push(t.trim().parse::<i64>().map_err(|_| Error::parse(at, format!("expected an integer, got '{}'", t.trim())))?);
        at += t.len() + 1;
    }
    let dims = [spec.h.ngens(), spec.h_prime.ngens(), spec.c.ngens()];
    let base: usize = dims.iter().sum();
    if vals.len() != base && vals.len() != base + spec.a.len() {
        return Err(Error::Validation(format!(
            "group element has {} coordinates, expected {base} or {}",
            vals.len(),
            base + spec.a.len()
        )));
    }
    let (m, rest) = vals.split_at(dims[0]);
    let (p, rest) = rest.split_at(dims[1]);
    let (c, k) = rest.split_at(dims[2]);
    spec.element(m, p, c, k)
}

fn window(cfg: &TaskConfig) -> Window {
    Window::new(cfg.precision_t.unwrap_or(DEFAULT_PRECISION_T), cfg.precision_u.unwrap_or(DEFAULT_PRECISION_U))
}

fn execute(cfg: &TaskConfig) -> Result<Outcome> {
    let seed = cfg.seed.unwrap_or(DEFAULT_SEED);
    let tol = cfg.tolerance.unwrap_or(DEFAULT_TOLERANCE);
    Ok(match &cfg.task {
        Task::ResiduesCurve { field: q, f, g, support } => {
            let k = field(*q)?;
            let support = support.as_ref().map(|s| s.iter().map(|p| place(p, &k)).collect::<Result<Vec<_>>>()).transpose()?;
            let r = verify_residue_theorem_curve(&parse_ratfn(f, &k)?, &parse_ratfn(g, &k)?, support.as_deref(), seed)?;
            Outcome::report(r)
        }
        Task::ResiduesSurface { field: q, support, form, mode: m, curve: c, point: p } => {
            let k = field(*q)?;
            let m = mode(*m, c, p, &k)?;
            Outcome::report(verify_residue_relations_surface(&parse_rational(form, &k)?, &curves(support, &k)?, &m, seed)?)
        }
        Task::Symbols { field: q, support, f, g, h, mode: m, curve: c, point: p } => {
            let k = field(*q)?;
            let m = mode(*m, c, p, &k)?;
            let fs = [f, g, h].map(|s| parse_rational(s, &k));
            let [f, g, h] = fs;
            Outcome::report(verify_symbol_reciprocity(&f?, &g?, &h?, &curves(support, &k)?, &m, seed)?)
        }
        Task::Hilbert { a, b } => Outcome::report(product_formula_check(rational(a)?, rational(b)?)?),
        Task::RiemannRoch { field: q, divisor } => {
            let k = field(*q)?;
            let d = DivisorOnCurve::parse(divisor, &k)?;
            let c = rr_cohomology(&d)?;
            let deg = d.degree();
            let pass = c.h0 as i64 - c.h1 as i64 == deg + 1;
            let text = format!("D = {}\n  h0 = {}, h1 = {}, deg D + 1 - g = {}\n", d.to_text(), c.h0, c.h1, deg + 1);
            Outcome { pass, result: json!({ "divisor": d.to_text(), "degree": deg, "genus": 0, "cohomology": c }), text }
        }
        Task::Fourier { field: q, divisor } => {
            let k = field(*q)?;
            let d = DivisorOnCurve::parse(divisor, &k)?;
            let fw = FourierWindow::around(&d)?;
            let annihilator = finite_fourier_poisson_on(&fw, &SubgroupSpec::KPlusAdelic(d.clone()))?;
            let plancherel = plancherel_rr_check(&d)?;
            let pass = annihilator.pass && plancherel.pass;
            let text = format!("{}{}", annihilator.to_text(), plancherel.to_text());
            let result = json!({
                "divisor": d.to_text(),
                "canonical": canonical_divisor(&k).to_text(),
                "annihilator": annihilator.to_json(),
                "plancherel": plancherel.to_json(),
            });
            Outcome { pass, result, text }
        }
        Task::Zeta { q, n } => Outcome::report(zeta_series(*q, *n)?.report()),
        Task::PoissonResidue { field: q, divisor } => {
            let k = field(*q)?;
            Outcome::report(poisson_residue_check(&DivisorOnCurve::parse(divisor, &k)?)?)
        }
        Task::HeisTrace { spec, chi, g } => {
            let spec = spec.resolve()?;
            chi.validate(&spec)?;
            let g = group_element(&spec, g)?;
            let t = extended_trace(&spec, chi, &g)?;
            let text = format!("Tr = {:.15e} {:+.15e} i  ({} terms, tail <= {:.3e})\n", t.re, t.im, t.terms, t.tail_bound);
            Outcome::value(json!({ "element": g, "trace": t }), text)
        }
        Task::HeisTheta { p, k, a, z, lambda } => {
            let t = theta_series(*p, *k, complex(a)?, complex(z)?, complex(lambda)?, cfg.tolerance.unwrap_or(TRACE_EPSILON))?;
            let text = format!("theta = {:.15e} {:+.15e} i  ({} terms)\n", t.re, t.im, t.terms);
            Outcome::value(json!({ "theta": t }), text)
        }
        Task::HeisLimit { rank, order, k } => {
            let r = limit_check(*rank, *order, *k, cfg.tolerance.unwrap_or(0.02))?;
            let rep = r.report();
            Outcome { pass: r.pass, text: rep.to_text(), result: json!({ "report": rep.to_json(), "fit": r }) }
        }
        Task::LatticeTheta { lattice, t } => {
            lattice.validate()?;
            let v = lattice_theta(lattice, *t, tol / 10.0)?;
            let fe = functional_equation_check(lattice, *t, tol)?;
            let text = format!("theta({t}) = {:.15e}\n{}", v.value, fe.to_text());
            Outcome { pass: fe.pass, result: json!({ "theta": v, "functional_equation": fe.to_json() }), text }
        }
        Task::LatticeAsymptotic { lattice } => {
            lattice.validate()?;
            let r = asymptotic_check(lattice, cfg.tolerance.unwrap_or(0.02))?;
            let rep = r.report();
            Outcome { pass: r.pass, text: rep.to_text(), result: json!({ "report": rep.to_json(), "fit": r }) }
        }
        Task::Expand { field: q, function, curve: c, point: p } => {
            let k = field(*q)?;
            let f = parse_rational(function, &k)?;
            let fl = flag_local_params(&point(p, &k)?, &curve(c, &k)?)?;
            let (s, w) = with_escalation(window(cfg), |w| expand_at_flag(&f, &fl, w))?;
            let (u, t) = fl.describe_params();
            let text = format!("{} at {}\n  u = {u}, t = {t}\n  {}\n", f.to_text(), fl.label(), s.to_text());
            Outcome::value(json!({ "flag": fl.label(), "u": u, "t": t, "window": { "t": w.t, "u": w.u }, "series": s.to_json() }), text)
        }
        Task::FlagSymbols { field: q, f, g, h, curve: c, point: p } => {
            let k = field(*q)?;
            let fns: Vec<RatFn2> = [f, g, h].iter().map(|s| parse_rational(s, &k)).collect::<Result<_>>()?;
            let fl = flag_local_params(&point(p, &k)?, &curve(c, &k)?)?;
            let ((sym, vp), w) = with_escalation(window(cfg), |w| {
                let e: Vec<_> = fns.iter().map(|x| expand_at_flag(x, &fl, w)).collect::<Result<_>>()?;
                Ok((parshin_symbol_3(&e[0], &e[1], &e[2])?, valuation_pair(&e[0], &e[1])?))
            })?;
            let kp = fl.residue_field();
            let text = format!(
                "flag {}\n  (f, g, h) = {} in {}\n  nu(f, g) = {vp}\n",
                fl.label(),
                kp.format_elem(sym),
                kp
            );
            let result = json!({
                "flag": fl.label(),
                "residue_field": kp.to_string(),
                "parshin_symbol": kp.format_elem(sym),
                "norm": k.format_elem(fl.embedding().norm(sym)),
                "valuation_pair": vp,
                "window": { "t": w.t, "u": w.u },
            });
            Outcome::value(result, text)
        }
        Task::Suite { name } => Outcome::report(run_suite(name, &SuiteOptions { seed, tolerance: cfg.tolerance })?),
        Task::Determinism { suites } => {
            let names: Vec<String> = suites.clone().unwrap_or_else(|| SUITES.iter().map(|s| s.to_string()).collect());
            let opts = SuiteOptions { seed, tolerance: cfg.tolerance };
            let mut entries = Vec::new();
            for name in &names {
                let r = (|| -> Result<(String, bool)> {
                    let a = serde_json::to_vec(&run_suite(name, &opts)?.to_json()).unwrap_or_default();
                    let b = serde_json::to_vec(&run_suite(name, &opts)?.to_json()).unwrap_or_default();
                    Ok((format!("{} bytes, sha256 {}", a.len(), &sha_hex(&a)[..16]), a == b))
                })();
                match r {
                    Ok((v, ok)) => entries.push((format!("{name}: identical reruns"), v, ok)),
                    Err(e) => entries.push((format!("{name}: identical reruns"), format!("error: {e}"), false)),
                }
            }
            let inputs = json!({ "seed": seed, "suites": names });
            Outcome::report(VerificationReport::checks("determinism", inputs, entries, json!("exact")))
        }
    })
}

fn sha_hex(b: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(Sha256::digest(b))
}

/// One entry of a batch: the file and either its envelope or the error.
#[derive(Clone, Debug, Serialize)]
pub struct BatchItem {
    pub config: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub envelope: Option<Envelope>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Parse or validation failure rather than a computation failure.
    #[serde(skip)]
    pub input_error: bool,
}

impl BatchItem {
    pub fn pass(&self) -> bool {
        self.envelope.as_ref().is_some_and(|e| e.pass)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BatchReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub summary: String,
    pub pass: bool,
    pub items: Vec<BatchItem>,
}

impl BatchReport {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).unwrap_or_default(),
            Format::Text => {
                let mut s = String::new();
                for it in &self.items {
                    let status = match (&it.envelope, &it.error) {
                        (Some(e), _) if e.pass => "PASS".to_string(),
                        (Some(_), _) => "FAIL".to_string(),
                        (None, Some(err)) => format!("ERROR {err}"),
                        (None, None) => "ERROR".to_string(),
                    };
                    s.push_str(&format!("{:<40} {status}\n", it.config));
                }
                s.push_str(&format!("{} passed\n", self.summary));
                s
            }
        }
    }
}

/// Config files named on the command line; directories contribute their
/// `.toml` and `.json` entries.
pub fn collect_configs(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let rd = std::fs::read_dir(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            for entry in rd {
                let path = entry.map_err(|e| Error::Io(e.to_string()))?.path();
                if path.is_file() && path.extension().is_some_and(|e| e == "toml" || e == "json") {
                    out.push(path);
                }
            }
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

/// Overrides applied to every config of a run.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub precision_t: Option<usize>,
    pub precision_u: Option<usize>,
    pub tolerance: Option<f64>,
    /// Replaces the mode of surface residue and symbol tasks.
    pub mode: Option<ModeKind>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut TaskConfig) {
        cfg.seed = self.seed.or(cfg.seed);
        cfg.precision_t = self.precision_t.or(cfg.precision_t);
        cfg.precision_u = self.precision_u.or(cfg.precision_u);
        cfg.tolerance = self.tolerance.or(cfg.tolerance);
        if let (Some(m), Task::ResiduesSurface { mode, .. } | Task::Symbols { mode, .. }) = (self.mode, &mut cfg.task) {
            *mode = m;
        }
    }
}

fn run_one(path: &Path, ov: &Overrides, timing: bool) -> BatchItem {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let r = TaskConfig::load(path).and_then(|mut cfg| {
        ov.apply(&mut cfg);
        cfg.validate()?;
        run_task(&cfg, timing)
    });
    match r {
        Ok(env) => BatchItem { config: name, envelope: Some(env), error: None, input_error: false },
        Err(e) => BatchItem { config: name, envelope: None, input_error: e.is_input_error(), error: Some(e.to_string()) },
    }
}

/// Runs configs on up to `threads` workers; items come back sorted by file
/// name whatever the scheduling.
pub fn run_batch(paths: &[PathBuf], ov: &Overrides, threads: usize, timing: bool) -> BatchReport {
    let mut paths = paths.to_vec();
    paths.sort_by_key(|p| p.file_name().map(|n| n.to_os_string()));
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots: Vec<std::sync::Mutex<Option<BatchItem>>> = paths.iter().map(|_| std::sync::Mutex::new(None)).collect();
    std::thread::scope(|s| {
        for _ in 0..threads.max(1).min(paths.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                let Some(p) = paths.get(i) else { break };
                let item = run_one(p, ov, timing);
                *slots[i].lock().unwrap_or_else(|e| e.into_inner()) = Some(item);
            });
        }
    });
    let items: Vec<BatchItem> =
        slots.into_iter().filter_map(|m| m.into_inner().unwrap_or_else(|e| e.into_inner())).collect();
    let passed = items.iter().filter(|i| i.pass()).count();
    BatchReport {
        tool: TOOL,
        version: VERSION,
        summary: format!("{passed}/{}", items.len()),
        pass: passed == items.len(),
        items,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(q: u32) -> GaloisField {
        field(q).unwrap()
    }

    #[test]
    fn point_forms() {
        let k5 = k(5);
        assert_eq!(point("1,2", &k5).unwrap(), point("[1:2:1]", &k5).unwrap());
        assert!(point("[1:0:0]", &k5).unwrap().is_at_infinity());
        let p = point("y & x^2 + y^2 - 2 #0", &k5).unwrap();
        assert_eq!(p.degree, 2);
        assert!(matches!(point("1;2", &k5), Err(Error::Parse { .. })));
        assert!(matches!(point("y & x #5", &k5), Err(Error::Validation(_))));
    }

    #[test]
    fn complex_and_group_elements() {
        assert_eq!(complex("0.5,-1").unwrap(), Complex64::new(0.5, -1.0));
        assert_eq!(complex("2").unwrap(), Complex64::new(2.0, 0.0));
        let spec = HeisenbergSpec::heis3();
        let g = group_element(&spec, "1,2,3,4").unwrap();
        assert_eq!((g.m, g.p, g.c, g.k), (vec![1], vec![2], vec![3], vec![4]));
        assert!(group_element(&spec, "1,2,3").unwrap().k.iter().all(|&x| x == 0));
        assert!(group_element(&spec, "1,2").is_err());
    }

    #[test]
    fn residues_curve_task() {
        let cfg = TaskConfig::parse_toml("task = \"residues-curve\"\nfield = 7\nf = \"1/(x^2+1)\"\ng = \"x^3 + 2*x\"\n").unwrap();
        let env = run_task(&cfg, false).unwrap();
        assert!(env.pass);
        assert!(env.wall_time_s.is_none());
        assert_eq!(env.result["relation"], "residue_theorem_curve");
    }

    #[test]
    fn omitted_pole_fails_the_check() {
        // the support leaves out the pole at x = 0
        let cfg = TaskConfig::parse_toml(
            "task = \"residues-curve\"\nfield = 5\nf = \"1/x\"\ng = \"x\"\nsupport = [\"x - 1\", \"inf\"]\n",
        )
        .unwrap();
        match run_task(&cfg, false) {
            Ok(env) => assert!(!env.pass),
            Err(e) => assert!(!e.is_input_error()),
        }
    }

    #[test]
    fn expand_and_symbols() {
        let cfg = TaskConfig::parse_toml(
            "task = \"expand\"\nfield = 5\nfunction = \"1/(x*y)\"\ncurve = \"y\"\npoint = \"0,0\"\n",
        )
        .unwrap();
        let env = run_task(&cfg, false).unwrap();
        assert!(env.text.contains("t^-1"));
        let cfg = TaskConfig::parse_toml(
            "task = \"flag-symbols\"\nfield = 5\nf = \"x\"\ng = \"y\"\nh = \"x + 2\"\ncurve = \"y\"\npoint = \"0,0\"\n",
        )
        .unwrap();
        let env = run_task(&cfg, false).unwrap();
        assert_eq!(env.result["valuation_pair"].as_i64().map(i64::abs), Some(1));
    }
}
