//! Seeded property suites, one per acceptance criterion. Each returns a
//! [`VerificationReport`] whose contributions are the individual checks, so
//! the CLI batch and the tests run identical code.

mod adeles;
mod heis;
mod reciprocity;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::field::{Elem, GaloisField};
use crate::reciprocity::VerificationReport;

pub const DEFAULT_SEED: u64 = 20_240_917;

/// Suite names in batch order.
pub const SUITES: [&str; 11] = [
    "curve-residues",
    "surface-residues",
    "symbol-reciprocity",
    "commutator",
    "riemann-roch",
    "fourier",
    "zeta",
    "hilbert",
    "characters",
    "limit",
    "lattice-theta",
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Overrides the suite's pinned numeric tolerance.
    pub tolerance: Option<f64>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: DEFAULT_SEED, tolerance: None }
    }
}

impl SuiteOptions {
    pub fn with_seed(seed: u64) -> Self {
        SuiteOptions { seed, tolerance: None }
    }

    fn tol(&self, pinned: f64) -> f64 {
        self.tolerance.unwrap_or(pinned)
    }

    /// Independent stream per suite.
    fn rng(&self, salt: &str) -> ChaCha8Rng {
        let mix = salt.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
        ChaCha8Rng::seed_from_u64(self.seed ^ mix)
    }
}

pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<VerificationReport> {
    match name {
        "curve-residues" => reciprocity::curve_residues(opts),
        "surface-residues" => reciprocity::surface_residues(opts),
        "symbol-reciprocity" => reciprocity::symbol_reciprocity(opts),
        "commutator" => reciprocity::commutator(opts),
        "hilbert" => reciprocity::hilbert(opts),
        "riemann-roch" => adeles::riemann_roch(opts),
        "fourier" => adeles::fourier(opts),
        "zeta" => adeles::zeta(opts),
        "characters" => heis::characters(opts),
        "limit" => heis::limit(opts),
        "lattice-theta" => heis::lattice_theta(opts),
        other => Err(Error::Validation(format!("unknown suite '{other}'; expected one of {}", SUITES.join(", ")))),
    }
}

/// Accumulates named checks.
struct Checks {
    entries: Vec<(String, String, bool)>,
}

impl Checks {
    fn new() -> Self {
        Checks { entries: Vec::new() }
    }

    fn push(&mut self, name: impl Into<String>, value: impl Into<String>, ok: bool) {
        self.entries.push((name.into(), value.into(), ok));
    }

    /// A failed computation is a failed check, not an aborted suite.
    fn push_result(&mut self, name: impl Into<String>, r: Result<(String, bool)>) {
        match r {
            Ok((v, ok)) => self.push(name, v, ok),
            Err(e) => self.push(name, format!("error: {e}"), false),
        }
    }

    fn count(&self) -> usize {
        self.entries.len()
    }

    fn finish(self, relation: &str, inputs: Value, precision: Value) -> VerificationReport {
        VerificationReport::checks(relation, inputs, self.entries, precision)
    }
}

fn nonzero(k: &GaloisField, rng: &mut ChaCha8Rng) -> Elem {
    k.from_int(rng.gen_range(1..k.order() as i64))
}

fn fmt_f(x: f64) -> String {
    format!("{x:.6e}")
}
