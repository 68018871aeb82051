//! One line per acceptance criterion; exits non-zero if any fails.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use adelia::suite::{run_suite, SuiteOptions};

const CRITERIA: [(&str, &str, &str); 11] = [
    ("curve-residues", "curve residue theorem, 50 forms over F_5 and F_7", "exact"),
    ("surface-residues", "surface residue relations, both modes over F_3 and F_5", "exact"),
    ("symbol-reciprocity", "Parshin reciprocity, trilinearity and antisymmetry", "exact"),
    ("commutator", "commutator pairing, golden file and 100 random pairs", "exact"),
    ("riemann-roch", "Riemann-Roch for 60+ divisors of degree -5..10", "exact"),
    ("fourier", "finite Fourier, 67 subgroups, annihilators and Plancherel", "exact"),
    ("zeta", "zeta Euler product to z^12 and Poisson residue", "exact"),
    ("hilbert", "Hilbert product formula and conic oracle", "exact"),
    ("characters", "trace identity, homomorphism, conjugation, equivalence", "rel 1e-12"),
    ("limit", "trace divergence exponent near roots of unity", "+-0.02"),
    ("lattice-theta", "lattice theta functional equation and asymptotics", "1e-10, +-0.02"),
];

fn line(n: usize, pass: bool, what: &str, detail: &str) {
    println!("[{}] {n:02} {what}: {detail}", if pass { "PASS" } else { "FAIL" });
}

fn batch_run(dir: &Path) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_adelia"))
        .arg("verify")
        .arg(dir)
        .output()
        .expect("run adelia binary");
    (out.status.code(), out.stdout)
}

fn main() -> ExitCode {
    let opts = SuiteOptions::default();
    let mut failed = 0;
    for (i, (name, what, tol)) in CRITERIA.iter().enumerate() {
        let t = Instant::now();
        let (pass, detail) = match run_suite(name, &opts) {
            Ok(r) => {
                let bad: Vec<&str> = r.failed_checks().into_iter().map(|c| c.flag.as_str()).collect();
                let tail = if bad.is_empty() { String::new() } else { format!("; failing: {}", bad.join(" | ")) };
                (r.pass, format!("{} checks, tolerance {tol}, {:.2}s{tail}", r.aggregate, t.elapsed().as_secs_f64()))
            }
            Err(e) => (false, format!("error: {e}")),
        };
        failed += !pass as usize;
        line(i + 1, pass, what, &detail);
    }

    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("acceptance");
    let (c1, a) = batch_run(&dir);
    let (c2, b) = batch_run(&dir);
    let summary = serde_json::from_slice::<serde_json::Value>(&a)
        .ok()
        .and_then(|v| v["summary"].as_str().map(String::from))
        .unwrap_or_default();
    let pass = a == b && !a.is_empty() && c1 == Some(0) && c2 == Some(0);
    failed += !pass as usize;
    line(
        12,
        pass,
        "determinism, two batch runs byte-identical",
        &format!("{} vs {} bytes, exit codes {c1:?}/{c2:?}, batch {summary}", a.len(), b.len()),
    );

    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
