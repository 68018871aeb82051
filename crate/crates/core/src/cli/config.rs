//! Task configuration files: TOML (or JSON) documents with a `task` tag.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::heis::{Character, HeisenbergSpec, Lattice};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModeKind {
    Curve,
    Point,
}

/// Built-in Heisenberg spec by name, or the full data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpecRef {
    Named(String),
    Explicit(HeisenbergSpec),
}

impl SpecRef {
    pub fn resolve(&self) -> Result<HeisenbergSpec> {
        let s = match self {
            SpecRef::Named(n) if n == "heis3" => HeisenbergSpec::heis3(),
            SpecRef::Named(n) => {
                return Err(Error::Validation(format!("unknown Heisenberg spec '{n}'; use \"heis3\" or a table")))
            }
            SpecRef::Explicit(s) => s.clone(),
        };
        s.validate()?;
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "kebab-case")]
pub enum Task {
    /// Residue theorem for `f dg` on `P^1`.
    ResiduesCurve {
        field: u32,
        f: String,
        g: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        support: Option<Vec<String>>,
    },
    /// Residue relations for `g dx ^ dy` on `P^2`.
    ResiduesSurface {
        field: u32,
        support: Vec<String>,
        form: String,
        mode: ModeKind,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        curve: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        point: Option<String>,
    },
    /// Reciprocity for three-variable Parshin symbols.
    Symbols {
        field: u32,
        support: Vec<String>,
        f: String,
        g: String,
        h: String,
        mode: ModeKind,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        curve: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        point: Option<String>,
    },
    Hilbert {
        a: String,
        b: String,
    },
    RiemannRoch {
        field: u32,
        divisor: String,
    },
    /// Plancherel and the Serre-duality annihilator on the window around `D`.
    Fourier {
        field: u32,
        divisor: String,
    },
    Zeta {
        q: u64,
        n: usize,
    },
    PoissonResidue {
        field: u32,
        divisor: String,
    },
    HeisTrace {
        spec: SpecRef,
        chi: Character,
        g: String,
    },
    HeisTheta {
        p: i64,
        k: i64,
        a: String,
        z: String,
        lambda: String,
    },
    HeisLimit {
        rank: usize,
        order: i64,
        k: i64,
    },
    LatticeTheta {
        #[serde(flatten)]
        lattice: Lattice,
        t: f64,
    },
    LatticeAsymptotic {
        #[serde(flatten)]
        lattice: Lattice,
    },
    /// Local expansion of a function at a flag.
    Expand {
        field: u32,
        function: String,
        curve: String,
        point: String,
    },
    /// Symbols of single functions at one flag.
    FlagSymbols {
        field: u32,
        f: String,
        g: String,
        h: String,
        curve: String,
        point: String,
    },
    Suite {
        name: String,
    },
    /// Runs suites twice and compares the serialized reports byte for byte.
    Determinism {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        suites: Option<Vec<String>>,
    },
}

impl Task {
    pub fn kind(&self) -> &'static str {
        match self {
            Task::ResiduesCurve { .. } => "residues-curve",
            Task::ResiduesSurface { .. } => "residues-surface",
            Task::Symbols { .. } => "symbols",
            Task::Hilbert { .. } => "hilbert",
            Task::RiemannRoch { .. } => "riemann-roch",
            Task::Fourier { .. } => "fourier",
            Task::Zeta { .. } => "zeta",
            Task::PoissonResidue { .. } => "poisson-residue",
            Task::HeisTrace { .. } => "heis-trace",
            Task::HeisTheta { .. } => "heis-theta",
            Task::HeisLimit { .. } => "heis-limit",
            Task::LatticeTheta { .. } => "lattice-theta",
            Task::LatticeAsymptotic { .. } => "lattice-asymptotic",
            Task::Expand { .. } => "expand",
            Task::FlagSymbols { .. } => "flag-symbols",
            Task::Suite { .. } => "suite",
            Task::Determinism { .. } => "determinism",
        }
    }
}

/// A task plus the run options that may also come from global flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaskConfig {
    #[serde(flatten)]
    pub task: Task,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision_t: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision_u: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

impl TaskConfig {
    pub fn new(task: Task) -> Self {
        TaskConfig { task, seed: None, precision_t: None, precision_u: None, tolerance: None, format: None }
    }

    pub fn parse_toml(src: &str) -> Result<Self> {
        let cfg: TaskConfig = toml::from_str(src).map_err(|e| {
            let pos = e.span().map(|s| s.start).unwrap_or(0);
            Error::parse(pos, e.message().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn parse_json(src: &str) -> Result<Self> {
        let cfg: TaskConfig = serde_json::from_str(src).map_err(|e| Error::parse(e.column(), e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads `.json` as JSON and anything else as TOML.
    pub fn load(path: &Path) -> Result<Self> {
        let src = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        if path.extension().is_some_and(|e| e == "json") {
            Self::parse_json(&src)
        } else {
            Self::parse_toml(&src)
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("precision_t", self.precision_t), ("precision_u", self.precision_u)] {
            if v == Some(0) {
                return Err(Error::Validation(format!("{name} must be positive")));
            }
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Validation(format!("tolerance {t} must be positive and finite")));
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form (sorted keys, output format
    /// excluded), so reordered or reformatted files hash alike.
    pub fn hash(&self) -> String {
        let mut v = serde_json::to_value(self).unwrap_or(Value::Null);
        if let Value::Object(m) = &mut v {
            m.remove("format");
        }
        let canonical = serde_json::to_string(&v).unwrap_or_default();
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }
}

/// `q = p^m` for a prime `p`.
pub fn prime_power(q: u32) -> Result<(u32, u32)> {
    let p = (2..=q).find(|d| q % d == 0).ok_or_else(|| Error::Validation(format!("field order {q} is not a prime power")))?;
    let (mut r, mut m) = (q, 0);
    while r % p == 0 {
        r /= p;
        m += 1;
    }
    if r != 1 {
        return Err(Error::Validation(format!("field order {q} is not a prime power")));
    }
    Ok((p, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_ignores_layout_and_key_order() {
        let a = TaskConfig::parse_toml("task = \"zeta\"\nq = 2\nn = 12\n").unwrap();
        let b = TaskConfig::parse_toml("n = 12\n\n  q=2 # comment\ntask = 'zeta'\nformat = \"text\"\n").unwrap();
        assert_eq!(a.hash(), b.hash());
        let c = TaskConfig::parse_toml("task = \"zeta\"\nq = 3\nn = 12\n").unwrap();
        assert_ne!(a.hash(), c.hash());
    }

    #[test]
    fn parses_each_shape() {
        let cfg = TaskConfig::parse_toml(
            "task = \"residues-surface\"\nfield = 5\nsupport = [\"x\", \"y\"]\nform = \"1/(x*y)\"\nmode = \"point\"\npoint = \"0,0\"\nseed = 7\n",
        )
        .unwrap();
        assert_eq!(cfg.seed, Some(7));
        assert!(matches!(cfg.task, Task::ResiduesSurface { mode: ModeKind::Point, .. }));
        let cfg = TaskConfig::parse_toml("task = \"lattice-theta\"\ngram = [[1]]\nt = 1.0\n").unwrap();
        assert!(matches!(cfg.task, Task::LatticeTheta { .. }));
        let cfg = TaskConfig::parse_toml(
            "task = \"heis-trace\"\nspec = \"heis3\"\ng = \"0,1,0,2\"\n[chi]\nbase = 0.5\nh = [\"0,0\"]\nh_prime = [\"0,0\"]\nc = [\"0,1/5\"]\na = [\"0,0\"]\n",
        )
        .unwrap();
        assert!(matches!(cfg.task, Task::HeisTrace { .. }));
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(matches!(TaskConfig::parse_toml("task = \"nope\""), Err(Error::Parse { .. })));
        assert!(matches!(TaskConfig::parse_toml("task = \"zeta\"\nq = 2"), Err(Error::Parse { .. })));
        assert!(matches!(
            TaskConfig::parse_toml("task = \"zeta\"\nq = 2\nn = 3\ntolerance = -1.0"),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9).unwrap(), (3, 2));
        assert_eq!(prime_power(7).unwrap(), (7, 1));
        assert!(prime_power(12).is_err());
        assert!(prime_power(1).is_err());
    }
}
