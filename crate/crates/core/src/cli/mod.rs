//! Command-line front end. Exit codes: 0 when every check passes, 1 when a
//! computation fails or reports `pass = false`, 2 for unparseable or invalid
//! input.

pub mod config;
pub mod run;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::heis::{Character, Lattice};
use config::{Format, ModeKind, SpecRef, Task, TaskConfig};
use run::{collect_configs, run_batch, run_task, Overrides};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "adelia", version, about = "Residues, symbols, adeles and Heisenberg characters over finite fields")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Starting t-precision for local expansions.
    #[arg(long = "precision-t", global = true)]
    pub precision_t: Option<usize>,
    /// Starting u-precision for local expansions.
    #[arg(long = "precision-u", global = true)]
    pub precision_u: Option<usize>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Include wall time in reports.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run config files or directories of them, sorted by file name.
    Verify {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Override the reciprocity mode of surface tasks.
        #[arg(long, value_enum)]
        mode: Option<ModeKind>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Residue theorem for `f dg` on the projective line.
    Curve {
        #[arg(long)]
        field: u32,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        /// Places in the support: monic irreducibles in x, or `inf`.
        #[arg(long, value_delimiter = ';')]
        support: Option<Vec<String>>,
    },
    #[command(subcommand)]
    Heis(HeisCommand),
    /// Expansion of a function at the flag (point, curve).
    Expand {
        #[arg(long)]
        field: u32,
        #[arg(long)]
        function: String,
        #[arg(long)]
        curve: String,
        #[arg(long)]
        point: String,
    },
    /// The three-variable symbol and valuation pairing at one flag.
    Symbols {
        #[arg(long)]
        field: u32,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        h: String,
        #[arg(long)]
        curve: String,
        #[arg(long)]
        point: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum HeisCommand {
    /// Trace of the induced representation at `g = (m, p, c, k)`.
    Trace {
        /// `heis3` or a TOML/JSON file holding the group data.
        #[arg(long)]
        spec: String,
        #[arg(long)]
        g: String,
        /// TOML/JSON file holding the character.
        #[arg(long)]
        chi: PathBuf,
    },
    /// One-variable theta series; complex arguments as `re,im`.
    Theta {
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        #[arg(long)]
        k: i64,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Radial limit of the trace at an N-th root of unity.
    Limit {
        #[arg(long = "N")]
        order: i64,
        #[arg(long)]
        k: i64,
        #[arg(long, default_value_t = 1)]
        rank: usize,
    },
    /// Lattice theta value and its functional equation.
    LatticeTheta {
        /// TOML/JSON file with `gram` (and optionally `torsion`).
        #[arg(long)]
        gram: PathBuf,
        #[arg(long)]
        t: f64,
    },
}

fn read_data<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    let src = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    if path.extension().is_some_and(|e| e == "json") {
        serde_json::from_str(&src).map_err(|e| Error::parse(e.column(), format!("{}: {e}", path.display())))
    } else {
        toml::from_str(&src).map_err(|e| {
            Error::parse(e.span().map(|s| s.start).unwrap_or(0), format!("{}: {}", path.display(), e.message()))
        })
    }
}

fn single_task(cmd: Command) -> Result<Task> {
    Ok(match cmd {
        Command::Curve { field, f, g, support } => Task::ResiduesCurve { field, f, g, support },
        Command::Expand { field, function, curve, point } => Task::Expand { field, function, curve, point },
        Command::Symbols { field, f, g, h, curve, point } => Task::FlagSymbols { field, f, g, h, curve, point },
        Command::Heis(HeisCommand::Trace { spec, g, chi }) => {
            let spec = if spec == "heis3" { SpecRef::Named(spec) } else { SpecRef::Explicit(read_data(&PathBuf::from(spec))?) };
            let chi: Character = read_data(&chi)?;
            Task::HeisTrace { spec, chi, g }
        }
        Command::Heis(HeisCommand::Theta { p, k, a, z, lambda }) => Task::HeisTheta { p, k, a, z, lambda },
        Command::Heis(HeisCommand::Limit { order, k, rank }) => Task::HeisLimit { rank, order, k },
        Command::Heis(HeisCommand::LatticeTheta { gram, t }) => {
            let lattice: Lattice = read_data(&gram)?;
            Task::LatticeTheta { lattice, t }
        }
        Command::Verify { .. } => unreachable!("handled by the batch path"),
    })
}

fn overrides(g: &GlobalOpts) -> Overrides {
    Overrides { seed: g.seed, precision_t: g.precision_t, precision_u: g.precision_u, tolerance: g.tolerance, mode: None }
}

fn fail(e: &Error) -> i32 {
    eprintln!("error: {e}");
    if e.is_input_error() {
        EXIT_INPUT
    } else {
        EXIT_FAIL
    }
}

/// Runs the CLI, writing the report to stdout; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let format = cli.global.format.unwrap_or_default();
    let ov = overrides(&cli.global);
    if let Some(t) = cli.global.tolerance {
        if !(t > 0.0 && t.is_finite()) {
            return fail(&Error::Validation(format!("tolerance {t} must be positive and finite")));
        }
    }
    match cli.command {
        Command::Verify { paths, mode, threads } => {
            let files = match collect_configs(&paths) {
                Ok(f) => f,
                Err(e) => return fail(&e),
            };
            let report = run_batch(&files, &Overrides { mode, ..ov }, threads, cli.global.timing);
            println!("{}", report.render(format));
            if report.pass {
                EXIT_PASS
            } else if report.items.len() == 1 && report.items[0].input_error {
                EXIT_INPUT
            } else {
                EXIT_FAIL
            }
        }
        cmd => {
            let r = single_task(cmd).and_then(|task| {
                let mut cfg = TaskConfig::new(task);
                ov.apply(&mut cfg);
                cfg.validate()?;
                run_task(&cfg, cli.global.timing)
            });
            match r {
                Ok(env) => {
                    println!("{}", env.render(format));
                    if env.pass {
                        EXIT_PASS
                    } else {
                        EXIT_FAIL
                    }
                }
                Err(e) => fail(&e),
            }
        }
    }
}
