//! `kstab` command-line front end.
//!
//! Exit codes: 0 success, 1 golden-table mismatch, 2 computation error,
//! 64 usage error.

use clap::{Parser, Subcommand};
use thiserror::Error;

pub mod commands;
pub mod report;
pub mod verify;

pub use report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_COMPUTE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{kind}: {message}")]
    Compute { kind: &'static str, message: String },
}

impl CliError {
    pub fn compute(kind: &'static str, e: impl std::fmt::Display) -> Self {
        CliError::Compute {
            kind,
            message: e.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Compute { .. } => EXIT_COMPUTE,
        }
    }

    fn structured(&self, json: bool) -> String {
        let (kind, message) = match self {
            CliError::Usage(m) => ("usage", m.as_str()),
            CliError::Compute { kind, message } => (*kind, message.as_str()),
        };
        if json {
            let v = serde_json::json!({ "error": { "kind": kind, "message": message } });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        } else {
            format!("error[{kind}]: {message}\n")
        }
    }
}

macro_rules! compute_from {
    ($($t:ty => $kind:literal),* $(,)?) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::compute($kind, e)
            }
        })*
    };
}

compute_from!(
    kstab_core::ExactError => "exact",
    kstab_core::IntersectError => "intersect",
    kstab_core::ZariskiError => "zariski",
    kstab_core::KstabError => "kstab",
    kstab_core::LatticeError => "lattice",
    kstab_core::ToricError => "toric",
    kstab_core::ModelFileError => "model-file",
    kstab_core::k3cat::K3Error => "k3",
);

#[derive(Parser, Debug)]
#[command(name = "kstab", version, about = "Exact K-stability, lattice and toric computations")]
pub struct Cli {
    /// Emit JSON instead of aligned text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Add decimal approximations next to the main exact results.
    #[arg(long, global = true)]
    pub approx: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// S- and β-invariant of a test divisor on a threefold model.
    Sinv {
        #[arg(long)]
        model: String,
        #[arg(long)]
        divisor: String,
        /// Log discrepancy override, `p/q`.
        #[arg(long = "A")]
        a: Option<String>,
    },
    /// Refined invariant of a flag (surface, curve) on a threefold model.
    FlagSinv {
        #[arg(long)]
        model: String,
        #[arg(long)]
        surface: String,
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
    },
    /// Zariski decomposition of a class on a surface model.
    Zariski {
        #[arg(long)]
        model: String,
        #[arg(long, allow_hyphen_values = true)]
        class: String,
    },
    /// Lattice invariants.
    Lattice {
        #[command(subcommand)]
        command: LatticeCommand,
    },
    /// Noether–Lefschetz catalog lookups.
    Nl {
        #[command(subcommand)]
        command: NlCommand,
    },
    /// Toric Fano checks.
    Toric {
        #[command(subcommand)]
        command: ToricCommand,
    },
    /// Built-in model presets.
    Models {
        #[command(subcommand)]
        command: ModelsCommand,
    },
    /// Replay the golden table of exact values.
    VerifyPaper {
        /// Replace the bl_p3_quintic preset by a model file.
        #[arg(long)]
        quintic_model: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum LatticeCommand {
    /// Discriminant group and its quadratic form.
    Disc {
        #[arg(long, allow_hyphen_values = true)]
        gram: String,
    },
    /// Even overlattices via isotropic subgroups.
    Overlattices {
        #[arg(long, allow_hyphen_values = true)]
        gram: String,
    },
    /// Whether every embedding is forced to be primitive.
    Primitive {
        #[arg(long, allow_hyphen_values = true)]
        gram: String,
    },
    /// Whether the span of `--basis` is saturated.
    Saturate {
        #[arg(long, allow_hyphen_values = true)]
        gram: String,
        /// Rows are sublattice generators, e.g. "1 0 0; 0 1 0".
        #[arg(long, allow_hyphen_values = true)]
        basis: String,
    },
    /// Integer points of a box satisfying `form CMP 0`.
    Search {
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        #[arg(long, default_value = ">")]
        cmp: String,
        /// Ranges per variable, e.g. "1..100,-100..-1".
        #[arg(long = "box", allow_hyphen_values = true)]
        region: String,
        /// Variable order, e.g. "a,b"; defaults to order of appearance.
        #[arg(long)]
        vars: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum NlCommand {
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        h: i64,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, default_value_t = kstab_core::k3cat::DEGREE)]
        degree: i64,
    },
}

#[derive(Subcommand, Debug)]
pub enum ToricCommand {
    Check {
        /// One integer 3-vector per line.
        #[arg(long)]
        vertices: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum ModelsCommand {
    List,
    Show { name: String },
}

/// Outcome of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs `argv` (including the program name).
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let echo = argv
        .iter()
        .skip(1)
        .map(|a| {
            let a = a.to_string_lossy();
            if a.is_empty() || a.contains(char::is_whitespace) {
                format!("{a:?}")
            } else {
                a.into_owned()
            }
        })
        .collect::<Vec<_>>()
        .join(" ");
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let json = cli.json;
    match commands::dispatch(&cli, &echo) {
        Ok((report, code)) => Outcome {
            code,
            stdout: report.render(json),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: e.structured(json),
        },
    }
}
