//! `ctd`: command-line front end for `ctd-core`.
//!
//! Exit codes: 0 success, 1 usage or parse error (and failed `verify`),
//! 2 route incompatible with the set, 3 numeric failure.

pub mod commands;
pub mod input;
pub mod table;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use ctd_core::formulas::Route;
use ctd_core::numerics::QuadratureRule;
use thiserror::Error;

use commands::{Kind, Scale};
use table::Table;

/// Environment variable overriding the quadrature `rel_tol`.
pub const QUAD_TOL_ENV: &str = "CTD_QUAD_TOL";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Incompatible(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Incompatible(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<ctd_core::Error> for CliError {
    fn from(e: ctd_core::Error) -> Self {
        match e {
            ctd_core::Error::Domain(_) => CliError::Usage(e.to_string()),
            ctd_core::Error::Unsupported(_) => CliError::Incompatible(e.to_string()),
            ctd_core::Error::Numeric { .. } => CliError::Numeric(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "ctd", version, about = "C-transfinite diameter of compact sets in C^2")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate δ_C(K) by one route or by every applicable route.
    Delta {
        #[arg(long)]
        body: String,
        #[arg(long)]
        set: String,
        /// A route label or `all`.
        #[arg(long, default_value = "all")]
        route: String,
    },
    /// ln δ_{C_p}(ball) over a range of p.
    SweepP {
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 2)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Scale::Linear)]
        scale: Scale,
    },
    /// Approximate Fekete points on the distinguished boundary.
    Fekete {
        #[arg(long)]
        body: String,
        #[arg(long)]
        set: String,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 16)]
        resolution: usize,
    },
    /// Finite-n estimates against the closed-form target.
    Convergence {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        body: String,
        #[arg(long)]
        set: String,
        /// Strictly increasing, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u32>,
        #[arg(long, default_value_t = 16)]
        resolution: usize,
    },
    /// Run the built-in verification suite.
    Verify {
        /// Criterion numbers or tags (ball, beta, gamma, chebyshev, qn, sweep,
        /// product, closed-form, fekete, lattice, special).
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// Multiplies every accuracy tolerance.
        #[arg(long, default_value_t = 1.0)]
        tol_scale: f64,
    },
}

fn quadrature_rule() -> Result<QuadratureRule, CliError> {
    let rule = QuadratureRule::default();
    match std::env::var(QUAD_TOL_ENV) {
        Err(_) => Ok(rule),
        Ok(v) => {
            let tol: f64 =
                v.trim().parse().map_err(|_| CliError::Usage(format!("{QUAD_TOL_ENV}: invalid number `{v}`")))?;
            rule.with_rel_tol(tol).map_err(|e| CliError::Usage(format!("{QUAD_TOL_ENV}: {e}")))
        }
    }
}

fn render(table: &Table, format: Format) -> Result<String, CliError> {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => Ok(table.to_json()),
    }
}

/// Output text and exit code of a command that ran to completion.
fn execute(cli: &Cli) -> Result<(String, i32), CliError> {
    let rule = quadrature_rule()?;
    let fmt = cli.format;
    match &cli.command {
        Command::Delta { body, set, route } => {
            let route = match route.as_str() {
                "all" => None,
                s => Some(Route::from_label(s).ok_or_else(|| CliError::Usage(format!("unknown route `{s}`")))?),
            };
            let (body, set) = (input::parse_body(body)?, input::parse_set(set)?);
            let (table, code) = commands::delta(&body, &set, route, &rule)?;
            Ok((render(&table, fmt)?, code))
        }
        Command::SweepP { from, to, steps, scale } => {
            let ps = commands::sweep_values(*from, *to, *steps, *scale)?;
            let (table, code) = commands::sweep_p(&ps, &rule);
            Ok((render(&table, fmt)?, code))
        }
        Command::Fekete { body, set, n, resolution } => {
            let (body, set) = (input::parse_body(body)?, input::parse_set(set)?);
            let r = commands::fekete(&body, &set, *n, *resolution)?;
            let text = match fmt {
                Format::Csv => commands::fekete_table(&r).to_csv()?,
                Format::Json => table::pretty(&serde_json::json!([r])),
            };
            Ok((text, 0))
        }
        Command::Convergence { kind, body, set, n, resolution } => {
            commands::check_n_list(n)?;
            let (body, set) = (input::parse_body(body)?, input::parse_set(set)?);
            let table = commands::convergence(*kind, &body, &set, n, *resolution, &rule)?;
            Ok((render(&table, fmt)?, 0))
        }
        Command::Verify { only, tol_scale } => {
            if !(*tol_scale > 0.0 && tol_scale.is_finite()) {
                return Err(CliError::Usage(format!("--tol-scale must be positive, got {tol_scale}")));
            }
            let criteria = verify::selected(only).map_err(CliError::Usage)?;
            let (table, failed) = verify::verify(&criteria, &rule, *tol_scale);
            eprintln!("verify: {} of {} criteria passed", criteria.len() - failed, criteria.len());
            Ok((render(&table, fmt)?, i32::from(failed > 0)))
        }
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (text, code) = match execute(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return e.code();
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(|e| format!("stdout: {e}")),
    };
    match written {
        Ok(()) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            1
        }
    }
}
