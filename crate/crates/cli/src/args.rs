//! Command-line grammar.

use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use ratsos::ddp::{Assignment, SearchConfig, Strategy};
use ratsos::parse_io::Format;
use ratsos::scalar::parse_rational;
use ratsos::Rational;

#[derive(Parser, Debug)]
#[command(
    name = "ratsos",
    version,
    about = "Exact rational sum-of-squares certificates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify a univariate polynomial: exit 0 positive definite, 10
    /// positive semidefinite, 20 not nonnegative.
    Check(CheckArgs),
    /// Search for a certificate and print it.
    Certify(CertifyArgs),
    /// Check a structured certificate exactly: exit 0 valid, 1 invalid.
    Verify(VerifyArgs),
    /// Certify through the univariate projection, printing each stage.
    Lift(CertifyArgs),
}

#[derive(Args, Debug)]
pub struct InputArgs {
    /// Polynomial text, `@path` to read it from a file, or `-` for stdin.
    #[arg(allow_hyphen_values = true)]
    pub input: String,
    /// Ordered, comma-separated variable names.
    #[arg(long, default_value = "x", value_delimiter = ',')]
    pub vars: Vec<String>,
    /// `text` or `structured`.
    #[arg(long, default_value = "text")]
    pub output: Format,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// core_zero, full_grid, monte_carlo, banded or sparse.
    #[arg(long, default_value = "core_zero")]
    pub strategy: Strategy,
    /// Comma-separated positive rationals for grid-driven multipliers.
    #[arg(long)]
    pub diag_grid: Option<Grid>,
    /// Comma-separated rationals for grid-driven core entries.
    #[arg(long)]
    pub core_grid: Option<Grid>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub max_points: Option<u64>,
    /// Budget of the automatic sparse retries; 0 disables them.
    #[arg(long)]
    pub fallback_points: Option<u64>,
    /// Fixed unknowns, `DIAG[;CORE]`: `e=v,...` sets the multiplier of the
    /// square led by t^e, `r:c=v,...` the coefficient of t^c in that led by
    /// t^r.
    #[arg(long)]
    pub pin: Option<Pin>,
    /// Also write the structured certificate to this path.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    /// Print the projection stages.
    #[arg(long)]
    pub trace: bool,
}

impl CertifyArgs {
    pub fn config(&self) -> SearchConfig {
        let mut c = SearchConfig {
            strategy: self.strategy,
            seed: self.seed,
            ..SearchConfig::default()
        };
        if let Some(g) = &self.diag_grid {
            c.diagonal_grid = g.0.clone();
        }
        if let Some(g) = &self.core_grid {
            c.core_grid = g.0.clone();
        }
        if let Some(n) = self.max_points {
            c.max_points = n;
        }
        if let Some(n) = self.fallback_points {
            c.fallback_points = n;
        }
        if let Some(p) = &self.pin {
            c.pins = p.0.clone();
        }
        c
    }
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Structured certificate file.
    pub certificate: std::path::PathBuf,
    /// Polynomial to check against; defaults to the certificate's input.
    #[arg(allow_hyphen_values = true)]
    pub polynomial: Option<String>,
    /// Variable names; default to the certificate's.
    #[arg(long, value_delimiter = ',')]
    pub vars: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Grid(pub Vec<Rational>);

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|v| parse_rational(v).ok_or_else(|| format!("invalid rational '{}'", v.trim())))
            .collect::<Result<Vec<_>, _>>()
            .map(Grid)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Pin(pub Assignment);

impl FromStr for Pin {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (diag, core) = s.split_once(';').unwrap_or((s, ""));
        let mut a = Assignment::new();
        for entry in diag.split(',').map(str::trim).filter(|e| !e.is_empty()) {
            let (e, v) = split_entry(entry)?;
            a = a.with_diagonal(exponent(e)?, v);
        }
        for entry in core.split(',').map(str::trim).filter(|e| !e.is_empty()) {
            let (rc, v) = split_entry(entry)?;
            let (r, c) = rc
                .split_once(':')
                .ok_or_else(|| format!("core pin '{entry}' must look like r:c=v"))?;
            a = a.with_lower(exponent(r)?, exponent(c)?, v);
        }
        Ok(Pin(a))
    }
}

fn split_entry(entry: &str) -> Result<(&str, Rational), String> {
    let (key, value) = entry
        .split_once('=')
        .ok_or_else(|| format!("pin '{entry}' is missing '='"))?;
    let v = parse_rational(value)
        .ok_or_else(|| format!("invalid rational '{}' in pin", value.trim()))?;
    Ok((key.trim(), v))
}

fn exponent(text: &str) -> Result<u64, String> {
    text.trim()
        .parse()
        .map_err(|_| format!("invalid exponent '{}' in pin", text.trim()))
}
