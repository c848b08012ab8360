use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hodge_spectra::exactla::Rational;
use hodge_spectra::graded::Bidegree;
use hodge_spectra::verifier::CheckId;

/// Exact Hodge-Laplacian spectra of flat tori, and a verifier for the
/// Hodge and Lefschetz structure of their eigenspaces.
#[derive(Debug, Parser)]
#[command(name = "hodge-spectra", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List spectral lines with their mode counts and Betti numbers
    Spectrum(RunConfig),
    /// Print the Hodge diamond of one eigenvalue
    Diamond {
        #[command(flatten)]
        config: RunConfig,
        /// Eigenvalue as mu, where λ = 4π²·mu
        #[arg(long, value_parser = parse_rational)]
        mu: Rational,
    },
    /// Run the identity and theorem checks
    Verify(RunConfig),
    /// Write a torus truncation as a package file
    Export(RunConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Torus,
    Package,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Torus or package file
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Torus)]
    pub mode: Mode,
    /// Largest mu to enumerate, where λ = 4π²·mu
    #[arg(long, value_parser = parse_mu_max, default_value = "1")]
    pub mu_max: Rational,
    /// Only report these degrees (repeatable)
    #[arg(long = "degree")]
    pub degrees: Vec<usize>,
    /// Only report these pieces, as "p,q" (repeatable)
    #[arg(long = "bidegree", value_parser = parse_bidegree)]
    pub bidegrees: Vec<Bidegree>,
    /// Comma-separated check ids, or "all"
    #[arg(long, value_parser = parse_checks, default_value = "all")]
    pub checks: CheckSelection,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write output here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also show λ as a decimal
    #[arg(long)]
    pub approx: bool,
}

/// `None` selects every check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckSelection(pub Option<BTreeSet<CheckId>>);

pub fn parse_rational(s: &str) -> Result<Rational, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_mu_max(s: &str) -> Result<Rational, String> {
    let r = parse_rational(s)?;
    if r.is_negative() {
        return Err(format!("mu_max must be nonnegative, got {r}"));
    }
    Ok(r)
}

fn parse_bidegree(s: &str) -> Result<Bidegree, String> {
    let bad = || format!("expected \"p,q\", got {s:?}");
    let (p, q) = s.split_once(',').ok_or_else(bad)?;
    Ok(Bidegree::new(p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?))
}

pub fn parse_checks(s: &str) -> Result<CheckSelection, String> {
    if s.trim() == "all" {
        return Ok(CheckSelection(None));
    }
    let ids = s
        .split(',')
        .map(|id| id.trim().parse::<CheckId>().map_err(|e| format!("unknown check id {:?}", e.0)))
        .collect::<Result<BTreeSet<_>, _>>()?;
    Ok(CheckSelection(Some(ids)))
}
