use std::fs;
use std::path::Path;

use hodge_spectra::exactla::Rational;
use hodge_spectra::exterior::verify_conventions;
use hodge_spectra::format::{read_package, read_torus, write_package, PackageDocument};
use hodge_spectra::torus::{torus_package, SpectralLine, TorusSpec};
use hodge_spectra::verifier::{eigen_lines, verify, KahlerPackage, VerifyOptions};

use crate::config::{Cli, Command, Mode, RunConfig};
use crate::render::{self, DiamondTable, SpectrumRow};
use crate::CliError;

/// Rendered output and whether every selected check passed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, passed: true }
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn load_torus(cfg: &RunConfig, what: &str) -> Result<TorusSpec, CliError> {
    if cfg.mode != Mode::Torus {
        return Err(CliError::Usage(format!("{what} needs --mode torus")));
    }
    let torus = read_torus(&read_input(&cfg.input)?)?;
    verify_conventions(torus.n())?;
    Ok(torus)
}

fn load_package(cfg: &RunConfig) -> Result<PackageDocument, CliError> {
    let doc = read_package(&read_input(&cfg.input)?)?;
    verify_conventions(doc.package.n())?;
    Ok(doc)
}

fn torus_lines(cfg: &RunConfig, what: &str) -> Result<(usize, Vec<SpectralLine>), CliError> {
    let torus = load_torus(cfg, what)?;
    let lines = torus.enumerate_modes(&cfg.mu_max)?;
    Ok((torus.n(), lines))
}

pub fn cmd_spectrum(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (n, lines) = torus_lines(cfg, "spectrum")?;
    let pkg = torus_package(n, &lines)?.package;
    let eigen = eigen_lines(&pkg, None, true)?;
    let rows: Vec<SpectrumRow> = lines
        .iter()
        .zip(&eigen)
        .map(|(line, e)| {
            debug_assert_eq!(line.mu, e.mu);
            SpectrumRow { mu: e.mu.clone(), modes: line.mode_count(), b: e.betti() }
        })
        .collect();
    Ok(Outcome::ok(render::spectrum(n, &rows, cfg)?))
}

pub fn cmd_diamond(cfg: &RunConfig, mu: &Rational) -> Result<Outcome, CliError> {
    let unknown = || CliError::UnknownEigenvalue(mu.clone());
    let (n, h) = match cfg.mode {
        Mode::Torus => {
            let torus = load_torus(cfg, "diamond")?;
            if mu.is_negative() {
                return Err(unknown());
            }
            let line = torus.enumerate_modes(mu)?.into_iter().find(|l| &l.mu == mu).ok_or_else(unknown)?;
            let pkg = torus_package(torus.n(), &[line])?.package;
            let eigen = eigen_lines(&pkg, None, true)?;
            (torus.n(), eigen[0].hodge_table())
        }
        Mode::Package => {
            let doc = load_package(cfg)?;
            let eigen = eigen_lines(&doc.package, Some(std::slice::from_ref(mu)), false)?;
            let line = eigen.into_iter().find(|l| &l.mu == mu && l.dim() > 0).ok_or_else(unknown)?;
            (doc.package.n(), line.hodge_table())
        }
    };
    let table = DiamondTable { n, mu: mu.clone(), h };
    Ok(Outcome::ok(render::diamond(&table, cfg)?))
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (pkg, candidates): (KahlerPackage, Option<Vec<Rational>>) = match cfg.mode {
        Mode::Torus => {
            let (n, lines) = torus_lines(cfg, "verify")?;
            (torus_package(n, &lines)?.package, None)
        }
        Mode::Package => {
            let doc = load_package(cfg)?;
            (doc.package, doc.eigenvalues)
        }
    };
    let opts = VerifyOptions {
        require_complete: candidates.is_some() || cfg.mode == Mode::Torus,
        candidates,
        checks: cfg.checks.0.clone(),
    };
    let report = verify(&pkg, &opts)?;
    Ok(Outcome { text: render::report(&report, cfg)?, passed: report.passed() })
}

/// Serializes the truncated torus as a single-block package file, listing
/// its eigenvalues so the file verifies on its own.
pub fn cmd_export(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (n, lines) = torus_lines(cfg, "export")?;
    let pkg = torus_package(n, &lines)?.package;
    let mus: Vec<Rational> = lines.iter().map(|l| l.mu.clone()).collect();
    Ok(Outcome::ok(write_package(&pkg, Some(&mus))?))
}

pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Spectrum(cfg) => cmd_spectrum(cfg),
        Command::Diamond { config, mu } => cmd_diamond(config, mu),
        Command::Verify(cfg) => cmd_verify(cfg),
        Command::Export(cfg) => cmd_export(cfg),
    }
}

fn config(command: &Command) -> &RunConfig {
    match command {
        Command::Spectrum(c) | Command::Verify(c) | Command::Export(c) => c,
        Command::Diamond { config, .. } => config,
    }
}

/// Runs one invocation, writing its output, and returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = execute(&cli.command).and_then(|outcome| {
        match &config(&cli.command).out {
            Some(path) => fs::write(path, &outcome.text).map_err(|source| CliError::Io { path: path.clone(), source })?,
            None => print!("{}", outcome.text),
        }
        Ok(outcome.passed)
    });
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
