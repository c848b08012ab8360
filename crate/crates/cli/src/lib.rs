pub mod commands;
pub mod config;
mod render;

use std::path::PathBuf;

use hodge_spectra::exactla::{LinalgError, Rational};
use hodge_spectra::exterior::ExteriorError;
use hodge_spectra::format::FormatError;
use hodge_spectra::torus::TorusError;
use hodge_spectra::verifier::VerifyError;
use thiserror::Error;

pub use commands::{cmd_diamond, cmd_export, cmd_spectrum, cmd_verify, run, Outcome};
pub use config::{Cli, Command, Format, Mode, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("mu = {0} is not an eigenvalue in the computed lines")]
    UnknownEigenvalue(Rational),
    #[error(transparent)]
    Conventions(#[from] ExteriorError),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

fn linalg_code(e: &LinalgError) -> i32 {
    match e {
        LinalgError::NotHermitian { .. } | LinalgError::NotPositiveDefinite { .. } => 3,
        LinalgError::DimensionMismatch { .. } | LinalgError::NotSquare { .. } => 2,
    }
}

fn torus_code(e: &TorusError) -> i32 {
    match e {
        TorusError::SingularBasis => 3,
        TorusError::Linalg(l) => linalg_code(l),
        _ => 2,
    }
}

fn verify_code(e: &VerifyError) -> i32 {
    match e {
        VerifyError::ShapeMismatch(_) => 2,
        VerifyError::Linalg(l) => linalg_code(l),
        VerifyError::UnknownEigenvalue(_) => 4,
        _ => 3,
    }
}

impl CliError {
    /// 1 verdict failure, 2 parse, 3 singular or degenerate input,
    /// 4 unknown eigenvalue, 5 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } | CliError::Csv(_) => 5,
            CliError::Format(f) => match f {
                FormatError::Json(_) | FormatError::BadKey(_) | FormatError::Shape { .. } => 2,
                FormatError::Linalg(l) => linalg_code(l),
                FormatError::Verify(v) => verify_code(v),
                FormatError::Torus(t) => torus_code(t),
            },
            CliError::Torus(t) => torus_code(t),
            CliError::Verify(v) => verify_code(v),
            CliError::UnknownEigenvalue(_) => 4,
            CliError::Conventions(_) => 1,
        }
    }
}
