//! Flat tori `C^n / L` with rational lattices: dual-lattice enumeration,
//! per-mode operators and assembled eigenspaces of the Hodge Laplacian.
//!
//! The eigenvalue attached to a dual vector `v` is `λ = 4π²‖v‖²`. Only the
//! rational factor `mu = ‖v‖²` is ever stored; `4π²` stays symbolic.

mod eigenspace;
mod lattice;
mod modes;
mod package;

use thiserror::Error;

use crate::exactla::{LinalgError, Rational};
use crate::exterior::ExteriorError;

pub use eigenspace::{assemble_eigenspace, AssembledEigenspace, ModeOperator};
pub use lattice::{DualVector, SpectralLine, TorusSpec};
pub use modes::{mode_operators, ModeOperators};
pub use package::{torus_package, TorusPackage};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorusError {
    #[error("torus of complex dimension {n} needs a {m}×{m} basis, got {rows} rows", m = 2 * n)]
    BadShape { n: usize, rows: usize },
    #[error("lattice basis is singular")]
    SingularBasis,
    #[error("eigenvalue bound {0} is negative")]
    NegativeBound(Rational),
    #[error("vector with coefficients {0:?} is not in the dual lattice")]
    NotInDualLattice(Vec<i64>),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
}
