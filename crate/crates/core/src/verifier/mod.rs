//! Checks of the Kähler identities and of the eigenspace theorems on any
//! finite-dimensional Kähler spectral package.
//!
//! A package is validated first (`K.*` checks). Eigenspaces are then
//! computed line by line and every statement is evaluated as an exact
//! dimension or rank comparison. Every failed verdict carries a witness.

mod identities;
mod lines;
mod mutation;
mod package;
mod report;
mod spectra;
mod theorems;

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exactla::{GaussianRational, LinalgError, Rational};
use crate::graded::{Bidegree, Discrepancy};

pub use identities::validate_package;
pub use mutation::{standard_mutations, Change, Mutation, Target};
pub use lines::{eigen_lines, EigenLine, LineBlock};
pub use package::{DerivedOperators, KahlerPackage, PackageBlock};
pub use report::{verify, LineReport, Summary, VerificationReport, VerifyOptions};
pub use spectra::{compare_spectra, LineDims};
pub use theorems::{
    check_corollary1, check_degree0_lemma, check_theorem1, check_theorem2, split_exact_coexact, SplitBases,
    SplitDims,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("malformed package: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("eigenspaces have total dimension {found} but the package has dimension {total}")]
    IncompleteSpectrum { found: usize, total: usize },
    #[error("block {block} has a non-scalar Laplacian; candidate eigenvalues are required")]
    MissingCandidates { block: usize },
    #[error("the statement requires a positive eigenvalue")]
    ZeroEigenvalueLine,
    #[error("spectral lines do not cover the requested window")]
    IncompleteRange,
    #[error("{0} is not an eigenvalue of the package")]
    UnknownEigenvalue(Rational),
}

/// Stable identifiers of the checks, in report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckId {
    T1_1,
    T1_2,
    T1_3,
    C1a,
    C1b,
    C1c,
    C1d,
    C1e,
    C1f,
    C1g,
    L0_1,
    L0_2,
    L2Split,
    T2a,
    T2b,
    T2c,
    E6,
    E7,
    SUnion,
    SMono,
    SMid,
    KSl2,
    KNakano,
    KLaplacians,
}

impl CheckId {
    pub const ALL: [CheckId; 24] = [
        CheckId::T1_1,
        CheckId::T1_2,
        CheckId::T1_3,
        CheckId::C1a,
        CheckId::C1b,
        CheckId::C1c,
        CheckId::C1d,
        CheckId::C1e,
        CheckId::C1f,
        CheckId::C1g,
        CheckId::L0_1,
        CheckId::L0_2,
        CheckId::L2Split,
        CheckId::T2a,
        CheckId::T2b,
        CheckId::T2c,
        CheckId::E6,
        CheckId::E7,
        CheckId::SUnion,
        CheckId::SMono,
        CheckId::SMid,
        CheckId::KSl2,
        CheckId::KNakano,
        CheckId::KLaplacians,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::T1_1 => "T1.1",
            CheckId::T1_2 => "T1.2",
            CheckId::T1_3 => "T1.3",
            CheckId::C1a => "C1.a",
            CheckId::C1b => "C1.b",
            CheckId::C1c => "C1.c",
            CheckId::C1d => "C1.d",
            CheckId::C1e => "C1.e",
            CheckId::C1f => "C1.f",
            CheckId::C1g => "C1.g",
            CheckId::L0_1 => "L0.1",
            CheckId::L0_2 => "L0.2",
            CheckId::L2Split => "L2.split",
            CheckId::T2a => "T2.a",
            CheckId::T2b => "T2.b",
            CheckId::T2c => "T2.c",
            CheckId::E6 => "E6",
            CheckId::E7 => "E7",
            CheckId::SUnion => "S.union",
            CheckId::SMono => "S.mono",
            CheckId::SMid => "S.mid",
            CheckId::KSl2 => "K.sl2",
            CheckId::KNakano => "K.nakano",
            CheckId::KLaplacians => "K.laplacians",
        }
    }

    pub fn is_identity(self) -> bool {
        matches!(self, CheckId::KSl2 | CheckId::KNakano | CheckId::KLaplacians)
    }

    pub fn is_spectral(self) -> bool {
        matches!(self, CheckId::SUnion | CheckId::SMono | CheckId::SMid)
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown check id {0:?}")]
pub struct UnknownCheck(pub String);

impl FromStr for CheckId {
    type Err = UnknownCheck;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CheckId::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| UnknownCheck(s.to_string()))
    }
}

impl Serialize for CheckId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// Evidence for a failed verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// An inequality or equality between two dimensions that failed.
    Dims { relation: String, left: usize, right: usize },
    /// Two operators that should agree differ on a basis vector of `block`.
    Identity { block: usize, discrepancy: Discrepancy },
    /// A nonzero vector of piece `bidegree` in `block` killed by a map that
    /// should be injective.
    Kernel {
        block: usize,
        bidegree: Bidegree,
        vector: Vec<GaussianRational>,
    },
    /// An eigenvalue present in one degree but missing where it should be.
    Eigenvalue { mu: Rational, degree: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub check: CheckId,
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn pass(check: CheckId, name: impl Into<String>) -> Self {
        Verdict { check, name: name.into(), passed: true, witness: None }
    }

    pub fn fail(check: CheckId, name: impl Into<String>, witness: Witness) -> Self {
        Verdict { check, name: name.into(), passed: false, witness: Some(witness) }
    }

    /// Passes iff `ok`; otherwise witnessed by the two dimensions.
    pub fn dims(check: CheckId, name: impl Into<String>, ok: bool, left: usize, right: usize) -> Self {
        let name = name.into();
        if ok {
            Verdict::pass(check, name)
        } else {
            let relation = name.clone();
            Verdict::fail(check, name, Witness::Dims { relation, left, right })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_ids_round_trip() {
        for c in CheckId::ALL {
            assert_eq!(c.as_str().parse::<CheckId>().unwrap(), c);
        }
        assert!("T9.z".parse::<CheckId>().is_err());
        let mut sorted = CheckId::ALL;
        sorted.sort();
        assert_eq!(sorted, CheckId::ALL);
    }
}
