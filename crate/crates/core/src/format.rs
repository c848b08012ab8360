//! Package and torus files.
//!
//! A package file is one JSON document holding a single block. Operator maps
//! are keyed by the source piece `"p,q"`; the target is implied by the
//! operator's bidegree (`∂` adds (1,0), `∂̄` (0,1), `L` (1,1), and
//! conjugation sends `(p,q)` to `(q,p)`). Absent blocks are zero. The
//! optional `eigenvalues` list supplies the candidate eigenvalues a general
//! package needs for verification.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::{ExactMatrix, GaussianRational, HermitianGram, LinalgError, Rational};
use crate::graded::{Bidegree, GradedGram, GradedOperator, Layout};
use crate::torus::{TorusError, TorusSpec};
use crate::verifier::{KahlerPackage, VerifyError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed piece key {0:?}")]
    BadKey(String),
    #[error("{what}: {detail}")]
    Shape { what: String, detail: String },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Torus(#[from] TorusError),
}

type Matrix = Vec<Vec<GaussianRational>>;
type PieceMap = BTreeMap<String, Matrix>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PackageFile {
    n: usize,
    #[serde(default)]
    dims: BTreeMap<String, usize>,
    #[serde(default)]
    gram: PieceMap,
    #[serde(default)]
    partial: PieceMap,
    #[serde(default)]
    dbar: PieceMap,
    #[serde(default, rename = "L")]
    lefschetz: PieceMap,
    #[serde(default)]
    conj: PieceMap,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eigenvalues: Option<Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TorusFile {
    n: usize,
    basis: Vec<Vec<Rational>>,
}

/// A package read from a file, with its optional eigenvalue list.
#[derive(Clone, Debug)]
pub struct PackageDocument {
    pub package: KahlerPackage,
    pub eigenvalues: Option<Vec<Rational>>,
}

fn parse_key(key: &str, n: usize) -> Result<Bidegree, FormatError> {
    let bad = || FormatError::BadKey(key.to_string());
    let (p, q) = key.split_once(',').ok_or_else(bad)?;
    let digits = |s: &str| if !s.is_empty() && s.bytes().all(|c| c.is_ascii_digit()) { s.parse().ok() } else { None };
    let (p, q): (usize, usize) = (digits(p).ok_or_else(bad)?, digits(q).ok_or_else(bad)?);
    if p > n || q > n {
        return Err(bad());
    }
    Ok(Bidegree::new(p, q))
}

fn to_matrix(rows: &Matrix, shape: (usize, usize), what: &str, key: &str) -> Result<ExactMatrix, FormatError> {
    let mismatch = || FormatError::Shape {
        what: format!("{what} at {key}"),
        detail: format!("expected {} × {}", shape.0, shape.1),
    };
    if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
        return Err(mismatch());
    }
    if shape.0 == 0 {
        return Ok(ExactMatrix::zeros(0, shape.1));
    }
    ExactMatrix::from_rows(rows.clone()).map_err(|_| mismatch())
}

fn read_operator(
    map: &PieceMap,
    layout: &Layout,
    what: &str,
    target: impl Fn(Bidegree) -> Option<Bidegree>,
) -> Result<GradedOperator, FormatError> {
    let mut op = GradedOperator::zero();
    for (key, rows) in map {
        let s = parse_key(key, layout.n())?;
        let t = target(s)
            .filter(|&t| layout.contains(t))
            .ok_or_else(|| FormatError::Shape { what: format!("{what} at {key}"), detail: "target piece does not exist".into() })?;
        op.insert(s, t, to_matrix(rows, (layout.dim(t), layout.dim(s)), what, key)?);
    }
    Ok(op)
}

fn write_operator(op: &GradedOperator) -> PieceMap {
    op.blocks()
        .filter(|(_, _, m)| m.rows() > 0 && m.cols() > 0)
        .map(|(s, _, m)| (s.key(), m.to_rows()))
        .collect()
}

pub fn read_package(text: &str) -> Result<PackageDocument, FormatError> {
    let file: PackageFile = serde_json::from_str(text)?;
    let n = file.n;
    let mut dims = vec![vec![0; n + 1]; n + 1];
    for (key, &d) in &file.dims {
        let b = parse_key(key, n)?;
        dims[b.p][b.q] = d;
    }
    let layout = Layout::new(n, dims);

    let mut grams = BTreeMap::new();
    for (key, rows) in &file.gram {
        let b = parse_key(key, n)?;
        let m = to_matrix(rows, (layout.dim(b), layout.dim(b)), "gram", key)?;
        grams.insert(b, HermitianGram::new(m)?);
    }
    for b in layout.bidegrees() {
        if layout.dim(b) > 0 && !grams.contains_key(&b) {
            return Err(FormatError::Shape { what: format!("gram at {}", b.key()), detail: "missing".into() });
        }
    }
    let gram = GradedGram::new(&layout, grams)?;
    let partial = read_operator(&file.partial, &layout, "partial", |b| b.shifted(1, 0))?;
    let dbar = read_operator(&file.dbar, &layout, "dbar", |b| b.shifted(0, 1))?;
    let lefschetz = read_operator(&file.lefschetz, &layout, "L", |b| b.shifted(1, 1))?;
    let conj = read_operator(&file.conj, &layout, "conj", |b| Some(b.swapped()))?;
    let package = KahlerPackage::single(layout, gram, partial, dbar, lefschetz, conj)?;
    Ok(PackageDocument { package, eigenvalues: file.eigenvalues })
}

/// Writes `pkg` as a single dense block, flattening it first if needed.
pub fn write_package(pkg: &KahlerPackage, eigenvalues: Option<&[Rational]>) -> Result<String, FormatError> {
    let flat;
    let pkg = if pkg.blocks().len() == 1 && pkg.blocks()[0].conj_partner == 0 {
        pkg
    } else {
        flat = pkg.flatten()?;
        &flat
    };
    let b = &pkg.blocks()[0];
    let layout = &*b.layout;
    let file = PackageFile {
        n: pkg.n(),
        dims: layout.bidegrees().into_iter().map(|bd| (bd.key(), layout.dim(bd))).collect(),
        gram: layout
            .bidegrees()
            .into_iter()
            .filter(|&bd| layout.dim(bd) > 0)
            .map(|bd| (bd.key(), b.gram.get(bd).matrix().to_rows()))
            .collect(),
        partial: write_operator(&b.partial),
        dbar: write_operator(&b.dbar),
        lefschetz: write_operator(&b.lefschetz),
        conj: write_operator(&b.conj),
        eigenvalues: eigenvalues.map(<[Rational]>::to_vec),
    };
    let mut text = serde_json::to_string_pretty(&file)?;
    text.push('\n');
    Ok(text)
}

pub fn read_torus(text: &str) -> Result<TorusSpec, FormatError> {
    let file: TorusFile = serde_json::from_str(text)?;
    Ok(TorusSpec::new(file.n, file.basis)?)
}

pub fn write_torus(torus: &TorusSpec) -> Result<String, FormatError> {
    let file = TorusFile { n: torus.n(), basis: torus.basis().to_vec() };
    let mut text = serde_json::to_string_pretty(&file)?;
    text.push('\n');
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::torus_package;
    use crate::verifier::{verify, VerifyOptions};

    #[test]
    fn keys() {
        assert_eq!(parse_key("1,0", 1).unwrap(), Bidegree::new(1, 0));
        for bad in ["1", "2,0", "a,b", "1,", "-1,0", " 1,0"] {
            assert!(parse_key(bad, 1).is_err(), "{bad}");
        }
    }

    #[test]
    fn torus_file_roundtrip() {
        let text = "{\"n\": 1, \"basis\": [[\"2\", \"1/2\"], [\"0\", \"1\"]]}";
        let t = read_torus(text).unwrap();
        assert_eq!(read_torus(&write_torus(&t).unwrap()).unwrap().basis(), t.basis());
    }

    #[test]
    fn singular_torus_is_rejected() {
        let text = "{\"n\": 1, \"basis\": [[\"1\", \"2\"], [\"1/2\", \"1\"]]}";
        assert!(matches!(read_torus(text), Err(FormatError::Torus(TorusError::SingularBasis))));
    }

    #[test]
    fn package_roundtrip_preserves_the_report() {
        let lines = TorusSpec::standard(1).enumerate_modes(&Rational::from_integer(1)).unwrap();
        let pkg = torus_package(1, &lines).unwrap().package;
        let mus: Vec<Rational> = lines.iter().map(|l| l.mu.clone()).collect();
        let text = write_package(&pkg, Some(&mus)).unwrap();
        let doc = read_package(&text).unwrap();
        assert_eq!(write_package(&doc.package, doc.eigenvalues.as_deref()).unwrap(), text);

        let direct = verify(&pkg, &VerifyOptions::default()).unwrap();
        let opts = VerifyOptions { candidates: doc.eigenvalues, require_complete: true, ..Default::default() };
        let imported = verify(&doc.package, &opts).unwrap();
        assert_eq!(serde_json::to_string(&direct).unwrap(), serde_json::to_string(&imported).unwrap());
    }

    #[test]
    fn wrong_shape_is_reported() {
        let text = r#"{"n": 1, "dims": {"0,0": 1}, "gram": {"0,0": [["1", "0"]]}}"#;
        assert!(matches!(read_package(text), Err(FormatError::Shape { .. })));
    }
}
