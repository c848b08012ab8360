//! Single-block corruptions of a package, used as negative controls.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::exactla::{ExactMatrix, GaussianRational, HermitianGram};
use crate::graded::{Bidegree, GradedGram, GradedOperator};

use super::{KahlerPackage, VerifyError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Partial,
    Dbar,
    Lefschetz,
    Conj,
    Gram,
}

impl Target {
    /// The piece an operator sends `source` to.
    pub fn target_of(self, source: Bidegree) -> Option<Bidegree> {
        match self {
            Target::Partial => source.shifted(1, 0),
            Target::Dbar => source.shifted(0, 1),
            Target::Lefschetz => source.shifted(1, 1),
            Target::Conj => Some(source.swapped()),
            Target::Gram => Some(source),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::Partial => "∂",
            Target::Dbar => "∂̄",
            Target::Lefschetz => "L",
            Target::Conj => "conj",
            Target::Gram => "gram",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Change {
    SignFlip,
    Scale(GaussianRational),
    Zero,
    /// Adds one to a single entry.
    Bump { row: usize, col: usize },
    /// Adds a constant to every entry.
    AddAll(GaussianRational),
}

impl fmt::Display for Change {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Change::SignFlip => write!(f, "sign flip"),
            Change::Scale(s) => write!(f, "scale by {s}"),
            Change::Zero => write!(f, "zeroed"),
            Change::Bump { row, col } => write!(f, "entry ({row},{col}) + 1"),
            Change::AddAll(c) => write!(f, "every entry + {c}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mutation {
    pub block: usize,
    pub target: Target,
    pub source: Bidegree,
    pub change: Change,
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let to = self.target.target_of(self.source).map(|t| t.to_string()).unwrap_or_default();
        write!(f, "block {} {} {}→{}: {}", self.block, self.target, self.source, to, self.change)
    }
}

fn changed(m: &ExactMatrix, change: &Change) -> Result<ExactMatrix, VerifyError> {
    Ok(match change {
        Change::SignFlip => -m,
        Change::Scale(s) => m.scale(s),
        Change::Zero => ExactMatrix::zeros(m.rows(), m.cols()),
        Change::Bump { row, col } => {
            if *row >= m.rows() || *col >= m.cols() {
                return Err(VerifyError::ShapeMismatch(format!("entry ({row},{col}) is outside a {:?} block", m.shape())));
            }
            let mut out = m.clone();
            out[(*row, *col)] = &out[(*row, *col)] + &GaussianRational::ONE;
            out
        }
        Change::AddAll(c) => m + &ExactMatrix::from_rows(vec![vec![c.clone(); m.cols()]; m.rows()])?,
    })
}

fn mutate_operator(op: &GradedOperator, dims: (usize, usize), s: Bidegree, t: Bidegree, change: &Change) -> Result<GradedOperator, VerifyError> {
    let current = op.block(s, t).cloned().unwrap_or_else(|| ExactMatrix::zeros(dims.0, dims.1));
    let mut out = op.clone();
    out.insert(s, t, changed(&current, change)?);
    Ok(out)
}

impl Mutation {
    pub fn apply(&self, pkg: &KahlerPackage) -> Result<KahlerPackage, VerifyError> {
        let mut out = pkg.clone();
        let n = pkg.n();
        let blk = out
            .blocks_mut()
            .get_mut(self.block)
            .ok_or_else(|| VerifyError::ShapeMismatch(format!("no block {}", self.block)))?;
        let s = self.source;
        let t = self
            .target
            .target_of(s)
            .filter(|t| t.p <= n && t.q <= n)
            .ok_or_else(|| VerifyError::ShapeMismatch(format!("{} has no target from {s}", self.target)))?;
        let dims = (blk.layout.dim(t), blk.layout.dim(s));
        if dims.0 == 0 || dims.1 == 0 {
            return Err(VerifyError::ShapeMismatch(format!("{} block {s}→{t} is empty", self.target)));
        }
        match self.target {
            Target::Partial => blk.partial = mutate_operator(&blk.partial, dims, s, t, &self.change)?,
            Target::Dbar => blk.dbar = mutate_operator(&blk.dbar, dims, s, t, &self.change)?,
            Target::Lefschetz => blk.lefschetz = Arc::new(mutate_operator(&blk.lefschetz, dims, s, t, &self.change)?),
            Target::Conj => blk.conj = Arc::new(mutate_operator(&blk.conj, dims, s, t, &self.change)?),
            Target::Gram => {
                let mut grams: BTreeMap<Bidegree, HermitianGram> = blk.gram.iter().map(|(b, g)| (b, g.clone())).collect();
                let g = changed(blk.gram.get(s).matrix(), &self.change)?;
                grams.insert(s, HermitianGram::new(g)?);
                blk.gram = Arc::new(GradedGram::new(&blk.layout, grams)?);
            }
        }
        Ok(out)
    }
}

/// Eighteen mutations of `block`, which must carry a nonzero Fourier mode
/// of a package with `n ≥ 1` (so every operator has nonzero blocks).
pub fn standard_mutations(n: usize, block: usize) -> Vec<Mutation> {
    let b = Bidegree::new;
    let top = n.saturating_sub(1);
    let m = |target, source, change| Mutation { block, target, source, change };
    let two = GaussianRational::from_integer(2);
    let i = GaussianRational::i();
    vec![
        m(Target::Dbar, b(0, 0), Change::SignFlip),
        m(Target::Dbar, b(n, top), Change::Scale(two.clone())),
        m(Target::Dbar, b(0, 0), Change::Zero),
        m(Target::Dbar, b(0, 0), Change::Bump { row: 0, col: 0 }),
        m(Target::Dbar, b(0, 0), Change::AddAll(GaussianRational::ONE)),
        m(Target::Partial, b(0, 0), Change::SignFlip),
        m(Target::Partial, b(top, n), Change::Scale(i.clone())),
        m(Target::Partial, b(0, 0), Change::Zero),
        m(Target::Partial, b(0, 0), Change::AddAll(GaussianRational::ONE)),
        m(Target::Lefschetz, b(0, 0), Change::SignFlip),
        m(Target::Lefschetz, b(top, top), Change::Scale(two.clone())),
        m(Target::Lefschetz, b(0, 0), Change::Zero),
        m(Target::Conj, b(0, 0), Change::SignFlip),
        m(Target::Conj, b(n, 0), Change::Scale(i)),
        m(Target::Conj, b(0, n), Change::Zero),
        m(Target::Conj, b(0, 0), Change::Bump { row: 0, col: 0 }),
        m(Target::Gram, b(0, 0), Change::Scale(two)),
        m(Target::Gram, b(n, n), Change::Bump { row: 0, col: 0 }),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Rational;
    use crate::torus::{torus_package, TorusSpec};
    use crate::verifier::validate_package;

    #[test]
    fn every_standard_mutation_is_caught() {
        for n in 1..=2 {
            let lines = TorusSpec::standard(n).enumerate_modes(&Rational::ONE).unwrap();
            let pkg = torus_package(n, &lines).unwrap().package;
            for mutation in standard_mutations(n, 1) {
                let bad = mutation.apply(&pkg).unwrap();
                let verdicts = validate_package(&bad).unwrap();
                assert!(verdicts.iter().any(|v| !v.passed), "n = {n}: {mutation} went unnoticed");
            }
        }
    }

    #[test]
    fn mutations_reach_every_identity_the_grading_does_not_force() {
        let lines = TorusSpec::standard(2).enumerate_modes(&Rational::ONE).unwrap();
        let pkg = torus_package(2, &lines).unwrap().package;
        let mut failed = std::collections::BTreeSet::new();
        for mutation in standard_mutations(2, 1) {
            let verdicts = validate_package(&mutation.apply(&pkg).unwrap()).unwrap();
            failed.extend(verdicts.into_iter().filter(|v| !v.passed).map(|v| v.name));
        }
        let never: Vec<String> = validate_package(&pkg)
            .unwrap()
            .into_iter()
            .map(|v| v.name)
            .filter(|name| !failed.contains(name))
            .collect();
        // H is fixed by the grading and L, Λ have bidegrees (1,1), (-1,-1)
        // by construction, so these two hold for every well-formed package.
        assert_eq!(never, ["[H,L] = -2L", "[H,Λ] = 2Λ"]);
    }

    #[test]
    fn misgraded_lefschetz_is_rejected_up_front() {
        let lines = TorusSpec::standard(1).enumerate_modes(&Rational::ONE).unwrap();
        let mut pkg = torus_package(1, &lines).unwrap().package;
        let blk = &mut pkg.blocks_mut()[1];
        let mut l = (*blk.lefschetz).clone();
        let (s, t) = (Bidegree::new(0, 0), Bidegree::new(0, 1));
        l.insert(s, t, ExactMatrix::from_rows(vec![vec![GaussianRational::ONE]; blk.layout.dim(t)]).unwrap());
        blk.lefschetz = Arc::new(l);
        let err = KahlerPackage::new(1, pkg.blocks().to_vec()).unwrap_err();
        assert!(matches!(err, VerifyError::ShapeMismatch(_)));
    }

    #[test]
    fn empty_targets_are_rejected() {
        let lines = TorusSpec::standard(1).enumerate_modes(&Rational::ZERO).unwrap();
        let pkg = torus_package(1, &lines).unwrap().package;
        let m = Mutation { block: 0, target: Target::Dbar, source: Bidegree::new(0, 1), change: Change::Zero };
        assert!(m.apply(&pkg).is_err());
    }
}
