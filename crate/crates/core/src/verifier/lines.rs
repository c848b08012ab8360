use std::collections::BTreeMap;

use crate::exactla::{kernel_matrix, ExactMatrix, GaussianRational, Rational};
use crate::graded::{Bidegree, GradedOperator, Layout};

use super::{KahlerPackage, PackageBlock, VerifyError};

/// The part of one eigenspace inside one block of the package.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineBlock {
    pub block: usize,
    /// Basis of `E^{(p,q)}_λ ∩ block` as columns, in piece coordinates.
    /// Every piece of the layout is present, possibly with zero columns.
    pub pieces: BTreeMap<Bidegree, ExactMatrix>,
    /// `dim E^k_λ ∩ block`, computed on the whole degree independently of
    /// the bigrading.
    pub betti: Vec<usize>,
}

impl LineBlock {
    pub fn h(&self, b: Bidegree) -> usize {
        self.pieces.get(&b).map_or(0, ExactMatrix::cols)
    }

    pub fn dim(&self) -> usize {
        self.pieces.values().map(ExactMatrix::cols).sum()
    }
}

/// One eigenvalue of the package Laplacian with its eigenspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenLine {
    pub mu: Rational,
    pub n: usize,
    /// Blocks meeting the eigenspace, in block order.
    pub blocks: Vec<LineBlock>,
}

impl EigenLine {
    pub fn h(&self, b: Bidegree) -> usize {
        self.blocks.iter().map(|lb| lb.h(b)).sum()
    }

    pub fn hodge_table(&self) -> Vec<Vec<usize>> {
        (0..=self.n)
            .map(|p| (0..=self.n).map(|q| self.h(Bidegree::new(p, q))).collect())
            .collect()
    }

    pub fn betti(&self) -> Vec<usize> {
        (0..=2 * self.n)
            .map(|k| self.blocks.iter().map(|lb| lb.betti[k]).sum())
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(LineBlock::dim).sum()
    }

    pub fn is_positive(&self) -> bool {
        self.mu.is_positive()
    }
}

pub(crate) fn block_laplacian(b: &PackageBlock) -> Result<GradedOperator, VerifyError> {
    let d = b.partial.add(&b.dbar);
    let d_star = b.partial.adjoint(&b.gram)?.add(&b.dbar.adjoint(&b.gram)?);
    Ok(d.anticommutator(&d_star))
}

/// The real scalar by which `delta` acts on the whole block, if it is one.
fn scalar_value(layout: &Layout, delta: &GradedOperator) -> Option<Rational> {
    let mut value: Option<GaussianRational> = None;
    for b in layout.bidegrees() {
        if layout.dim(b) == 0 {
            continue;
        }
        let s = match delta.block(b, b) {
            None => GaussianRational::ZERO,
            Some(m) => m.as_scalar()?,
        };
        match &value {
            None => value = Some(s),
            Some(v) if *v != s => return None,
            Some(_) => {}
        }
    }
    if delta.off_diagonal_blocks().next().is_some() {
        return None;
    }
    let v = value.unwrap_or(GaussianRational::ZERO);
    v.is_real().then_some(v.re)
}

fn full_block(layout: &Layout) -> LineBlock {
    LineBlock {
        block: 0,
        pieces: layout
            .bidegrees()
            .into_iter()
            .map(|b| (b, ExactMatrix::identity(layout.dim(b))))
            .collect(),
        betti: (0..=2 * layout.n()).map(|k| layout.degree_dim(k)).collect(),
    }
}

/// Eigenspace of `delta` at `lambda` inside one block.
fn kernel_block(layout: &Layout, delta: &GradedOperator, lambda: &Rational) -> LineBlock {
    let shifted = delta.sub(&GradedOperator::identity(layout).scale(&lambda.clone().into()));
    let full = shifted.to_full(layout);
    let total = layout.total_dim();
    let pieces = layout
        .bidegrees()
        .into_iter()
        .map(|b| {
            let o = layout.offset(b);
            let cols = full.submatrix(0..total, o..o + layout.dim(b));
            (b, kernel_matrix(&cols))
        })
        .collect();
    let betti = (0..=2 * layout.n())
        .map(|k| {
            let o = layout.degree_offset(k);
            let cols = full.submatrix(0..total, o..o + layout.degree_dim(k));
            kernel_matrix(&cols).cols()
        })
        .collect();
    LineBlock { block: 0, pieces, betti }
}

/// Splits the package into eigenspaces of its Laplacian.
///
/// Blocks whose Laplacian is a real scalar are read off directly. Other
/// blocks need `candidates`; each candidate yields a line even when its
/// eigenspace is empty. With candidates given, scalar blocks contribute
/// only to the matching candidate. Lines come out sorted by eigenvalue.
///
/// When `require_complete` is set the eigenspaces must exhaust the package.
pub fn eigen_lines(
    pkg: &KahlerPackage,
    candidates: Option<&[Rational]>,
    require_complete: bool,
) -> Result<Vec<EigenLine>, VerifyError> {
    let mut lines: BTreeMap<Rational, Vec<LineBlock>> = BTreeMap::new();
    if let Some(c) = candidates {
        for mu in c {
            lines.entry(mu.clone()).or_default();
        }
    }
    for (bi, b) in pkg.blocks().iter().enumerate() {
        let layout = &*b.layout;
        if layout.total_dim() == 0 {
            continue;
        }
        let delta = block_laplacian(b)?;
        let scalar = scalar_value(layout, &delta);
        match (candidates, scalar) {
            (None, None) => return Err(VerifyError::MissingCandidates { block: bi }),
            (None, Some(mu)) => lines.entry(mu).or_default().push(LineBlock { block: bi, ..full_block(layout) }),
            (Some(_), Some(mu)) => {
                if let Some(entry) = lines.get_mut(&mu) {
                    entry.push(LineBlock { block: bi, ..full_block(layout) });
                }
            }
            (Some(_), None) => {
                for (mu, entry) in lines.iter_mut() {
                    let lb = kernel_block(layout, &delta, mu);
                    if lb.dim() > 0 || lb.betti.iter().any(|&x| x > 0) {
                        entry.push(LineBlock { block: bi, ..lb });
                    }
                }
            }
        }
    }
    let out: Vec<EigenLine> = lines
        .into_iter()
        .map(|(mu, blocks)| EigenLine { mu, n: pkg.n(), blocks })
        .collect();
    let found: usize = out.iter().map(EigenLine::dim).sum();
    if require_complete && found != pkg.total_dim() {
        return Err(VerifyError::IncompleteSpectrum { found, total: pkg.total_dim() });
    }
    Ok(out)
}
