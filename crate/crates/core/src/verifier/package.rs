use std::collections::BTreeMap;
use std::sync::Arc;

use crate::exactla::{ExactMatrix, GaussianRational, HermitianGram, LinalgError};
use crate::graded::{Bidegree, GradedGram, GradedOperator, Layout};

use super::VerifyError;

/// One direct summand of a Kähler spectral package.
///
/// `partial`, `dbar` and `lefschetz` are the matrices of `∂`, `∂̄` and
/// `L = ω ∧ −`. `conj` is the matrix part `M` of the antilinear conjugation
/// `x ↦ M·x̄`, mapping this block's `(p,q)` piece to the `(q,p)` piece of
/// block `conj_partner` (possibly itself).
#[derive(Clone, Debug)]
pub struct PackageBlock {
    pub layout: Arc<Layout>,
    pub gram: Arc<GradedGram>,
    pub partial: GradedOperator,
    pub dbar: GradedOperator,
    pub lefschetz: Arc<GradedOperator>,
    pub conj: Arc<GradedOperator>,
    pub conj_partner: usize,
}

/// A finite-dimensional bigraded inner-product complex with `∂`, `∂̄`, `L`
/// and conjugation, stored as a direct sum of blocks. All operators are
/// block diagonal except conjugation, which permutes blocks.
#[derive(Clone, Debug)]
pub struct KahlerPackage {
    n: usize,
    blocks: Vec<PackageBlock>,
}

fn check_block_shapes(layout: &Layout, op: &GradedOperator, what: &str) -> Result<(), VerifyError> {
    for (s, t, m) in op.blocks() {
        if !layout.contains(s) || !layout.contains(t) {
            return Err(VerifyError::ShapeMismatch(format!("{what}: block {s}→{t} is outside the grading")));
        }
        if m.shape() != (layout.dim(t), layout.dim(s)) {
            return Err(VerifyError::ShapeMismatch(format!(
                "{what}: block {s}→{t} is {:?}, expected {:?}",
                m.shape(),
                (layout.dim(t), layout.dim(s))
            )));
        }
    }
    Ok(())
}

impl KahlerPackage {
    pub fn new(n: usize, blocks: Vec<PackageBlock>) -> Result<Self, VerifyError> {
        for (i, b) in blocks.iter().enumerate() {
            let l = &*b.layout;
            if l.n() != n {
                return Err(VerifyError::ShapeMismatch(format!("block {i} has weight {} but package has {n}", l.n())));
            }
            check_block_shapes(l, &b.partial, "partial")?;
            check_block_shapes(l, &b.dbar, "dbar")?;
            check_block_shapes(l, &b.lefschetz, "L")?;
            if !b.partial.has_shift(1, 0) {
                return Err(VerifyError::ShapeMismatch(format!("block {i}: ∂ must have bidegree (1,0)")));
            }
            if !b.dbar.has_shift(0, 1) {
                return Err(VerifyError::ShapeMismatch(format!("block {i}: ∂̄ must have bidegree (0,1)")));
            }
            if !b.lefschetz.has_shift(1, 1) {
                return Err(VerifyError::ShapeMismatch(format!("block {i}: L must have bidegree (1,1)")));
            }
            let partner = blocks.get(b.conj_partner).ok_or_else(|| {
                VerifyError::ShapeMismatch(format!("block {i}: conjugation partner {} out of range", b.conj_partner))
            })?;
            if partner.conj_partner != i {
                return Err(VerifyError::ShapeMismatch(format!("block {i}: conjugation pairing is not symmetric")));
            }
            for bd in l.bidegrees() {
                if partner.layout.dim(bd.swapped()) != l.dim(bd) {
                    return Err(VerifyError::ShapeMismatch(format!(
                        "block {i}: piece {bd} does not match the conjugate piece of block {}",
                        b.conj_partner
                    )));
                }
            }
            for (s, t, m) in b.conj.blocks() {
                if t != s.swapped() {
                    return Err(VerifyError::ShapeMismatch(format!("block {i}: conjugation block {s}→{t} must target {}", s.swapped())));
                }
                if m.shape() != (l.dim(t), l.dim(s)) {
                    return Err(VerifyError::ShapeMismatch(format!("block {i}: conjugation block {s}→{t} has shape {:?}", m.shape())));
                }
            }
        }
        Ok(KahlerPackage { n, blocks })
    }

    /// A single self-conjugate block.
    pub fn single(
        layout: Layout,
        gram: GradedGram,
        partial: GradedOperator,
        dbar: GradedOperator,
        lefschetz: GradedOperator,
        conj: GradedOperator,
    ) -> Result<Self, VerifyError> {
        let n = layout.n();
        KahlerPackage::new(
            n,
            vec![PackageBlock {
                layout: Arc::new(layout),
                gram: Arc::new(gram),
                partial,
                dbar,
                lefschetz: Arc::new(lefschetz),
                conj: Arc::new(conj),
                conj_partner: 0,
            }],
        )
    }

    /// The package with no forms at all.
    pub fn empty(n: usize) -> Self {
        let layout = Layout::zero(n);
        let gram = GradedGram::new(&layout, Default::default()).expect("zero dims");
        KahlerPackage::single(
            layout,
            gram,
            GradedOperator::zero(),
            GradedOperator::zero(),
            GradedOperator::zero(),
            GradedOperator::zero(),
        )
        .expect("empty package is well formed")
    }

    pub fn direct_sum(&self, other: &KahlerPackage) -> Result<KahlerPackage, VerifyError> {
        if self.n != other.n {
            return Err(VerifyError::ShapeMismatch(format!("weights {} and {} differ", self.n, other.n)));
        }
        let offset = self.blocks.len();
        let mut blocks = self.blocks.clone();
        blocks.extend(other.blocks.iter().cloned().map(|mut b| {
            b.conj_partner += offset;
            b
        }));
        KahlerPackage::new(self.n, blocks)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[PackageBlock] {
        &self.blocks
    }

    pub fn blocks_mut(&mut self) -> &mut [PackageBlock] {
        &mut self.blocks
    }

    pub fn dim(&self, b: Bidegree) -> usize {
        self.blocks.iter().map(|blk| blk.layout.dim(b)).sum()
    }

    pub fn dims_table(&self) -> Vec<Vec<usize>> {
        (0..=self.n)
            .map(|p| (0..=self.n).map(|q| self.dim(Bidegree::new(p, q))).collect())
            .collect()
    }

    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.layout.total_dim()).sum()
    }

    /// The same package as one self-conjugate block: each piece is the
    /// concatenation of the blocks' pieces in block order.
    pub fn flatten(&self) -> Result<KahlerPackage, VerifyError> {
        let layout = Layout::new(self.n, self.dims_table());
        let mut offsets = Vec::with_capacity(self.blocks.len());
        let mut running = vec![vec![0; self.n + 1]; self.n + 1];
        for b in &self.blocks {
            offsets.push(running.clone());
            for bd in layout.bidegrees() {
                running[bd.p][bd.q] += b.layout.dim(bd);
            }
        }
        let at = |i: usize, bd: Bidegree| offsets[i][bd.p][bd.q];

        let mut grams = BTreeMap::new();
        for bd in layout.bidegrees() {
            let mut m = ExactMatrix::zeros(layout.dim(bd), layout.dim(bd));
            for (i, b) in self.blocks.iter().enumerate() {
                m.set_submatrix(at(i, bd), at(i, bd), b.gram.get(bd).matrix());
            }
            grams.insert(bd, HermitianGram::new(m)?);
        }
        let gram = GradedGram::new(&layout, grams)?;

        let assemble = |pick: &dyn Fn(&PackageBlock) -> &GradedOperator, across: bool| {
            let mut dense: BTreeMap<(Bidegree, Bidegree), ExactMatrix> = BTreeMap::new();
            for (i, b) in self.blocks.iter().enumerate() {
                let j = if across { b.conj_partner } else { i };
                for (s, t, m) in pick(b).blocks() {
                    dense
                        .entry((s, t))
                        .or_insert_with(|| ExactMatrix::zeros(layout.dim(t), layout.dim(s)))
                        .set_submatrix(at(j, t), at(i, s), m);
                }
            }
            let mut op = GradedOperator::zero();
            for ((s, t), m) in dense {
                op.insert(s, t, m);
            }
            op
        };
        let partial = assemble(&|b| &b.partial, false);
        let dbar = assemble(&|b| &b.dbar, false);
        let lefschetz = assemble(&|b| &*b.lefschetz, false);
        let conj = assemble(&|b| &*b.conj, true);
        KahlerPackage::single(layout, gram, partial, dbar, lefschetz, conj)
    }
}

/// Operators derived from a block's `∂`, `∂̄`, `L` and metric.
#[derive(Clone, Debug)]
pub struct DerivedOperators {
    pub partial_star: GradedOperator,
    pub dbar_star: GradedOperator,
    pub d: GradedOperator,
    pub d_star: GradedOperator,
    pub laplacian: GradedOperator,
    pub lambda: GradedOperator,
    pub h: GradedOperator,
}

impl DerivedOperators {
    pub fn new(block: &PackageBlock) -> Result<Self, LinalgError> {
        let partial_star = block.partial.adjoint(&block.gram)?;
        let dbar_star = block.dbar.adjoint(&block.gram)?;
        let d = block.partial.add(&block.dbar);
        let d_star = partial_star.add(&dbar_star);
        let laplacian = d.anticommutator(&d_star);
        let lambda = block.lefschetz.adjoint(&block.gram)?;
        let n = block.layout.n() as i64;
        let h = GradedOperator::degree_weighted(&block.layout, |k| n - k as i64);
        Ok(DerivedOperators { partial_star, dbar_star, d, d_star, laplacian, lambda, h })
    }

    /// `2(∂∂* + ∂*∂)`.
    pub fn partial_laplacian(&self, block: &PackageBlock) -> GradedOperator {
        block.partial.anticommutator(&self.partial_star).scale(&GaussianRational::from_integer(2))
    }

    /// `2(∂̄∂̄* + ∂̄*∂̄)`.
    pub fn dbar_laplacian(&self, block: &PackageBlock) -> GradedOperator {
        block.dbar.anticommutator(&self.dbar_star).scale(&GaussianRational::from_integer(2))
    }
}
