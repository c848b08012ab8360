//! Bigraded vector spaces and operators stored as per-bidegree blocks.
//!
//! A [`Layout`] fixes the dimension of every `(p, q)` piece of a finite
//! bigraded space. A [`GradedOperator`] is a linear map between two such
//! spaces stored as dense blocks keyed by `(source, target)` bidegree; absent
//! blocks are zero. Keeping blocks small is what makes per-mode torus
//! packages cheap to validate.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exactla::{adjoint_wrt, ExactMatrix, GaussianRational, HermitianGram, LinalgError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Bidegree {
    pub p: usize,
    pub q: usize,
}

impl Bidegree {
    pub const fn new(p: usize, q: usize) -> Self {
        Bidegree { p, q }
    }

    pub fn degree(self) -> usize {
        self.p + self.q
    }

    pub fn swapped(self) -> Self {
        Bidegree::new(self.q, self.p)
    }

    pub fn shifted(self, dp: isize, dq: isize) -> Option<Bidegree> {
        let p = self.p.checked_add_signed(dp)?;
        let q = self.q.checked_add_signed(dq)?;
        Some(Bidegree::new(p, q))
    }

    /// The `"p,q"` key used in package files.
    pub fn key(self) -> String {
        format!("{},{}", self.p, self.q)
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// Dimensions of the `(p, q)` pieces for `0 <= p, q <= n`.
///
/// Global coordinates run through degrees `k = 0..=2n` in order; inside a
/// degree the pieces are ordered by decreasing `p` (so `dz` before `dz̄`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Layout {
    n: usize,
    dims: Vec<Vec<usize>>,
}

impl Layout {
    pub fn new(n: usize, dims: Vec<Vec<usize>>) -> Self {
        assert_eq!(dims.len(), n + 1, "need n + 1 rows of dimensions");
        assert!(dims.iter().all(|r| r.len() == n + 1), "need n + 1 columns of dimensions");
        Layout { n, dims }
    }

    pub fn zero(n: usize) -> Self {
        Layout::new(n, vec![vec![0; n + 1]; n + 1])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self, b: Bidegree) -> usize {
        if b.p > self.n || b.q > self.n {
            0
        } else {
            self.dims[b.p][b.q]
        }
    }

    pub fn contains(&self, b: Bidegree) -> bool {
        b.p <= self.n && b.q <= self.n
    }

    /// Bidegrees of total degree `k`, in layout order.
    pub fn bidegrees_of_degree(&self, k: usize) -> Vec<Bidegree> {
        (0..=self.n)
            .rev()
            .filter(|&p| p <= k && k - p <= self.n)
            .map(|p| Bidegree::new(p, k - p))
            .collect()
    }

    /// Every bidegree, in global coordinate order.
    pub fn bidegrees(&self) -> Vec<Bidegree> {
        (0..=2 * self.n).flat_map(|k| self.bidegrees_of_degree(k)).collect()
    }

    pub fn degree_dim(&self, k: usize) -> usize {
        self.bidegrees_of_degree(k).into_iter().map(|b| self.dim(b)).sum()
    }

    pub fn total_dim(&self) -> usize {
        self.bidegrees().into_iter().map(|b| self.dim(b)).sum()
    }

    /// Global offset of the first coordinate of `b`.
    pub fn offset(&self, b: Bidegree) -> usize {
        self.bidegrees()
            .into_iter()
            .take_while(|&c| c != b)
            .map(|c| self.dim(c))
            .sum()
    }

    pub fn degree_offset(&self, k: usize) -> usize {
        (0..k).map(|j| self.degree_dim(j)).sum()
    }

    pub fn dims_table(&self) -> &[Vec<usize>] {
        &self.dims
    }
}

/// A linear map stored as dense blocks `source piece → target piece`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GradedOperator {
    blocks: BTreeMap<(Bidegree, Bidegree), ExactMatrix>,
}

/// Location of the first entry where two operators disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub source: Bidegree,
    pub target: Bidegree,
    /// Index of the source basis vector whose images differ.
    pub column: usize,
    pub row: usize,
    pub left: GaussianRational,
    pub right: GaussianRational,
}

impl GradedOperator {
    pub fn zero() -> Self {
        GradedOperator::default()
    }

    pub fn identity(layout: &Layout) -> Self {
        let mut op = GradedOperator::zero();
        for b in layout.bidegrees() {
            op.insert(b, b, ExactMatrix::identity(layout.dim(b)));
        }
        op
    }

    /// Projection onto the listed pieces.
    pub fn projection(layout: &Layout, onto: &[Bidegree]) -> Self {
        let mut op = GradedOperator::zero();
        for &b in onto {
            op.insert(b, b, ExactMatrix::identity(layout.dim(b)));
        }
        op
    }

    /// Acts on each piece of degree `k` by `weight(k)`.
    pub fn degree_weighted(layout: &Layout, weight: impl Fn(usize) -> i64) -> Self {
        let mut op = GradedOperator::zero();
        for b in layout.bidegrees() {
            let s = GaussianRational::from_integer(weight(b.degree()));
            op.insert(b, b, ExactMatrix::scalar(layout.dim(b), &s));
        }
        op
    }

    /// Inserts a block, dropping it if zero. Replaces any existing block.
    pub fn insert(&mut self, source: Bidegree, target: Bidegree, m: ExactMatrix) {
        if m.is_zero() {
            self.blocks.remove(&(source, target));
        } else {
            self.blocks.insert((source, target), m);
        }
    }

    pub fn block(&self, source: Bidegree, target: Bidegree) -> Option<&ExactMatrix> {
        self.blocks.get(&(source, target))
    }

    /// The block `source → target`, materializing zeros when absent.
    pub fn block_or_zero(&self, layout: &Layout, source: Bidegree, target: Bidegree) -> ExactMatrix {
        self.block(source, target)
            .cloned()
            .unwrap_or_else(|| ExactMatrix::zeros(layout.dim(target), layout.dim(source)))
    }

    pub fn blocks(&self) -> impl Iterator<Item = (Bidegree, Bidegree, &ExactMatrix)> {
        self.blocks.iter().map(|(&(s, t), m)| (s, t, m))
    }

    pub fn blocks_mut(&mut self) -> impl Iterator<Item = (Bidegree, Bidegree, &mut ExactMatrix)> {
        self.blocks.iter_mut().map(|(&(s, t), m)| (s, t, m))
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    /// True when every block maps `b` to `b + (dp, dq)`.
    pub fn has_shift(&self, dp: isize, dq: isize) -> bool {
        self.blocks.keys().all(|&(s, t)| s.shifted(dp, dq) == Some(t))
    }

    /// Blocks whose target differs from their source.
    pub fn off_diagonal_blocks(&self) -> impl Iterator<Item = (Bidegree, Bidegree, &ExactMatrix)> {
        self.blocks().filter(|(s, t, _)| s != t)
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &GradedOperator) -> GradedOperator {
        let mut acc: BTreeMap<(Bidegree, Bidegree), ExactMatrix> = BTreeMap::new();
        for (&(s, mid), right) in &rhs.blocks {
            for (&(mid2, t), left) in self.blocks.range((mid, Bidegree::new(0, 0))..) {
                if mid2 != mid {
                    break;
                }
                let prod = left * right;
                match acc.get_mut(&(s, t)) {
                    Some(existing) => *existing = &*existing + &prod,
                    None => {
                        acc.insert((s, t), prod);
                    }
                }
            }
        }
        acc.retain(|_, m| !m.is_zero());
        GradedOperator { blocks: acc }
    }

    fn combine(&self, rhs: &GradedOperator, sign: bool) -> GradedOperator {
        let mut blocks = self.blocks.clone();
        for (&key, m) in &rhs.blocks {
            match blocks.get_mut(&key) {
                Some(existing) => *existing = if sign { &*existing + m } else { &*existing - m },
                None => {
                    blocks.insert(key, if sign { m.clone() } else { -m });
                }
            }
        }
        blocks.retain(|_, m| !m.is_zero());
        GradedOperator { blocks }
    }

    pub fn add(&self, rhs: &GradedOperator) -> GradedOperator {
        self.combine(rhs, true)
    }

    pub fn sub(&self, rhs: &GradedOperator) -> GradedOperator {
        self.combine(rhs, false)
    }

    /// `[self, rhs] = self∘rhs − rhs∘self`.
    pub fn commutator(&self, rhs: &GradedOperator) -> GradedOperator {
        self.compose(rhs).sub(&rhs.compose(self))
    }

    /// `self∘rhs + rhs∘self`.
    pub fn anticommutator(&self, rhs: &GradedOperator) -> GradedOperator {
        self.compose(rhs).add(&rhs.compose(self))
    }

    pub fn scale(&self, s: &GaussianRational) -> GradedOperator {
        let mut out = GradedOperator::zero();
        for (&(src, tgt), m) in &self.blocks {
            out.insert(src, tgt, m.scale(s));
        }
        out
    }

    /// Entrywise conjugate of every block (the matrix part of an antilinear map).
    pub fn conj(&self) -> GradedOperator {
        GradedOperator {
            blocks: self.blocks.iter().map(|(&k, m)| (k, m.conj())).collect(),
        }
    }

    /// Metric adjoint with respect to per-piece Grams.
    pub fn adjoint(&self, grams: &GradedGram) -> Result<GradedOperator, LinalgError> {
        let mut out = GradedOperator::zero();
        for (&(s, t), m) in &self.blocks {
            let a = adjoint_wrt(m, grams.get(s), grams.get(t))?;
            out.insert(t, s, a);
        }
        Ok(out)
    }

    /// First discrepancy between two operators, or `None` if they are equal.
    pub fn first_discrepancy(&self, other: &GradedOperator, layout: &Layout) -> Option<Discrepancy> {
        self.first_discrepancy_between(other, layout, layout)
    }

    /// As [`first_discrepancy`](Self::first_discrepancy) for maps between two
    /// differently graded spaces.
    pub fn first_discrepancy_between(
        &self,
        other: &GradedOperator,
        source: &Layout,
        target: &Layout,
    ) -> Option<Discrepancy> {
        let keys: std::collections::BTreeSet<_> =
            self.blocks.keys().chain(other.blocks.keys()).copied().collect();
        let materialize = |op: &GradedOperator, s: Bidegree, t: Bidegree| {
            op.block(s, t)
                .cloned()
                .unwrap_or_else(|| ExactMatrix::zeros(target.dim(t), source.dim(s)))
        };
        for (s, t) in keys {
            let a = materialize(self, s, t);
            let b = materialize(other, s, t);
            if let Some((row, column)) = a.first_difference(&b) {
                return Some(Discrepancy {
                    source: s,
                    target: t,
                    column,
                    row,
                    left: a[(row, column)].clone(),
                    right: b[(row, column)].clone(),
                });
            }
        }
        None
    }

    /// Slices a matrix on the whole space (global coordinates of `layout`) into blocks.
    pub fn from_full(layout: &Layout, m: &ExactMatrix) -> GradedOperator {
        let total = layout.total_dim();
        assert_eq!(m.shape(), (total, total), "full matrix must act on the whole space");
        let pieces: Vec<_> = layout
            .bidegrees()
            .into_iter()
            .map(|b| (b, layout.offset(b), layout.dim(b)))
            .collect();
        let mut op = GradedOperator::zero();
        for &(s, so, sd) in &pieces {
            for &(t, to, td) in &pieces {
                if sd == 0 || td == 0 {
                    continue;
                }
                op.insert(s, t, m.submatrix(to..to + td, so..so + sd));
            }
        }
        op
    }

    /// The matrix on the whole space in global coordinates.
    pub fn to_full(&self, layout: &Layout) -> ExactMatrix {
        let total = layout.total_dim();
        let mut m = ExactMatrix::zeros(total, total);
        for (&(s, t), block) in &self.blocks {
            m.set_submatrix(layout.offset(t), layout.offset(s), block);
        }
        m
    }
}

/// One Hermitian Gram per bidegree; distinct pieces are orthogonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedGram {
    grams: BTreeMap<Bidegree, HermitianGram>,
}

impl GradedGram {
    pub fn new(layout: &Layout, mut grams: BTreeMap<Bidegree, HermitianGram>) -> Result<Self, LinalgError> {
        for b in layout.bidegrees() {
            let d = layout.dim(b);
            match grams.get(&b) {
                Some(g) if g.dim() != d => {
                    return Err(LinalgError::DimensionMismatch {
                        op: "graded gram",
                        left: (d, d),
                        right: (g.dim(), g.dim()),
                    })
                }
                Some(_) => {}
                None if d == 0 => {
                    grams.insert(b, HermitianGram::identity(0));
                }
                None => {
                    return Err(LinalgError::DimensionMismatch {
                        op: "graded gram",
                        left: (d, d),
                        right: (0, 0),
                    })
                }
            }
        }
        Ok(GradedGram { grams })
    }

    pub fn get(&self, b: Bidegree) -> &HermitianGram {
        &self.grams[&b]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Bidegree, &HermitianGram)> {
        self.grams.iter().map(|(&b, g)| (b, g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layout_n1() -> Layout {
        Layout::new(1, vec![vec![1, 1], vec![1, 1]])
    }

    #[test]
    fn layout_ordering() {
        let l = layout_n1();
        assert_eq!(
            l.bidegrees(),
            vec![Bidegree::new(0, 0), Bidegree::new(1, 0), Bidegree::new(0, 1), Bidegree::new(1, 1)]
        );
        assert_eq!(l.offset(Bidegree::new(0, 1)), 2);
        assert_eq!(l.degree_offset(2), 3);
        assert_eq!(l.total_dim(), 4);
    }

    #[test]
    fn full_roundtrip_and_compose() {
        let l = layout_n1();
        let mut m = ExactMatrix::zeros(4, 4);
        m[(1, 0)] = GaussianRational::from_integer(2);
        m[(3, 2)] = GaussianRational::i();
        let op = GradedOperator::from_full(&l, &m);
        assert_eq!(op.blocks().count(), 2);
        assert_eq!(op.to_full(&l), m);
        let sq = op.compose(&op);
        assert!(sq.is_zero());
        assert_eq!(
            GradedOperator::identity(&l).compose(&op).to_full(&l),
            m
        );
    }

    #[test]
    fn discrepancy_reports_column() {
        let l = layout_n1();
        let a = GradedOperator::identity(&l);
        let mut b = a.clone();
        b.insert(Bidegree::new(0, 1), Bidegree::new(0, 1), ExactMatrix::zeros(1, 1));
        let d = a.first_discrepancy(&b, &l).unwrap();
        assert_eq!(d.source, Bidegree::new(0, 1));
        assert_eq!(d.column, 0);
        assert!(a.first_discrepancy(&a.clone(), &l).is_none());
    }
}
