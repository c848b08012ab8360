//! The complexified exterior algebra of C^n with its flat Kähler structure.
//!
//! Basis forms are `dz_S ∧ dz̄_T` with `S`, `T` ascending subsets of
//! `{0..n-1}` and every `dz` written before every `dz̄`. Global order is
//! by degree, then by decreasing holomorphic degree `p`, then
//! lexicographically on `(S, T)`; this order is part of the public contract
//! since matrices are exchanged in it.
//!
//! Metric: `⟨dz_j, dz_k⟩ = 2δ_jk`, so `|dz_S ∧ dz̄_T|² = 2^{p+q}`, and the
//! Kähler form is `ω = (i/2) Σ dz_j ∧ dz̄_j` (which is `Σ dx_j ∧ dy_j`).

use std::fmt;

use thiserror::Error;

use crate::exactla::{adjoint_wrt, ExactMatrix, GaussianRational, HermitianGram, LinalgError, Rational};
use crate::graded::{Bidegree, GradedOperator, Layout};

/// Largest complex dimension the bitmask indexing supports.
pub const MAX_DIM: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExteriorError {
    #[error("covector has {got} coefficients but the basis has n = {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("convention self-test failed for n = {n}: {identity}")]
    Convention { n: usize, identity: &'static str },
}

/// `dz_S ∧ dz̄_T`, with subsets stored as bitmasks.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FormBasisIndex {
    pub holo: u16,
    pub anti: u16,
}

impl FormBasisIndex {
    pub fn bidegree(self) -> Bidegree {
        Bidegree::new(self.holo.count_ones() as usize, self.anti.count_ones() as usize)
    }

    pub fn holo_indices(self) -> Vec<usize> {
        bits(self.holo)
    }

    pub fn anti_indices(self) -> Vec<usize> {
        bits(self.anti)
    }
}

fn bits(mask: u16) -> Vec<usize> {
    (0..16).filter(|&j| mask & (1 << j) != 0).collect()
}

impl fmt::Debug for FormBasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.holo_indices().iter().map(|j| format!("dz{}", j + 1)).collect();
        parts.extend(self.anti_indices().iter().map(|j| format!("dzbar{}", j + 1)));
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("^"))
        }
    }
}

/// Ascending `k`-subsets of `{0..n-1}` in lexicographic order, as bitmasks.
fn subsets(n: usize, k: usize) -> Vec<u16> {
    fn rec(start: usize, n: usize, k: usize, acc: u16, out: &mut Vec<u16>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for j in start..n {
            if n - j < k {
                break;
            }
            rec(j + 1, n, k - 1, acc | (1 << j), out);
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, 0, &mut out);
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// The basis of Λ^{*,*}(C^n) with its bigrading and flattening maps.
#[derive(Clone, Debug)]
pub struct GradedBasis {
    n: usize,
    layout: Layout,
    forms: Vec<FormBasisIndex>,
    /// `(holo << n) | anti` → global index.
    lookup: Vec<usize>,
}

impl GradedBasis {
    pub fn new(n: usize) -> Self {
        assert!(n <= MAX_DIM, "complex dimension {n} exceeds {MAX_DIM}");
        let dims = (0..=n)
            .map(|p| (0..=n).map(|q| binomial(n, p) * binomial(n, q)).collect())
            .collect();
        let layout = Layout::new(n, dims);
        let mut forms = Vec::with_capacity(1 << (2 * n));
        for b in layout.bidegrees() {
            for &s in &subsets(n, b.p) {
                for &t in &subsets(n, b.q) {
                    forms.push(FormBasisIndex { holo: s, anti: t });
                }
            }
        }
        let mut lookup = vec![usize::MAX; 1 << (2 * n)];
        for (i, f) in forms.iter().enumerate() {
            lookup[((f.holo as usize) << n) | f.anti as usize] = i;
        }
        GradedBasis { n, layout, forms, lookup }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[FormBasisIndex] {
        &self.forms
    }

    pub fn index_of(&self, f: FormBasisIndex) -> usize {
        self.lookup[((f.holo as usize) << self.n) | f.anti as usize]
    }

    /// Forms of bidegree `b`, in basis order.
    pub fn forms_of(&self, b: Bidegree) -> &[FormBasisIndex] {
        let off = self.layout.offset(b);
        &self.forms[off..off + self.layout.dim(b)]
    }

    /// `(bidegree, index within that bidegree)` of a global index.
    pub fn local_index(&self, global: usize) -> (Bidegree, usize) {
        let b = self.forms[global].bidegree();
        (b, global - self.layout.offset(b))
    }

    /// Global index of position `local` inside piece `b`.
    pub fn global_index(&self, b: Bidegree, local: usize) -> usize {
        self.layout.offset(b) + local
    }

    pub fn matrix_from_action(&self, action: impl Fn(FormBasisIndex) -> Vec<(FormBasisIndex, GaussianRational)>) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(self.dim(), self.dim());
        for (j, &f) in self.forms.iter().enumerate() {
            for (g, c) in action(f) {
                if !c.is_zero() {
                    let i = self.index_of(g);
                    m[(i, j)] = &m[(i, j)] + &c;
                }
            }
        }
        m
    }
}

/// `dz_j ∧ dz_S ∧ dz̄_T`.
fn wedge_dz(j: usize, f: FormBasisIndex) -> Option<(FormBasisIndex, i64)> {
    let bit = 1u16 << j;
    if f.holo & bit != 0 {
        return None;
    }
    let before = (f.holo & (bit - 1)).count_ones();
    let sign = if before % 2 == 0 { 1 } else { -1 };
    Some((FormBasisIndex { holo: f.holo | bit, anti: f.anti }, sign))
}

/// `dz̄_j ∧ dz_S ∧ dz̄_T`; crossing the `dz` block costs `(-1)^p`.
fn wedge_dzbar(j: usize, f: FormBasisIndex) -> Option<(FormBasisIndex, i64)> {
    let bit = 1u16 << j;
    if f.anti & bit != 0 {
        return None;
    }
    let crossings = f.holo.count_ones() + (f.anti & (bit - 1)).count_ones();
    let sign = if crossings % 2 == 0 { 1 } else { -1 };
    Some((FormBasisIndex { holo: f.holo, anti: f.anti | bit }, sign))
}

/// A real covector `θ = Σ (w̄_j/2) dz_j + (w_j/2) dz̄_j`.
///
/// For real coordinates `(a_j, b_j)` (paired with `x_j`, `y_j`) the encoding
/// is `w_j = a_j + i b_j`, so `θ = Σ a_j dx_j + b_j dy_j` and `|θ|² = Σ |w_j|²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Covector {
    pub w: Vec<GaussianRational>,
}

impl Covector {
    pub fn new(w: Vec<GaussianRational>) -> Self {
        Covector { w }
    }

    /// From real coordinates `(a_1, b_1, …, a_n, b_n)`.
    pub fn from_real(coords: &[Rational]) -> Self {
        assert!(coords.len() % 2 == 0, "real coordinates come in (x, y) pairs");
        Covector {
            w: coords
                .chunks(2)
                .map(|c| GaussianRational::new(c[0].clone(), c[1].clone()))
                .collect(),
        }
    }

    pub fn zero(n: usize) -> Self {
        Covector { w: vec![GaussianRational::ZERO; n] }
    }

    pub fn n(&self) -> usize {
        self.w.len()
    }

    pub fn norm_sq(&self) -> Rational {
        self.w.iter().map(GaussianRational::norm_sq).sum()
    }

    pub fn negated(&self) -> Covector {
        Covector { w: self.w.iter().map(|x| -x).collect() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WedgePart {
    /// `θ` itself.
    Full,
    /// `θ^{1,0} = Σ (w̄_j/2) dz_j`.
    Holo,
    /// `θ^{0,1} = Σ (w_j/2) dz̄_j`.
    Antiholo,
}

/// Matrix of `α ↦ θ^{part} ∧ α` on the whole algebra.
pub fn wedge_matrix(basis: &GradedBasis, theta: &Covector, part: WedgePart) -> Result<ExactMatrix, ExteriorError> {
    if theta.n() != basis.n() {
        return Err(ExteriorError::DimensionMismatch { expected: basis.n(), got: theta.n() });
    }
    let half = Rational::new(1, 2);
    let holo: Vec<_> = theta.w.iter().map(|w| w.conj().scale(&half)).collect();
    let anti: Vec<_> = theta.w.iter().map(|w| w.scale(&half)).collect();
    let with_holo = part != WedgePart::Antiholo;
    let with_anti = part != WedgePart::Holo;
    Ok(basis.matrix_from_action(|f| {
        let mut out = Vec::new();
        for j in 0..basis.n() {
            if with_holo && !holo[j].is_zero() {
                if let Some((g, s)) = wedge_dz(j, f) {
                    out.push((g, holo[j].scale(&Rational::from_integer(s))));
                }
            }
            if with_anti && !anti[j].is_zero() {
                if let Some((g, s)) = wedge_dzbar(j, f) {
                    out.push((g, anti[j].scale(&Rational::from_integer(s))));
                }
            }
        }
        out
    }))
}

/// Which part of the algebra a Gram or operator is restricted to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grade {
    All,
    Degree(usize),
    Bidegree(Bidegree),
}

fn form_norm_sq(f: FormBasisIndex) -> Rational {
    Rational::from_integer(1 << f.bidegree().degree())
}

/// Gram matrix of the basis forms of the given grade: diagonal, `2^{p+q}`.
pub fn gram(basis: &GradedBasis, grade: Grade) -> HermitianGram {
    let forms: Vec<FormBasisIndex> = match grade {
        Grade::All => basis.forms().to_vec(),
        Grade::Degree(k) => basis
            .forms()
            .iter()
            .copied()
            .filter(|f| f.bidegree().degree() == k)
            .collect(),
        Grade::Bidegree(b) => basis.forms_of(b).to_vec(),
    };
    HermitianGram::diagonal(forms.into_iter().map(form_norm_sq).collect()).expect("powers of two are positive")
}

/// Matrix of `L = ω ∧ −` with `ω = (i/2) Σ dz_j ∧ dz̄_j`.
pub fn lefschetz_l(basis: &GradedBasis) -> ExactMatrix {
    let half_i = GaussianRational::new(Rational::ZERO, Rational::new(1, 2));
    basis.matrix_from_action(|f| {
        (0..basis.n())
            .filter_map(|j| {
                let (g, s1) = wedge_dzbar(j, f)?;
                let (h, s2) = wedge_dz(j, g)?;
                Some((h, half_i.scale(&Rational::from_integer(s1 * s2))))
            })
            .collect()
    })
}

/// Metric adjoint `Λ` of [`lefschetz_l`].
pub fn lefschetz_lambda(basis: &GradedBasis) -> ExactMatrix {
    let g = gram(basis, Grade::All);
    adjoint_wrt(&lefschetz_l(basis), &g, &g).expect("full Gram conforms")
}

/// `H = Σ (n − k) π^k`.
pub fn counting_h(basis: &GradedBasis) -> ExactMatrix {
    let n = basis.n() as i64;
    ExactMatrix::diagonal(
        basis
            .forms()
            .iter()
            .map(|f| GaussianRational::from_integer(n - f.bidegree().degree() as i64)),
    )
}

/// Matrix part `M` of form conjugation `α ↦ M·ᾱ`:
/// `conj(dz_S ∧ dz̄_T) = (−1)^{pq} dz_T ∧ dz̄_S`.
pub fn conjugation(basis: &GradedBasis) -> ExactMatrix {
    basis.matrix_from_action(|f| {
        let b = f.bidegree();
        let sign = if (b.p * b.q) % 2 == 0 { 1 } else { -1 };
        vec![(FormBasisIndex { holo: f.anti, anti: f.holo }, GaussianRational::from_integer(sign))]
    })
}

/// Restriction of a whole-algebra matrix to `grade → grade'` coordinates.
pub fn restrict(basis: &GradedBasis, m: &ExactMatrix, from: Grade, to: Grade) -> ExactMatrix {
    let range = |g: Grade| -> std::ops::Range<usize> {
        let l = basis.layout();
        match g {
            Grade::All => 0..basis.dim(),
            Grade::Degree(k) => {
                let o = l.degree_offset(k);
                o..o + l.degree_dim(k)
            }
            Grade::Bidegree(b) => {
                let o = l.offset(b);
                o..o + l.dim(b)
            }
        }
    };
    m.submatrix(range(to), range(from))
}

/// Checks the sl2 relations `[Λ,L] = H`, `[H,L] = −2L`, `[H,Λ] = 2Λ` under the
/// fixed metric normalization.
pub fn verify_conventions(n: usize) -> Result<(), ExteriorError> {
    let basis = GradedBasis::new(n);
    let l = lefschetz_l(&basis);
    let lambda = lefschetz_lambda(&basis);
    let h = counting_h(&basis);
    let comm = |a: &ExactMatrix, b: &ExactMatrix| &(a * b) - &(b * a);
    let two = GaussianRational::from_integer(2);
    if comm(&lambda, &l) != h {
        return Err(ExteriorError::Convention { n, identity: "[Λ,L] = H" });
    }
    if comm(&h, &l) != l.scale(&-two.clone()) {
        return Err(ExteriorError::Convention { n, identity: "[H,L] = -2L" });
    }
    if comm(&h, &lambda) != lambda.scale(&two) {
        return Err(ExteriorError::Convention { n, identity: "[H,Λ] = 2Λ" });
    }
    Ok(())
}

/// Splits a whole-algebra matrix into bidegree blocks.
pub fn graded(basis: &GradedBasis, m: &ExactMatrix) -> GradedOperator {
    GradedOperator::from_full(basis.layout(), m)
}
