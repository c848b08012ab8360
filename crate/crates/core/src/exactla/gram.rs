use super::{ExactMatrix, GaussianRational, LinalgError, Rational};

/// Rational `L·diag(D)·L^H` factorization of a Hermitian matrix.
///
/// `L` is unit lower triangular. Fails with `NotHermitian` if `g` is not
/// conjugate-symmetric and with `NotPositiveDefinite` at the first pivot `<= 0`.
pub fn ldlt(g: &ExactMatrix) -> Result<(ExactMatrix, Vec<Rational>), LinalgError> {
    if !g.is_square() {
        return Err(LinalgError::NotSquare { shape: g.shape() });
    }
    let n = g.rows();
    for i in 0..n {
        for j in 0..=i {
            if g[(i, j)] != g[(j, i)].conj() {
                return Err(LinalgError::NotHermitian { row: i, col: j });
            }
        }
    }
    let mut l = ExactMatrix::identity(n);
    let mut d: Vec<Rational> = Vec::with_capacity(n);
    for j in 0..n {
        let mut dj = g[(j, j)].re.clone();
        for k in 0..j {
            let ljk = &l[(j, k)];
            if !ljk.is_zero() {
                dj -= &(&ljk.norm_sq() * &d[k]);
            }
        }
        if !dj.is_positive() {
            return Err(LinalgError::NotPositiveDefinite { index: j, pivot: dj });
        }
        for i in j + 1..n {
            let mut acc = g[(i, j)].clone();
            for k in 0..j {
                let (lik, ljk) = (&l[(i, k)], &l[(j, k)]);
                if lik.is_zero() || ljk.is_zero() {
                    continue;
                }
                acc -= &(lik * &ljk.conj()).scale(&d[k]);
            }
            if !acc.is_zero() {
                l[(i, j)] = acc.scale(&dj.recip());
            }
        }
        d.push(dj);
    }
    Ok((l, d))
}

/// A Hermitian positive definite Gram matrix, certified by [`ldlt`] at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianGram {
    matrix: ExactMatrix,
    lower: ExactMatrix,
    pivots: Vec<Rational>,
}

impl HermitianGram {
    pub fn new(matrix: ExactMatrix) -> Result<Self, LinalgError> {
        let (lower, pivots) = ldlt(&matrix)?;
        Ok(HermitianGram { matrix, lower, pivots })
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(vec![Rational::ONE; dim]).expect("identity is positive definite")
    }

    pub fn diagonal(entries: Vec<Rational>) -> Result<Self, LinalgError> {
        Self::new(ExactMatrix::diagonal(entries.into_iter().map(GaussianRational::real)))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.matrix
    }

    pub fn pivots(&self) -> &[Rational] {
        &self.pivots
    }

    pub fn lower(&self) -> &ExactMatrix {
        &self.lower
    }

    pub fn is_diagonal(&self) -> bool {
        self.matrix.is_diagonal()
    }

    /// `⟨x, y⟩ = y^H · G · x`, linear in the first slot.
    pub fn inner(&self, x: &[GaussianRational], y: &[GaussianRational]) -> GaussianRational {
        let gx = self.matrix.mul_vec(x);
        y.iter().zip(&gx).map(|(a, b)| &a.conj() * b).sum()
    }

    /// Solves `G·X = rhs` by forward/back substitution through the factorization.
    pub fn solve(&self, rhs: &ExactMatrix) -> Result<ExactMatrix, LinalgError> {
        let n = self.dim();
        if rhs.rows() != n {
            return Err(LinalgError::DimensionMismatch {
                op: "solve",
                left: self.matrix.shape(),
                right: rhs.shape(),
            });
        }
        if self.is_diagonal() {
            let mut x = rhs.clone();
            for i in 0..n {
                let inv = self.pivots[i].recip();
                for j in 0..rhs.cols() {
                    if !x[(i, j)].is_zero() {
                        x[(i, j)] = x[(i, j)].scale(&inv);
                    }
                }
            }
            return Ok(x);
        }
        let mut x = rhs.clone();
        for j in 0..rhs.cols() {
            // L y = b
            for i in 0..n {
                for k in 0..i {
                    let lik = &self.lower[(i, k)];
                    if !lik.is_zero() && !x[(k, j)].is_zero() {
                        let t = lik * &x[(k, j)];
                        x[(i, j)] -= &t;
                    }
                }
            }
            for i in 0..n {
                x[(i, j)] = x[(i, j)].scale(&self.pivots[i].recip());
            }
            // L^H x = z
            for i in (0..n).rev() {
                for k in i + 1..n {
                    let lki = &self.lower[(k, i)];
                    if !lki.is_zero() && !x[(k, j)].is_zero() {
                        let t = &lki.conj() * &x[(k, j)];
                        x[(i, j)] -= &t;
                    }
                }
            }
        }
        Ok(x)
    }
}

/// The metric adjoint of `m : domain → codomain`: `A = G_dom⁻¹ · m^H · G_cod`,
/// so that `⟨m x, y⟩_cod = ⟨x, A y⟩_dom`.
pub fn adjoint_wrt(
    m: &ExactMatrix,
    g_domain: &HermitianGram,
    g_codomain: &HermitianGram,
) -> Result<ExactMatrix, LinalgError> {
    if m.cols() != g_domain.dim() || m.rows() != g_codomain.dim() {
        return Err(LinalgError::DimensionMismatch {
            op: "adjoint_wrt",
            left: m.shape(),
            right: (g_codomain.dim(), g_domain.dim()),
        });
    }
    let mh_g = m.conj_transpose().checked_mul(g_codomain.matrix())?;
    g_domain.solve(&mh_g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn ldlt_identity() {
        let (l, d) = ldlt(&ExactMatrix::identity(2)).unwrap();
        assert_eq!(l, ExactMatrix::identity(2));
        assert_eq!(d, vec![Rational::ONE, Rational::ONE]);
    }

    #[test]
    fn ldlt_two_one_one_two() {
        let g = ExactMatrix::from_i64(&[&[2, 1], &[1, 2]]);
        let (l, d) = ldlt(&g).unwrap();
        let expected_l = ExactMatrix::from_rows(vec![
            vec![GaussianRational::ONE, GaussianRational::ZERO],
            vec![q(1, 2).into(), GaussianRational::ONE],
        ])
        .unwrap();
        assert_eq!(l, expected_l);
        assert_eq!(d, vec![q(2, 1), q(3, 2)]);
        let dm = ExactMatrix::diagonal(d.into_iter().map(GaussianRational::real));
        assert_eq!(&(&l * &dm) * &l.conj_transpose(), g);
    }

    #[test]
    fn ldlt_rejects_indefinite() {
        let g = ExactMatrix::from_i64(&[&[1, 2], &[2, 1]]);
        match ldlt(&g) {
            Err(LinalgError::NotPositiveDefinite { index, pivot }) => {
                assert_eq!(index, 1);
                assert_eq!(pivot, q(-3, 1));
            }
            other => panic!("expected NotPositiveDefinite, got {other:?}"),
        }
    }

    #[test]
    fn ldlt_rejects_non_hermitian() {
        let g = ExactMatrix::from_i64(&[&[1, 2], &[3, 1]]);
        assert!(matches!(ldlt(&g), Err(LinalgError::NotHermitian { .. })));
        let mut h = ExactMatrix::identity(2);
        h[(0, 1)] = GaussianRational::i();
        h[(1, 0)] = GaussianRational::i();
        assert!(matches!(ldlt(&h), Err(LinalgError::NotHermitian { .. })));
        h[(1, 0)] = -GaussianRational::i();
        h[(0, 0)] = GaussianRational::from_integer(2);
        assert!(ldlt(&h).is_ok());
    }

    #[test]
    fn adjoint_examples() {
        let id = HermitianGram::identity(1);
        assert_eq!(adjoint_wrt(&ExactMatrix::identity(1), &id, &id).unwrap(), ExactMatrix::identity(1));

        let m = ExactMatrix::from_rows(vec![
            vec![GaussianRational::i(), GaussianRational::from_integer(2)],
            vec![GaussianRational::ZERO, q(1, 3).into()],
            vec![GaussianRational::ONE, GaussianRational::ONE],
        ])
        .unwrap();
        let a = adjoint_wrt(&m, &HermitianGram::identity(2), &HermitianGram::identity(3)).unwrap();
        assert_eq!(a, m.conj_transpose());

        let g2 = HermitianGram::diagonal(vec![q(2, 1)]).unwrap();
        let a = adjoint_wrt(&ExactMatrix::identity(1), &g2, &id).unwrap();
        assert_eq!(a[(0, 0)], q(1, 2).into());
    }

    #[test]
    fn dense_gram_solve() {
        let mut g = ExactMatrix::from_i64(&[&[4, 1, 0], &[1, 3, 1], &[0, 1, 2]]);
        g[(0, 2)] = GaussianRational::i();
        g[(2, 0)] = -GaussianRational::i();
        let gram = HermitianGram::new(g.clone()).unwrap();
        let rhs = ExactMatrix::from_i64(&[&[1, 0], &[2, 1], &[3, -1]]);
        let x = gram.solve(&rhs).unwrap();
        assert_eq!(&g * &x, rhs);
    }
}
