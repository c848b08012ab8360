use crate::exactla::{ExactMatrix, Rational};
use crate::exterior::{conjugation, restrict, Grade, GradedBasis};

use super::modes::covector_operators;
use super::{ModeOperators, SpectralLine, TorusError};

/// Which per-mode operator to extend blockwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeOperator {
    D,
    DStar,
    P,
    PStar,
    Q,
    QStar,
    L,
    Lambda,
    H,
    Laplacian,
}

impl ModeOperator {
    fn pick(self, ops: &ModeOperators) -> &ExactMatrix {
        match self {
            ModeOperator::D => &ops.d,
            ModeOperator::DStar => &ops.d_star,
            ModeOperator::P => &ops.p,
            ModeOperator::PStar => &ops.p_star,
            ModeOperator::Q => &ops.q,
            ModeOperator::QStar => &ops.q_star,
            ModeOperator::L => &ops.l,
            ModeOperator::Lambda => &ops.lambda,
            ModeOperator::H => &ops.h,
            ModeOperator::Laplacian => &ops.laplacian,
        }
    }
}

/// The model of `E^k_λ` or `E^{(p,q)}_λ` for one spectral line: one block
/// per Fourier mode, each a copy of the corresponding piece of the
/// exterior algebra.
#[derive(Clone, Debug)]
pub struct AssembledEigenspace {
    pub mu: Rational,
    pub grade: Grade,
    basis: GradedBasis,
    modes: Vec<ModeOperators>,
    partners: Vec<usize>,
}

pub fn assemble_eigenspace(line: &SpectralLine, grade: Grade) -> Result<AssembledEigenspace, TorusError> {
    let basis = GradedBasis::new(line.n);
    let modes = line
        .modes
        .iter()
        .map(|v| covector_operators(&basis, &v.covector))
        .collect::<Result<_, _>>()?;
    Ok(AssembledEigenspace {
        mu: line.mu.clone(),
        grade,
        basis,
        modes,
        partners: line.partners.clone(),
    })
}

impl AssembledEigenspace {
    fn grade_dim(&self, g: Grade) -> usize {
        let l = self.basis.layout();
        match g {
            Grade::All => self.basis.dim(),
            Grade::Degree(k) => l.degree_dim(k),
            Grade::Bidegree(b) => l.dim(b),
        }
    }

    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    pub fn block_dim(&self) -> usize {
        self.grade_dim(self.grade)
    }

    pub fn dim(&self) -> usize {
        self.mode_count() * self.block_dim()
    }

    /// The grade the conjugation map lands in.
    pub fn conjugate_grade(&self) -> Grade {
        match self.grade {
            Grade::Bidegree(b) => Grade::Bidegree(b.swapped()),
            g => g,
        }
    }

    /// Block-diagonal extension of `op` restricted to `self.grade → to`.
    pub fn operator(&self, op: ModeOperator, to: Grade) -> ExactMatrix {
        let (rows, cols) = (self.grade_dim(to), self.block_dim());
        let mut out = ExactMatrix::zeros(rows * self.mode_count(), cols * self.mode_count());
        for (i, ops) in self.modes.iter().enumerate() {
            let block = restrict(&self.basis, op.pick(ops), self.grade, to);
            out.set_submatrix(i * rows, i * cols, &block);
        }
        out
    }

    /// Normalized Laplacian on the space itself.
    pub fn laplacian(&self) -> ExactMatrix {
        self.operator(ModeOperator::Laplacian, self.grade)
    }

    /// Matrix part of conjugation: block `i` goes to block `partner(i)`.
    pub fn conjugation(&self) -> ExactMatrix {
        let m = restrict(&self.basis, &conjugation(&self.basis), self.grade, self.conjugate_grade());
        let (rows, cols) = m.shape();
        let mut out = ExactMatrix::zeros(rows * self.mode_count(), cols * self.mode_count());
        for (i, &j) in self.partners.iter().enumerate() {
            out.set_submatrix(j * rows, i * cols, &m);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{kernel_basis, GaussianRational};
    use crate::graded::Bidegree;
    use crate::torus::TorusSpec;

    fn line(t: &TorusSpec, mu: i64) -> SpectralLine {
        t.enumerate_modes(&Rational::from_integer(mu))
            .unwrap()
            .into_iter()
            .find(|l| l.mu == Rational::from_integer(mu))
            .unwrap()
    }

    fn nullity_at(e: &AssembledEigenspace) -> usize {
        let shifted = &e.laplacian() - &ExactMatrix::scalar(e.dim(), &GaussianRational::from(e.mu.clone()));
        kernel_basis(&shifted).len()
    }

    #[test]
    fn z2_unit_line_dims() {
        let l = line(&TorusSpec::standard(1), 1);
        for (k, expected) in [(0, 4), (1, 8), (2, 4)] {
            let e = assemble_eigenspace(&l, Grade::Degree(k)).unwrap();
            assert_eq!(e.dim(), expected);
            assert_eq!(nullity_at(&e), expected);
        }
    }

    #[test]
    fn harmonic_line_gives_betti_numbers() {
        let t = TorusSpec::diagonal(2, &[Rational::new(1, 2), Rational::ONE, Rational::new(3, 1), Rational::ONE]).unwrap();
        let l = line(&t, 0);
        for (k, b) in [1, 4, 6, 4, 1].into_iter().enumerate() {
            let e = assemble_eigenspace(&l, Grade::Degree(k)).unwrap();
            assert_eq!(e.dim(), b);
            assert!(e.laplacian().is_zero());
        }
    }

    #[test]
    fn z4_unit_line_diamond() {
        let l = line(&TorusSpec::standard(2), 1);
        assert_eq!(l.mode_count(), 8);
        for p in 0..=2 {
            for q in 0..=2 {
                let e = assemble_eigenspace(&l, Grade::Bidegree(Bidegree::new(p, q))).unwrap();
                assert_eq!(e.dim(), l.hodge(p, q));
                assert_eq!(nullity_at(&e), l.hodge(p, q));
            }
        }
    }

    #[test]
    fn conjugation_is_an_involution_onto_the_swapped_piece() {
        let l = line(&TorusSpec::standard(2), 2);
        let b = Bidegree::new(1, 0);
        let e = assemble_eigenspace(&l, Grade::Bidegree(b)).unwrap();
        let back = assemble_eigenspace(&l, Grade::Bidegree(b.swapped())).unwrap();
        let c = e.conjugation();
        assert_eq!(c.shape(), (back.dim(), e.dim()));
        // x ↦ C x̄ composed with y ↦ C' ȳ is x ↦ C' C̄ x.
        assert_eq!(&back.conjugation() * &c.conj(), ExactMatrix::identity(e.dim()));
    }
}
