use crate::exactla::{adjoint_wrt, ExactMatrix};
use crate::exterior::{
    counting_h, gram, lefschetz_l, lefschetz_lambda, wedge_matrix, Covector, ExteriorError, Grade, GradedBasis,
    WedgePart,
};

use super::{DualVector, TorusError, TorusSpec};

/// Normalized operators on the Fourier mode `e^{2πi⟨v,x⟩} ⊗ Λ^{*,*}`.
///
/// On this mode `d = 2πi·D`, `∂ = 2πi·P`, `∂̄ = 2πi·Q` and the Hodge
/// Laplacian is `4π²·laplacian`. All matrices act on the whole exterior
/// algebra in [`GradedBasis`] order.
#[derive(Clone, Debug)]
pub struct ModeOperators {
    pub d: ExactMatrix,
    pub d_star: ExactMatrix,
    pub p: ExactMatrix,
    pub p_star: ExactMatrix,
    pub q: ExactMatrix,
    pub q_star: ExactMatrix,
    pub l: ExactMatrix,
    pub lambda: ExactMatrix,
    pub h: ExactMatrix,
    /// `D·D* + D*·D`, which equals `‖v‖²·I`.
    pub laplacian: ExactMatrix,
}

pub fn mode_operators(torus: &TorusSpec, v: &DualVector) -> Result<ModeOperators, TorusError> {
    if !torus.contains_dual(v) {
        return Err(TorusError::NotInDualLattice(v.coeffs.clone()));
    }
    Ok(covector_operators(&GradedBasis::new(torus.n()), &v.covector)?)
}

/// Operators for an already validated covector.
pub(crate) fn covector_operators(basis: &GradedBasis, theta: &Covector) -> Result<ModeOperators, ExteriorError> {
    let g = gram(basis, Grade::All);
    let wedge = |part| wedge_matrix(basis, theta, part);
    let adj = |m: &ExactMatrix| adjoint_wrt(m, &g, &g);
    let d = wedge(WedgePart::Full)?;
    let p = wedge(WedgePart::Holo)?;
    let q = wedge(WedgePart::Antiholo)?;
    let (d_star, p_star, q_star) = (adj(&d)?, adj(&p)?, adj(&q)?);
    let laplacian = &(&d * &d_star) + &(&d_star * &d);
    Ok(ModeOperators {
        d,
        d_star,
        p,
        p_star,
        q,
        q_star,
        l: lefschetz_l(basis),
        lambda: lefschetz_lambda(basis),
        h: counting_h(basis),
        laplacian,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{kernel_basis, GaussianRational, Rational};
    use crate::exterior::restrict;
    use crate::graded::Bidegree;

    fn two() -> GaussianRational {
        GaussianRational::from_integer(2)
    }

    #[test]
    fn zero_mode_is_harmonic() {
        let t = TorusSpec::standard(1);
        let ops = mode_operators(&t, &t.dual_vector(vec![0, 0])).unwrap();
        assert!(ops.d.is_zero() && ops.p.is_zero() && ops.q.is_zero());
        assert!(ops.laplacian.is_zero());
    }

    #[test]
    fn unit_mode_n1() {
        let t = TorusSpec::standard(1);
        let ops = mode_operators(&t, &t.dual_vector(vec![1, 0])).unwrap();
        assert_eq!(ops.laplacian, ExactMatrix::identity(4));
        // P sends 1 to (1/2) dz
        assert_eq!(ops.p[(1, 0)], GaussianRational::from(Rational::new(1, 2)));
        let basis = GradedBasis::new(1);
        let q00 = restrict(&basis, &ops.q, Grade::Bidegree(Bidegree::new(0, 0)), Grade::All);
        assert!(kernel_basis(&q00).is_empty());
    }

    #[test]
    fn kahler_identities_per_mode() {
        let t = TorusSpec::diagonal(2, &[Rational::new(1, 2), Rational::ONE, Rational::new(3, 1), Rational::new(2, 3)]).unwrap();
        for coeffs in [vec![1, 0, -1, 2], vec![0, 3, 1, 1], vec![-2, 1, 0, 0]] {
            let v = t.dual_vector(coeffs);
            let o = mode_operators(&t, &v).unwrap();
            let dim = o.d.rows();
            assert_eq!(o.laplacian, ExactMatrix::scalar(dim, &v.norm_sq.clone().into()));
            let lap_p = (&(&o.p * &o.p_star) + &(&o.p_star * &o.p)).scale(&two());
            let lap_q = (&(&o.q * &o.q_star) + &(&o.q_star * &o.q)).scale(&two());
            assert_eq!(lap_p, o.laplacian);
            assert_eq!(lap_q, o.laplacian);
            for x in [&o.l, &o.lambda, &o.h] {
                assert!((&(&o.laplacian * x) - &(x * &o.laplacian)).is_zero());
            }
        }
    }

    #[test]
    fn foreign_vector_rejected() {
        let t = TorusSpec::standard(1);
        let other = TorusSpec::diagonal(1, &[Rational::new(2, 1), Rational::ONE]).unwrap();
        let v = other.dual_vector(vec![1, 0]);
        assert!(matches!(mode_operators(&t, &v), Err(TorusError::NotInDualLattice(_))));
    }
}
