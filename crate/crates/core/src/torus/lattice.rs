use std::collections::{BTreeMap, HashMap};

use num_traits::ToPrimitive;

use crate::exactla::{inverse, ldlt, ExactMatrix, GaussianRational, LinalgError, Rational};
use crate::exterior::{binomial, Covector};

use super::TorusError;

/// A flat torus `C^n / L` with `L` spanned by the columns of a rational
/// `2n × 2n` matrix in real coordinates `(x_1, y_1, …, x_n, y_n)`,
/// `z_j = x_j + i·y_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusSpec {
    n: usize,
    basis: Vec<Vec<Rational>>,
    dual: Vec<Vec<Rational>>,
    /// Unit lower factor and pivots of the dual Gram matrix.
    dual_lower: Vec<Vec<Rational>>,
    dual_pivots: Vec<Rational>,
}

fn to_exact(rows: &[Vec<Rational>]) -> ExactMatrix {
    ExactMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().cloned().map(GaussianRational::real).collect())
            .collect(),
    )
    .expect("square rows")
}

fn real_rows(m: &ExactMatrix) -> Vec<Vec<Rational>> {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|z| z.re).collect())
        .collect()
}

impl TorusSpec {
    /// `basis` is given row-wise; its columns are the lattice generators.
    pub fn new(n: usize, basis: Vec<Vec<Rational>>) -> Result<Self, TorusError> {
        let m = 2 * n;
        if n == 0 || basis.len() != m || basis.iter().any(|r| r.len() != m) {
            return Err(TorusError::BadShape { n, rows: basis.len() });
        }
        let b = to_exact(&basis);
        let inv = inverse(&b).ok_or(TorusError::SingularBasis)?;
        let dual = inv.transpose();
        // Gram of L is certified positive definite; for an invertible real
        // basis this cannot fail, but a failure means degenerate input.
        ldlt(&(&b.transpose() * &b)).map_err(|e| match e {
            LinalgError::NotPositiveDefinite { .. } => TorusError::SingularBasis,
            other => TorusError::Linalg(other),
        })?;
        let dual_gram = &dual.transpose() * &dual;
        let (lower, pivots) = ldlt(&dual_gram).map_err(|_| TorusError::SingularBasis)?;
        Ok(TorusSpec {
            n,
            basis,
            dual: real_rows(&dual),
            dual_lower: real_rows(&lower),
            dual_pivots: pivots,
        })
    }

    /// The standard lattice `Z^{2n}`.
    pub fn standard(n: usize) -> Self {
        Self::diagonal(n, &vec![Rational::ONE; 2 * n]).expect("identity basis")
    }

    pub fn diagonal(n: usize, entries: &[Rational]) -> Result<Self, TorusError> {
        let m = 2 * n;
        if entries.len() != m {
            return Err(TorusError::BadShape { n, rows: entries.len() });
        }
        let basis = (0..m)
            .map(|i| (0..m).map(|j| if i == j { entries[i].clone() } else { Rational::ZERO }).collect())
            .collect();
        Self::new(n, basis)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    /// `basis⁻ᵀ`; its columns generate the dual lattice.
    pub fn dual_basis(&self) -> &[Vec<Rational>] {
        &self.dual
    }

    /// The dual vector with the given integer coordinates in the dual basis.
    pub fn dual_vector(&self, coeffs: Vec<i64>) -> DualVector {
        let m = 2 * self.n;
        assert_eq!(coeffs.len(), m);
        let real_coords: Vec<Rational> = (0..m)
            .map(|i| {
                self.dual[i]
                    .iter()
                    .zip(&coeffs)
                    .filter(|(_, &c)| c != 0)
                    .map(|(d, &c)| d * &Rational::from_integer(c))
                    .sum()
            })
            .collect();
        let norm_sq = real_coords.iter().map(|x| x * x).sum();
        let covector = Covector::from_real(&real_coords);
        DualVector { coeffs, real_coords, covector, norm_sq }
    }

    /// True when `⟨v, ℓ_j⟩` equals the stored integer coefficient for every
    /// generator `ℓ_j` and the derived fields are consistent.
    pub fn contains_dual(&self, v: &DualVector) -> bool {
        let m = 2 * self.n;
        if v.real_coords.len() != m || v.coeffs.len() != m {
            return false;
        }
        let pairings_match = (0..m).all(|j| {
            let pairing: Rational = (0..m).map(|i| &self.basis[i][j] * &v.real_coords[i]).sum();
            pairing == Rational::from_integer(v.coeffs[j])
        });
        pairings_match && *v == self.dual_vector(v.coeffs.clone())
    }

    /// All dual vectors with `‖v‖² ≤ mu_max`, grouped into lines of equal norm.
    ///
    /// Fincke–Pohst enumeration over the exact `LDLᵀ` of the dual Gram matrix:
    /// `Q(c) = Σ_i D_i (c_i + Σ_{j>i} L_ji c_j)²`, fixing coordinates from the
    /// last one down and keeping the remaining budget exact.
    pub fn enumerate_modes(&self, mu_max: &Rational) -> Result<Vec<SpectralLine>, TorusError> {
        if mu_max.is_negative() {
            return Err(TorusError::NegativeBound(mu_max.clone()));
        }
        let m = 2 * self.n;
        let mut found: Vec<Vec<i64>> = Vec::new();
        let mut coeffs = vec![0i64; m];
        self.search(m, mu_max.clone(), &mut coeffs, &mut found);

        let mut grouped: BTreeMap<Rational, Vec<DualVector>> = BTreeMap::new();
        for c in found {
            let v = self.dual_vector(c);
            grouped.entry(v.norm_sq.clone()).or_default().push(v);
        }
        Ok(grouped
            .into_iter()
            .map(|(mu, mut modes)| {
                modes.sort_by(|a, b| a.coeffs.cmp(&b.coeffs));
                SpectralLine::new(self.n, mu, modes)
            })
            .collect())
    }

    fn search(&self, level: usize, budget: Rational, coeffs: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if level == 0 {
            out.push(coeffs.clone());
            return;
        }
        let i = level - 1;
        let center: Rational = -(i + 1..coeffs.len())
            .filter(|&j| coeffs[j] != 0)
            .map(|j| &self.dual_lower[j][i] * &Rational::from_integer(coeffs[j]))
            .sum::<Rational>();
        let pivot = &self.dual_pivots[i];
        let cost = |x: i64| -> Rational {
            let off = &Rational::from_integer(x) - &center;
            &(&off * &off) * pivot
        };
        let start = center.floor().to_i64().expect("coefficient fits in i64");
        let mut x = start;
        loop {
            let c = cost(x);
            if c > budget {
                break;
            }
            coeffs[i] = x;
            self.search(i, &budget - &c, coeffs, out);
            x -= 1;
        }
        let mut x = start + 1;
        loop {
            let c = cost(x);
            if c > budget {
                break;
            }
            coeffs[i] = x;
            self.search(i, &budget - &c, coeffs, out);
            x += 1;
        }
        coeffs[i] = 0;
    }
}

/// A vector of the dual lattice `L*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualVector {
    /// Coordinates in the dual basis.
    pub coeffs: Vec<i64>,
    /// Coordinates in `R^{2n}`, `(a_1, b_1, …, a_n, b_n)`.
    pub real_coords: Vec<Rational>,
    /// The covector `θ_v = Σ a_j dx_j + b_j dy_j`, encoded by `w_j = a_j + i b_j`.
    pub covector: Covector,
    pub norm_sq: Rational,
}

impl DualVector {
    pub fn w(&self) -> &[GaussianRational] {
        &self.covector.w
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// All Fourier modes sharing the normalized eigenvalue `mu` (`λ = 4π²·mu`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralLine {
    pub n: usize,
    pub mu: Rational,
    pub modes: Vec<DualVector>,
    /// `partners[i]` is the index of `−modes[i]`.
    pub partners: Vec<usize>,
}

impl SpectralLine {
    fn new(n: usize, mu: Rational, modes: Vec<DualVector>) -> Self {
        let index: HashMap<&[i64], usize> = modes.iter().enumerate().map(|(i, v)| (&v.coeffs[..], i)).collect();
        let partners = modes
            .iter()
            .map(|v| {
                let neg: Vec<i64> = v.coeffs.iter().map(|c| -c).collect();
                index[&neg[..]]
            })
            .collect();
        SpectralLine { n, mu, modes, partners }
    }

    /// `N(mu)`.
    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    /// `b^k = N(mu)·C(2n, k)`.
    pub fn betti(&self, k: usize) -> usize {
        self.mode_count() * binomial(2 * self.n, k)
    }

    /// `h^{pq} = N(mu)·C(n, p)·C(n, q)`.
    pub fn hodge(&self, p: usize, q: usize) -> usize {
        self.mode_count() * binomial(self.n, p) * binomial(self.n, q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn dual_of_standard_is_standard() {
        for n in 1..=3 {
            let t = TorusSpec::standard(n);
            assert_eq!(to_exact(t.dual_basis()), ExactMatrix::identity(2 * n));
        }
    }

    #[test]
    fn dual_of_stretched() {
        let t = TorusSpec::diagonal(1, &[r(2, 1), r(1, 1)]).unwrap();
        assert_eq!(t.dual_basis(), &[vec![r(1, 2), r(0, 1)], vec![r(0, 1), r(1, 1)]]);
    }

    #[test]
    fn rejects_degenerate_bases() {
        let flat = vec![vec![r(1, 1), r(1, 2)], vec![r(0, 1), r(0, 1)]];
        assert_eq!(TorusSpec::new(1, flat), Err(TorusError::SingularBasis));
        let sheared = vec![vec![r(1, 1), r(1, 2)], vec![r(0, 1), r(7, 8)]];
        assert!(TorusSpec::new(1, sheared).is_ok());
        assert!(matches!(TorusSpec::new(1, vec![vec![r(1, 1)]]), Err(TorusError::BadShape { .. })));
    }

    #[test]
    fn z2_lines_up_to_five() {
        let lines = TorusSpec::standard(1).enumerate_modes(&r(5, 1)).unwrap();
        let summary: Vec<_> = lines.iter().map(|l| (l.mu.clone(), l.mode_count())).collect();
        assert_eq!(
            summary,
            vec![(r(0, 1), 1), (r(1, 1), 4), (r(2, 1), 4), (r(4, 1), 4), (r(5, 1), 8)]
        );
    }

    #[test]
    fn zero_bound_gives_harmonic_line_only() {
        let t = TorusSpec::diagonal(2, &[r(1, 3), r(2, 1), r(1, 1), r(5, 2)]).unwrap();
        let lines = t.enumerate_modes(&Rational::ZERO).unwrap();
        assert_eq!(lines.len(), 1);
        assert!(lines[0].mu.is_zero());
        assert_eq!(lines[0].mode_count(), 1);
        assert!(t.enumerate_modes(&r(-1, 2)).is_err());
    }

    #[test]
    fn partners_are_negatives() {
        let lines = TorusSpec::standard(2).enumerate_modes(&r(3, 1)).unwrap();
        for line in &lines {
            for (i, &j) in line.partners.iter().enumerate() {
                let neg: Vec<i64> = line.modes[i].coeffs.iter().map(|c| -c).collect();
                assert_eq!(line.modes[j].coeffs, neg);
                assert_eq!(line.partners[j], i);
            }
        }
    }

    #[test]
    fn dual_membership() {
        let t = TorusSpec::diagonal(1, &[r(2, 1), r(1, 1)]).unwrap();
        let v = t.dual_vector(vec![1, 0]);
        assert_eq!(v.real_coords, vec![r(1, 2), r(0, 1)]);
        assert!(t.contains_dual(&v));
        let mut fake = v.clone();
        fake.real_coords[0] = r(1, 3);
        assert!(!t.contains_dual(&fake));
    }
}
