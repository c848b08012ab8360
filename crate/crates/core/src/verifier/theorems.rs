use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::exactla::{column_basis, kernel_basis, rank, ExactMatrix, GaussianRational};
use crate::graded::{Bidegree, GradedOperator, Layout};

use super::{CheckId, EigenLine, KahlerPackage, LineBlock, PackageBlock, Verdict, VerifyError, Witness};

fn bd(p: usize, q: usize) -> Bidegree {
    Bidegree::new(p, q)
}

/// Block `s → t` of `op`, with the target read in `target` (the source
/// layout unless the map crosses to another block).
fn piece(op: &GradedOperator, source: &Layout, target: &Layout, s: Bidegree, t: Bidegree) -> ExactMatrix {
    op.block(s, t)
        .cloned()
        .unwrap_or_else(|| ExactMatrix::zeros(target.dim(t), source.dim(s)))
}

fn piece_basis(layout: &Layout, lb: &LineBlock, b: Bidegree) -> ExactMatrix {
    lb.pieces
        .get(&b)
        .cloned()
        .unwrap_or_else(|| ExactMatrix::zeros(layout.dim(b), 0))
}

/// `E^k_λ ∩ block` as the direct sum of its `(p,q)` parts, in degree coordinates.
fn degree_basis(layout: &Layout, lb: &LineBlock, k: usize) -> ExactMatrix {
    let base = layout.degree_offset(k);
    let parts: Vec<_> = layout.bidegrees_of_degree(k).into_iter().map(|b| (b, piece_basis(layout, lb, b))).collect();
    let cols = parts.iter().map(|(_, m)| m.cols()).sum();
    let mut out = ExactMatrix::zeros(layout.degree_dim(k), cols);
    let mut c = 0;
    for (b, m) in parts {
        out.set_submatrix(layout.offset(b) - base, c, &m);
        c += m.cols();
    }
    out
}

/// The part of `op` mapping degree `from` to degree `to`, in degree coordinates.
fn degree_op(op: &GradedOperator, layout: &Layout, from: usize, to: usize) -> ExactMatrix {
    let mut out = ExactMatrix::zeros(layout.degree_dim(to), layout.degree_dim(from));
    let (fo, to_off) = (layout.degree_offset(from), layout.degree_offset(to));
    for (s, t, m) in op.blocks() {
        if s.degree() == from && t.degree() == to {
            out.set_submatrix(layout.offset(t) - to_off, layout.offset(s) - fo, m);
        }
    }
    out
}

/// Rank of `map · basis`; when it is short of `basis.cols()`, also a
/// nonzero vector of the span of `basis` that `map` kills.
fn injectivity(map: &ExactMatrix, basis: &ExactMatrix) -> (usize, Option<Vec<GaussianRational>>) {
    let image = map * basis;
    let r = rank(&image);
    if r == basis.cols() {
        return (r, None);
    }
    let coeffs = kernel_basis(&image).into_iter().next().expect("rank deficit gives a kernel");
    (r, Some(basis.mul_vec(&coeffs)))
}

fn position_of_blocks(line: &EigenLine) -> HashMap<usize, usize> {
    line.blocks.iter().enumerate().map(|(i, lb)| (lb.block, i)).collect()
}

/// Hodge decomposition, conjugation symmetry and hard Lefschetz for one
/// line. Also returns `rank L^i : E^{n-i} → E^{n+i}` for `i = 1..=n`.
pub fn check_theorem1(pkg: &KahlerPackage, line: &EigenLine) -> (Vec<Verdict>, Vec<usize>) {
    let n = line.n;
    let b = line.betti();
    let mut out = Vec::new();

    for (k, &bk) in b.iter().enumerate() {
        let sum: usize = (0..=k.min(n)).filter(|&p| k - p <= n).map(|p| line.h(bd(p, k - p))).sum();
        out.push(Verdict::dims(CheckId::T1_1, format!("Σ_(p+q={k}) h^pq = b^{k}"), sum == bk, sum, bk));
    }

    let positions = position_of_blocks(line);
    for p in 0..=n {
        for q in 0..=n {
            let name = format!("conj E^({p},{q}) = E^({q},{p})");
            let mut failure = None;
            for lb in &line.blocks {
                let blk: &PackageBlock = &pkg.blocks()[lb.block];
                let partner = &pkg.blocks()[blk.conj_partner];
                let basis = piece_basis(&blk.layout, lb, bd(p, q));
                let target = positions
                    .get(&blk.conj_partner)
                    .map(|&i| piece_basis(&partner.layout, &line.blocks[i], bd(q, p)))
                    .unwrap_or_else(|| ExactMatrix::zeros(partner.layout.dim(bd(q, p)), 0));
                let m = piece(&blk.conj, &blk.layout, &partner.layout, bd(p, q), bd(q, p));
                let image = &m * &basis.conj();
                let r = rank(&image);
                let joint = rank(&target.hstack(&image).expect("same piece"));
                if r != basis.cols() || target.cols() != basis.cols() {
                    failure = Some((r.min(target.cols()), basis.cols()));
                } else if joint != target.cols() {
                    failure = Some((joint, target.cols()));
                }
                if failure.is_some() {
                    break;
                }
            }
            out.push(match failure {
                None => Verdict::pass(CheckId::T1_2, name),
                Some((l, r)) => Verdict::dims(CheckId::T1_2, name, false, l, r),
            });
        }
    }

    let mut ranks = Vec::new();
    for i in 1..=n {
        let (lo, hi) = (n - i, n + i);
        let mut powers: HashMap<(usize, usize), ExactMatrix> = HashMap::new();
        let mut r = 0;
        for lb in &line.blocks {
            let blk = &pkg.blocks()[lb.block];
            let key = (Arc::as_ptr(&blk.lefschetz) as usize, Arc::as_ptr(&blk.layout) as usize);
            let li = powers.entry(key).or_insert_with(|| {
                let mut acc = (*blk.lefschetz).clone();
                for _ in 1..i {
                    acc = blk.lefschetz.compose(&acc);
                }
                degree_op(&acc, &blk.layout, lo, hi)
            });
            r += rank(&(&*li * &degree_basis(&blk.layout, lb, lo)));
        }
        ranks.push(r);
        let name = format!("L^{i}: E^{lo} → E^{hi} iso");
        let ok = r == b[lo] && b[lo] == b[hi];
        out.push(if ok {
            Verdict::pass(CheckId::T1_3, name)
        } else if r != b[lo] {
            Verdict::dims(CheckId::T1_3, name, false, r, b[lo])
        } else {
            Verdict::dims(CheckId::T1_3, name, false, b[lo], b[hi])
        });
    }
    (out, ranks)
}

/// The seven multiplicity statements, evaluated on dimensions alone.
pub fn check_corollary1(n: usize, b: &[usize], h: &[Vec<usize>]) -> Vec<Verdict> {
    let mut out = Vec::new();
    for (k, &bk) in b.iter().enumerate() {
        let sum: usize = (0..=n).filter(|&p| p <= k && k - p <= n).map(|p| h[p][k - p]).sum();
        out.push(Verdict::dims(CheckId::C1a, format!("b^{k} = Σ h^pq"), bk == sum, bk, sum));
    }
    for p in 0..=n {
        for q in p + 1..=n {
            out.push(Verdict::dims(CheckId::C1b, format!("h^{p}{q} = h^{q}{p}"), h[p][q] == h[q][p], h[p][q], h[q][p]));
        }
    }
    for (k, &bk) in b.iter().enumerate().filter(|(k, _)| k % 2 == 1) {
        out.push(Verdict::dims(CheckId::C1c, format!("b^{k} even"), bk % 2 == 0, bk, 2));
    }
    for k in 0..n {
        let dual = 2 * n - k;
        out.push(Verdict::dims(CheckId::C1d, format!("b^{dual} = b^{k}"), b[dual] == b[k], b[dual], b[k]));
    }
    for k in 0..n {
        out.push(Verdict::dims(CheckId::C1e, format!("b^{k} ≤ b^{}", k + 2), b[k] <= b[k + 2], b[k], b[k + 2]));
    }
    for p in 0..=n {
        for q in 0..=n - p {
            if p + q >= n {
                continue;
            }
            let (pp, qq) = (n - p, n - q);
            out.push(Verdict::dims(CheckId::C1f, format!("h^{p}{q} = h^{pp}{qq}"), h[p][q] == h[pp][qq], h[p][q], h[pp][qq]));
            let (up, uq) = (p + 1, q + 1);
            out.push(Verdict::dims(CheckId::C1g, format!("h^{p}{q} ≤ h^{up}{uq}"), h[p][q] <= h[up][uq], h[p][q], h[up][uq]));
        }
    }
    out
}

/// The degree-zero lemma: `h^01 ≥ h^00 = b^0`, `b^1 ≥ 2b^0`, and `∂̄`
/// injective on `E^(0,0)`.
pub fn check_degree0_lemma(pkg: &KahlerPackage, line: &EigenLine) -> Result<Vec<Verdict>, VerifyError> {
    if !line.is_positive() {
        return Err(VerifyError::ZeroEigenvalueLine);
    }
    let b = line.betti();
    let (h00, h01) = (line.h(bd(0, 0)), line.h(bd(0, 1)));
    let mut out = vec![
        Verdict::dims(CheckId::L0_1, "h^01 ≥ h^00", h01 >= h00, h01, h00),
        Verdict::dims(CheckId::L0_1, "h^00 = b^0", h00 == b[0], h00, b[0]),
    ];
    let name = "∂̄ injective on E^(0,0)";
    let mut verdict = Verdict::pass(CheckId::L0_1, name);
    for lb in &line.blocks {
        let blk = &pkg.blocks()[lb.block];
        let q = piece(&blk.dbar, &blk.layout, &blk.layout, bd(0, 0), bd(0, 1));
        if let (_, Some(vector)) = injectivity(&q, &piece_basis(&blk.layout, lb, bd(0, 0))) {
            verdict = Verdict::fail(CheckId::L0_1, name, Witness::Kernel { block: lb.block, bidegree: bd(0, 0), vector });
            break;
        }
    }
    out.push(verdict);
    out.push(Verdict::dims(CheckId::L0_2, "b^1 ≥ 2b^0", b[1] >= 2 * b[0], b[1], 2 * b[0]));
    Ok(out)
}

/// Dimensions of the exact and coexact parts of a positive line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitDims {
    /// `dim dE^{k-1}_λ` per degree.
    pub exact: Vec<usize>,
    /// `dim d*E^{k+1}_λ` per degree.
    pub coexact: Vec<usize>,
    /// `dim ∂̄E^{(p,q-1)}_λ`, indexed `[p][q]`.
    pub h_exact: Vec<Vec<usize>>,
    /// `dim ∂̄*E^{(p,q+1)}_λ`, indexed `[p][q]`.
    pub h_coexact: Vec<Vec<usize>>,
}

/// Bases of the `∂̄`-exact and `∂̄`-coexact parts, aligned with `line.blocks`.
#[derive(Clone, Debug, Default)]
pub struct SplitBases {
    pub blocks: Vec<BTreeMap<Bidegree, (ExactMatrix, ExactMatrix)>>,
}

/// Computes `dE^{k-1}`, `d*E^{k+1}`, `∂̄E^{(p,q-1)}` and `∂̄*E^{(p,q+1)}`
/// inside a positive line and checks each pair is a direct sum filling the
/// eigenspace.
pub fn split_exact_coexact(
    pkg: &KahlerPackage,
    line: &EigenLine,
) -> Result<(SplitDims, SplitBases, Vec<Verdict>), VerifyError> {
    if !line.is_positive() {
        return Err(VerifyError::ZeroEigenvalueLine);
    }
    let n = line.n;
    let mut exact = vec![0; 2 * n + 1];
    let mut coexact = vec![0; 2 * n + 1];
    let mut joint = vec![0; 2 * n + 1];
    let mut h_exact = vec![vec![0; n + 1]; n + 1];
    let mut h_coexact = vec![vec![0; n + 1]; n + 1];
    let mut h_joint = vec![vec![0; n + 1]; n + 1];
    let mut bases = SplitBases::default();

    for lb in &line.blocks {
        let blk = &pkg.blocks()[lb.block];
        let layout = &*blk.layout;
        let q_star = blk.dbar.adjoint(&blk.gram)?;
        let d = blk.partial.add(&blk.dbar);
        let d_star = blk.partial.adjoint(&blk.gram)?.add(&q_star);
        for k in 0..=2 * n {
            let rows = layout.degree_dim(k);
            let ex = if k > 0 {
                &degree_op(&d, layout, k - 1, k) * &degree_basis(layout, lb, k - 1)
            } else {
                ExactMatrix::zeros(rows, 0)
            };
            let co = if k < 2 * n {
                &degree_op(&d_star, layout, k + 1, k) * &degree_basis(layout, lb, k + 1)
            } else {
                ExactMatrix::zeros(rows, 0)
            };
            exact[k] += rank(&ex);
            coexact[k] += rank(&co);
            joint[k] += rank(&ex.hstack(&co).expect("same degree"));
        }
        let mut parts = BTreeMap::new();
        for p in 0..=n {
            for q in 0..=n {
                let here = bd(p, q);
                let ex = if q > 0 {
                    column_basis(&(&piece(&blk.dbar, layout, layout, bd(p, q - 1), here) * &piece_basis(layout, lb, bd(p, q - 1))))
                } else {
                    ExactMatrix::zeros(layout.dim(here), 0)
                };
                let co = if q < n {
                    column_basis(&(&piece(&q_star, layout, layout, bd(p, q + 1), here) * &piece_basis(layout, lb, bd(p, q + 1))))
                } else {
                    ExactMatrix::zeros(layout.dim(here), 0)
                };
                h_exact[p][q] += ex.cols();
                h_coexact[p][q] += co.cols();
                h_joint[p][q] += rank(&ex.hstack(&co).expect("same piece"));
                parts.insert(here, (ex, co));
            }
        }
        bases.blocks.push(parts);
    }

    let b = line.betti();
    let mut verdicts = Vec::new();
    let split_verdict = |name: String, ex: usize, co: usize, j: usize, total: usize| {
        if ex + co != j {
            Verdict::fail(
                CheckId::L2Split,
                name,
                Witness::Dims { relation: "image intersection is zero".into(), left: ex + co, right: j },
            )
        } else {
            Verdict::dims(CheckId::L2Split, name, j == total, j, total)
        }
    };
    for k in 0..=2 * n {
        let name = format!("E^{k} = dE^{} ⊕ d*E^{}", k as isize - 1, k + 1);
        verdicts.push(split_verdict(name, exact[k], coexact[k], joint[k], b[k]));
    }
    for p in 0..=n {
        for q in 0..=n {
            let name = format!("E^({p},{q}) = ∂̄E ⊕ ∂̄*E");
            verdicts.push(split_verdict(name, h_exact[p][q], h_coexact[p][q], h_joint[p][q], line.h(bd(p, q))));
        }
    }
    Ok((SplitDims { exact, coexact, h_exact, h_coexact }, bases, verdicts))
}

/// Betti and Hodge inequalities for a positive line, with the isomorphism
/// `∂̄ : coexact^(p,q) → exact^(p,q+1)` and the injection
/// `α ↦ ∂̄*(ω ∧ α)` from `exact^(p,q)` checked as explicit ranks.
pub fn check_theorem2(
    pkg: &KahlerPackage,
    line: &EigenLine,
    split: &SplitDims,
    bases: &SplitBases,
) -> Result<Vec<Verdict>, VerifyError> {
    if !line.is_positive() {
        return Err(VerifyError::ZeroEigenvalueLine);
    }
    let n = line.n;
    let b = line.betti();
    let h = line.hodge_table();
    let at = |k: isize| if k < 0 || k as usize > 2 * n { 0 } else { b[k as usize] };
    let mut out = Vec::new();

    for k in 0..=2 * n {
        let ki = k as isize;
        let rhs = at(ki - 1) + at(ki + 1);
        out.push(Verdict::dims(CheckId::T2a, format!("b^{k} ≤ b^{} + b^{}", ki - 1, k + 1), b[k] <= rhs, b[k], rhs));
    }
    for p in 0..=n {
        for q in 0..n - p {
            let rhs = h[p + 1][q] + h[p][q + 1];
            out.push(Verdict::dims(
                CheckId::T2b,
                format!("h^{p}{q} ≤ h^{}{q} + h^{p}{}", p + 1, q + 1),
                h[p][q] <= rhs,
                h[p][q],
                rhs,
            ));
            let rhs8 = split.h_exact[p][q + 1] + split.h_coexact[p + 1][q];
            out.push(Verdict::dims(
                CheckId::T2b,
                format!("h^{p}{q} ≤ h_ex^{p}{} + h_co^{}{q}", q + 1, p + 1),
                h[p][q] <= rhs8,
                h[p][q],
                rhs8,
            ));
        }
    }
    for k in 0..n {
        out.push(Verdict::dims(CheckId::T2c, format!("b^{k} ≤ b^{}", k + 1), b[k] <= b[k + 1], b[k], b[k + 1]));
    }

    for p in 0..=n {
        for q in 0..n {
            let (co, ex_up) = (split.h_coexact[p][q], split.h_exact[p][q + 1]);
            out.push(Verdict::dims(CheckId::E6, format!("h_co^{p}{q} = h_ex^{p}{}", q + 1), co == ex_up, co, ex_up));
            let name = format!("∂̄: coexact^({p},{q}) ≅ exact^({p},{})", q + 1);
            let mut total_rank = 0;
            let mut witness = None;
            for (lb, parts) in line.blocks.iter().zip(&bases.blocks) {
                let blk = &pkg.blocks()[lb.block];
                let qm = piece(&blk.dbar, &blk.layout, &blk.layout, bd(p, q), bd(p, q + 1));
                let (r, kernel) = injectivity(&qm, &parts[&bd(p, q)].1);
                total_rank += r;
                if witness.is_none() {
                    witness = kernel.map(|vector| Witness::Kernel { block: lb.block, bidegree: bd(p, q), vector });
                }
            }
            out.push(match witness {
                Some(w) => Verdict::fail(CheckId::E6, name, w),
                None => Verdict::dims(CheckId::E6, name, total_rank == ex_up, total_rank, ex_up),
            });
        }
    }

    for p in 0..=n {
        for q in 0..n - p {
            let (ex, co_next) = (split.h_exact[p][q], split.h_coexact[p + 1][q]);
            out.push(Verdict::dims(CheckId::E7, format!("h_ex^{p}{q} ≤ h_co^{}{q}", p + 1), ex <= co_next, ex, co_next));
            let name = format!("∂̄*(ω∧·) injective on exact^({p},{q})");
            let mut verdict = Verdict::pass(CheckId::E7, name.clone());
            for (lb, parts) in line.blocks.iter().zip(&bases.blocks) {
                let blk = &pkg.blocks()[lb.block];
                let layout = &*blk.layout;
                let q_star = blk.dbar.adjoint(&blk.gram)?;
                let l = piece(&blk.lefschetz, layout, layout, bd(p, q), bd(p + 1, q + 1));
                let qs = piece(&q_star, layout, layout, bd(p + 1, q + 1), bd(p + 1, q));
                if let (_, Some(vector)) = injectivity(&(&qs * &l), &parts[&bd(p, q)].0) {
                    verdict = Verdict::fail(CheckId::E7, name, Witness::Kernel { block: lb.block, bidegree: bd(p, q), vector });
                    break;
                }
            }
            out.push(verdict);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Rational;
    use crate::torus::{torus_package, TorusSpec};
    use crate::verifier::eigen_lines;

    fn setup(n: usize, mu: i64) -> (KahlerPackage, Vec<EigenLine>) {
        let lines = TorusSpec::standard(n).enumerate_modes(&Rational::from_integer(mu)).unwrap();
        let pkg = torus_package(n, &lines).unwrap().package;
        let el = eigen_lines(&pkg, None, true).unwrap();
        (pkg, el)
    }

    fn all_pass(v: &[Verdict]) -> bool {
        v.iter().all(|x| x.passed)
    }

    #[test]
    fn z2_unit_line() {
        let (pkg, lines) = setup(1, 1);
        let line = &lines[1];
        let (t1, ranks) = check_theorem1(&pkg, line);
        assert!(all_pass(&t1), "{t1:?}");
        assert_eq!(ranks, vec![4]);
        let (split, bases, v) = split_exact_coexact(&pkg, line).unwrap();
        assert!(all_pass(&v));
        assert_eq!(split.exact, vec![0, 4, 4]);
        assert_eq!(split.coexact, vec![4, 4, 0]);
        assert_eq!(split.h_exact[0][1], 4);
        assert_eq!(split.h_coexact[0][1], 0);
        assert!(all_pass(&check_theorem2(&pkg, line, &split, &bases).unwrap()));
        assert!(all_pass(&check_degree0_lemma(&pkg, line).unwrap()));
    }

    #[test]
    fn harmonic_line_is_gated() {
        let (pkg, lines) = setup(1, 1);
        assert_eq!(split_exact_coexact(&pkg, &lines[0]).unwrap_err(), VerifyError::ZeroEigenvalueLine);
        assert_eq!(check_degree0_lemma(&pkg, &lines[0]).unwrap_err(), VerifyError::ZeroEigenvalueLine);
        let (t1, _) = check_theorem1(&pkg, &lines[0]);
        assert!(all_pass(&t1));
    }

    #[test]
    fn corollary_negative_control() {
        let h = vec![vec![4, 4], vec![4, 4]];
        assert!(all_pass(&check_corollary1(1, &[4, 8, 4], &h)));
        let v = check_corollary1(1, &[4, 7, 4], &h);
        let failed: Vec<_> = v.iter().filter(|x| !x.passed).map(|x| x.check).collect();
        assert_eq!(failed, vec![CheckId::C1a, CheckId::C1c]);
    }

    #[test]
    fn zero_omega_breaks_e7() {
        let (mut pkg, lines) = setup(2, 1);
        let line = lines[1].clone();
        let (split, bases, _) = split_exact_coexact(&pkg, &line).unwrap();
        for blk in pkg.blocks_mut() {
            blk.lefschetz = Arc::new(GradedOperator::zero());
        }
        let v = check_theorem2(&pkg, &line, &split, &bases).unwrap();
        let e7: Vec<_> = v.iter().filter(|x| x.check == CheckId::E7 && x.name.starts_with("∂̄*")).collect();
        // exact^(0,0) is zero, so only (0,1) and (1,0) can fail
        assert!(e7.iter().any(|x| !x.passed));
        assert!(e7.iter().find(|x| x.name.ends_with("(0,0)")).unwrap().passed);
    }
}
