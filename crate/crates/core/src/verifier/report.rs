use std::collections::BTreeSet;

use serde::Serialize;

use crate::exactla::Rational;

use super::{
    check_corollary1, check_degree0_lemma, check_theorem1, check_theorem2, compare_spectra, eigen_lines,
    split_exact_coexact, validate_package, CheckId, KahlerPackage, LineDims, SplitDims, Verdict, VerifyError,
};

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Candidate eigenvalues for blocks whose Laplacian is not scalar.
    pub candidates: Option<Vec<Rational>>,
    /// Checks to report; `None` means all.
    pub checks: Option<BTreeSet<CheckId>>,
    /// Fail with [`VerifyError::IncompleteSpectrum`] unless the lines
    /// exhaust the package.
    pub require_complete: bool,
}

impl VerifyOptions {
    fn selected(&self, c: CheckId) -> bool {
        self.checks.as_ref().map_or(true, |s| s.contains(&c))
    }

    fn any_selected(&self, cs: &[CheckId]) -> bool {
        cs.iter().any(|&c| self.selected(c))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineReport {
    pub mu: Rational,
    pub b: Vec<usize>,
    pub h: Vec<Vec<usize>>,
    /// `rank L^i : E^{n-i} → E^{n+i}` for `i = 1..=n`.
    pub lefschetz_ranks: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<SplitDims>,
    pub verdicts: Vec<Verdict>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckTally {
    pub check: CheckId,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    /// Per check id in canonical order; ids with no verdicts are omitted.
    pub by_check: Vec<CheckTally>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub n: usize,
    pub total_dim: usize,
    pub package_checks: Vec<Verdict>,
    pub lines: Vec<LineReport>,
    pub spectrum_checks: Vec<Verdict>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn verdicts(&self) -> impl Iterator<Item = &Verdict> {
        self.package_checks
            .iter()
            .chain(self.lines.iter().flat_map(|l| &l.verdicts))
            .chain(&self.spectrum_checks)
    }

    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }
}

fn summarize(verdicts: Vec<&Verdict>) -> Summary {
    let by_check = CheckId::ALL
        .into_iter()
        .filter_map(|c| {
            let (p, f) = verdicts
                .iter()
                .filter(|v| v.check == c)
                .fold((0, 0), |(p, f), v| if v.passed { (p + 1, f) } else { (p, f + 1) });
            (p + f > 0).then_some(CheckTally { check: c, passed: p, failed: f })
        })
        .collect();
    let failed = verdicts.iter().filter(|v| !v.passed).count();
    Summary { total: verdicts.len(), passed: verdicts.len() - failed, failed, by_check }
}

const SPLIT_CHECKS: [CheckId; 6] = [CheckId::L2Split, CheckId::T2a, CheckId::T2b, CheckId::T2c, CheckId::E6, CheckId::E7];
const T2_CHECKS: [CheckId; 5] = [CheckId::T2a, CheckId::T2b, CheckId::T2c, CheckId::E6, CheckId::E7];

/// Runs the whole battery.
///
/// The identity checks run first and always. If any fails, no eigenspace
/// statement is evaluated and the failures are reported whatever the
/// selection. Zero-eigenvalue lines only get the Theorem 1 and Corollary 1
/// families. Verdict order is deterministic: lines by eigenvalue, checks in
/// canonical order within each line.
pub fn verify(pkg: &KahlerPackage, opts: &VerifyOptions) -> Result<VerificationReport, VerifyError> {
    let identity = validate_package(pkg)?;
    let identities_ok = identity.iter().all(|v| v.passed);
    let mut package_checks: Vec<Verdict> =
        identity.into_iter().filter(|v| !v.passed || opts.selected(v.check)).collect();
    package_checks.sort_by_key(|v| v.check);

    let mut lines = Vec::new();
    let mut spectrum_checks = Vec::new();
    if identities_ok {
        let eigen = eigen_lines(pkg, opts.candidates.as_deref(), opts.require_complete)?;
        let found: usize = eigen.iter().map(|l| l.dim()).sum();
        for line in &eigen {
            let b = line.betti();
            let h = line.hodge_table();
            let (mut verdicts, lefschetz_ranks) = check_theorem1(pkg, line);
            verdicts.extend(check_corollary1(pkg.n(), &b, &h));
            let mut split = None;
            if line.is_positive() {
                verdicts.extend(check_degree0_lemma(pkg, line)?);
                if opts.any_selected(&SPLIT_CHECKS) {
                    let (dims, bases, split_verdicts) = split_exact_coexact(pkg, line)?;
                    verdicts.extend(split_verdicts);
                    if opts.any_selected(&T2_CHECKS) {
                        verdicts.extend(check_theorem2(pkg, line, &dims, &bases)?);
                    }
                    split = Some(dims);
                }
            }
            verdicts.retain(|v| opts.selected(v.check));
            verdicts.sort_by_key(|v| v.check);
            lines.push(LineReport { mu: line.mu.clone(), b, h, lefschetz_ranks, split, verdicts });
        }
        if opts.any_selected(&[CheckId::SUnion, CheckId::SMono, CheckId::SMid]) {
            let dims: Vec<LineDims> = lines.iter().map(|l| LineDims { mu: l.mu.clone(), b: l.b.clone() }).collect();
            spectrum_checks = compare_spectra(pkg.n(), &dims, found == pkg.total_dim())?;
            spectrum_checks.retain(|v| opts.selected(v.check));
            spectrum_checks.sort_by_key(|v| v.check);
        }
    }

    let all: Vec<&Verdict> = package_checks
        .iter()
        .chain(lines.iter().flat_map(|l| &l.verdicts))
        .chain(&spectrum_checks)
        .collect();
    let summary = summarize(all);
    Ok(VerificationReport { n: pkg.n(), total_dim: pkg.total_dim(), package_checks, lines, spectrum_checks, summary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::GaussianRational;
    use crate::torus::{torus_package, TorusSpec};

    fn z2(mu: i64) -> KahlerPackage {
        let lines = TorusSpec::standard(1).enumerate_modes(&Rational::from_integer(mu)).unwrap();
        torus_package(1, &lines).unwrap().package
    }

    #[test]
    fn z2_everything_passes() {
        let report = verify(&z2(2), &VerifyOptions::default()).unwrap();
        assert!(report.passed(), "{:?}", report.verdicts().filter(|v| !v.passed).collect::<Vec<_>>());
        assert_eq!(report.lines.len(), 3);
        assert!(report.lines[0].split.is_none());
        assert_eq!(report.lines[1].lefschetz_ranks, vec![4]);
    }

    #[test]
    fn selection_filters_families() {
        let checks = Some([CheckId::T2b].into_iter().collect());
        let report = verify(&z2(2), &VerifyOptions { checks, ..Default::default() }).unwrap();
        assert!(report.verdicts().all(|v| v.check == CheckId::T2b));
        assert!(report.summary.total > 0);
    }

    #[test]
    fn identity_failures_gate_the_theorems() {
        let mut pkg = z2(1);
        let blk = &mut pkg.blocks_mut()[1];
        blk.dbar = blk.dbar.scale(&GaussianRational::from_integer(-1));
        let checks = Some([CheckId::T1_1].into_iter().collect());
        let report = verify(&pkg, &VerifyOptions { checks, ..Default::default() }).unwrap();
        assert!(!report.passed());
        assert!(report.lines.is_empty());
        assert!(report.package_checks.iter().all(|v| !v.passed));
    }
}
