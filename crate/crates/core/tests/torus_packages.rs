use hodge_spectra::exactla::{kernel_basis, ExactMatrix, GaussianRational, Rational};
use hodge_spectra::exterior::Grade;
use hodge_spectra::format::{read_package, write_package};
use hodge_spectra::graded::Bidegree;
use hodge_spectra::torus::{assemble_eigenspace, torus_package, TorusSpec};
use hodge_spectra::verifier::{
    check_degree0_lemma, check_theorem1, eigen_lines, standard_mutations, validate_package, verify, CheckId,
    KahlerPackage, VerifyOptions,
};

fn r(n: i64) -> Rational {
    Rational::from_integer(n)
}

fn package(torus: &TorusSpec, mu_max: i64) -> KahlerPackage {
    let lines = torus.enumerate_modes(&r(mu_max)).unwrap();
    torus_package(torus.n(), &lines).unwrap().package
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn all_pass(pkg: &KahlerPackage) -> bool {
    validate_package(pkg).unwrap().iter().all(|v| v.passed)
}

#[test]
fn z4_unit_line_dimensions() {
    let pkg = package(&TorusSpec::standard(2), 1);
    let lines = eigen_lines(&pkg, None, true).unwrap();
    let line = &lines[1];
    assert_eq!(line.mu, Rational::ONE);
    assert_eq!(line.betti(), vec![8, 32, 48, 32, 8]);
    assert_eq!(line.hodge_table(), vec![vec![8, 16, 8], vec![16, 32, 16], vec![8, 16, 8]]);
    let (_, ranks) = check_theorem1(&pkg, line);
    assert_eq!(ranks, vec![32, 8]);
    let lemma = check_degree0_lemma(&pkg, line).unwrap();
    assert!(lemma.iter().all(|v| v.passed), "{lemma:?}");
}

#[test]
fn kernel_dimensions_match_the_product_formula() {
    let half = Rational::new(1, 2);
    let tori = [
        TorusSpec::standard(2),
        TorusSpec::diagonal(2, &[r(2), r(1), r(1), Rational::new(3, 2)]).unwrap(),
        TorusSpec::new(2, vec![
            vec![r(1), half.clone(), r(0), r(0)],
            vec![r(0), r(1), half.clone(), r(0)],
            vec![r(0), r(0), r(1), half],
            vec![r(0), r(0), r(0), r(1)],
        ])
        .unwrap(),
    ];
    for t in &tori {
        for line in t.enumerate_modes(&r(2)).unwrap() {
            for k in 0..=4 {
                let e = assemble_eigenspace(&line, Grade::Degree(k)).unwrap();
                let shifted = &e.laplacian() - &ExactMatrix::scalar(e.dim(), &GaussianRational::real(line.mu.clone()));
                assert_eq!(kernel_basis(&shifted).len(), line.mode_count() * binomial(4, k), "mu = {}", line.mu);
                assert_eq!(line.betti(k), e.dim());
            }
            for (p, q) in [(0, 0), (1, 0), (1, 1), (2, 1)] {
                let e = assemble_eigenspace(&line, Grade::Bidegree(Bidegree::new(p, q))).unwrap();
                assert_eq!(e.dim(), line.hodge(p, q));
            }
        }
    }
}

#[test]
fn validity_is_closed_under_direct_sum() {
    let a = package(&TorusSpec::standard(1), 2);
    let b = package(&TorusSpec::diagonal(1, &[r(2), r(1)]).unwrap(), 1);
    let bad = standard_mutations(1, 1)[0].apply(&b).unwrap();
    assert!(all_pass(&a.direct_sum(&b).unwrap()));
    assert!(!all_pass(&a.direct_sum(&bad).unwrap()));
    assert!(!all_pass(&bad.direct_sum(&a).unwrap()));
    assert!(!all_pass(&bad.direct_sum(&bad).unwrap()));
    let report = verify(&a.direct_sum(&b).unwrap(), &VerifyOptions::default()).unwrap();
    assert!(report.passed());
}

#[test]
fn direct_sum_with_itself_doubles_every_dimension() {
    let a = package(&TorusSpec::standard(2), 1);
    let twice = a.direct_sum(&a).unwrap();
    let one = eigen_lines(&a, None, true).unwrap();
    let two = eigen_lines(&twice, None, true).unwrap();
    for (x, y) in one.iter().zip(&two) {
        assert_eq!(x.betti().iter().map(|b| 2 * b).collect::<Vec<_>>(), y.betti());
    }
}

#[test]
fn z4_to_three_passes_everything() {
    let report = verify(&package(&TorusSpec::standard(2), 3), &VerifyOptions::default()).unwrap();
    assert!(report.passed(), "{:?}", report.verdicts().filter(|v| !v.passed).collect::<Vec<_>>());
    let mus: Vec<Rational> = report.lines.iter().map(|l| l.mu.clone()).collect();
    assert_eq!(mus, vec![r(0), r(1), r(2), r(3)]);
}

#[test]
fn check_selection_keeps_one_family() {
    let checks = Some([CheckId::T2b].into_iter().collect());
    let report = verify(&package(&TorusSpec::standard(2), 1), &VerifyOptions { checks, ..Default::default() }).unwrap();
    assert!(report.summary.total > 0);
    assert!(report.verdicts().all(|v| v.check == CheckId::T2b));
}

#[test]
fn export_import_is_faithful_and_deterministic() {
    let t = TorusSpec::diagonal(2, &[r(2), r(1), r(1), r(1)]).unwrap();
    let lines = t.enumerate_modes(&Rational::new(1, 2)).unwrap();
    let pkg = torus_package(2, &lines).unwrap().package;
    let mus: Vec<Rational> = lines.iter().map(|l| l.mu.clone()).collect();
    let text = write_package(&pkg, Some(&mus)).unwrap();
    assert_eq!(text, write_package(&pkg, Some(&mus)).unwrap());
    let doc = read_package(&text).unwrap();
    let direct = serde_json::to_string(&verify(&pkg, &VerifyOptions::default()).unwrap()).unwrap();
    let opts = VerifyOptions { candidates: doc.eigenvalues.clone(), require_complete: true, ..Default::default() };
    let imported = serde_json::to_string(&verify(&doc.package, &opts).unwrap()).unwrap();
    assert_eq!(direct, imported);
}
