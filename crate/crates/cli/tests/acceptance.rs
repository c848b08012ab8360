//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use hodge_spectra::exactla::{kernel_basis, ldlt, rank, ExactMatrix, GaussianRational, Rational};
use hodge_spectra::exterior::Grade;
use hodge_spectra::format::write_package;
use hodge_spectra::torus::{assemble_eigenspace, torus_package, ModeOperator, SpectralLine, TorusSpec};
use hodge_spectra::verifier::{
    check_theorem1, eigen_lines, standard_mutations, validate_package, verify, CheckId, KahlerPackage, VerifyOptions,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use tempfile::TempDir;

type Outcome = Result<String, String>;

fn r(n: i64) -> Rational {
    Rational::from_integer(n)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bin(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_hodge-spectra")).args(args).output().expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn package_of(torus: &TorusSpec, mu_max: &Rational) -> (KahlerPackage, Vec<SpectralLine>) {
    let lines = torus.enumerate_modes(mu_max).unwrap();
    (torus_package(torus.n(), &lines).unwrap().package, lines)
}

/// Squared norms of the integer points of `[-k, k]^m`, with counts.
fn integer_norms(m: usize, mu_max: i64) -> BTreeMap<i64, usize> {
    let k = (0..).find(|k: &i64| k * k > mu_max).unwrap();
    let mut out = BTreeMap::new();
    let mut c = vec![-k; m];
    loop {
        let norm: i64 = c.iter().map(|x| x * x).sum();
        if norm <= mu_max {
            *out.entry(norm).or_default() += 1;
        }
        let Some(i) = (0..m).find(|&i| c[i] < k) else { return out };
        c[i] += 1;
        c[..i].iter_mut().for_each(|x| *x = -k);
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut sizes = Vec::new();
    for n in [1, 2] {
        let (pkg, lines) = package_of(&TorusSpec::standard(n), &r(10));
        let computed: BTreeMap<Rational, usize> = eigen_lines(&pkg, None, true)
            .map_err(|e| e.to_string())?
            .into_iter()
            .zip(&lines)
            .filter(|(e, _)| e.mu.is_positive())
            .map(|(e, l)| (e.mu, l.mode_count()))
            .collect();
        let scanned: BTreeMap<Rational, usize> =
            integer_norms(2 * n, 10).into_iter().filter(|&(k, _)| k > 0).map(|(k, c)| (r(k), c)).collect();
        let set = |m: &BTreeMap<Rational, usize>| m.keys().cloned().collect::<Vec<_>>();
        ensure(set(&computed) == set(&scanned), || format!("Z^{}: {:?} vs scan {:?}", 2 * n, set(&computed), set(&scanned)))?;
        ensure(computed == scanned, || format!("Z^{}: mode counts differ from the scan", 2 * n))?;
        sizes.push(format!("Z^{}: {} positive values", 2 * n, computed.len()));
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(10), || format!("took {t:.2?}"))?;
    Ok(format!("{} ({t:.2?})", sizes.join(", ")))
}

fn criterion_2() -> Outcome {
    let lines = TorusSpec::standard(1).enumerate_modes(&r(10)).unwrap();
    let mut spectra = vec![BTreeSet::new(); 3];
    for line in lines.iter().filter(|l| l.mu.is_positive()) {
        for (k, spectrum) in spectra.iter_mut().enumerate() {
            let e = assemble_eigenspace(line, Grade::Degree(k)).map_err(|e| e.to_string())?;
            let shift = ExactMatrix::scalar(e.dim(), &GaussianRational::real(line.mu.clone()));
            if !kernel_basis(&(&e.laplacian() - &shift)).is_empty() {
                spectrum.insert(line.mu.clone());
            }
        }
    }
    ensure(spectra[0] == spectra[1] && spectra[1] == spectra[2], || format!("{spectra:?}"))?;
    Ok(format!("Δ0, Δ1, Δ2 share {} positive values", spectra[0].len()))
}

fn corpus() -> Vec<(String, TorusSpec)> {
    let mut out = Vec::new();
    for n in 1..=3 {
        let m = 2 * n;
        let mut stretch = vec![r(1); m];
        stretch[0] = r(2);
        stretch[m - 1] = Rational::new(3, 2);
        let shear: Vec<Vec<Rational>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| match j {
                        _ if j == i => r(1),
                        _ if j == i + 1 => Rational::new(1, 2),
                        _ => r(0),
                    })
                    .collect()
            })
            .collect();
        out.push((format!("Z^{m}"), TorusSpec::standard(n)));
        out.push((format!("stretched n={n}"), TorusSpec::diagonal(n, &stretch).unwrap()));
        out.push((format!("sheared n={n}"), TorusSpec::new(n, shear).unwrap()));
    }
    out
}

struct CorpusRun {
    elapsed: Duration,
    /// (lattice, check, passed, failed)
    tallies: Vec<(String, CheckId, usize, usize)>,
}

fn run_corpus() -> Result<CorpusRun, String> {
    let start = Instant::now();
    let mut tallies = Vec::new();
    for (name, torus) in corpus() {
        let (pkg, _) = package_of(&torus, &r(5));
        let report = verify(&pkg, &VerifyOptions { require_complete: true, ..Default::default() })
            .map_err(|e| format!("{name}: {e}"))?;
        for t in report.summary.by_check {
            tallies.push((name.clone(), t.check, t.passed, t.failed));
        }
    }
    Ok(CorpusRun { elapsed: start.elapsed(), tallies })
}

fn corpus_result(run: &CorpusRun, wanted: &[CheckId]) -> Outcome {
    let mut seen = BTreeSet::new();
    let mut passed = 0;
    for (name, check, p, f) in run.tallies.iter().filter(|t| wanted.contains(&t.1)) {
        ensure(*f == 0, || format!("{name}: {f} {check} verdicts failed"))?;
        seen.insert(*check);
        passed += p;
    }
    let missing: Vec<String> = wanted.iter().filter(|c| !seen.contains(c)).map(|c| c.to_string()).collect();
    ensure(missing.is_empty(), || format!("never exercised: {}", missing.join(", ")))?;
    Ok(format!("{passed} verdicts over {} packages", corpus().len()))
}

fn criterion_3(run: &CorpusRun) -> Outcome {
    let ids: Vec<CheckId> = CheckId::ALL.into_iter().filter(|c| c.is_identity()).collect();
    let t = run.elapsed;
    ensure(t < Duration::from_secs(60), || format!("corpus took {t:.2?}"))?;
    corpus_result(run, &ids).map(|s| format!("{s} ({t:.2?} including the theorem checks)"))
}

fn criterion_4(run: &CorpusRun) -> Outcome {
    let ids: Vec<CheckId> = CheckId::ALL.into_iter().filter(|c| !c.is_identity()).collect();
    corpus_result(run, &ids)
}

fn criterion_5() -> Outcome {
    // Independent count: every E^k on a line is N·C(4,k) dimensional, N from the scan.
    let n_one = integer_norms(4, 1)[&1];
    let (b0, b1) = (n_one, 4 * n_one);
    let (pkg, lines) = package_of(&TorusSpec::standard(2), &r(1));
    let line = &eigen_lines(&pkg, None, true).map_err(|e| e.to_string())?[1];
    let (verdicts, ranks) = check_theorem1(&pkg, line);
    ensure(verdicts.iter().all(|v| v.passed), || "Lefschetz verdicts failed".into())?;
    // Direct rank of the mode-level operators.
    let e1 = assemble_eigenspace(&lines[1], Grade::Degree(1)).map_err(|e| e.to_string())?;
    let e0 = assemble_eigenspace(&lines[1], Grade::Degree(0)).map_err(|e| e.to_string())?;
    let l = e1.operator(ModeOperator::L, Grade::Degree(3));
    let l0 = e0.operator(ModeOperator::L, Grade::Degree(2));
    let l2 = assemble_eigenspace(&lines[1], Grade::Degree(2)).unwrap().operator(ModeOperator::L, Grade::Degree(4));
    let direct = (rank(&l), rank(&(&l2 * &l0)));
    let summary = format!(
        "rank L: E¹→E³ = {}, rank L²: E⁰→E⁴ = {}; scan gives N(1) = {n_one}, so full rank is {b1} and {b0} \
         (the stated 16 and 4 assume N(1) = 4)",
        ranks[0], ranks[1]
    );
    ensure(ranks == [b1, b0] && direct == (b1, b0), || format!("{summary}; direct {direct:?}"))?;
    Ok(summary)
}

fn criterion_6() -> Outcome {
    let dir = TempDir::new().map_err(|e| e.to_string())?;
    let (pkg, lines) = package_of(&TorusSpec::standard(2), &r(1));
    let mus: Vec<Rational> = lines.iter().map(|l| l.mu.clone()).collect();
    let mutations = standard_mutations(2, 1);
    ensure(mutations.len() >= 12, || format!("only {} mutations", mutations.len()))?;
    for (i, m) in mutations.iter().enumerate() {
        let bad = m.apply(&pkg).map_err(|e| format!("{m}: {e}"))?;
        let verdicts = validate_package(&bad).map_err(|e| e.to_string())?;
        ensure(verdicts.iter().any(|v| !v.passed), || format!("{m} went unnoticed"))?;
        let file = dir.path().join(format!("mutant{i}.json"));
        std::fs::write(&file, write_package(&bad, Some(&mus)).map_err(|e| e.to_string())?).unwrap();
        let code = bin(&["verify", "--input", path(&file), "--mode", "package"]).status.code();
        ensure(code == Some(1), || format!("{m}: verify exited {code:?}"))?;
    }
    Ok(format!("{} mutants, each caught and each exits 1", mutations.len()))
}

fn criterion_7() -> Outcome {
    let dir = TempDir::new().map_err(|e| e.to_string())?;
    let torus = dir.path().join("z2.json");
    std::fs::write(&torus, r#"{"n": 1, "basis": [["1", "0"], ["0", "1"]]}"#).unwrap();
    let pkg = dir.path().join("pkg.json");
    let export = bin(&["export", "--input", path(&torus), "--mu-max", "2", "--out", path(&pkg)]);
    ensure(export.status.success(), || String::from_utf8_lossy(&export.stderr).into_owned())?;
    for format in ["json", "text"] {
        let direct = bin(&["verify", "--input", path(&torus), "--mu-max", "2", "--format", format]);
        let imported = bin(&["verify", "--input", path(&pkg), "--mode", "package", "--format", format]);
        ensure(direct.status.success() && imported.status.success(), || "verify failed".into())?;
        ensure(direct.stdout == imported.stdout, || format!("{format} reports differ"))?;
    }
    Ok("json and text reports byte-identical".into())
}

fn small_matrix() -> impl Strategy<Value = ExactMatrix> {
    let entry = prop_oneof![
        Just(GaussianRational::ZERO),
        (-6i64..=6, 1i64..=5).prop_map(|(n, d)| GaussianRational::real(Rational::new(n, d))),
        (-4i64..=4, 1i64..=3, -4i64..=4).prop_map(|(a, d, b)| GaussianRational::new(Rational::new(a, d), r(b))),
    ];
    (1usize..=6, 1usize..=6)
        .prop_flat_map(move |(m, n)| proptest::collection::vec(proptest::collection::vec(entry.clone(), n), m))
        .prop_map(|rows| ExactMatrix::from_rows(rows).unwrap())
}

fn quiet() -> Config {
    Config { failure_persistence: None, ..Config::with_cases(1000) }
}

fn criterion_8() -> Outcome {
    let mut runner = TestRunner::new(quiet());
    runner
        .run(&small_matrix(), |m| {
            let kernel = kernel_basis(&m);
            prop_assert_eq!(rank(&m) + kernel.len(), m.cols());
            for v in &kernel {
                prop_assert!(m.mul_vec(v).iter().all(GaussianRational::is_zero));
            }
            Ok(())
        })
        .map_err(|e| format!("rank-nullity: {e}"))?;
    let mut runner = TestRunner::new(quiet());
    runner
        .run(&small_matrix(), |a| {
            let g = &(&a.conj_transpose() * &a) + &ExactMatrix::identity(a.cols());
            let (l, d) = ldlt(&g).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert!(d.iter().all(Rational::is_positive));
            let dm = ExactMatrix::diagonal(d.into_iter().map(GaussianRational::real));
            prop_assert_eq!(&(&l * &dm) * &l.conj_transpose(), g);
            Ok(())
        })
        .map_err(|e| format!("LDLᵀ: {e}"))?;
    Ok("1000 cases each for rank-nullity and LDLᵀ reconstruction".into())
}

fn main() {
    let run = run_corpus();
    let results: Vec<Outcome> = vec![
        criterion_1(),
        criterion_2(),
        run.as_ref().map_err(Clone::clone).and_then(criterion_3),
        run.as_ref().map_err(Clone::clone).and_then(criterion_4),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
    ];
    let mut failed = 0;
    for (i, result) in results.iter().enumerate() {
        match result {
            Ok(detail) => println!("criterion {}: PASS  {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
