use std::collections::BTreeSet;

use serde::Serialize;

use crate::exactla::Rational;

use super::{CheckId, Verdict, VerifyError, Witness};

/// The Betti numbers of one eigenvalue, as needed for spectrum comparisons.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineDims {
    pub mu: Rational,
    pub b: Vec<usize>,
}

fn positive_spectrum(lines: &[LineDims], k: usize) -> BTreeSet<Rational> {
    lines
        .iter()
        .filter(|l| l.mu.is_positive() && l.b.get(k).copied().unwrap_or(0) > 0)
        .map(|l| l.mu.clone())
        .collect()
}

fn first_missing(set: &BTreeSet<Rational>, within: &BTreeSet<Rational>) -> Option<Rational> {
    set.difference(within).next().cloned()
}

fn containment(check: CheckId, name: String, set: &BTreeSet<Rational>, within: &BTreeSet<Rational>, degree: usize) -> Verdict {
    match first_missing(set, within) {
        None => Verdict::pass(check, name),
        Some(mu) => Verdict::fail(check, name, Witness::Eigenvalue { mu, degree }),
    }
}

/// Compares positive spectra of `Δ_k` (as sets) over the lines given.
///
/// `complete` asserts that the lines contain every eigenvalue up to the
/// largest one listed; without it no comparison is meaningful.
pub fn compare_spectra(n: usize, lines: &[LineDims], complete: bool) -> Result<Vec<Verdict>, VerifyError> {
    if !complete {
        return Err(VerifyError::IncompleteRange);
    }
    let spec: Vec<BTreeSet<Rational>> = (0..=2 * n).map(|k| positive_spectrum(lines, k)).collect();
    let empty = BTreeSet::new();
    let at = |k: isize| if k < 0 || k as usize > 2 * n { &empty } else { &spec[k as usize] };
    let mut out = Vec::new();

    for k in 0..=2 * n {
        let ki = k as isize;
        let union: BTreeSet<Rational> = at(ki - 1).union(at(ki + 1)).cloned().collect();
        let name = format!("spec⁺Δ_{k} ⊆ spec⁺Δ_{} ∪ spec⁺Δ_{}", ki - 1, k + 1);
        out.push(containment(CheckId::SUnion, name, &spec[k], &union, k));
    }
    for k in 0..n {
        let name = format!("spec⁺Δ_{k} ⊆ spec⁺Δ_{}", k + 1);
        out.push(containment(CheckId::SMono, name, &spec[k], &spec[k + 1], k));
    }
    for k in 0..n {
        let name = format!("λ₁^({k}) ≥ λ₁^({})", k + 1);
        // A degree with no positive eigenvalue in range has λ₁ beyond it.
        let verdict = match (spec[k].first(), spec[k + 1].first()) {
            (Some(a), Some(b)) if a < b => Verdict::fail(CheckId::SMono, name, Witness::Eigenvalue { mu: a.clone(), degree: k + 1 }),
            (Some(a), None) => Verdict::fail(CheckId::SMono, name, Witness::Eigenvalue { mu: a.clone(), degree: k + 1 }),
            _ => Verdict::pass(CheckId::SMono, name),
        };
        out.push(verdict);
    }
    if n >= 1 {
        let mid = [n - 1, n, n + 1];
        let name = format!("spec⁺Δ_{} = spec⁺Δ_{} = spec⁺Δ_{}", mid[0], mid[1], mid[2]);
        let mut verdict = Verdict::pass(CheckId::SMid, name.clone());
        'outer: for &a in &mid {
            for &b in &mid {
                if let Some(mu) = first_missing(&spec[a], &spec[b]) {
                    verdict = Verdict::fail(CheckId::SMid, name, Witness::Eigenvalue { mu, degree: b });
                    break 'outer;
                }
            }
        }
        out.push(verdict);
    }
    Ok(out)
}
