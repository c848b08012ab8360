use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write;

use hodge_spectra::exactla::Rational;
use hodge_spectra::graded::Bidegree;
use hodge_spectra::verifier::{VerificationReport, Verdict};
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::CliError;

pub struct SpectrumRow {
    pub mu: Rational,
    pub modes: usize,
    pub b: Vec<usize>,
}

pub struct DiamondTable {
    pub n: usize,
    pub mu: Rational,
    /// Indexed `[p][q]`.
    pub h: Vec<Vec<usize>>,
}

fn lambda(mu: &Rational) -> String {
    format!("4π²·{mu}")
}

fn lambda_approx(mu: &Rational) -> f64 {
    4.0 * PI * PI * mu.to_f64()
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    Ok(s)
}

fn csv(header: &[String], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
}

/// Left-aligns the first column and right-aligns the rest.
fn table(header: &[String], rows: &[Vec<String>]) -> String {
    let width = |c: usize| {
        std::iter::once(&header[c])
            .chain(rows.iter().map(|r| &r[c]))
            .map(|s| s.chars().count())
            .max()
            .unwrap_or(0)
    };
    let widths: Vec<usize> = (0..header.len()).map(width).collect();
    let mut out = String::new();
    for r in std::iter::once(header).chain(rows.iter().map(Vec::as_slice)) {
        let cells: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(c, s)| {
                let pad = widths[c] - s.chars().count();
                if c == 0 {
                    format!("{s}{}", " ".repeat(pad))
                } else {
                    format!("{}{s}", " ".repeat(pad))
                }
            })
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn selected_degrees(n: usize, cfg: &RunConfig) -> Result<Vec<usize>, CliError> {
    if cfg.degrees.is_empty() {
        return Ok((0..=2 * n).collect());
    }
    if let Some(k) = cfg.degrees.iter().find(|&&k| k > 2 * n) {
        return Err(CliError::Usage(format!("degree {k} exceeds 2n = {}", 2 * n)));
    }
    let mut ks = cfg.degrees.clone();
    ks.sort_unstable();
    ks.dedup();
    Ok(ks)
}

fn selected_bidegrees(n: usize, cfg: &RunConfig) -> Result<Vec<Bidegree>, CliError> {
    if cfg.bidegrees.is_empty() {
        return Ok((0..=n).flat_map(|p| (0..=n).map(move |q| Bidegree::new(p, q))).collect());
    }
    if let Some(b) = cfg.bidegrees.iter().find(|b| b.p > n || b.q > n) {
        return Err(CliError::Usage(format!("bidegree {b} is outside 0..={n}")));
    }
    let mut bs = cfg.bidegrees.clone();
    bs.sort_unstable();
    bs.dedup();
    Ok(bs)
}

#[derive(Serialize)]
struct SpectrumJson {
    n: usize,
    mu_max: Rational,
    lines: Vec<SpectrumLineJson>,
}

#[derive(Serialize)]
struct SpectrumLineJson {
    mu: Rational,
    lambda: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda_approx: Option<f64>,
    modes: usize,
    b: BTreeMap<usize, usize>,
}

pub fn spectrum(n: usize, rows: &[SpectrumRow], cfg: &RunConfig) -> Result<String, CliError> {
    let ks = selected_degrees(n, cfg)?;
    match cfg.format {
        Format::Json => json(&SpectrumJson {
            n,
            mu_max: cfg.mu_max.clone(),
            lines: rows
                .iter()
                .map(|r| SpectrumLineJson {
                    mu: r.mu.clone(),
                    lambda: lambda(&r.mu),
                    lambda_approx: cfg.approx.then(|| lambda_approx(&r.mu)),
                    modes: r.modes,
                    b: ks.iter().map(|&k| (k, r.b[k])).collect(),
                })
                .collect(),
        }),
        Format::Csv | Format::Text => {
            let text = cfg.format == Format::Text;
            let mut header = vec![if text { "λ".to_string() } else { "mu".to_string() }];
            if cfg.approx {
                header.push(if text { "λ≈" } else { "lambda_approx" }.into());
            }
            header.push("N".into());
            header.extend(ks.iter().map(|k| format!("b{k}")));
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut row = vec![if text { lambda(&r.mu) } else { r.mu.to_string() }];
                    if cfg.approx {
                        row.push(format!("{:.6}", lambda_approx(&r.mu)));
                    }
                    row.push(r.modes.to_string());
                    row.extend(ks.iter().map(|&k| r.b[k].to_string()));
                    row
                })
                .collect();
            if text {
                Ok(format!("n = {n}, mu ≤ {}\n{}", cfg.mu_max, table(&header, &body)))
            } else {
                csv(&header, &body)
            }
        }
    }
}

#[derive(Serialize)]
struct DiamondJson {
    n: usize,
    mu: Rational,
    lambda: String,
    h: BTreeMap<String, usize>,
}

/// Rows by total degree from `2n` down to `0`, `p` decreasing along a row.
fn diamond_layout(t: &DiamondTable) -> String {
    let n = t.n;
    let w = t.h.iter().flatten().map(|x| x.to_string().len()).max().unwrap_or(1);
    let mut out = String::new();
    for k in (0..=2 * n).rev() {
        let ps: Vec<usize> = (k.saturating_sub(n)..=k.min(n)).rev().collect();
        let cells: Vec<String> = ps.iter().map(|&p| format!("{:>w$}", t.h[p][k - p])).collect();
        let indent = " ".repeat((n + 1 - ps.len()) * w);
        writeln!(out, "{indent}{}", cells.join(&" ".repeat(w))).unwrap();
    }
    out
}

pub fn diamond(t: &DiamondTable, cfg: &RunConfig) -> Result<String, CliError> {
    let bs = selected_bidegrees(t.n, cfg)?;
    let at = |b: &Bidegree| t.h[b.p][b.q];
    match cfg.format {
        Format::Json => json(&DiamondJson {
            n: t.n,
            mu: t.mu.clone(),
            lambda: lambda(&t.mu),
            h: bs.iter().map(|b| (b.key(), at(b))).collect(),
        }),
        Format::Csv => {
            let header = ["p", "q", "h"].map(String::from);
            let rows: Vec<Vec<String>> = bs.iter().map(|b| vec![b.p.to_string(), b.q.to_string(), at(b).to_string()]).collect();
            csv(&header, &rows)
        }
        Format::Text => {
            let mut out = format!("Hodge numbers at λ = {}", lambda(&t.mu));
            if cfg.approx {
                write!(out, " ≈ {:.6}", lambda_approx(&t.mu)).unwrap();
            }
            out.push('\n');
            if cfg.bidegrees.is_empty() {
                out.push_str(&diamond_layout(t));
            } else {
                for b in &bs {
                    writeln!(out, "h^{{{},{}}} = {}", b.p, b.q, at(b)).unwrap();
                }
            }
            Ok(out)
        }
    }
}

fn tuple(xs: &[usize]) -> String {
    let parts: Vec<String> = xs.iter().map(usize::to_string).collect();
    format!("({})", parts.join(", "))
}

fn witness(v: &Verdict) -> String {
    v.witness.as_ref().map(|w| serde_json::to_string(w).expect("witness serializes")).unwrap_or_default()
}

fn verdict_line(out: &mut String, v: &Verdict) {
    let mark = if v.passed { "PASS" } else { "FAIL" };
    writeln!(out, "  {mark}  {:<12} {}", v.check.as_str(), v.name).unwrap();
    if !v.passed && v.witness.is_some() {
        writeln!(out, "        witness: {}", witness(v)).unwrap();
    }
}

pub fn report(r: &VerificationReport, cfg: &RunConfig) -> Result<String, CliError> {
    match cfg.format {
        Format::Json => json(r),
        Format::Csv => {
            let header = ["section", "mu", "check", "name", "passed", "witness"].map(String::from);
            let row = |section: &str, mu: String, v: &Verdict| {
                vec![section.into(), mu, v.check.as_str().into(), v.name.clone(), v.passed.to_string(), witness(v)]
            };
            let mut rows: Vec<Vec<String>> = r.package_checks.iter().map(|v| row("package", String::new(), v)).collect();
            for l in &r.lines {
                rows.extend(l.verdicts.iter().map(|v| row("line", l.mu.to_string(), v)));
            }
            rows.extend(r.spectrum_checks.iter().map(|v| row("spectrum", String::new(), v)));
            csv(&header, &rows)
        }
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "n = {}, total dimension {}", r.n, r.total_dim).unwrap();
            if !r.package_checks.is_empty() {
                out.push_str("package identities\n");
                r.package_checks.iter().for_each(|v| verdict_line(&mut out, v));
            }
            for l in &r.lines {
                write!(out, "λ = {}", lambda(&l.mu)).unwrap();
                if cfg.approx {
                    write!(out, " ≈ {:.6}", lambda_approx(&l.mu)).unwrap();
                }
                let h: Vec<String> = l.h.iter().map(|row| tuple(row)).collect();
                writeln!(out, ", b = {}, h = [{}], Lefschetz ranks {}", tuple(&l.b), h.join(", "), tuple(&l.lefschetz_ranks)).unwrap();
                l.verdicts.iter().for_each(|v| verdict_line(&mut out, v));
            }
            if !r.spectrum_checks.is_empty() {
                out.push_str("spectra\n");
                r.spectrum_checks.iter().for_each(|v| verdict_line(&mut out, v));
            }
            out.push_str("summary\n");
            for t in &r.summary.by_check {
                writeln!(out, "  {:<12} {:>5} passed {:>5} failed", t.check.as_str(), t.passed, t.failed).unwrap();
            }
            writeln!(out, "total {} verdicts: {} passed, {} failed", r.summary.total, r.summary.passed, r.summary.failed).unwrap();
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diamond_shape() {
        let t = DiamondTable { n: 2, mu: Rational::ONE, h: vec![vec![8, 16, 8], vec![16, 32, 16], vec![8, 16, 8]] };
        let s = diamond_layout(&t);
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[2].split_whitespace().collect::<Vec<_>>(), ["8", "32", "8"]);
        assert_eq!(lines[1].split_whitespace().collect::<Vec<_>>(), ["16", "16"]);
        assert_eq!(lines[0].trim(), "8");
    }

    #[test]
    fn table_alignment() {
        let header = ["λ", "N"].map(String::from);
        let rows = vec![vec!["4π²·0".to_string(), "1".to_string()], vec!["4π²·10".to_string(), "12".to_string()]];
        assert_eq!(table(&header, &rows), "λ        N\n4π²·0    1\n4π²·10  12\n");
    }
}
