//! JSON and CSV renderings of verification reports.
//!
//! Residues are decimal strings. Valuations render as an integer, `inf`
//! for an exactly vanishing residual, or `>=k` when the modular path only
//! knows a lower bound.

use serde::Serialize;

use super::{ComponentVerdict, PrimeReport, Summary, VerificationReport};

#[derive(Serialize)]
struct ComponentRow {
    radicand: i64,
    modulus_exponent: u32,
    expected: Option<String>,
    actual: Option<String>,
    modulus: Option<String>,
    valuation: Option<String>,
    pass: bool,
    applicable: bool,
}

#[derive(Serialize)]
struct PrimeRow {
    prime: u64,
    exact_checked: bool,
    modular_checked: bool,
    applicable: bool,
    components: Vec<ComponentRow>,
}

#[derive(Serialize)]
struct SummaryRow {
    primes: usize,
    passed: usize,
    failed: usize,
    inapplicable: usize,
}

#[derive(Serialize)]
struct ReportRow<'a> {
    series: &'a str,
    p_lo: u64,
    p_hi: u64,
    path: String,
    mod_power: Option<u32>,
    primes: Vec<PrimeRow>,
    summary: SummaryRow,
}

pub fn valuation_text(v: &ComponentVerdict) -> Option<String> {
    v.residual_valuation.map(|val| if v.valuation_is_lower_bound { format!(">={val}") } else { val.to_string() })
}

fn component_row(v: &ComponentVerdict) -> ComponentRow {
    ComponentRow {
        radicand: v.radicand.get(),
        modulus_exponent: v.modulus_exponent,
        expected: v.expected_residue.as_ref().map(|r| r.value().to_string()),
        actual: v.actual_residue.as_ref().map(|r| r.value().to_string()),
        modulus: v.expected_residue.as_ref().map(|r| r.modulus().to_string()),
        valuation: valuation_text(v),
        pass: v.pass,
        applicable: v.applicable,
    }
}

fn prime_row(p: &PrimeReport) -> PrimeRow {
    PrimeRow {
        prime: p.prime,
        exact_checked: p.exact_checked,
        modular_checked: p.modular_checked,
        applicable: p.applicable,
        components: p.components.iter().map(component_row).collect(),
    }
}

fn summary_row(s: &Summary) -> SummaryRow {
    SummaryRow { primes: s.primes, passed: s.passed, failed: s.failed, inapplicable: s.inapplicable }
}

fn report_row(r: &VerificationReport) -> ReportRow<'_> {
    ReportRow {
        series: &r.series,
        p_lo: r.p_lo,
        p_hi: r.p_hi,
        path: r.path.to_string(),
        mod_power: r.mod_power,
        primes: r.primes.iter().map(prime_row).collect(),
        summary: summary_row(&r.summary),
    }
}

/// Pretty JSON array with one object per report.
pub fn to_json(reports: &[VerificationReport]) -> String {
    let rows: Vec<ReportRow<'_>> = reports.iter().map(report_row).collect();
    let mut s = serde_json::to_string_pretty(&rows).expect("reports serialize");
    s.push('\n');
    s
}

/// One CSV row per prime and component.
pub fn to_csv(reports: &[VerificationReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["series", "prime", "radicand", "expected", "actual", "modulus", "valuation", "pass", "applicable"])
        .expect("in-memory write");
    for r in reports {
        for v in r.verdicts() {
            let opt = |s: Option<String>| s.unwrap_or_default();
            w.write_record([
                r.series.clone(),
                v.prime.to_string(),
                v.radicand.get().to_string(),
                opt(v.expected_residue.as_ref().map(|x| x.value().to_string())),
                opt(v.actual_residue.as_ref().map(|x| x.value().to_string())),
                opt(v.expected_residue.as_ref().map(|x| x.modulus().to_string())),
                opt(valuation_text(v)),
                v.pass.to_string(),
                v.applicable.to_string(),
            ])
            .expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("csv output is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin;
    use crate::congruence::{verify_series, VerifyOptions, VerifyPath};

    #[test]
    fn csv_has_one_row_per_check() {
        let spec = builtin("EX2").unwrap();
        let r = verify_series(&spec, &VerifyOptions::new(2, 20, VerifyPath::Exact)).unwrap();
        let csv = to_csv(&[r]);
        let lines: Vec<&str> = csv.lines().collect();
        // primes 11, 13, 17, 19 with two components each
        assert_eq!(lines.len(), 1 + 8);
        assert!(lines[1].starts_with("EX2,11,1,"));
        assert!(lines[1].ends_with(",true,true"));
    }

    #[test]
    fn json_shape() {
        let spec = builtin("EX1").unwrap();
        let r = verify_series(&spec, &VerifyOptions::new(2, 7, VerifyPath::Exact)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&to_json(&[r])).unwrap();
        let c = &v[0]["primes"][0]["components"][0];
        assert_eq!(c["expected"], "217");
        assert_eq!(c["actual"], "217");
        assert_eq!(c["modulus"], "343");
        assert_eq!(v[0]["summary"]["passed"], 1);
        assert_eq!(v[0]["path"], "exact");
    }
}
