//! Text, CSV and JSON emitters.

use clap::ValueEnum;
use ducci::closure::HClosureReport;
use serde_json::{json, Value};

use crate::expect::Agreement;
use crate::sweep::{RowOutcome, SweepRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub const REPORT_COLUMNS: [&str; 9] = [
    "n",
    "m",
    "L",
    "P",
    "alpha",
    "beta_canonical",
    "betas_raw",
    "gamma",
    "classification",
];

/// Table sections, in output order.
pub const SECTIONS: [&str; 5] = [
    "h-closed",
    "weakly-h-closed",
    "not-weakly-h-closed",
    "h-closed-trivial",
    "unresolved",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn betas(report: &HClosureReport) -> String {
    report
        .betas_raw
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(";")
}

fn report_fields(r: &HClosureReport) -> [String; 9] {
    [
        r.n.to_string(),
        r.m.to_string(),
        r.len.to_string(),
        r.per.to_string(),
        opt(r.alpha_min),
        opt(r.beta_canonical),
        betas(r),
        opt(r.gamma),
        r.classification.to_string(),
    ]
}

fn row_fields(row: &SweepRow) -> [String; 9] {
    match &row.outcome {
        RowOutcome::Resolved(r) => report_fields(r),
        RowOutcome::Unresolved(_) => {
            let mut f: [String; 9] = Default::default();
            f[0] = row.n.to_string();
            f[1] = row.m.to_string();
            f[8] = "unresolved".into();
            f
        }
    }
}

fn section_of(row: &SweepRow) -> &'static str {
    match &row.outcome {
        RowOutcome::Resolved(r) => r.classification.as_str(),
        RowOutcome::Unresolved(_) => "unresolved",
    }
}

fn csv_text<I, R>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("write to memory");
    for row in rows {
        w.write_record(row).expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 fields")
}

fn aligned(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out += &line(row.iter().map(String::as_str).collect());
    }
    out
}

pub fn render_report(report: &HClosureReport, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string(report).expect("report serializes") + "\n",
        Format::Csv => csv_text(&REPORT_COLUMNS, [report_fields(report)]),
        Format::Text => {
            let mut out = format!("{} {}\n", report.params(), report.classification);
            for (k, v) in REPORT_COLUMNS
                .iter()
                .zip(report_fields(report))
                .skip(2)
                .take(6)
            {
                let v = if v.is_empty() { "-".to_string() } else { v };
                out += &format!("  {k}: {v}\n");
            }
            if !report.anomaly_flags.is_empty() {
                out += &format!("  anomalies: {}\n", report.anomaly_flags.join(" "));
            }
            out += &format!("  steps: {}\n", report.steps_used);
            out
        }
    }
}

fn table_json(rows: &[SweepRow]) -> Value {
    let mut sections = serde_json::Map::new();
    for name in SECTIONS {
        let items: Vec<Value> = rows
            .iter()
            .filter(|r| section_of(r) == name)
            .map(|r| match &r.outcome {
                RowOutcome::Resolved(rep) => serde_json::to_value(rep).expect("report serializes"),
                RowOutcome::Unresolved(reason) => json!({"n": r.n, "m": r.m, "reason": reason}),
            })
            .collect();
        sections.insert(name.to_string(), Value::Array(items));
    }
    Value::Object(sections)
}

const AGREEMENT_COLUMNS: [&str; 10] = [
    "n",
    "m",
    "source",
    "expected_classification",
    "expected_alpha",
    "expected_beta",
    "observed_classification",
    "observed_alpha",
    "observed_beta",
    "status",
];

fn agreement_fields(a: &Agreement) -> Vec<String> {
    vec![
        a.expected.n.to_string(),
        a.expected.m.to_string(),
        a.expected.source.clone(),
        a.expected.classification.to_string(),
        opt(a.expected.alpha),
        opt(a.expected.beta),
        opt(a.observed_classification),
        opt(a.observed_alpha),
        opt(a.observed_beta),
        a.status.as_str().to_string(),
    ]
}

/// Rows grouped by classification, followed by the agreement block when
/// there are expectations.
pub fn render_table(rows: &[SweepRow], agreement: &[Agreement], format: Format) -> String {
    match format {
        Format::Json => {
            let mut doc = json!({ "sections": table_json(rows) });
            if !agreement.is_empty() {
                doc["agreement"] = serde_json::to_value(agreement).expect("agreement serializes");
            }
            serde_json::to_string_pretty(&doc).expect("table serializes") + "\n"
        }
        Format::Csv => {
            let ordered = SECTIONS
                .iter()
                .flat_map(|name| rows.iter().filter(move |r| section_of(r) == *name))
                .map(row_fields);
            let mut out = csv_text(&REPORT_COLUMNS, ordered);
            if !agreement.is_empty() {
                out.push('\n');
                out += &csv_text(&AGREEMENT_COLUMNS, agreement.iter().map(agreement_fields));
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for name in SECTIONS {
                let section: Vec<Vec<String>> = rows
                    .iter()
                    .filter(|r| section_of(r) == name)
                    .map(|r| row_fields(r)[..8].to_vec())
                    .collect();
                if section.is_empty() {
                    continue;
                }
                if !out.is_empty() {
                    out.push('\n');
                }
                out += &format!("{name} ({})\n", section.len());
                out += &aligned(&REPORT_COLUMNS[..8], &section);
            }
            if !agreement.is_empty() {
                let agree = agreement
                    .iter()
                    .filter(|a| a.status.as_str() == "agree")
                    .count();
                out += &format!("\nagreement ({agree} of {})\n", agreement.len());
                let lines: Vec<Vec<String>> = agreement.iter().map(agreement_fields).collect();
                out += &aligned(&AGREEMENT_COLUMNS, &lines);
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ducci::closure::classify_fast;
    use ducci::RingParams;

    fn report(n: usize, m: u64) -> HClosureReport {
        classify_fast(RingParams::new(n, m).unwrap()).unwrap()
    }

    #[test]
    fn report_csv() {
        let out = render_report(&report(4, 3), Format::Csv);
        let mut lines = out.lines();
        assert_eq!(
            lines.next(),
            Some("n,m,L,P,alpha,beta_canonical,betas_raw,gamma,classification")
        );
        let row = lines.next().unwrap();
        assert!(row.starts_with("4,3,"), "{row}");
        assert!(row.ends_with(",2,-1,3,4,h-closed"), "{row}");
    }

    #[test]
    fn report_json() {
        let v: Value = serde_json::from_str(&render_report(&report(4, 3), Format::Json)).unwrap();
        assert_eq!(v["classification"], "h-closed");
        assert_eq!(v["alpha"], 2);
        assert_eq!(v["beta_canonical"], -1);
    }

    #[test]
    fn table_sections_in_order() {
        let rows: Vec<SweepRow> = [(4, 3), (6, 4), (7, 2), (2, 2)]
            .into_iter()
            .map(|(n, m)| SweepRow {
                n,
                m,
                outcome: RowOutcome::Resolved(report(n, m)),
                cached: false,
            })
            .chain([SweepRow {
                n: 11,
                m: 17,
                outcome: RowOutcome::Unresolved("budget".into()),
                cached: false,
            }])
            .collect();
        let text = render_table(&rows, &[], Format::Text);
        let heads: Vec<&str> = text.lines().filter(|l| l.contains(" (1)")).collect();
        assert_eq!(
            heads,
            [
                "h-closed (1)",
                "weakly-h-closed (1)",
                "not-weakly-h-closed (1)",
                "h-closed-trivial (1)",
                "unresolved (1)"
            ]
        );
        let csv = render_table(&rows, &[], Format::Csv);
        assert_eq!(csv.lines().last(), Some("11,17,,,,,,,unresolved"));
        let v: Value = serde_json::from_str(&render_table(&rows, &[], Format::Json)).unwrap();
        assert_eq!(v["sections"]["weakly-h-closed"][0]["m"], 4);
        assert!(v.get("agreement").is_none());
    }
}
