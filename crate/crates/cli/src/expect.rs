//! Expected rows and per-row agreement against sweep results.

use std::path::Path;

use ducci::closure::Classification;
use ducci::printed::{rows as printed_rows, PrintedRow, PrintedTable};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::sweep::SweepRow;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expectation {
    pub n: usize,
    pub m: u64,
    pub classification: Classification,
    pub alpha: Option<u64>,
    pub beta: Option<i64>,
    pub source: String,
}

impl Expectation {
    fn from_printed(row: &PrintedRow) -> Self {
        Expectation {
            n: row.n,
            m: row.m,
            classification: row.classification,
            alpha: row.alpha,
            beta: row.beta,
            source: format!("printed {}", row.table),
        }
    }
}

pub fn printed_expectations(table: PrintedTable) -> Vec<Expectation> {
    printed_rows(table)
        .iter()
        .map(Expectation::from_printed)
        .collect()
}

#[derive(Debug, Deserialize)]
struct ExpectLine {
    n: usize,
    m: u64,
    classification: String,
    alpha: Option<u64>,
    beta: Option<i64>,
}

/// Reads `n,m,classification,alpha,beta` rows; alpha and beta may be empty.
pub fn read_expect_csv(path: &Path) -> CliResult<Vec<Expectation>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)?;
    let source = path.display().to_string();
    let mut out = Vec::new();
    for line in reader.deserialize::<ExpectLine>() {
        let line = line?;
        let classification = Classification::parse(&line.classification).ok_or_else(|| {
            CliError::Invalid(format!(
                "{source}: unknown classification `{}`",
                line.classification
            ))
        })?;
        out.push(Expectation {
            n: line.n,
            m: line.m,
            classification,
            alpha: line.alpha,
            beta: line.beta,
            source: source.clone(),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Agree,
    Disagree,
    Unresolved,
    NotInSweep,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Agree => "agree",
            Status::Disagree => "disagree",
            Status::Unresolved => "unresolved",
            Status::NotInSweep => "not-in-sweep",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Agreement {
    pub expected: Expectation,
    pub observed_classification: Option<Classification>,
    pub observed_alpha: Option<u64>,
    pub observed_beta: Option<i64>,
    pub status: Status,
}

/// Relation values are compared only when the expectation prints them.
pub fn compare(expectations: &[Expectation], rows: &[SweepRow]) -> Vec<Agreement> {
    expectations
        .iter()
        .map(|exp| {
            let row = rows.iter().find(|r| r.n == exp.n && r.m == exp.m);
            let report = row.and_then(|r| r.report());
            let status = match (row, report) {
                (None, _) => Status::NotInSweep,
                (Some(_), None) => Status::Unresolved,
                (Some(_), Some(rep)) => {
                    let same = rep.classification == exp.classification
                        && (exp.alpha.is_none() || exp.alpha == rep.alpha_min)
                        && (exp.beta.is_none() || exp.beta == rep.beta_canonical);
                    if same {
                        Status::Agree
                    } else {
                        Status::Disagree
                    }
                }
            };
            Agreement {
                expected: exp.clone(),
                observed_classification: report.map(|r| r.classification),
                observed_alpha: report.and_then(|r| r.alpha_min),
                observed_beta: report.and_then(|r| r.beta_canonical),
                status,
            }
        })
        .collect()
}
