//! The published tables of closed, weakly closed and not weakly closed
//! spaces, as `(n, m, alpha, beta)` rows.

use std::fmt;
use std::str::FromStr;

use crate::closure::Classification;
use crate::error::{DucciError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PrintedTable {
    Closed,
    Weak,
    Neither,
}

impl PrintedTable {
    pub const ALL: [PrintedTable; 3] = [
        PrintedTable::Closed,
        PrintedTable::Weak,
        PrintedTable::Neither,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            PrintedTable::Closed => "closed",
            PrintedTable::Weak => "weak",
            PrintedTable::Neither => "neither",
        }
    }

    pub fn classification(&self) -> Classification {
        match self {
            PrintedTable::Closed => Classification::HClosed,
            PrintedTable::Weak => Classification::WeaklyHClosed,
            PrintedTable::Neither => Classification::NotWeaklyHClosed,
        }
    }
}

impl fmt::Display for PrintedTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PrintedTable {
    type Err = DucciError;

    fn from_str(s: &str) -> Result<Self> {
        PrintedTable::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| {
                DucciError::InvalidArgument(format!(
                    "unknown table `{s}` (expected closed, weak, neither)"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrintedRow {
    pub table: PrintedTable,
    pub n: usize,
    pub m: u64,
    pub classification: Classification,
    pub alpha: Option<u64>,
    pub beta: Option<i64>,
}

/// `(n, [(m, alpha, beta)])`.
type Block = (usize, &'static [(u64, u64, i64)]);

#[rustfmt::skip]
const CLOSED: &[Block] = &[
    (4, &[(3, 2, -1), (6, 2, -1), (7, 6, -1), (9, 6, 1), (11, 10, -1), (12, 2, -1), (14, 6, -1), (19, 18, -1), (21, 12, -1), (33, 10, -1)]),
    (5, &[(3, 8, -1), (4, 6, -2), (6, 24, 2), (7, 48, -1), (8, 12, 1), (9, 24, 2), (12, 24, 2), (13, 84, -2), (17, 72, 1), (19, 18, -1), (21, 48, -1), (23, 528, -1), (29, 28, -1)]),
    (6, &[(5, 4, -1), (11, 10, -1), (17, 16, -1), (25, 20, 1), (121, 110, 1), (125, 100, -1)]),
    (7, &[(3, 26, -1), (5, 124, -1), (9, 78, -3), (13, 12, -1), (15, 1612, 1), (19, 2286, 2), (27, 234, -2), (41, 40, -1)]),
    (8, &[(7, 6, -1), (23, 22, -1), (31, 30, -1), (47, 46, -1), (49, 42, 1), (98, 42, 1), (161, 66, -3), (322, 66, -3), (2254, 462, 3), (3937, 630, 3)]),
    (9, &[(2, 7, -1), (4, 14, -2), (5, 124, -1), (8, 28, -4), (10, 868, 2), (11, 1330, -1), (17, 16, -1), (53, 53, -1)]),
    (10, &[(3, 8, -1), (7, 48, -1), (9, 24, -3), (13, 168, -1), (17, 288, -1), (19, 18, -1), (29, 28, -1), (361, 342, 1), (841, 812, 1)]),
    (11, &[(2, 31, -1), (4, 62, -2), (7, 16806, -1), (8, 124, -4), (13, 371292, -1), (16, 248, 3), (17, 709928, 5), (43, 42, -1), (109, 108, -1)]),
    (12, &[(11, 10, -1), (23, 22, -1), (121, 110, 1), (529, 506, 1)]),
    (16, &[(31, 30, -1), (47, 46, -1), (62, 30, -1), (79, 78, -1), (124, 30, -1), (961, 930, 1), (1922, 930, 1), (3937, 630, -5), (751967, 11970, 1)]),
    (32, &[(31, 30, -1), (62, 30, -1), (124, 30, -1), (127, 126, -1), (191, 190, -1), (961, 930, 1), (1922, 930, 1)]),
];

#[rustfmt::skip]
const WEAK: &[Block] = &[
    (4, &[(21, 12, 2), (77, 60, 2), (539, 420, 2), (847, 660, 2)]),
    (6, &[(4, 4, 2), (8, 8, -2), (10, 8, -2), (22, 20, -2), (34, 32, -2), (55, 40, 2)]),
    (8, &[(4991, 660, 2), (9982, 660, 2), (234577, 15180, -2)]),
    (9, &[(7, 114, 3), (13, 732, -3), (14, 798, 3), (35, 7068, -3)]),
    (10, &[(2, 6, -2), (4, 12, -4), (6, 48, 4), (8, 24, 2), (12, 48, 4), (21, 96, -2), (26, 336, -2)]),
    (12, &[(3, 6, -3), (4, 8, 4), (8, 16, -4), (9, 18, 3), (16, 32, 4), (27, 54, -3), (33, 30, -3)]),
    (16, &[(1457, 1380, 2), (2914, 1380, 2), (45167, 42780, -2)]),
    (32, &[(3937, 1260, -10), (751967, 23940, 2)]),
];

#[rustfmt::skip]
const NEITHER: &[(usize, &[u64])] = &[
    (4, &[5, 10, 13]),
    (5, &[5, 10, 11]),
    (6, &[3, 6, 7, 9, 12]),
    (7, &[2, 4, 6, 7, 8, 10, 11, 12]),
    (8, &[3, 5, 6, 9, 10, 11, 12, 21, 63]),
    (9, &[3, 6, 9, 12, 15]),
    (10, &[5, 10, 11]),
    (11, &[3, 5, 6, 9, 10, 11, 12]),
    (12, &[2, 5, 6, 7, 10, 12]),
    (16, &[3, 5, 6, 7, 9, 10, 11, 12, 93, 279, 85399]),
    (32, &[3, 5, 6, 7, 9, 10, 12, 93, 279]),
];

fn relation_rows(table: PrintedTable, rows: &[Block]) -> Vec<PrintedRow> {
    rows.iter()
        .flat_map(|&(n, rows)| {
            rows.iter().map(move |&(m, alpha, beta)| PrintedRow {
                table,
                n,
                m,
                classification: table.classification(),
                alpha: Some(alpha),
                beta: Some(beta),
            })
        })
        .collect()
}

/// Rows printed in the given table, in printed order.
pub fn rows(table: PrintedTable) -> Vec<PrintedRow> {
    match table {
        PrintedTable::Closed => relation_rows(table, CLOSED),
        PrintedTable::Weak => relation_rows(table, WEAK),
        PrintedTable::Neither => NEITHER
            .iter()
            .flat_map(|&(n, ms)| {
                ms.iter().map(move |&m| PrintedRow {
                    table,
                    n,
                    m,
                    classification: table.classification(),
                    alpha: None,
                    beta: None,
                })
            })
            .collect(),
    }
}
