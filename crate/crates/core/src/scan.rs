//! Scanners for the conjectured closure families. Scanners only report
//! agreement; they never fail.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::arith::{euler_phi, is_power_of_two, is_prime};
use crate::closure::{
    classify_fast_with_budget, relation_holds_at, Classification, HClosureReport,
};
use crate::dynamics::basic_info_with_budget;
use crate::error::{DucciError, Result};
use crate::ring::{RingParams, MAX_MODULUS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// n even, `m = p^l`, `p = -1 (mod n)`: `D^phi(m) = H^((-1)^l)`.
    EvenPrimePower,
    /// n a power of 2, `m = 2^k p^l`, `p = -1 (mod n)`: `D^(p-1) = H^((-1)^k)`.
    Pow2TimesPrimePower,
    /// n a power of 2, `m = p1^l1 p2^l2`, both primes `-1 (mod n)`: closed or weakly closed.
    Pow2TwoPrimes,
    /// n = 4, `m = p1^l1 p2^l2`, primes `3 (mod 4)` other than 3: `D^phi(m) = H^2`.
    FourTwoPrimes,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::EvenPrimePower,
        Family::Pow2TimesPrimePower,
        Family::Pow2TwoPrimes,
        Family::FourTwoPrimes,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Family::EvenPrimePower => "even-prime-power",
            Family::Pow2TimesPrimePower => "pow2-times-prime-power",
            Family::Pow2TwoPrimes => "pow2-two-primes",
            Family::FourTwoPrimes => "n4-two-primes",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = DucciError;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| DucciError::InvalidArgument(format!("unknown family `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRanges {
    pub ns: Vec<usize>,
    pub p_max: u64,
    /// Largest odd-prime exponent.
    pub exp_max: u32,
    /// Largest power of two in m (family B).
    pub two_exp_max: u32,
    pub m_max: u64,
    pub max_steps: u64,
}

impl Default for ScanRanges {
    fn default() -> Self {
        ScanRanges {
            ns: vec![4, 6, 8],
            p_max: 50,
            exp_max: 2,
            two_exp_max: 2,
            m_max: 1_000_000,
            max_steps: crate::dynamics::DEFAULT_MAX_STEPS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub family: Family,
    pub n: usize,
    pub m: u64,
    /// Predicted `(alpha, beta)` relation, if the family names one.
    pub predicted: Option<(u64, i64)>,
    pub relation_holds: Option<bool>,
    pub report: Option<HClosureReport>,
    pub error: Option<String>,
    pub agrees: bool,
}

fn sign(k: u32) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

fn pow_capped(base: u64, exp: u32, cap: u64) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc = acc.checked_mul(base).filter(|&v| v <= cap)?;
    }
    Some(acc)
}

fn primes_minus_one_mod(n: usize, p_max: u64) -> Vec<u64> {
    (2..=p_max)
        .filter(|&p| is_prime(p) && (p + 1) % n as u64 == 0)
        .collect()
}

/// `(n, m, predicted relation)` for every member of the family within range.
pub fn generate(family: Family, ranges: &ScanRanges) -> Vec<(usize, u64, Option<(u64, i64)>)> {
    let cap = ranges.m_max.min(MAX_MODULUS);
    let mut out = Vec::new();
    for &n in &ranges.ns {
        if n < 2 {
            continue;
        }
        match family {
            Family::EvenPrimePower => {
                if n % 2 != 0 {
                    continue;
                }
                for p in primes_minus_one_mod(n, ranges.p_max) {
                    for l in 1..=ranges.exp_max {
                        if let Some(m) = pow_capped(p, l, cap) {
                            out.push((n, m, Some((euler_phi(m), sign(l)))));
                        }
                    }
                }
            }
            Family::Pow2TimesPrimePower => {
                if !is_power_of_two(n as u64) {
                    continue;
                }
                for p in primes_minus_one_mod(n, ranges.p_max) {
                    for l in 1..=ranges.exp_max {
                        for k in 0..=ranges.two_exp_max {
                            let m = pow_capped(p, l, cap)
                                .and_then(|pl| pl.checked_mul(1u64 << k))
                                .filter(|&m| m <= cap);
                            if let Some(m) = m {
                                out.push((n, m, Some((p - 1, sign(k)))));
                            }
                        }
                    }
                }
            }
            Family::Pow2TwoPrimes | Family::FourTwoPrimes => {
                let four = family == Family::FourTwoPrimes;
                if four && n != 4 {
                    continue;
                }
                if !four && !is_power_of_two(n as u64) {
                    continue;
                }
                let primes: Vec<u64> = primes_minus_one_mod(n, ranges.p_max)
                    .into_iter()
                    .filter(|&p| !four || p != 3)
                    .collect();
                for (i, &p1) in primes.iter().enumerate() {
                    for &p2 in &primes[i + 1..] {
                        for l1 in 1..=ranges.exp_max {
                            for l2 in 1..=ranges.exp_max {
                                let m = pow_capped(p1, l1, cap)
                                    .zip(pow_capped(p2, l2, cap))
                                    .and_then(|(a, b)| a.checked_mul(b))
                                    .filter(|&m| m <= cap);
                                if let Some(m) = m {
                                    let predicted = four.then(|| (euler_phi(m), 2));
                                    out.push((n, m, predicted));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out.sort_by_key(|&(n, m, _)| (n, m));
    out.dedup_by_key(|&mut (n, m, _)| (n, m));
    out
}

fn scan_one(
    family: Family,
    n: usize,
    m: u64,
    predicted: Option<(u64, i64)>,
    max_steps: u64,
) -> ScanRow {
    let mut row = ScanRow {
        family,
        n,
        m,
        predicted,
        relation_holds: None,
        report: None,
        error: None,
        agrees: false,
    };
    let outcome = (|| -> Result<()> {
        let params = RingParams::new(n, m)?;
        let report = classify_fast_with_budget(params, max_steps)?;
        let closed = matches!(
            report.classification,
            Classification::HClosed | Classification::WeaklyHClosed
        );
        row.report = Some(report);
        row.agrees = match predicted {
            Some((alpha, beta)) => {
                let (info, _) = basic_info_with_budget(params, max_steps)?;
                let holds = relation_holds_at(&info.cycle_base, alpha, beta);
                row.relation_holds = Some(holds);
                holds
            }
            None => closed,
        };
        Ok(())
    })();
    if let Err(e) = outcome {
        row.error = Some(e.to_string());
        row.agrees = false;
    }
    row
}

pub fn scan_conjectures(family: Family, ranges: &ScanRanges) -> Vec<ScanRow> {
    generate(family, ranges)
        .into_iter()
        .map(|(n, m, predicted)| scan_one(family, n, m, predicted, ranges.max_steps))
        .collect()
}
