//! Shift-closure classification from the basic Ducci sequence.
//!
//! With `L = L_m(n)`, `P = P_m(n)` and `w = D^L(0, ..., 0, 1)`, the space is
//! classified by the smallest `alpha >= 1` for which `D^alpha(w)` is a
//! rotation `H^beta(w)`. Linearity of `D` and its commutation with `H`
//! carry any such relation from `w` to every element of `K(Z_m^n)`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::dynamics::{
    apply_power, basic_info_with_budget, shift, step_in_place, DEFAULT_MAX_STEPS,
};
use crate::error::{DucciError, Result};
use crate::ring::{RingParams, Tuple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Classification {
    #[serde(rename = "h-closed")]
    HClosed,
    /// Every orbit falls into the zero tuple.
    #[serde(rename = "h-closed-trivial")]
    HClosedTrivial,
    #[serde(rename = "weakly-h-closed")]
    WeaklyHClosed,
    #[serde(rename = "not-weakly-h-closed")]
    NotWeaklyHClosed,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::HClosed => "h-closed",
            Classification::HClosedTrivial => "h-closed-trivial",
            Classification::WeaklyHClosed => "weakly-h-closed",
            Classification::NotWeaklyHClosed => "not-weakly-h-closed",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            Classification::HClosed,
            Classification::HClosedTrivial,
            Classification::WeaklyHClosed,
            Classification::NotWeaklyHClosed,
        ]
        .into_iter()
        .find(|c| c.as_str() == s)
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Result of [`classify_fast`]. Serializes to the report JSON schema.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HClosureReport {
    pub n: usize,
    pub m: u64,
    #[serde(rename = "L")]
    pub len: u64,
    #[serde(rename = "P")]
    pub per: u64,
    pub classification: Classification,
    #[serde(rename = "alpha")]
    pub alpha_min: Option<u64>,
    /// Shifts `beta` in `0..n` with `D^alpha_min(w) = H^beta(w)`.
    pub betas_raw: Vec<u64>,
    pub beta_canonical: Option<i64>,
    pub gamma: Option<u64>,
    #[serde(rename = "anomalies")]
    pub anomaly_flags: Vec<String>,
    #[serde(rename = "steps")]
    pub steps_used: u64,
}

impl HClosureReport {
    pub fn params(&self) -> RingParams {
        RingParams::new(self.n, self.m).expect("report built from valid params")
    }
}

/// All `beta` in `0..n` with `x = H^beta(w)`.
pub fn rotation_matches(w: &Tuple, x: &Tuple) -> Result<BTreeSet<u64>> {
    w.params().check_same(&x.params())?;
    let n = w.params().n();
    Ok((0..n)
        .filter(|&beta| shift(w, beta as i64) == *x)
        .map(|b| b as u64)
        .collect())
}

/// Representative of `beta mod n` in `(-n, n)` with the smallest absolute
/// value; ties go to the positive one.
pub fn canonical_beta(beta: u64, n: usize) -> i64 {
    let n = n as i64;
    let pos = (beta as i64).rem_euclid(n);
    let neg = pos - n;
    if pos <= -neg {
        pos
    } else {
        neg
    }
}

fn canonical_over(betas: &[u64], n: usize) -> Option<i64> {
    betas
        .iter()
        .map(|&b| canonical_beta(b, n))
        .filter(|&b| b != 0)
        .min_by_key(|&b| (b.abs(), b < 0))
}

/// Closure is only meaningful when a nonzero shift exists.
pub(crate) fn require_rotations(params: RingParams) -> Result<()> {
    if params.n() < 2 {
        return Err(DucciError::InvalidArgument(
            "classification needs n >= 2 (no nonzero shift exists for n = 1)".into(),
        ));
    }
    Ok(())
}

/// Classifies `Z_m^n` under the default step budget.
pub fn classify_fast(params: RingParams) -> Result<HClosureReport> {
    classify_fast_with_budget(params, DEFAULT_MAX_STEPS)
}

/// Classifies `Z_m^n`; `max_steps` bounds cycle detection plus the rotation walk.
pub fn classify_fast_with_budget(params: RingParams, max_steps: u64) -> Result<HClosureReport> {
    require_rotations(params)?;
    let (info, mut steps) = basic_info_with_budget(params, max_steps)?;
    let n = params.n();
    let m = params.m();
    let w = info.cycle_base.clone();

    let mut report = HClosureReport {
        n,
        m,
        len: info.len,
        per: info.per,
        classification: Classification::HClosedTrivial,
        alpha_min: None,
        betas_raw: Vec::new(),
        beta_canonical: None,
        gamma: None,
        anomaly_flags: Vec::new(),
        steps_used: steps,
    };
    if w.is_zero() {
        return Ok(report);
    }

    let rotations: Vec<Tuple> = (0..n).map(|b| shift(&w, b as i64)).collect();
    let heads: Vec<u32> = rotations.iter().map(|r| r.entries()[0]).collect();

    let mut x = w.clone();
    let mut hit = None;
    for alpha in 1..=info.per {
        step_in_place(x.entries_mut(), m);
        steps += 1;
        if steps > max_steps {
            return Err(DucciError::StepBudget {
                budget: max_steps,
                steps,
            });
        }
        let head = x.entries()[0];
        let matches: Vec<u64> = (0..n)
            .filter(|&b| heads[b] == head && rotations[b] == x)
            .map(|b| b as u64)
            .collect();
        if !matches.is_empty() {
            hit = Some((alpha, matches));
            break;
        }
    }
    report.steps_used = steps;
    let (alpha, betas) = hit.expect("D^P(w) = w closes the walk");

    let stabilizer: Vec<u64> = (0..n)
        .filter(|&b| rotations[b] == w)
        .map(|b| b as u64)
        .collect();
    if stabilizer.len() > 1 {
        report.anomaly_flags.push(format!(
            "nontrivial-stabilizer:{}",
            stabilizer
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(";")
        ));
    }

    if alpha == info.per && betas == [0] {
        report.classification = Classification::NotWeaklyHClosed;
        return Ok(report);
    }

    let closed = betas.iter().any(|&b| gcd(b, n as u64) == 1);
    report.classification = if closed {
        Classification::HClosed
    } else {
        Classification::WeaklyHClosed
    };
    let gamma = info.per / alpha;
    let beta = canonical_over(&betas, n);
    report.alpha_min = Some(alpha);
    report.betas_raw = betas;
    report.beta_canonical = beta;
    report.gamma = Some(gamma);

    if stabilizer.len() == 1 {
        let nn = n as u64;
        match report.classification {
            Classification::HClosed if gamma != nn => {
                report.anomaly_flags.push(format!("gamma-not-n:{gamma}"));
            }
            Classification::WeaklyHClosed => {
                if gamma >= nn {
                    report
                        .anomaly_flags
                        .push(format!("gamma-not-below-n:{gamma}"));
                }
                if let Some(b) = beta {
                    if gcd(b.unsigned_abs(), nn) == 1 {
                        report.anomaly_flags.push(format!("beta-coprime:{b}"));
                    }
                }
            }
            _ => {}
        }
    }
    Ok(report)
}

/// `D^(L + alpha)(e) == H^beta(D^L(e))` for the basic tuple `e`.
pub fn verify_relation(params: RingParams, alpha: u64, beta: i64) -> Result<bool> {
    verify_relation_with_budget(params, alpha, beta, DEFAULT_MAX_STEPS)
}

pub fn verify_relation_with_budget(
    params: RingParams,
    alpha: u64,
    beta: i64,
    max_steps: u64,
) -> Result<bool> {
    if alpha == 0 {
        return Err(DucciError::InvalidArgument(
            "alpha must be at least 1".into(),
        ));
    }
    let (info, _) = basic_info_with_budget(params, max_steps)?;
    Ok(relation_holds_at(&info.cycle_base, alpha, beta))
}

/// `D^alpha(w) == H^beta(w)`.
pub fn relation_holds_at(w: &Tuple, alpha: u64, beta: i64) -> bool {
    apply_power(w, alpha) == shift(w, beta)
}
