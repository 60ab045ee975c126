//! Ring parameters and tuples in Z_m^n.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{DucciError, Result};

/// Largest supported modulus; residues are stored in `u32`.
pub const MAX_MODULUS: u64 = u32::MAX as u64;

/// Tuple length `n` and modulus `m` of the state space Z_m^n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RingParams {
    n: usize,
    m: u64,
}

impl RingParams {
    pub fn new(n: usize, m: u64) -> Result<Self> {
        if n == 0 {
            return Err(DucciError::InvalidParams(
                "tuple length n must be at least 1".into(),
            ));
        }
        if m < 2 {
            return Err(DucciError::InvalidParams(format!(
                "modulus m must be at least 2, got {m}"
            )));
        }
        if m > MAX_MODULUS {
            return Err(DucciError::InvalidParams(format!(
                "modulus {m} exceeds the supported maximum {MAX_MODULUS}"
            )));
        }
        Ok(RingParams { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// `m^n`, saturating at `u128::MAX`.
    pub fn state_count(&self) -> u128 {
        let mut total: u128 = 1;
        for _ in 0..self.n {
            total = total.saturating_mul(self.m as u128);
        }
        total
    }

    pub(crate) fn check_same(&self, other: &RingParams) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(DucciError::DimensionMismatch {
                left_n: self.n,
                left_m: self.m,
                right_n: other.n,
                right_m: other.m,
            })
        }
    }
}

impl fmt::Display for RingParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{}^{}", self.m, self.n)
    }
}

/// An element of Z_m^n. Entries are always reduced into `[0, m)`.
///
/// Ordering is lexicographic on the entries, which is the order used for
/// deterministic output.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tuple {
    params: RingParams,
    entries: Vec<u32>,
}

impl Tuple {
    /// Builds a tuple, rejecting entries outside `[0, m)`.
    pub fn new(params: RingParams, entries: &[u64]) -> Result<Self> {
        if entries.len() != params.n() {
            return Err(DucciError::InvalidArgument(format!(
                "expected {} entries, got {}",
                params.n(),
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|&&e| e >= params.m()) {
            return Err(DucciError::InvalidArgument(format!(
                "entry {bad} is not a residue mod {}",
                params.m()
            )));
        }
        Ok(Tuple {
            params,
            entries: entries.iter().map(|&e| e as u32).collect(),
        })
    }

    /// Builds a tuple from arbitrary integers, reducing each one mod m.
    pub fn reduced(params: RingParams, entries: &[i64]) -> Result<Self> {
        let m = params.m() as i64;
        let reduced: Vec<u64> = entries.iter().map(|&e| e.rem_euclid(m) as u64).collect();
        Tuple::new(params, &reduced)
    }

    pub(crate) fn from_raw(params: RingParams, entries: Vec<u32>) -> Self {
        debug_assert_eq!(entries.len(), params.n());
        debug_assert!(entries.iter().all(|&e| (e as u64) < params.m()));
        Tuple { params, entries }
    }

    pub fn zero(params: RingParams) -> Self {
        Tuple::from_raw(params, vec![0; params.n()])
    }

    /// The basic tuple `(0, ..., 0, 1)`.
    pub fn basic(params: RingParams) -> Self {
        let mut entries = vec![0; params.n()];
        entries[params.n() - 1] = 1;
        Tuple::from_raw(params, entries)
    }

    /// Parses the comma format `x1,x2,...,xn` (no spaces).
    pub fn parse(params: RingParams, input: &str) -> Result<Self> {
        let fail = |reason: String| DucciError::Parse {
            input: input.to_string(),
            reason,
        };
        let mut values = Vec::with_capacity(params.n());
        for part in input.split(',') {
            if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(fail(format!(
                    "`{part}` is not a non-negative decimal integer"
                )));
            }
            let v: u64 = part
                .parse()
                .map_err(|_| fail(format!("`{part}` is out of range")))?;
            if v >= params.m() {
                return Err(fail(format!(
                    "entry {v} is not a residue mod {}",
                    params.m()
                )));
            }
            values.push(v);
        }
        if values.len() != params.n() {
            return Err(fail(format!(
                "expected {} entries, got {}",
                params.n(),
                values.len()
            )));
        }
        Tuple::new(params, &values)
    }

    pub fn params(&self) -> RingParams {
        self.params
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub(crate) fn entries_mut(&mut self) -> &mut [u32] {
        &mut self.entries
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.entries.iter().map(|&e| e as u64).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_validation() {
        assert!(RingParams::new(0, 5).is_err());
        assert!(RingParams::new(3, 1).is_err());
        assert!(RingParams::new(3, MAX_MODULUS + 1).is_err());
        assert!(RingParams::new(3, MAX_MODULUS).is_ok());
        assert_eq!(RingParams::new(12, 3).unwrap().state_count(), 531_441);
    }

    #[test]
    fn parse_and_display() {
        let p = RingParams::new(3, 6).unwrap();
        let t = Tuple::parse(p, "0,1,4").unwrap();
        assert_eq!(t.to_vec(), vec![0, 1, 4]);
        assert_eq!(t.to_string(), "0,1,4");
        assert!(Tuple::parse(p, "0,1,6").is_err());
        assert!(Tuple::parse(p, "0,-1,4").is_err());
        assert!(Tuple::parse(p, "0, 1,4").is_err());
        assert!(Tuple::parse(p, "0,1").is_err());
        assert!(Tuple::parse(p, "0,1,4,").is_err());
    }

    #[test]
    fn basic_and_zero() {
        let p = RingParams::new(4, 3).unwrap();
        assert_eq!(Tuple::basic(p).to_string(), "0,0,0,1");
        assert!(Tuple::zero(p).is_zero());
        assert_eq!(
            Tuple::reduced(p, &[-1, 4, 0, 2]).unwrap().to_string(),
            "2,1,0,2"
        );
    }
}
