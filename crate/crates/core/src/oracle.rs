//! Brute-force classification straight from the definitions: enumerate
//! every state, join `u` with `D(u)` in a union-find, and compare
//! components of `u` and its rotations.

use serde::{Deserialize, Serialize};

use crate::closure::Classification;
use crate::dynamics::step_in_place;
use crate::error::{DucciError, Result};
use crate::ring::{RingParams, Tuple};

pub const DEFAULT_MAX_STATES: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub n: usize,
    pub m: u64,
    pub component_count: u64,
    /// `beta` such that `S(u) = S(H^beta(u))` for every `u`.
    pub universal_betas: Vec<u64>,
    /// Every `u` has some `beta != 0` with `S(u) = S(H^beta(u))`.
    pub per_state_weak: bool,
    pub classification: Classification,
    pub states_visited: u64,
}

pub(crate) struct DisjointSets {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl DisjointSets {
    pub(crate) fn new(size: usize) -> Self {
        DisjointSets {
            parent: (0..size as u32).collect(),
            rank: vec![0; size],
        }
    }

    pub(crate) fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    pub(crate) fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (ka, kb) = (self.rank[ra as usize], self.rank[rb as usize]);
        if ka < kb {
            self.parent[ra as usize] = rb;
        } else if ka > kb {
            self.parent[rb as usize] = ra;
        } else {
            self.parent[rb as usize] = ra;
            self.rank[ra as usize] += 1;
        }
    }
}

/// Mixed-radix index of a tuple, first entry most significant.
pub(crate) fn encode(entries: &[u32], m: u64) -> u64 {
    entries.iter().fold(0u64, |acc, &e| acc * m + e as u64)
}

pub(crate) fn decode(mut index: u64, m: u64, out: &mut [u32]) {
    for slot in out.iter_mut().rev() {
        *slot = (index % m) as u32;
        index /= m;
    }
}

/// Component root for every state of `Z_m^n`, indexed in the order of
/// [`enumerate_states`].
pub fn component_labels(params: RingParams, state_cap: u64) -> Result<Vec<u32>> {
    let states = params.state_count();
    if states > state_cap as u128 || states > u32::MAX as u128 {
        return Err(DucciError::StateCap {
            states,
            cap: state_cap,
        });
    }
    let (n, m) = (params.n(), params.m());
    let size = states as usize;
    let mut sets = DisjointSets::new(size);
    let mut buf = vec![0u32; n];
    for idx in 0..size as u64 {
        decode(idx, m, &mut buf);
        step_in_place(&mut buf, m);
        sets.union(idx as u32, encode(&buf, m) as u32);
    }
    Ok((0..size as u32).map(|i| sets.find(i)).collect())
}

pub fn classify_oracle(params: RingParams, state_cap: u64) -> Result<OracleReport> {
    crate::closure::require_rotations(params)?;
    let labels = component_labels(params, state_cap)?;
    let (n, m) = (params.n(), params.m());
    let size = labels.len();

    let component_count = labels
        .iter()
        .enumerate()
        .filter(|&(i, &root)| i as u32 == root)
        .count() as u64;

    let mut universal = vec![true; n];
    let mut per_state_weak = true;
    let mut buf = vec![0u32; n];
    for idx in 0..size {
        decode(idx as u64, m, &mut buf);
        let mut any = false;
        for ok in universal.iter_mut().skip(1) {
            buf.rotate_left(1);
            let same = labels[encode(&buf, m) as usize] == labels[idx];
            *ok &= same;
            any |= same;
        }
        per_state_weak &= any;
    }
    let universal_betas: Vec<u64> = universal
        .iter()
        .enumerate()
        .filter(|(_, &ok)| ok)
        .map(|(b, _)| b as u64)
        .collect();

    let classification = if component_count == 1 {
        Classification::HClosedTrivial
    } else if universal_betas.len() == n {
        Classification::HClosed
    } else if per_state_weak {
        Classification::WeaklyHClosed
    } else {
        Classification::NotWeaklyHClosed
    };

    Ok(OracleReport {
        n,
        m,
        component_count,
        universal_betas,
        per_state_weak,
        classification,
        states_visited: size as u64,
    })
}

/// Every state of a small space, in index order.
pub fn enumerate_states(params: RingParams, state_cap: u64) -> Result<Vec<Tuple>> {
    let states = params.state_count();
    if states > state_cap as u128 {
        return Err(DucciError::StateCap {
            states,
            cap: state_cap,
        });
    }
    let mut buf = vec![0u32; params.n()];
    Ok((0..states as u64)
        .map(|idx| {
            decode(idx, params.m(), &mut buf);
            Tuple::from_raw(params, buf.clone())
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, m: u64) -> RingParams {
        RingParams::new(n, m).unwrap()
    }

    #[test]
    fn encode_roundtrip() {
        let mut buf = [0u32; 3];
        decode(encode(&[3, 4, 5], 6), 6, &mut buf);
        assert_eq!(buf, [3, 4, 5]);
        assert_eq!(encode(&[0, 0, 1], 6), 1);
    }

    #[test]
    fn oracle_examples() {
        let r = classify_oracle(p(3, 6), DEFAULT_MAX_STATES).unwrap();
        assert_eq!(r.classification, Classification::NotWeaklyHClosed);
        assert_eq!(r.universal_betas, vec![0]);
        assert_eq!(r.states_visited, 216);

        let r = classify_oracle(p(3, 10), DEFAULT_MAX_STATES).unwrap();
        assert_eq!(r.classification, Classification::HClosed);
        assert_eq!(r.universal_betas, vec![0, 1, 2]);

        let r = classify_oracle(p(2, 2), DEFAULT_MAX_STATES).unwrap();
        assert_eq!(r.classification, Classification::HClosedTrivial);
        assert_eq!(r.component_count, 1);
    }

    #[test]
    fn oracle_weak_case() {
        let r = classify_oracle(p(12, 3), DEFAULT_MAX_STATES).unwrap();
        assert_eq!(r.universal_betas, vec![0, 3, 6, 9]);
        assert_eq!(r.classification, Classification::WeaklyHClosed);
    }

    #[test]
    fn oracle_cap() {
        let err = classify_oracle(p(12, 3), 1000).unwrap_err();
        assert!(matches!(
            err,
            DucciError::StateCap {
                states: 531_441,
                cap: 1000
            }
        ));
    }

    #[test]
    fn disjoint_sets() {
        let mut s = DisjointSets::new(5);
        s.union(0, 1);
        s.union(3, 4);
        s.union(1, 4);
        assert_eq!(s.find(0), s.find(3));
        assert_ne!(s.find(2), s.find(0));
    }
}
