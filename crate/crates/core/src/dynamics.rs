//! The Ducci map `D`, the shift `H`, orbits and cycle detection.

use std::collections::BTreeSet;

use crate::coeff::row_polypow;
use crate::error::{DucciError, Result};
use crate::ring::{RingParams, Tuple};

/// Default cap on Ducci steps per orbit computation.
pub const DEFAULT_MAX_STEPS: u64 = 100_000_000;

/// Tail length, period and first cycle element of a Ducci sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleInfo {
    pub len: u64,
    pub per: u64,
    /// `D^len(u)`.
    pub cycle_base: Tuple,
}

pub(crate) fn step_in_place(entries: &mut [u32], m: u64) {
    let n = entries.len();
    let first = entries[0] as u64;
    for i in 0..n - 1 {
        let s = entries[i] as u64 + entries[i + 1] as u64;
        entries[i] = if s >= m { s - m } else { s } as u32;
    }
    let s = entries[n - 1] as u64 + first;
    entries[n - 1] = if s >= m { s - m } else { s } as u32;
}

/// `D(u) = (u1 + u2, u2 + u3, ..., un + u1) mod m`.
pub fn ducci_step(u: &Tuple) -> Tuple {
    let mut out = u.clone();
    step_in_place(out.entries_mut(), u.params().m());
    out
}

/// `H^beta(u)`; `H(x1, ..., xn) = (x2, ..., xn, x1)`, beta taken mod n.
pub fn shift(u: &Tuple, beta: i64) -> Tuple {
    let n = u.params().n();
    let k = beta.rem_euclid(n as i64) as usize;
    let mut entries = u.entries().to_vec();
    entries.rotate_left(k);
    Tuple::from_raw(u.params(), entries)
}

pub fn add(u: &Tuple, v: &Tuple) -> Result<Tuple> {
    u.params().check_same(&v.params())?;
    let m = u.params().m();
    let entries = u
        .entries()
        .iter()
        .zip(v.entries())
        .map(|(&a, &b)| ((a as u64 + b as u64) % m) as u32)
        .collect();
    Ok(Tuple::from_raw(u.params(), entries))
}

pub fn scale(c: u64, u: &Tuple) -> Tuple {
    let m = u.params().m() as u128;
    let c = c as u128 % m;
    let entries = u
        .entries()
        .iter()
        .map(|&e| (c * e as u128 % m) as u32)
        .collect();
    Tuple::from_raw(u.params(), entries)
}

/// `D^k(u)` by repeated stepping, failing if `k` exceeds the default budget.
pub fn iterate(u: &Tuple, k: u64) -> Result<Tuple> {
    iterate_with_budget(u, k, DEFAULT_MAX_STEPS)
}

pub fn iterate_with_budget(u: &Tuple, k: u64, max_steps: u64) -> Result<Tuple> {
    if k > max_steps {
        return Err(DucciError::StepBudget {
            budget: max_steps,
            steps: max_steps,
        });
    }
    let m = u.params().m();
    let mut out = u.clone();
    for _ in 0..k {
        step_in_place(out.entries_mut(), m);
    }
    Ok(out)
}

/// Applies a coefficient row: entry `i` is `sum_s row[s] * u[s + i]` (0-based, cyclic).
pub(crate) fn apply_row(row: &[u64], u: &Tuple) -> Tuple {
    let params = u.params();
    let (n, m) = (params.n(), params.m() as u128);
    let x = u.entries();
    let entries = (0..n)
        .map(|i| {
            let acc = row.iter().enumerate().fold(0u128, |acc, (s, &a)| {
                let j = if s + i >= n { s + i - n } else { s + i };
                acc + a as u128 * x[j] as u128
            });
            (acc % m) as u32
        })
        .collect();
    Tuple::from_raw(params, entries)
}

/// `D^r(u)` through the coefficient row of `D^r`, in `O(n^2 log r)`.
pub fn apply_power(u: &Tuple, r: u64) -> Tuple {
    let row = row_polypow(r, u.params());
    apply_row(&row.values, u)
}

/// Brent's cycle detection over an in-place step function.
///
/// Returns `(len, per, D^len(start), steps)`.
fn brent<T, S, J>(start: &T, mut step: S, jump: J, max_steps: u64) -> Result<(u64, u64, T, u64)>
where
    T: Clone + PartialEq,
    S: FnMut(&mut T),
    J: Fn(&T, u64) -> Option<T>,
{
    let mut steps = 0u64;
    let tick = |steps: &mut u64, k: u64| -> Result<()> {
        *steps += k;
        if *steps > max_steps {
            Err(DucciError::StepBudget {
                budget: max_steps,
                steps: *steps,
            })
        } else {
            Ok(())
        }
    };

    let mut power = 1u64;
    let mut per = 1u64;
    let mut tortoise = start.clone();
    let mut hare = start.clone();
    step(&mut hare);
    tick(&mut steps, 1)?;
    while tortoise != hare {
        if power == per {
            tortoise = hare.clone();
            power *= 2;
            per = 0;
        }
        step(&mut hare);
        per += 1;
        tick(&mut steps, 1)?;
    }

    let mut tortoise = start.clone();
    let mut hare = match jump(start, per) {
        Some(h) => h,
        None => {
            let mut h = start.clone();
            for _ in 0..per {
                step(&mut h);
                tick(&mut steps, 1)?;
            }
            h
        }
    };
    let mut len = 0u64;
    while tortoise != hare {
        step(&mut tortoise);
        step(&mut hare);
        len += 1;
        tick(&mut steps, 2)?;
    }
    Ok((len, per, tortoise, steps))
}

/// Minimal `(Len(u), Per(u))` under the default step budget.
pub fn cycle_info(u: &Tuple) -> Result<CycleInfo> {
    cycle_info_with_budget(u, DEFAULT_MAX_STEPS).map(|(info, _)| info)
}

/// Like [`cycle_info`], also returning the number of Ducci steps spent.
pub fn cycle_info_with_budget(u: &Tuple, max_steps: u64) -> Result<(CycleInfo, u64)> {
    let m = u.params().m();
    let (len, per, cycle_base, steps) = brent(
        u,
        |t: &mut Tuple| step_in_place(t.entries_mut(), m),
        |t: &Tuple, k| Some(apply_power(t, k)),
        max_steps,
    )?;
    Ok((
        CycleInfo {
            len,
            per,
            cycle_base,
        },
        steps,
    ))
}

/// Cycle data of the basic tuple `(0, ..., 0, 1)`: `L_m(n)` and `P_m(n)`.
pub fn basic_info(params: RingParams) -> Result<CycleInfo> {
    cycle_info(&Tuple::basic(params))
}

pub fn basic_info_with_budget(params: RingParams, max_steps: u64) -> Result<(CycleInfo, u64)> {
    cycle_info_with_budget(&Tuple::basic(params), max_steps)
}

/// `u = sum_s x_s H^(-s)(0, ..., 0, 1)`, returned as `(x_s, -s)` pairs for `s = 1..=n`.
pub fn basis_decompose(u: &Tuple) -> Vec<(u64, i64)> {
    u.entries()
        .iter()
        .enumerate()
        .map(|(i, &x)| (x as u64, -(i as i64 + 1)))
        .collect()
}

/// Inverse of [`basis_decompose`].
pub fn basis_reconstruct(params: RingParams, terms: &[(u64, i64)]) -> Tuple {
    let e = Tuple::basic(params);
    terms.iter().fold(Tuple::zero(params), |acc, &(c, s)| {
        add(&acc, &scale(c, &shift(&e, s))).expect("same params")
    })
}

/// One step of the absolute-difference map `(|x1 - x2|, ..., |xn - x1|)`.
pub fn abs_ducci_step(u: &[u64]) -> Vec<u64> {
    let n = u.len();
    (0..n).map(|i| u[i].abs_diff(u[(i + 1) % n])).collect()
}

/// The cycle reached by the absolute-difference map from `start`, in orbit order.
pub fn abs_ducci_cycle(start: &[u64], max_steps: u64) -> Result<Vec<Vec<u64>>> {
    if start.is_empty() {
        return Err(DucciError::InvalidArgument("empty tuple".into()));
    }
    let start = start.to_vec();
    let (_, per, base, _) = brent(
        &start,
        |t: &mut Vec<u64>| *t = abs_ducci_step(t),
        |_: &Vec<u64>, _| None,
        max_steps,
    )?;
    let mut cycle = Vec::with_capacity(per as usize);
    let mut cur = base;
    for _ in 0..per {
        let next = abs_ducci_step(&cur);
        cycle.push(cur);
        cur = next;
    }
    Ok(cycle)
}

/// Distinct entry values across a set of integer tuples.
pub fn entry_values(tuples: &[Vec<u64>]) -> BTreeSet<u64> {
    tuples.iter().flatten().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, m: u64) -> RingParams {
        RingParams::new(n, m).unwrap()
    }

    fn t(params: RingParams, s: &str) -> Tuple {
        Tuple::parse(params, s).unwrap()
    }

    #[test]
    fn step_examples() {
        let z6 = p(3, 6);
        assert_eq!(ducci_step(&t(z6, "0,1,4")), t(z6, "1,5,4"));
        assert_eq!(ducci_step(&t(z6, "1,2,3")), t(z6, "3,5,4"));
        assert!(ducci_step(&Tuple::zero(z6)).is_zero());
        let u = t(z6, "1,2,3");
        let _ = ducci_step(&u);
        assert_eq!(u, t(z6, "1,2,3"));
    }

    #[test]
    fn shift_examples() {
        let z2 = p(3, 2);
        assert_eq!(shift(&t(z2, "0,0,1"), 1), t(z2, "0,1,0"));
        assert_eq!(shift(&t(z2, "0,0,1"), -1), t(z2, "1,0,0"));
        let u = t(p(5, 7), "1,2,3,4,5");
        assert_eq!(shift(&u, 5), u);
        assert_eq!(shift(&u, -7), shift(&u, 3));
    }

    #[test]
    fn add_scale_examples() {
        let z2 = p(2, 2);
        assert_eq!(add(&t(z2, "0,1"), &t(z2, "1,1")).unwrap(), t(z2, "1,0"));
        let z6 = p(3, 6);
        assert!(scale(0, &t(z6, "0,1,4")).is_zero());
        assert_eq!(scale(2, &t(z6, "0,1,4")), t(z6, "0,2,2"));
        assert!(matches!(
            add(&t(z2, "0,1"), &t(z6, "0,1,4")),
            Err(DucciError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn iterate_examples() {
        let z6 = p(3, 6);
        assert_eq!(iterate(&t(z6, "0,1,4"), 7).unwrap(), t(z6, "1,5,4"));
        assert_eq!(iterate(&t(z6, "0,1,4"), 0).unwrap(), t(z6, "0,1,4"));
        let z3 = p(4, 3);
        assert_eq!(iterate(&t(z3, "0,0,0,1"), 3).unwrap(), t(z3, "1,0,0,1"));
        assert!(matches!(
            iterate_with_budget(&t(z3, "0,0,0,1"), 11, 10),
            Err(DucciError::StepBudget { .. })
        ));
    }

    #[test]
    fn apply_power_matches_iterate() {
        let z6 = p(3, 6);
        let e = Tuple::basic(z6);
        assert_eq!(apply_power(&e, 2), t(z6, "1,2,1"));
        assert_eq!(apply_power(&e, 2), iterate(&e, 2).unwrap());
        let u = t(z6, "5,1,3");
        assert_eq!(apply_power(&u, 0), u);
        for r in 0..40 {
            assert_eq!(apply_power(&u, r), iterate(&u, r).unwrap());
        }
    }

    #[test]
    fn cycle_examples() {
        let z6 = p(3, 6);
        let info = cycle_info(&t(z6, "0,1,4")).unwrap();
        assert_eq!((info.len, info.per), (1, 6));
        assert_eq!(info.cycle_base, t(z6, "1,5,4"));

        let zero = cycle_info(&Tuple::zero(z6)).unwrap();
        assert_eq!((zero.len, zero.per), (0, 1));

        let basic = cycle_info(&t(z6, "0,0,1")).unwrap();
        assert_eq!((basic.len, basic.per), (1, 6));
        assert_eq!(basic.cycle_base, t(z6, "0,1,1"));
    }

    #[test]
    fn basic_examples() {
        let i = basic_info(p(3, 6)).unwrap();
        assert_eq!((i.len, i.per), (1, 6));
        let i = basic_info(p(3, 10)).unwrap();
        assert_eq!((i.len, i.per), (1, 12));
        let i = basic_info(p(3, 2)).unwrap();
        assert_eq!((i.len, i.per), (1, 3));
    }

    #[test]
    fn cycle_budget_is_reported() {
        let err = cycle_info_with_budget(&Tuple::basic(p(11, 17)), 1000).unwrap_err();
        assert!(err.is_resource());
    }

    #[test]
    fn decomposition() {
        let z6 = p(3, 6);
        let e = t(z6, "0,0,1");
        assert_eq!(basis_decompose(&e), vec![(0, -1), (0, -2), (1, -3)]);
        let u = t(z6, "0,1,4");
        let terms = basis_decompose(&u);
        assert_eq!(terms, vec![(0, -1), (1, -2), (4, -3)]);
        assert_eq!(basis_reconstruct(z6, &terms), u);
    }

    #[test]
    fn abs_map() {
        assert_eq!(abs_ducci_step(&[1, 3, 0]), vec![2, 3, 1]);
        assert_eq!(abs_ducci_step(&[7, 7, 7, 7]), vec![0, 0, 0, 0]);
        let cycle = abs_ducci_cycle(&[0, 1, 4], 10_000).unwrap();
        let values = entry_values(&cycle);
        assert!(values.len() <= 2);
        assert!(values.iter().filter(|&&v| v != 0).count() <= 1);
    }
}
