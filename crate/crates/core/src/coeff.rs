//! Coefficient rows of powers of the Ducci map.
//!
//! Entry `i` of `D^r(x)` is `sum_s a[r, s] * x[s + i - 1]` with cyclic
//! indices, so a row `(a[r,1], ..., a[r,n])` determines `D^r` completely.
//! Since `D = I + H`, the row is also the coefficient vector of `(1 + x)^r`
//! in `Z_m[x] / (x^n - 1)`.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::arith::is_prime;
use crate::error::{DucciError, Result};
use crate::ring::RingParams;

/// Largest exponent accepted by the exact big-integer routines.
pub const EXACT_MAX_R: u64 = 10_000;

/// Largest modulus accepted by [`binom_vanishing_check`] (Pascal row mod m).
pub const VANISHING_MAX_M: u64 = 20_000;

/// Row of `D^r` reduced mod m.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffRow {
    pub r: u64,
    pub n: usize,
    pub m: u64,
    pub values: Vec<u64>,
}

impl CoeffRow {
    /// `a[r, s]` with `s` wrapped into `1..=n`.
    pub fn get(&self, s: i64) -> u64 {
        self.values[wrap_index(s, self.n)]
    }

    pub fn sum_mod(&self) -> u64 {
        self.values.iter().fold(0u64, |acc, &v| (acc + v) % self.m)
    }

    pub fn to_json(&self) -> Value {
        json!({ "r": self.r, "n": self.n, "m": self.m, "values": self.values })
    }
}

/// Row of `D^r` over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactRow {
    pub r: u64,
    pub n: usize,
    pub values: Vec<BigUint>,
}

impl ExactRow {
    pub fn get(&self, s: i64) -> &BigUint {
        &self.values[wrap_index(s, self.n)]
    }

    pub fn sum(&self) -> BigUint {
        self.values.iter().sum()
    }

    pub fn reduce(&self, m: u64) -> CoeffRow {
        let modulus = BigUint::from(m);
        CoeffRow {
            r: self.r,
            n: self.n,
            m,
            values: self
                .values
                .iter()
                .map(|v| big_to_u64(&(v % &modulus)))
                .collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        let values: Vec<String> = self.values.iter().map(|v| v.to_str_radix(10)).collect();
        json!({ "r": self.r, "n": self.n, "m": "exact", "values": values })
    }
}

/// The n = 3 coefficients `(a_r, b_r, c_r) = (a[r,1], a[r,2], a[r,3])` mod m.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoeffTriple {
    pub r: u64,
    pub m: u64,
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

impl CoeffTriple {
    pub fn identity(m: u64) -> Self {
        CoeffTriple {
            r: 0,
            m,
            a: 1 % m,
            b: 0,
            c: 0,
        }
    }

    /// Coefficients of `D^(self.r + other.r)`.
    pub fn compose(&self, other: &CoeffTriple) -> CoeffTriple {
        debug_assert_eq!(self.m, other.m);
        let m = self.m as u128;
        let (at, bt, ct) = (self.a as u128, self.b as u128, self.c as u128);
        let (ar, br, cr) = (other.a as u128, other.b as u128, other.c as u128);
        CoeffTriple {
            r: self.r + other.r,
            m: self.m,
            a: ((at * ar + bt * cr + ct * br) % m) as u64,
            b: ((at * br + bt * ar + ct * cr) % m) as u64,
            c: ((at * cr + bt * br + ct * ar) % m) as u64,
        }
    }
}

pub(crate) fn wrap_index(s: i64, n: usize) -> usize {
    (s - 1).rem_euclid(n as i64) as usize
}

fn big_to_u64(v: &BigUint) -> u64 {
    v.iter_u64_digits().next().unwrap_or(0)
}

fn unit_row(n: usize, m: u64) -> Vec<u64> {
    let mut row = vec![0u64; n];
    row[0] = 1 % m;
    row
}

/// Row via `a[r,s] = a[r-1,s] + a[r-1,s-1]`, `r` passes over the row.
pub fn row_iterative(r: u64, params: RingParams) -> CoeffRow {
    let (n, m) = (params.n(), params.m());
    let mut row = unit_row(n, m);
    let mut next = vec![0u64; n];
    for _ in 0..r {
        for s in 0..n {
            let prev = row[(s + n - 1) % n];
            next[s] = (row[s] + prev) % m;
        }
        std::mem::swap(&mut row, &mut next);
    }
    CoeffRow {
        r,
        n,
        m,
        values: row,
    }
}

/// Product in `Z_m[x] / (x^n - 1)`.
pub(crate) fn cyclic_mul(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    let n = a.len();
    let mut acc = vec![0u128; n];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            let k = if i + j >= n { i + j - n } else { i + j };
            acc[k] += ai as u128 * bj as u128;
        }
    }
    acc.into_iter().map(|v| (v % m as u128) as u64).collect()
}

/// Row via binary exponentiation of `1 + x` modulo `x^n - 1` and m.
pub fn row_polypow(r: u64, params: RingParams) -> CoeffRow {
    let (n, m) = (params.n(), params.m());
    let mut result = unit_row(n, m);
    let mut base = vec![0u64; n];
    base[0] = (base[0] + 1) % m;
    base[1 % n] = (base[1 % n] + 1) % m;
    let mut e = r;
    while e > 0 {
        if e & 1 == 1 {
            result = cyclic_mul(&result, &base, m);
        }
        e >>= 1;
        if e > 0 {
            base = cyclic_mul(&base, &base, m);
        }
    }
    CoeffRow {
        r,
        n,
        m,
        values: result,
    }
}

/// Exact row: `a[r,s] = sum of C(r, j)` over `0 <= j <= r`, `j = s - 1 (mod n)`.
pub fn row_binomial_exact(r: u64, n: usize) -> Result<ExactRow> {
    if n == 0 {
        return Err(DucciError::InvalidArgument(
            "row length must be at least 1".into(),
        ));
    }
    if r > EXACT_MAX_R {
        return Err(DucciError::ExactBudget {
            r,
            max: EXACT_MAX_R,
        });
    }
    let mut values = vec![BigUint::zero(); n];
    let mut binom = BigUint::one();
    for j in 0..=r {
        values[(j % n as u64) as usize] += &binom;
        binom = binom * BigUint::from(r - j) / BigUint::from(j + 1);
    }
    Ok(ExactRow { r, n, values })
}

/// Row `t` of Pascal's triangle mod m, computed additively.
pub fn binomial_row_mod(t: u64, m: u64) -> Vec<u64> {
    let len = t as usize + 1;
    let mut row = vec![0u64; len];
    row[0] = 1 % m;
    for k in 1..len {
        for i in (1..=k).rev() {
            row[i] = (row[i] + row[i - 1]) % m;
        }
    }
    row
}

/// Checks `a[r,s] = sum_{i=0..t} C(t,i) a[r-t, s-i]` mod m.
pub fn lemma_sum_check(r: u64, t: u64, s: i64, params: RingParams) -> Result<bool> {
    if !(r > t && t > 0) {
        return Err(DucciError::InvalidArgument(format!(
            "need r > t > 0, got r={r}, t={t}"
        )));
    }
    if s < 1 || s as usize > params.n() {
        return Err(DucciError::InvalidArgument(format!(
            "need 1 <= s <= {}, got {s}",
            params.n()
        )));
    }
    let m = params.m();
    let lhs = row_iterative(r, params).get(s);
    let lower = row_iterative(r - t, params);
    let binoms = binomial_row_mod(t, m);
    let rhs = binoms.iter().enumerate().fold(0u128, |acc, (i, &c)| {
        (acc + c as u128 * lower.get(s - i as i64) as u128) % m as u128
    }) as u64;
    Ok(lhs == rhs)
}

fn exact_triple(r: u64) -> Result<[BigUint; 3]> {
    let row = row_binomial_exact(r, 3)?;
    let [a, b, c]: [BigUint; 3] = row.values.try_into().expect("row of length 3");
    Ok([a, b, c])
}

/// n = 3 composition rule for `(a, b, c)` at `r + t` from the triples at r and t.
///
/// With `modulus == None` the check runs over the integers.
pub fn product_split_check(r: u64, t: u64, modulus: Option<u64>) -> Result<bool> {
    if !(r > t && t > 0) {
        return Err(DucciError::InvalidArgument(format!(
            "need r > t > 0, got r={r}, t={t}"
        )));
    }
    match modulus {
        None => {
            let [ar, br, cr] = exact_triple(r)?;
            let [at, bt, ct] = exact_triple(t)?;
            let [a, b, c] = exact_triple(r + t)?;
            Ok(a == &at * &ar + &bt * &cr + &ct * &br
                && b == &at * &br + &bt * &ar + &ct * &cr
                && c == &at * &cr + &bt * &br + &ct * &ar)
        }
        Some(m) => {
            let params = RingParams::new(3, m)?;
            let triple = |k: u64| {
                let row = row_iterative(k, params);
                CoeffTriple {
                    r: k,
                    m,
                    a: row.values[0],
                    b: row.values[1],
                    c: row.values[2],
                }
            };
            let (tt, tr, sum) = (triple(t), triple(r), triple(r + t));
            Ok(tt.compose(&tr) == sum)
        }
    }
}

/// `(a_r, b_r, c_r)` mod m by binary decomposition of r and the composition rule.
pub fn triple_fast(r: u64, m: u64) -> Result<CoeffTriple> {
    RingParams::new(3, m)?;
    let mut result = CoeffTriple::identity(m);
    let mut base = CoeffTriple {
        r: 1,
        m,
        a: 1 % m,
        b: 1 % m,
        c: 0,
    };
    let mut e = r;
    while e > 0 {
        if e & 1 == 1 {
            result = result.compose(&base);
        }
        e >>= 1;
        if e > 0 {
            base = base.compose(&base);
        }
    }
    Ok(result)
}

/// The `r mod 6` offset pattern between the exact n = 3 coefficients.
pub fn mod6_pattern_check(r: u64) -> Result<bool> {
    let [a, b, c] = exact_triple(r)?;
    let one = BigUint::one();
    let plus = |x: &BigUint| x + &one;
    Ok(match r % 6 {
        0 => a == plus(&b) && a == plus(&c),
        1 => plus(&c) == a && plus(&c) == b,
        2 => b == plus(&a) && b == plus(&c),
        3 => plus(&a) == b && plus(&a) == c,
        4 => c == plus(&a) && c == plus(&b),
        _ => plus(&b) == a && plus(&b) == c,
    })
}

/// For even n and prime `m = -1 (mod n)`: `C(m, i) = 0 (mod m)` for `0 < i < m`
/// and `C(m, 0) = C(m, m) = 1`.
pub fn binom_vanishing_check(n: usize, m: u64) -> Result<bool> {
    if n == 0 || n % 2 != 0 {
        return Err(DucciError::InvalidArgument(format!(
            "n must be even, got {n}"
        )));
    }
    if !is_prime(m) {
        return Err(DucciError::InvalidArgument(format!(
            "m must be prime, got {m}"
        )));
    }
    if (m + 1) % n as u64 != 0 {
        return Err(DucciError::InvalidArgument(format!(
            "m = {m} is not -1 mod {n}"
        )));
    }
    if m > VANISHING_MAX_M {
        return Err(DucciError::ExactBudget {
            r: m,
            max: VANISHING_MAX_M,
        });
    }
    let delta = (m + 1) / n as u64;
    let top = delta * n as u64 - 1;
    let row = binomial_row_mod(top, m);
    let last = row.len() - 1;
    Ok(row[0] == 1 && row[last] == 1 && row[1..last].iter().all(|&v| v == 0))
}
