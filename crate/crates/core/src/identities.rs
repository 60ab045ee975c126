//! Exhaustive and randomized checks of the coefficient-row identities.

use num_bigint::BigUint;
use num_traits::One;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::arith::is_prime;
use crate::coeff::{
    binom_vanishing_check, lemma_sum_check, mod6_pattern_check, product_split_check,
    row_binomial_exact, row_iterative, row_polypow, triple_fast, CoeffTriple,
};
use crate::error::Result;
use crate::ring::RingParams;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityConfig {
    pub oracle_r_max: u64,
    pub oracle_n_max: usize,
    pub oracle_m_max: u64,
    pub sum_r_max: u64,
    pub lemma_samples: usize,
    pub mod6_r_max: u64,
    pub seed: u64,
}

impl Default for IdentityConfig {
    fn default() -> Self {
        IdentityConfig {
            oracle_r_max: 200,
            oracle_n_max: 16,
            oracle_m_max: 12,
            sum_r_max: 120,
            lemma_samples: 1000,
            mod6_r_max: 120,
            seed: 0x5eed_d0cc,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityResult {
    pub name: String,
    pub cases: u64,
    /// First few failing cases, rendered.
    pub failures: Vec<String>,
    pub failure_count: u64,
    pub pass: bool,
}

struct Tally {
    name: &'static str,
    cases: u64,
    failures: Vec<String>,
    failure_count: u64,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            cases: 0,
            failures: Vec::new(),
            failure_count: 0,
        }
    }

    fn record(&mut self, ok: bool, case: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < 10 {
                self.failures.push(case());
            }
        }
    }

    fn finish(self) -> IdentityResult {
        IdentityResult {
            name: self.name.to_string(),
            cases: self.cases,
            pass: self.failure_count == 0 && self.cases > 0,
            failures: self.failures,
            failure_count: self.failure_count,
        }
    }
}

fn row_oracles(cfg: &IdentityConfig) -> Result<IdentityResult> {
    let mut tally = Tally::new("row oracles agree");
    for n in 1..=cfg.oracle_n_max {
        for r in 0..=cfg.oracle_r_max {
            let exact = row_binomial_exact(r, n)?;
            for m in 2..=cfg.oracle_m_max {
                let params = RingParams::new(n, m)?;
                let reduced = exact.reduce(m).values;
                let iter = row_iterative(r, params).values;
                let poly = row_polypow(r, params).values;
                tally.record(reduced == iter && iter == poly, || {
                    format!("r={r} n={n} m={m}")
                });
            }
        }
    }
    Ok(tally.finish())
}

fn row_sums(cfg: &IdentityConfig) -> Result<IdentityResult> {
    let mut tally = Tally::new("row sums equal 2^r");
    for n in 1..=cfg.oracle_n_max {
        for r in 0..=cfg.sum_r_max {
            let sum = row_binomial_exact(r, n)?.sum();
            tally.record(sum == BigUint::one() << r as usize, || {
                format!("r={r} n={n}")
            });
            for m in [2u64, 3, 7, 10, 12] {
                let params = RingParams::new(n, m)?;
                let expected = crate::arith::mod_pow(2, r, m);
                tally.record(row_iterative(r, params).sum_mod() == expected, || {
                    format!("r={r} n={n} m={m}")
                });
            }
        }
    }
    Ok(tally.finish())
}

fn lemma_sums(cfg: &IdentityConfig) -> Result<IdentityResult> {
    let mut tally = Tally::new("second coefficient sum lemma");
    let mut rng = StdRng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.lemma_samples {
        let n = rng.gen_range(1..=16usize);
        let m = rng.gen_range(2..=60u64);
        let r = rng.gen_range(2..=300u64);
        let t = rng.gen_range(1..r);
        let s = rng.gen_range(1..=n as i64);
        let ok = lemma_sum_check(r, t, s, RingParams::new(n, m)?)?;
        tally.record(ok, || format!("r={r} t={t} s={s} n={n} m={m}"));
    }
    Ok(tally.finish())
}

fn mod6_patterns(cfg: &IdentityConfig) -> Result<IdentityResult> {
    let mut tally = Tally::new("n=3 offset pattern by r mod 6");
    for r in 1..=cfg.mod6_r_max {
        tally.record(mod6_pattern_check(r)?, || format!("r={r}"));
    }
    Ok(tally.finish())
}

fn product_splits(cfg: &IdentityConfig) -> Result<IdentityResult> {
    let mut tally = Tally::new("n=3 composition rule");
    for r in 2..=cfg.mod6_r_max.min(60) {
        for t in 1..r {
            tally.record(product_split_check(r, t, None)?, || format!("r={r} t={t}"));
        }
    }
    for m in [2u64, 6, 10, 35] {
        for r in 2..=40 {
            for t in 1..r {
                tally.record(product_split_check(r, t, Some(m))?, || {
                    format!("r={r} t={t} m={m}")
                });
            }
        }
    }
    Ok(tally.finish())
}

fn rotated(t: &CoeffTriple, k: usize) -> [u64; 3] {
    let v = [t.a, t.b, t.c];
    [0, 1, 2].map(|i| v[(i + 3 - k % 3) % 3])
}

fn values(t: &CoeffTriple) -> [u64; 3] {
    [t.a, t.b, t.c]
}

fn n3_closure_congruences() -> Result<IdentityResult> {
    let mut tally = Tally::new("n=3 closure congruences");
    for l in 1..=12u32 {
        let m = 1u64 << l;
        let low = triple_fast(l as u64, m)?;
        let high = triple_fast(l as u64 + 2, m)?;
        tally.record(values(&high) == rotated(&low, 1), || format!("m=2^{l}"));
    }
    for m in (5..1000u64).filter(|&m| is_prime(m) && m % 6 == 5) {
        let t = triple_fast(m - 1, m)?;
        tally.record(values(&t) == [0, 0, 1], || format!("m={m}"));
    }
    for l in 1..=6u32 {
        for p in [5u64, 11, 17, 23, 29] {
            let m = (1u64 << l) * p;
            let low = triple_fast(l as u64, m)?;
            let high = triple_fast(l as u64 + p - 1, m)?;
            tally.record(values(&high) == rotated(&low, 2), || format!("m=2^{l}*{p}"));
        }
    }
    Ok(tally.finish())
}

/// Even-n rows verified by the closure theorem for `m = -1 (mod n)` prime.
pub const EVEN_PRIME_PAIRS: [(usize, u64); 13] = [
    (4, 3),
    (4, 7),
    (4, 11),
    (4, 19),
    (6, 5),
    (6, 11),
    (6, 17),
    (8, 7),
    (8, 23),
    (10, 19),
    (12, 11),
    (16, 31),
    (32, 31),
];

fn even_prime_rows() -> Result<IdentityResult> {
    let mut tally = Tally::new("even-n prime row D^m");
    for (n, m) in EVEN_PRIME_PAIRS {
        let row = row_polypow(m, RingParams::new(n, m)?).values;
        let mut expected = vec![0u64; n];
        expected[0] = 1;
        expected[n - 1] = 1;
        tally.record(row == expected, || format!("n={n} m={m}"));
        tally.record(binom_vanishing_check(n, m)?, || {
            format!("binomials n={n} m={m}")
        });
    }
    Ok(tally.finish())
}

pub fn coefficient_identities(cfg: &IdentityConfig) -> Result<Vec<IdentityResult>> {
    Ok(vec![
        row_oracles(cfg)?,
        row_sums(cfg)?,
        lemma_sums(cfg)?,
        mod6_patterns(cfg)?,
        product_splits(cfg)?,
        n3_closure_congruences()?,
        even_prime_rows()?,
    ])
}
