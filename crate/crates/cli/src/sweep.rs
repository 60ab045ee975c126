//! Parallel classification sweeps backed by the JSON Lines cache.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;
use std::sync::mpsc;
use std::time::Instant;

use ducci::arith::is_prime;
use ducci::closure::{classify_fast_with_budget, HClosureReport};
use ducci::error::DucciError;
use ducci::RingParams;
use rayon::prelude::*;

use crate::cache::{read_cache, CacheRecord, CacheWriter};
use crate::error::{CliError, CliResult};

/// Shape filters for generated grids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeFilter {
    All,
    /// m prime with `m = -1 (mod n)`.
    PrimeMinusOne,
    /// m prime.
    Prime,
    EvenN,
}

impl ShapeFilter {
    pub fn accepts(&self, n: usize, m: u64) -> bool {
        match self {
            ShapeFilter::All => true,
            ShapeFilter::PrimeMinusOne => is_prime(m) && (m + 1) % n as u64 == 0,
            ShapeFilter::Prime => is_prime(m),
            ShapeFilter::EvenN => n % 2 == 0,
        }
    }
}

impl FromStr for ShapeFilter {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "all" => Ok(ShapeFilter::All),
            "prime-minus-one" => Ok(ShapeFilter::PrimeMinusOne),
            "prime" => Ok(ShapeFilter::Prime),
            "even-n" => Ok(ShapeFilter::EvenN),
            _ => Err(CliError::Invalid(format!(
                "unknown filter `{s}` (expected all, prime-minus-one, prime, even-n)"
            ))),
        }
    }
}

/// Every `(n, m)` in the box passing the filter.
pub fn grid(ns: (usize, usize), ms: (u64, u64), filter: ShapeFilter) -> Vec<(usize, u64)> {
    let mut out = Vec::new();
    for n in ns.0..=ns.1 {
        for m in ms.0..=ms.1 {
            if filter.accepts(n, m) {
                out.push((n, m));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepSpec {
    pairs: Vec<(usize, u64)>,
    pub jobs: usize,
    pub max_steps: u64,
}

impl SweepSpec {
    pub fn new(mut pairs: Vec<(usize, u64)>, jobs: usize, max_steps: u64) -> Self {
        pairs.sort_unstable();
        pairs.dedup();
        SweepSpec {
            pairs,
            jobs: jobs.max(1),
            max_steps,
        }
    }

    pub fn pairs(&self) -> &[(usize, u64)] {
        &self.pairs
    }

    fn validate(&self) -> CliResult<()> {
        for &(n, m) in &self.pairs {
            RingParams::new(n, m)?;
            if n < 2 {
                return Err(CliError::Invalid(format!("({n},{m}): need n >= 2")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowOutcome {
    Resolved(HClosureReport),
    Unresolved(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub n: usize,
    pub m: u64,
    pub outcome: RowOutcome,
    pub cached: bool,
}

impl SweepRow {
    pub fn report(&self) -> Option<&HClosureReport> {
        match &self.outcome {
            RowOutcome::Resolved(r) => Some(r),
            RowOutcome::Unresolved(_) => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    /// Sorted by `(n, m)`.
    pub rows: Vec<SweepRow>,
    pub computed: usize,
    pub from_cache: usize,
    /// Classification steps spent in this run, excluding cached rows.
    pub steps: u64,
    pub wall_ms: u64,
}

impl SweepOutcome {
    pub fn unresolved(&self) -> usize {
        self.rows.iter().filter(|r| r.report().is_none()).count()
    }
}

struct Computed {
    key: (usize, u64),
    result: Result<HClosureReport, DucciError>,
    wall_ms: u64,
}

/// Classifies every pair not already cached. Reports that resolve are
/// appended to the cache by a single writer as they arrive; unresolved
/// rows are never persisted.
pub fn run_sweep(spec: &SweepSpec, cache_path: Option<&Path>) -> CliResult<SweepOutcome> {
    spec.validate()?;
    let start = Instant::now();
    let cached = match cache_path {
        Some(p) => read_cache(p)?.records,
        None => BTreeMap::new(),
    };
    let mut writer = cache_path.map(CacheWriter::open).transpose()?;

    let pending: Vec<(usize, u64)> = spec
        .pairs
        .iter()
        .copied()
        .filter(|k| !cached.contains_key(k))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()
        .map_err(|e| CliError::Invalid(format!("thread pool: {e}")))?;

    let (tx, rx) = mpsc::channel::<Computed>();
    let max_steps = spec.max_steps;
    let mut fresh: BTreeMap<(usize, u64), Result<HClosureReport, DucciError>> = BTreeMap::new();
    let mut write_error = None;

    std::thread::scope(|scope| {
        let pending = &pending;
        let pool = &pool;
        scope.spawn(move || {
            pool.install(|| {
                pending.par_iter().for_each_with(tx, |tx, &(n, m)| {
                    let t0 = Instant::now();
                    let result =
                        RingParams::new(n, m).and_then(|p| classify_fast_with_budget(p, max_steps));
                    let wall_ms = t0.elapsed().as_millis() as u64;
                    let _ = tx.send(Computed {
                        key: (n, m),
                        result,
                        wall_ms,
                    });
                });
            });
        });
        for done in rx {
            if let (Some(w), Ok(report)) = (writer.as_mut(), &done.result) {
                if write_error.is_none() {
                    if let Err(e) = w.append(&CacheRecord::new(report.clone(), done.wall_ms)) {
                        write_error = Some(e);
                    }
                }
            }
            fresh.insert(done.key, done.result);
        }
    });
    if let Some(e) = write_error {
        return Err(e);
    }

    let mut steps = 0u64;
    let rows = spec
        .pairs
        .iter()
        .map(|&(n, m)| {
            if let Some(rec) = cached.get(&(n, m)) {
                return SweepRow {
                    n,
                    m,
                    outcome: RowOutcome::Resolved(rec.report.clone()),
                    cached: true,
                };
            }
            let outcome = match fresh.remove(&(n, m)).expect("every pending pair reported") {
                Ok(report) => {
                    steps += report.steps_used;
                    RowOutcome::Resolved(report)
                }
                Err(e) => RowOutcome::Unresolved(e.to_string()),
            };
            SweepRow {
                n,
                m,
                outcome,
                cached: false,
            }
        })
        .collect();

    Ok(SweepOutcome {
        rows,
        computed: pending.len(),
        from_cache: spec.pairs.len() - pending.len(),
        steps,
        wall_ms: start.elapsed().as_millis() as u64,
    })
}
