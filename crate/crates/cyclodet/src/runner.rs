//! Parallel range sweeps with optional caching. The map over primes runs
//! on a rayon pool; results are collected in prime order.

use std::io;
use std::time::Instant;

use cyclodet_core::verify::{self, Clock, VerifyOptions};
use rayon::prelude::*;

use crate::cache::{Cache, CacheKey, CODE_VERSION};
use crate::report::ReportJson;

/// Milliseconds since construction.
pub struct StdClock(Instant);

impl Default for StdClock {
    fn default() -> Self {
        StdClock(Instant::now())
    }
}

impl Clock for StdClock {
    fn now_ms(&self) -> f64 {
        self.0.elapsed().as_secs_f64() * 1e3
    }
}

#[derive(Debug)]
pub enum RunError {
    Usage(String),
    Io(io::Error),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Usage(s) => write!(f, "{s}"),
            RunError::Io(e) => write!(f, "I/O error: {e}"),
        }
    }
}

impl std::error::Error for RunError {}

pub fn cache_key(p: u32, opts: &VerifyOptions) -> CacheKey {
    CacheKey {
        p,
        delta_mode: opts.delta.tag(),
        backend: opts.backend.name().to_string(),
        bareiss_max_p: opts.bareiss_max_p,
        version: CODE_VERSION.to_string(),
    }
}

fn one_prime(p: u32, opts: &VerifyOptions, cache: Option<&Cache>) -> io::Result<ReportJson> {
    let key = cache_key(p, opts);
    if let Some(cache) = cache {
        if let Some(hit) = cache.get(&key)? {
            return Ok(hit);
        }
    }
    let clock = StdClock::default();
    let report = ReportJson::from(&verify::verify_prime(p, opts, &clock));
    if let Some(cache) = cache {
        cache.put(&key, &report)?;
    }
    Ok(report)
}

/// Verifies every prime in `pmin..=pmax`. `threads = None` uses one worker
/// per logical core.
pub fn run_range(
    pmin: u32,
    pmax: u32,
    opts: &VerifyOptions,
    threads: Option<usize>,
    cache: Option<&Cache>,
) -> Result<Vec<ReportJson>, RunError> {
    let primes = verify::primes_in_range(pmin, pmax).map_err(|e| RunError::Usage(e.to_string()))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| RunError::Usage(e.to_string()))?;
    pool.install(|| primes.par_iter().map(|&p| one_prime(p, opts, cache)).collect::<io::Result<Vec<_>>>())
        .map_err(RunError::Io)
}
