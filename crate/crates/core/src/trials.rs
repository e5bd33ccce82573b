//! Seeded, schedule-independent Monte-Carlo plumbing.
//!
//! Trial `i` of a run with seed `s` always draws from the ChaCha stream
//! `(s, i)`, so results do not depend on how trials are spread over threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// How many independent trials to run, from which seed, on how many threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialPlan {
    pub trials: usize,
    pub seed: u64,
    pub jobs: usize,
}

impl TrialPlan {
    pub fn new(trials: usize, seed: u64) -> Self {
        TrialPlan {
            trials,
            seed,
            jobs: 1,
        }
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs.max(1);
        self
    }

    /// Runs `f(trial_index, rng)` for every trial and returns the results in
    /// trial order.
    pub fn map<T, F>(&self, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(usize, &mut ChaCha8Rng) -> Result<T> + Sync,
    {
        self.map_range(0, self.trials, &f)
    }

    fn map_range<T, F>(&self, start: usize, end: usize, f: &F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(usize, &mut ChaCha8Rng) -> Result<T> + Sync,
    {
        let run = |i: usize| f(i, &mut trial_rng(self.seed, i as u64));
        if self.jobs <= 1 {
            return (start..end).map(run).collect();
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .map_err(|e| Error::ResourceLimit(format!("thread pool: {e}")))?;
        pool.install(|| (start..end).into_par_iter().map(run).collect())
    }

    /// Runs trials in index order until `f` returns `Some`, and returns the
    /// first hit by index together with the number of trials that count as
    /// run (hit index + 1, or all of them). Parallel runs evaluate whole
    /// batches but report exactly what the sequential order would.
    pub fn find_first<T, F>(&self, f: F) -> Result<(Option<(usize, T)>, usize)>
    where
        T: Send,
        F: Fn(usize, &mut ChaCha8Rng) -> Result<Option<T>> + Sync,
    {
        let batch = if self.jobs <= 1 { 1 } else { self.jobs * 2 };
        let mut start = 0;
        while start < self.trials {
            let end = (start + batch).min(self.trials);
            let results = self.map_range(start, end, &f)?;
            if let Some((k, hit)) = results
                .into_iter()
                .enumerate()
                .find_map(|(k, r)| r.map(|hit| (k, hit)))
            {
                let index = start + k;
                return Ok((Some((index, hit)), index + 1));
            }
            start = end;
        }
        Ok((None, self.trials))
    }
}

/// A Monte-Carlo success fraction with a 99% (3-sigma) half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub successes: usize,
    pub trials: usize,
    pub p_hat: f64,
    pub half_width: f64,
}

impl Estimate {
    pub fn from_counts(successes: usize, trials: usize) -> Self {
        let p = if trials == 0 {
            0.0
        } else {
            successes as f64 / trials as f64
        };
        let half_width = if trials == 0 {
            0.0
        } else {
            3.0 * (p * (1.0 - p) / trials as f64).sqrt()
        };
        Estimate {
            successes,
            trials,
            p_hat: p,
            half_width,
        }
    }

    pub fn from_outcomes(outcomes: &[bool]) -> Self {
        Self::from_counts(outcomes.iter().filter(|&&b| b).count(), outcomes.len())
    }

    /// `p_hat >= bound - half_width`.
    pub fn at_least(&self, bound: f64) -> bool {
        self.p_hat >= bound - self.half_width
    }

    /// `|p_hat - exact| <= half_width`.
    pub fn consistent_with(&self, exact: f64) -> bool {
        (self.p_hat - exact).abs() <= self.half_width
    }
}
