//! Reproducible parallel Monte Carlo.
//!
//! Trial t draws from its own ChaCha8 stream, keyed by (seed, t), so a trial
//! sees the same randomness regardless of how trials are spread over
//! workers. Trials are folded in fixed-size chunks and chunk results are
//! merged in index order, which makes every reduction, floating-point ones
//! included, independent of the worker count.

use crate::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// Trials per chunk; fixed so that chunk boundaries do not move with the
/// number of workers.
const CHUNK: u64 = 1024;

/// Environment variable that overrides the default worker count.
pub const THREADS_ENV: &str = "INTRANS_THREADS";

/// The random stream of trial `index` under `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StderrMethod {
    /// √(p̂(1 − p̂)/N)
    #[default]
    Wald,
    /// Half-width of the Wilson score interval at z = 1, which stays
    /// positive when p̂ is 0 or 1.
    Wilson,
}

impl StderrMethod {
    pub fn stderr(&self, hits: u64, total: u64) -> f64 {
        if total == 0 {
            return f64::NAN;
        }
        let n = total as f64;
        let p = hits as f64 / n;
        match self {
            StderrMethod::Wald => (p * (1.0 - p) / n).sqrt(),
            StderrMethod::Wilson => {
                (p * (1.0 - p) / n + 1.0 / (4.0 * n * n)).sqrt() / (1.0 + 1.0 / n)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    /// `None` reads [`THREADS_ENV`], falling back to rayon's default.
    pub workers: Option<usize>,
    /// Minimum acceptance rate observed over the probe trials.
    pub acceptance_floor: f64,
    pub probe_trials: u64,
    pub stderr: StderrMethod,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            trials: 10_000,
            seed: 0,
            workers: None,
            acceptance_floor: 1e-6,
            probe_trials: 100_000,
            stderr: StderrMethod::Wald,
        }
    }
}

impl McConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        McConfig {
            trials,
            seed,
            ..Default::default()
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers);
        self
    }

    fn resolved_workers(&self) -> Result<Option<usize>> {
        if let Some(w) = self.workers {
            return if w == 0 {
                Err(Error::InvalidInput("workers must be positive".into()))
            } else {
                Ok(Some(w))
            };
        }
        match std::env::var(THREADS_ENV) {
            Ok(v) => v
                .trim()
                .parse::<usize>()
                .ok()
                .filter(|&w| w > 0)
                .map(Some)
                .ok_or_else(|| {
                    Error::InvalidInput(format!("{THREADS_ENV}={v:?} is not a positive integer"))
                }),
            Err(_) => Ok(None),
        }
    }
}

/// A conditional proportion: hits among accepted trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub trials: u64,
    pub accepted: u64,
    pub seed: u64,
    pub wall_time_ms: u64,
}

impl MonteCarloEstimate {
    pub fn from_counts(
        hits: u64,
        accepted: u64,
        trials: u64,
        seed: u64,
        method: StderrMethod,
    ) -> Self {
        MonteCarloEstimate {
            estimate: if accepted == 0 {
                f64::NAN
            } else {
                hits as f64 / accepted as f64
            },
            stderr: method.stderr(hits, accepted),
            trials,
            accepted,
            seed,
            wall_time_ms: 0,
        }
    }

    /// Acceptance rate of the conditioning event.
    pub fn acceptance(&self) -> f64 {
        self.accepted as f64 / self.trials as f64
    }

    /// Estimate and stderr without timing, for reproducibility checks.
    pub fn same_result(&self, other: &Self) -> bool {
        self.estimate.to_bits() == other.estimate.to_bits()
            && self.stderr.to_bits() == other.stderr.to_bits()
            && self.trials == other.trials
            && self.accepted == other.accepted
    }
}

/// Running sample mean and variance (Welford), mergeable in a fixed order.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MeanAccumulator {
    pub count: u64,
    pub mean: f64,
    m2: f64,
}

impl MeanAccumulator {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(self, o: Self) -> Self {
        if self.count == 0 {
            return o;
        }
        if o.count == 0 {
            return self;
        }
        let n = self.count + o.count;
        let d = o.mean - self.mean;
        MeanAccumulator {
            count: n,
            mean: self.mean + d * o.count as f64 / n as f64,
            m2: self.m2 + o.m2 + d * d * self.count as f64 * o.count as f64 / n as f64,
        }
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            f64::NAN
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn stderr(&self) -> f64 {
        (self.variance() / self.count as f64).sqrt()
    }
}

/// Runs trials `range` through `fold`, chunk by chunk, and merges the chunk
/// accumulators in order.
fn fold_range<A, I, F, M>(
    seed: u64,
    range: std::ops::Range<u64>,
    init: &I,
    fold: &F,
    merge: &M,
) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync,
    F: Fn(&mut A, &mut ChaCha8Rng) -> Result<()> + Sync,
    M: Fn(A, A) -> A + Sync,
{
    let first = range.start / CHUNK;
    let last = range.end.div_ceil(CHUNK);
    let parts: Vec<A> = (first..last)
        .into_par_iter()
        .map(|c| {
            let mut acc = init();
            let lo = (c * CHUNK).max(range.start);
            let hi = ((c + 1) * CHUNK).min(range.end);
            for t in lo..hi {
                fold(&mut acc, &mut trial_rng(seed, t))?;
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().fold(init(), merge))
}

fn in_pool<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(job()),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map(|pool| pool.install(job))
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}"))),
    }
}

/// Generic reproducible map-reduce over `cfg.trials` trials.
pub fn run<A, I, F, M>(cfg: &McConfig, init: I, fold: F, merge: M) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(&mut A, &mut ChaCha8Rng) -> Result<()> + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    let workers = cfg.resolved_workers()?;
    in_pool(workers, || {
        fold_range(cfg.seed, 0..cfg.trials, &init, &fold, &merge)
    })?
}

/// Like [`run`], with a probe phase: after the first
/// min(`probe_trials`, `trials`) trials the acceptance rate reported by
/// `accepted` must reach `acceptance_floor`, otherwise the run aborts with
/// [`Error::AcceptanceTooLow`]. The probe trials count towards the result.
pub fn run_conditioned<A, I, F, M, C>(
    cfg: &McConfig,
    init: I,
    fold: F,
    merge: M,
    accepted: C,
) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(&mut A, &mut ChaCha8Rng) -> Result<()> + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
    C: Fn(&A) -> u64 + Sync + Send,
{
    let workers = cfg.resolved_workers()?;
    in_pool(workers, || {
        let probe = cfg.probe_trials.min(cfg.trials);
        let head = fold_range(cfg.seed, 0..probe, &init, &fold, &merge)?;
        if probe > 0 {
            let observed = accepted(&head) as f64 / probe as f64;
            if observed < cfg.acceptance_floor {
                return Err(Error::AcceptanceTooLow {
                    observed,
                    floor: cfg.acceptance_floor,
                    probe,
                });
            }
        }
        let tail = fold_range(cfg.seed, probe..cfg.trials, &init, &fold, &merge)?;
        Ok(merge(head, tail))
    })?
}

/// Outcome of one trial of a conditional-proportion experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trial {
    Rejected,
    Accepted { hit: bool },
}

/// Estimates P[hit | accepted] from independent trials.
pub fn estimate_proportion<F>(cfg: &McConfig, trial: F) -> Result<MonteCarloEstimate>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Trial> + Sync + Send,
{
    let start = Instant::now();
    let (hits, acc) = run_conditioned(
        cfg,
        || (0u64, 0u64),
        |a, rng| {
            if let Trial::Accepted { hit } = trial(rng)? {
                a.1 += 1;
                a.0 += hit as u64;
            }
            Ok(())
        },
        |x, y| (x.0 + y.0, x.1 + y.1),
        |a| a.1,
    )?;
    let mut est = MonteCarloEstimate::from_counts(hits, acc, cfg.trials, cfg.seed, cfg.stderr);
    est.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(est)
}

/// Sample mean and variance of a per-trial statistic; `None` rejects the trial.
pub fn estimate_mean<F>(cfg: &McConfig, trial: F) -> Result<MeanAccumulator>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Option<f64>> + Sync + Send,
{
    run_conditioned(
        cfg,
        MeanAccumulator::default,
        |a, rng| {
            if let Some(x) = trial(rng)? {
                a.push(x);
            }
            Ok(())
        },
        MeanAccumulator::merge,
        |a| a.count,
    )
}

/// Runs `f` over a parameter grid, one estimate per point, each with its
/// own seed derived from the base seed and the grid index.
pub fn sweep<P, F>(cfg: &McConfig, grid: &[P], f: F) -> Result<Vec<(P, MonteCarloEstimate)>>
where
    P: Clone,
    F: Fn(&P, &McConfig) -> Result<MonteCarloEstimate>,
{
    grid.iter()
        .enumerate()
        .map(|(i, p)| {
            let point = McConfig {
                seed: derive_seed(cfg.seed, i as u64),
                ..cfg.clone()
            };
            f(p, &point).map(|e| (p.clone(), e))
        })
        .collect()
}

/// SplitMix64 mix of (seed, index), for seeds of independent sub-runs.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
