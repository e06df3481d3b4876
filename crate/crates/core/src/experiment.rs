//! Serializable experiment descriptions and their Monte Carlo evaluation.

use crate::dice::{triple_report, TripleClass};
use crate::elections::{
    is_close, is_transitive_outcome, outcome, subset_excluding, tally, tally_counts,
    tournament_index,
};
use crate::mc::{self, McConfig, MonteCarloEstimate, StderrMethod};
use crate::samplers::profile::{pair_count, sample_profile, sample_ranking_counts};
use crate::samplers::DiceModel;
use crate::triplet::{
    default_noise_threshold, default_sum_threshold, noisy_pair_outcome, sample_triplet_election,
    Aggregator, NoiseEval,
};
use crate::{Die, Error, Result};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// Largest k for which profiles are drawn as counts over the k! rankings.
const MAX_COUNT_SAMPLING_K: usize = 6;
/// Largest k whose full tournament distribution is reported.
const MAX_TOURNAMENT_K: usize = 4;

/// The random object of one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "experiment")]
pub enum Experiment {
    /// A fair coin; statistic `heads`.
    Coin,
    /// A fixed triple of dice, re-examined every trial; statistic `intransitive`.
    FixedTriple { dice: [Vec<f64>; 3] },
    /// Three independent dice from a model.
    Dice { model: DiceModel },
    /// An impartial-culture election with k alternatives and n voters.
    Elections { k: usize, n: usize },
    /// A three-alternative election aggregated by majority of triplets.
    Triplet { n: usize },
    /// g(x), g(y) for ρ-correlated x, y; statistic `paradox` is ¼(1 − 3E[g(x)g(y)]).
    Kalai {
        aggregator: Aggregator,
        n: usize,
        #[serde(default = "one_third")]
        rho: f64,
    },
}

fn one_third() -> f64 {
    1.0 / 3.0
}

impl Experiment {
    /// The classic worked example (2,4,9), (1,6,8), (3,5,7).
    pub fn example_triple() -> Self {
        Experiment::FixedTriple {
            dice: [
                vec![2.0, 4.0, 9.0],
                vec![1.0, 6.0, 8.0],
                vec![3.0, 5.0, 7.0],
            ],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Coin => "coin",
            Experiment::FixedTriple { .. } => "fixed-triple",
            Experiment::Dice { .. } => "dice",
            Experiment::Elections { .. } => "elections",
            Experiment::Triplet { .. } => "triplet",
            Experiment::Kalai { .. } => "kalai",
        }
    }
}

/// Event a trial must satisfy to be accepted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "event")]
pub enum ConditionEvent {
    /// max_j |S^{(j)}| ≤ d over all pairs, or all but `subset_excl`.
    CloseMargins,
    /// max over cyclic pairs of |Σ x| ≤ d; d defaults to √n/ln n.
    TripletSum,
    /// max over cyclic pairs of |T_ρ f| ≤ d/√m; d defaults to √m/ln m.
    TripletNoise {
        rho: f64,
        #[serde(default)]
        eval: NoiseEval,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Conditioning {
    #[serde(flatten)]
    pub event: ConditionEvent,
    #[serde(default)]
    pub d: Option<f64>,
    /// Pair index left unconstrained by [`ConditionEvent::CloseMargins`].
    #[serde(default)]
    pub subset_excl: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    #[serde(flatten)]
    pub experiment: Experiment,
    #[serde(default)]
    pub conditioning: Option<Conditioning>,
    /// Statistic reported by [`estimate_probability`]; defaults to the
    /// experiment's first statistic.
    #[serde(default)]
    pub statistic: Option<String>,
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default = "default_floor")]
    pub acceptance_floor: f64,
    #[serde(default = "default_probe")]
    pub probe_trials: u64,
    #[serde(default)]
    pub stderr: StderrMethod,
}

fn default_floor() -> f64 {
    McConfig::default().acceptance_floor
}

fn default_probe() -> u64 {
    McConfig::default().probe_trials
}

impl ExperimentSpec {
    pub fn new(experiment: Experiment, trials: u64, seed: u64) -> Self {
        ExperimentSpec {
            experiment,
            conditioning: None,
            statistic: None,
            trials,
            seed,
            workers: None,
            acceptance_floor: default_floor(),
            probe_trials: default_probe(),
            stderr: StderrMethod::Wald,
        }
    }

    pub fn conditioned(mut self, c: Conditioning) -> Self {
        self.conditioning = Some(c);
        self
    }

    pub fn with_statistic(mut self, s: &str) -> Self {
        self.statistic = Some(s.to_string());
        self
    }

    pub fn with_workers(mut self, w: usize) -> Self {
        self.workers = Some(w);
        self
    }

    pub fn mc_config(&self) -> McConfig {
        McConfig {
            trials: self.trials,
            seed: self.seed,
            workers: self.workers,
            acceptance_floor: self.acceptance_floor,
            probe_trials: self.probe_trials,
            stderr: self.stderr,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StatKind {
    /// Mean of a 0/1 indicator; Wald (or Wilson) stderr.
    Proportion,
    /// Mean of a bounded per-trial value; stderr from the sample variance.
    Mean,
    /// ¼(1 − 3·mean) of a ±1 product.
    Kalai,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedEstimate {
    pub statistic: String,
    pub kind: StatKind,
    #[serde(flatten)]
    pub estimate: MonteCarloEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub spec: ExperimentSpec,
    pub statistics: Vec<NamedEstimate>,
}

impl ExperimentReport {
    pub fn get(&self, statistic: &str) -> Option<&MonteCarloEstimate> {
        self.statistics
            .iter()
            .find(|s| s.statistic == statistic)
            .map(|s| &s.estimate)
    }
}

/// Everything a trial needs that does not change between trials.
enum Prepared {
    Coin,
    Fixed([Die; 3]),
    Dice(crate::DiceSampler),
    Elections {
        k: usize,
        n: usize,
        d: Option<i64>,
        subset: Option<Vec<usize>>,
        tournaments: bool,
    },
    Triplet {
        m: usize,
        event: Option<(ConditionEvent, f64)>,
    },
    Kalai {
        aggregator: Aggregator,
        n: usize,
        rho: f64,
    },
}

fn stat_defs(p: &Prepared) -> Vec<(String, StatKind)> {
    let prop = |s: &str| (s.to_string(), StatKind::Proportion);
    match p {
        Prepared::Coin => vec![prop("heads")],
        Prepared::Fixed(_) => vec![prop("intransitive")],
        Prepared::Dice(_) => vec![
            prop("intransitive"),
            ("agreement".into(), StatKind::Mean),
            prop("tie"),
        ],
        Prepared::Elections { k, tournaments, .. } => {
            let mut v = vec![prop("condorcet_winner"), prop("transitive")];
            if *tournaments {
                v.extend((0..1usize << pair_count(*k)).map(|i| prop(&format!("tournament_{i}"))));
            }
            v
        }
        Prepared::Triplet { .. } => vec![prop("paradox")],
        Prepared::Kalai { .. } => vec![("paradox".into(), StatKind::Kalai)],
    }
}

fn prepare(spec: &ExperimentSpec) -> Result<Prepared> {
    let cond = spec.conditioning;
    let reject_conditioning = |what: &str| -> Result<()> {
        match cond {
            Some(_) => Err(Error::InvalidInput(format!(
                "{what} experiments take no conditioning"
            ))),
            None => Ok(()),
        }
    };
    Ok(match &spec.experiment {
        Experiment::Coin => {
            reject_conditioning("coin")?;
            Prepared::Coin
        }
        Experiment::FixedTriple { dice } => {
            reject_conditioning("fixed-triple")?;
            let [a, b, c] = dice.clone().map(Die::new);
            Prepared::Fixed([a?, b?, c?])
        }
        Experiment::Dice { model } => {
            reject_conditioning("dice")?;
            Prepared::Dice(model.sampler()?)
        }
        Experiment::Elections { k, n } => {
            if *k < 2 {
                return Err(Error::InvalidInput(format!("k >= 2 required, got {k}")));
            }
            if n % 2 == 0 {
                return Err(Error::InvalidInput(format!(
                    "n must be odd to rule out tied margins, got {n}"
                )));
            }
            let (d, subset) = match cond {
                None => (None, None),
                Some(Conditioning {
                    event: ConditionEvent::CloseMargins,
                    d,
                    subset_excl,
                }) => {
                    let d = d.ok_or_else(|| {
                        Error::InvalidInput("close-margins conditioning needs d".into())
                    })?;
                    if d < 0.0 {
                        return Err(Error::InvalidInput(format!(
                            "d must be nonnegative, got {d}"
                        )));
                    }
                    let subset = match subset_excl {
                        Some(j) if j >= pair_count(*k) => {
                            return Err(Error::InvalidInput(format!(
                                "pair {j} out of range for k = {k}"
                            )))
                        }
                        Some(j) => Some(subset_excluding(*k, j)),
                        None => None,
                    };
                    (Some(d.floor() as i64), subset)
                }
                Some(_) => {
                    return Err(Error::InvalidInput(
                        "elections accept only close-margins conditioning".into(),
                    ))
                }
            };
            Prepared::Elections {
                k: *k,
                n: *n,
                d,
                subset,
                tournaments: *k <= MAX_TOURNAMENT_K,
            }
        }
        Experiment::Triplet { n } => {
            if n % 3 != 0 || (n / 3) % 2 == 0 {
                return Err(Error::InvalidInput(format!(
                    "triplet experiments need n = 3m with m odd, got {n}"
                )));
            }
            let m = n / 3;
            let event = match cond {
                None => None,
                Some(Conditioning {
                    event: e @ ConditionEvent::TripletSum,
                    d,
                    ..
                }) => Some((e, d.unwrap_or_else(|| default_sum_threshold(*n)))),
                Some(Conditioning {
                    event: e @ ConditionEvent::TripletNoise { rho, .. },
                    d,
                    ..
                }) => {
                    crate::triplet::noise_params(rho)?;
                    Some((e, d.unwrap_or_else(|| default_noise_threshold(m))))
                }
                Some(_) => {
                    return Err(Error::InvalidInput(
                        "triplet experiments take triplet-sum or triplet-noise conditioning".into(),
                    ))
                }
            };
            Prepared::Triplet { m, event }
        }
        Experiment::Kalai { aggregator, n, rho } => {
            reject_conditioning("kalai")?;
            aggregator.validate(*n)?;
            crate::triplet::noise_params(*rho)?;
            Prepared::Kalai {
                aggregator: *aggregator,
                n: *n,
                rho: *rho,
            }
        }
    })
}

fn bit(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// One trial: `None` when the conditioning event fails, otherwise one value
/// per statistic.
fn trial(p: &Prepared, rng: &mut ChaCha8Rng) -> Result<Option<Vec<f64>>> {
    Ok(Some(match p {
        Prepared::Coin => vec![bit(rng.random::<bool>())],
        Prepared::Fixed([a, b, c]) => {
            let r = triple_report([a, b, c], |x| x)?;
            vec![bit(r.class == TripleClass::Intransitive)]
        }
        Prepared::Dice(s) => {
            let (a, b, c) = (s.sample(rng)?, s.sample(rng)?, s.sample(rng)?);
            let r = triple_report([&a, &b, &c], |x| s.cdf(x))?;
            vec![
                bit(r.class == TripleClass::Intransitive),
                r.agreements() as f64 / 3.0,
                bit(r.class == TripleClass::HasTie),
            ]
        }
        Prepared::Elections {
            k,
            n,
            d,
            subset,
            tournaments,
        } => {
            let scores = if *k <= MAX_COUNT_SAMPLING_K {
                tally_counts(*k, &sample_ranking_counts(*n, *k, rng))
            } else {
                tally(&sample_profile(*n, *k, rng)?)
            };
            if let Some(d) = d {
                if !is_close(&scores, *d, subset.as_deref()) {
                    return Ok(None);
                }
            }
            let t = outcome(&scores)?;
            let mut v = vec![
                bit(t.condorcet_winner().is_some()),
                bit(is_transitive_outcome(&t)),
            ];
            if *tournaments {
                let idx = tournament_index(&t);
                v.extend((0..1usize << pair_count(*k)).map(|i| bit(i == idx)));
            }
            v
        }
        Prepared::Triplet { m, event } => {
            let e = sample_triplet_election(*m, rng)?;
            let ok = match event {
                None => true,
                Some((ConditionEvent::TripletSum, d)) => e.sum_event(*d),
                Some((ConditionEvent::TripletNoise { rho, eval }, d)) => {
                    e.noise_event(*rho, *d, *eval)?
                }
                Some((ConditionEvent::CloseMargins, _)) => unreachable!("rejected in prepare"),
            };
            if !ok {
                return Ok(None);
            }
            vec![bit(e.paradox())]
        }
        Prepared::Kalai { aggregator, n, rho } => {
            let (x, y) = noisy_pair_outcome(*aggregator, *n, *rho, rng)?;
            vec![(x * y) as f64]
        }
    }))
}

#[derive(Debug, Clone, Default)]
struct Acc {
    accepted: u64,
    sums: Vec<f64>,
    squares: Vec<f64>,
}

impl Acc {
    fn merge(mut self, o: Acc) -> Acc {
        if self.sums.is_empty() {
            return Acc {
                accepted: self.accepted + o.accepted,
                ..o
            };
        }
        self.accepted += o.accepted;
        for (a, b) in self.sums.iter_mut().zip(&o.sums) {
            *a += b;
        }
        for (a, b) in self.squares.iter_mut().zip(&o.squares) {
            *a += b;
        }
        self
    }
}

/// Runs every statistic of the experiment in a single Monte Carlo pass.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    if spec.trials == 0 {
        return Err(Error::InvalidInput("trials must be positive".into()));
    }
    let start = Instant::now();
    let prepared = prepare(spec)?;
    let defs = stat_defs(&prepared);
    let width = defs.len();
    let cfg = spec.mc_config();
    let acc = mc::run_conditioned(
        &cfg,
        Acc::default,
        |a, rng| {
            if let Some(v) = trial(&prepared, rng)? {
                if a.sums.is_empty() {
                    a.sums = vec![0.0; width];
                    a.squares = vec![0.0; width];
                }
                a.accepted += 1;
                for (i, x) in v.into_iter().enumerate() {
                    a.sums[i] += x;
                    a.squares[i] += x * x;
                }
            }
            Ok(())
        },
        Acc::merge,
        |a| a.accepted,
    )?;
    let wall = start.elapsed().as_millis() as u64;
    let n = acc.accepted;
    let statistics = defs
        .into_iter()
        .enumerate()
        .map(|(i, (statistic, kind))| {
            let (sum, sq) = if n == 0 {
                (0.0, 0.0)
            } else {
                (acc.sums[i], acc.squares[i])
            };
            let mut est = match kind {
                // indicator sums are exact integers in f64
                StatKind::Proportion => MonteCarloEstimate::from_counts(
                    sum as u64,
                    n,
                    spec.trials,
                    spec.seed,
                    spec.stderr,
                ),
                StatKind::Mean | StatKind::Kalai => {
                    let nf = n as f64;
                    let mean = sum / nf;
                    let var = if n > 1 {
                        ((sq - nf * mean * mean) / (nf - 1.0)).max(0.0)
                    } else {
                        f64::NAN
                    };
                    let se = (var / nf).sqrt();
                    let (estimate, stderr) = if kind == StatKind::Kalai {
                        (0.25 * (1.0 - 3.0 * mean), 0.75 * se)
                    } else {
                        (mean, se)
                    };
                    MonteCarloEstimate {
                        estimate: if n == 0 { f64::NAN } else { estimate },
                        stderr,
                        trials: spec.trials,
                        accepted: n,
                        seed: spec.seed,
                        wall_time_ms: 0,
                    }
                }
            };
            est.wall_time_ms = wall;
            NamedEstimate {
                statistic,
                kind,
                estimate: est,
            }
        })
        .collect();
    Ok(ExperimentReport {
        spec: spec.clone(),
        statistics,
    })
}

/// The requested (or primary) statistic of [`run_experiment`].
pub fn estimate_probability(spec: &ExperimentSpec) -> Result<MonteCarloEstimate> {
    let report = run_experiment(spec)?;
    let wanted = spec
        .statistic
        .clone()
        .unwrap_or_else(|| report.statistics[0].statistic.clone());
    report.get(&wanted).cloned().ok_or_else(|| {
        let known: Vec<&str> = report
            .statistics
            .iter()
            .map(|s| s.statistic.as_str())
            .collect();
        Error::InvalidInput(format!(
            "unknown statistic {wanted:?}; available: {}",
            known.join(", ")
        ))
    })
}
