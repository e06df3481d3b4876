//! Intransitive dice, Condorcet elections under close-election conditioning,
//! and the Gaussian constants behind them.
//!
//! The crate is organised as small pure kernels (dice statistics, samplers,
//! series, exact combinatorics) plus a Monte Carlo engine that runs them
//! reproducibly in parallel.

pub mod dice;
pub mod dist;
pub mod elections;
mod error;
pub mod experiment;
pub mod gaussian;
pub mod kernel;
pub mod mc;
pub mod numerics;
pub mod oracle;
pub mod samplers;
pub mod stats;
pub mod tournament;
pub mod triplet;
pub mod verify;

pub use dice::{
    cdf_sum, classify_triple, pair_stats, triple_report, w_statistic, Die, PairStats, TripleClass,
    TripleReport,
};
pub use dist::{Dist, FaceDistribution};
pub use error::{Error, Result};
pub use experiment::{estimate_probability, run_experiment, Experiment, ExperimentSpec};
pub use kernel::CorrelationKernel;
pub use mc::{McConfig, MonteCarloEstimate};
pub use samplers::{DiceModel, DiceSampler, RankingProfile, StationaryMethod};
pub use tournament::Tournament;
