//! Samplers for the random dice models and for impartial-culture profiles.

pub mod conditioned;
pub mod profile;
pub mod stationary;

pub use conditioned::{
    sample_continuous_conditioned, sample_continuous_conditioned_with_budget,
    sample_discrete_conditioned, sample_iid, DEFAULT_MAX_ATTEMPTS,
};
pub use profile::{sample_profile, sample_ranking_counts, RankingProfile};
pub use stationary::{StationaryGaussianSampler, StationaryMethod};

use crate::dice::Die;
use crate::dist::{half_variance_normal_cdf, Dist, FaceDistribution};
use crate::kernel::CorrelationKernel;
use crate::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// One of the random dice models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "model")]
pub enum DiceModel {
    /// Uniform over {1..n}^n with face-sum n(n+1)/2.
    DiscreteConditioned { n: usize },
    /// i.i.d. faces conditioned on face-sum zero.
    ContinuousConditioned { n: usize, dist: Dist },
    /// Centered Gaussian faces with Cov(G_i, G_j) = ρ(i − j).
    StationaryGaussian {
        n: usize,
        kernel: CorrelationKernel,
        #[serde(default)]
        method: StationaryMethod,
    },
    /// Plain i.i.d. faces.
    IidContinuous { n: usize, dist: Dist },
}

impl DiceModel {
    pub fn n(&self) -> usize {
        match self {
            DiceModel::DiscreteConditioned { n }
            | DiceModel::ContinuousConditioned { n, .. }
            | DiceModel::StationaryGaussian { n, .. }
            | DiceModel::IidContinuous { n, .. } => *n,
        }
    }

    /// Short name used in CLI output.
    pub fn name(&self) -> &'static str {
        match self {
            DiceModel::DiscreteConditioned { .. } => "discrete",
            DiceModel::ContinuousConditioned { .. } => "conditioned",
            DiceModel::StationaryGaussian { .. } => "stationary",
            DiceModel::IidContinuous { .. } => "iid",
        }
    }

    pub fn sampler(&self) -> Result<DiceSampler> {
        let n = self.n();
        let engine = match self {
            DiceModel::DiscreteConditioned { n } => {
                if *n < 1 {
                    return Err(Error::InvalidInput("n >= 1 required".into()));
                }
                SamplerEngine::Discrete
            }
            DiceModel::ContinuousConditioned { n, dist } => {
                if *n < 2 {
                    return Err(Error::InvalidInput(format!(
                        "n >= 2 required for face-sum conditioning, got {n}"
                    )));
                }
                SamplerEngine::Conditioned(*dist)
            }
            DiceModel::StationaryGaussian { n, kernel, method } => {
                SamplerEngine::Stationary(StationaryGaussianSampler::new(*n, kernel, *method)?)
            }
            DiceModel::IidContinuous { n, dist } => {
                if *n < 1 {
                    return Err(Error::InvalidInput("n >= 1 required".into()));
                }
                SamplerEngine::Iid(*dist)
            }
        };
        Ok(DiceSampler { n, engine })
    }
}

#[derive(Debug)]
enum SamplerEngine {
    Discrete,
    Conditioned(Dist),
    Stationary(StationaryGaussianSampler),
    Iid(Dist),
}

/// A [`DiceModel`] with any precomputation done.
#[derive(Debug)]
pub struct DiceSampler {
    n: usize,
    engine: SamplerEngine,
}

impl DiceSampler {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Die> {
        match &self.engine {
            SamplerEngine::Discrete => Ok(sample_discrete_conditioned(self.n, rng)),
            SamplerEngine::Conditioned(d) => sample_continuous_conditioned(self.n, d, rng),
            SamplerEngine::Stationary(s) => Ok(s.sample(rng)),
            SamplerEngine::Iid(d) => Ok(sample_iid(self.n, d, rng)),
        }
    }

    /// The single-face CDF F used by the CDF-sum predictor. For discrete dice
    /// this is the CDF of a uniform face on {1..n}.
    pub fn cdf(&self, x: f64) -> f64 {
        match &self.engine {
            SamplerEngine::Discrete => (x.floor() / self.n as f64).clamp(0.0, 1.0),
            SamplerEngine::Conditioned(d) | SamplerEngine::Iid(d) => d.cdf(x),
            SamplerEngine::Stationary(_) => half_variance_normal_cdf(x),
        }
    }
}
