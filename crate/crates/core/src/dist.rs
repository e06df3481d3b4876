//! Single-face distributions for the continuous dice models.
//!
//! Every built-in law has mean zero and variance one. Samplers only need the
//! density, its supremum (for the hyperplane acceptance step) and a way to
//! draw i.i.d. faces, so custom laws plug in through [`FaceDistribution`].

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;
use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// Standard normal CDF.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// Standard normal density.
pub fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// CDF of N(0, 1/2), the face law of stationary Gaussian dice.
pub fn half_variance_normal_cdf(x: f64) -> f64 {
    std_normal_cdf(SQRT_2 * x)
}

/// A continuous face law usable by the conditioned and i.i.d. samplers.
pub trait FaceDistribution: Send + Sync {
    fn pdf(&self, x: f64) -> f64;
    fn cdf(&self, x: f64) -> f64;
    /// Supremum of the density; the hyperplane sampler accepts with
    /// probability `pdf(x) / pdf_sup()`.
    fn pdf_sup(&self) -> f64;
    /// Closed support interval, possibly infinite at either end.
    fn support(&self) -> (f64, f64);
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64
    where
        Self: Sized;
}

/// The built-in face laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dist {
    /// Uniform on (-√3, √3).
    #[serde(alias = "uniform")]
    UniformSym,
    /// N(0, 1).
    #[serde(alias = "gaussian")]
    StdGaussian,
    /// Density e^{-x-1} on [-1, ∞).
    #[serde(alias = "shifted-exp")]
    ShiftedExponential,
}

impl Dist {
    pub const ALL: [Dist; 3] = [
        Dist::UniformSym,
        Dist::StdGaussian,
        Dist::ShiftedExponential,
    ];
}

impl FaceDistribution for Dist {
    fn pdf(&self, x: f64) -> f64 {
        match self {
            Dist::UniformSym => {
                if x.abs() <= SQRT_3 {
                    1.0 / (2.0 * SQRT_3)
                } else {
                    0.0
                }
            }
            Dist::StdGaussian => std_normal_pdf(x),
            Dist::ShiftedExponential => {
                if x >= -1.0 {
                    (-x - 1.0).exp()
                } else {
                    0.0
                }
            }
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        match self {
            Dist::UniformSym => ((x + SQRT_3) / (2.0 * SQRT_3)).clamp(0.0, 1.0),
            Dist::StdGaussian => std_normal_cdf(x),
            Dist::ShiftedExponential => {
                if x <= -1.0 {
                    0.0
                } else {
                    -(-x - 1.0).exp_m1()
                }
            }
        }
    }

    fn pdf_sup(&self) -> f64 {
        match self {
            Dist::UniformSym => 1.0 / (2.0 * SQRT_3),
            Dist::StdGaussian => 1.0 / (2.0 * PI).sqrt(),
            Dist::ShiftedExponential => 1.0,
        }
    }

    fn support(&self) -> (f64, f64) {
        match self {
            Dist::UniformSym => (-SQRT_3, SQRT_3),
            Dist::StdGaussian => (f64::NEG_INFINITY, f64::INFINITY),
            Dist::ShiftedExponential => (-1.0, f64::INFINITY),
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Dist::UniformSym => rng.random_range(-SQRT_3..SQRT_3),
            Dist::StdGaussian => StandardNormal.sample(rng),
            Dist::ShiftedExponential => {
                let e: f64 = Exp1.sample(rng);
                e - 1.0
            }
        }
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dist::UniformSym => "uniform",
            Dist::StdGaussian => "gaussian",
            Dist::ShiftedExponential => "shifted-exp",
        })
    }
}

impl FromStr for Dist {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" | "uniform-sym" => Ok(Dist::UniformSym),
            "gaussian" | "std-gaussian" => Ok(Dist::StdGaussian),
            "shifted-exp" | "shifted-exponential" => Ok(Dist::ShiftedExponential),
            other => Err(crate::Error::InvalidInput(format!(
                "unknown distribution `{other}`"
            ))),
        }
    }
}

/// A user-supplied law given by its inverse CDF together with density data.
pub struct InverseCdfDist<Q, P, C> {
    pub inverse_cdf: Q,
    pub pdf: P,
    pub cdf: C,
    pub pdf_sup: f64,
    pub support: (f64, f64),
}

impl<Q, P, C> FaceDistribution for InverseCdfDist<Q, P, C>
where
    Q: Fn(f64) -> f64 + Send + Sync,
    P: Fn(f64) -> f64 + Send + Sync,
    C: Fn(f64) -> f64 + Send + Sync,
{
    fn pdf(&self, x: f64) -> f64 {
        (self.pdf)(x)
    }

    fn cdf(&self, x: f64) -> f64 {
        (self.cdf)(x)
    }

    fn pdf_sup(&self) -> f64 {
        self.pdf_sup
    }

    fn support(&self) -> (f64, f64) {
        self.support
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        (self.inverse_cdf)(u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_and_pdf_are_consistent() {
        for d in Dist::ALL {
            let (lo, hi) = d.support();
            let (lo, hi) = (lo.max(-8.0), hi.min(8.0));
            // trapezoid integral of the pdf reproduces the cdf increments
            let steps = 20_000;
            let h = (hi - lo) / steps as f64;
            let mut acc = 0.0;
            for i in 0..steps {
                let x = lo + i as f64 * h;
                acc += 0.5 * h * (d.pdf(x + 1e-12) + d.pdf(x + h - 1e-12));
            }
            assert!((acc - (d.cdf(hi) - d.cdf(lo))).abs() < 1e-4, "{d}");
            assert!(d.pdf_sup() + 1e-15 >= d.pdf(0.0));
        }
    }

    #[test]
    fn half_variance_cdf_at_zero() {
        assert_eq!(half_variance_normal_cdf(0.0), 0.5);
        assert!((std_normal_cdf(1.96) - 0.975_002_104_851_779_5).abs() < 5e-12);
    }

    #[test]
    fn parse_round_trip() {
        for d in Dist::ALL {
            assert_eq!(d.to_string().parse::<Dist>().unwrap(), d);
        }
        assert!("cauchy".parse::<Dist>().is_err());
    }
}
