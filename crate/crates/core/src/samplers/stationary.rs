//! Centered stationary Gaussian dice with Cov(G_i, G_j) = ρ(i − j).
//!
//! Two methods are provided: circulant embedding (spectral synthesis on the
//! first row extended to length 2(n−1)) and a Durbin–Levinson factorization
//! of the Toeplitz covariance. The second is O(n²) per draw and serves as the
//! fallback and as an independent check on the first.

use crate::dice::Die;
use crate::kernel::CorrelationKernel;
use crate::{Error, Result};
use log::warn;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

/// Largest n accepted by the Toeplitz factorization.
pub const MAX_FACTORIZATION_N: usize = 4096;

/// Relative tolerance on negative circulant eigenvalues.
const EIGEN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StationaryMethod {
    #[default]
    CirculantEmbedding,
    ToeplitzFactorization,
}

impl fmt::Display for StationaryMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StationaryMethod::CirculantEmbedding => "circulant",
            StationaryMethod::ToeplitzFactorization => "toeplitz",
        })
    }
}

impl FromStr for StationaryMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "circulant" | "circulant-embedding" => Ok(StationaryMethod::CirculantEmbedding),
            "toeplitz" | "toeplitz-factorization" => Ok(StationaryMethod::ToeplitzFactorization),
            other => Err(Error::InvalidInput(format!(
                "unknown stationary method `{other}`"
            ))),
        }
    }
}

enum Engine {
    Circulant {
        scale: Vec<f64>,
        fft: Arc<dyn Fft<f64>>,
    },
    Levinson {
        coeffs: Vec<f64>,
        sd: Vec<f64>,
    },
}

/// A prepared sampler for stationary Gaussian dice of a fixed length.
pub struct StationaryGaussianSampler {
    n: usize,
    method: StationaryMethod,
    engine: Engine,
}

impl fmt::Debug for StationaryGaussianSampler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StationaryGaussianSampler")
            .field("n", &self.n)
            .field("method", &self.method)
            .finish()
    }
}

impl StationaryGaussianSampler {
    /// Prepares the sampler. Circulant embedding falls back to the Toeplitz
    /// factorization (with a logged warning) when the embedding has
    /// significantly negative eigenvalues.
    pub fn new(n: usize, kernel: &CorrelationKernel, method: StationaryMethod) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("n must be positive".into()));
        }
        kernel.validate()?;
        let lags = kernel.lags(n);
        match method {
            StationaryMethod::CirculantEmbedding if n >= 2 => match circulant_engine(&lags) {
                Ok(engine) => Ok(StationaryGaussianSampler { n, method, engine }),
                Err(min_eig) => {
                    warn!(
                        "circulant embedding has eigenvalue {min_eig:e} for n = {n}; \
                         falling back to Toeplitz factorization"
                    );
                    Self::factorized(n, &lags)
                }
            },
            _ => Self::factorized(n, &lags),
        }
    }

    fn factorized(n: usize, lags: &[f64]) -> Result<Self> {
        if n > MAX_FACTORIZATION_N {
            return Err(Error::InvalidInput(format!(
                "Toeplitz factorization limited to n <= {MAX_FACTORIZATION_N}, got {n}"
            )));
        }
        let (coeffs, var) = durbin_levinson(lags)?;
        Ok(StationaryGaussianSampler {
            n,
            method: StationaryMethod::ToeplitzFactorization,
            engine: Engine::Levinson {
                coeffs,
                sd: var.iter().map(|v| v.sqrt()).collect(),
            },
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// The method actually in use (after any fallback).
    pub fn method(&self) -> StationaryMethod {
        self.method
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Die {
        match &self.engine {
            Engine::Circulant { .. } => self.sample_pair(rng).0,
            Engine::Levinson { coeffs, sd } => {
                let mut g = vec![0f64; self.n];
                for t in 0..self.n {
                    let phi = &coeffs[tri_offset(t)..tri_offset(t) + t];
                    let mean: f64 = phi.iter().enumerate().map(|(j, c)| c * g[t - 1 - j]).sum();
                    let z: f64 = StandardNormal.sample(rng);
                    g[t] = mean + sd[t] * z;
                }
                Die::from_vec_unchecked(g)
            }
        }
    }

    /// Two independent dice from one spectral synthesis (real and imaginary
    /// parts). The factorization method draws them one after the other.
    pub fn sample_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> (Die, Die) {
        match &self.engine {
            Engine::Circulant { scale, fft } => {
                let mut buf: Vec<Complex<f64>> = scale
                    .iter()
                    .map(|&s| {
                        let re: f64 = StandardNormal.sample(rng);
                        let im: f64 = StandardNormal.sample(rng);
                        Complex::new(s * re, s * im)
                    })
                    .collect();
                fft.process(&mut buf);
                let a = buf[..self.n].iter().map(|c| c.re).collect();
                let b = buf[..self.n].iter().map(|c| c.im).collect();
                (Die::from_vec_unchecked(a), Die::from_vec_unchecked(b))
            }
            Engine::Levinson { .. } => (self.sample(rng), self.sample(rng)),
        }
    }
}

fn tri_offset(t: usize) -> usize {
    t * t.saturating_sub(1) / 2
}

/// Eigenvalue scales sqrt(λ_k / M) for the minimal circulant embedding, or the
/// most negative eigenvalue when the embedding is not nonnegative definite.
fn circulant_engine(lags: &[f64]) -> std::result::Result<Engine, f64> {
    let n = lags.len();
    let m = 2 * (n - 1);
    let mut row: Vec<Complex<f64>> = Vec::with_capacity(m);
    row.extend(lags.iter().map(|&r| Complex::new(r, 0.0)));
    row.extend(lags[1..n - 1].iter().rev().map(|&r| Complex::new(r, 0.0)));
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(m);
    fft.process(&mut row);
    let max = row.iter().map(|c| c.re.abs()).fold(0.0, f64::max);
    let min = row.iter().map(|c| c.re).fold(f64::INFINITY, f64::min);
    if min < -EIGEN_TOL * max.max(1.0) {
        return Err(min);
    }
    let scale = row
        .iter()
        .map(|c| (c.re.max(0.0) / m as f64).sqrt())
        .collect();
    Ok(Engine::Circulant { scale, fft })
}

/// Durbin–Levinson recursion for the Toeplitz matrix with first row `lags`.
///
/// Returns the one-step prediction coefficients φ_{t,1..t} for every t,
/// packed row after row, and the innovation variances v_0..v_{n−1}. A
/// nonpositive v_t means the leading minor of order t+1 is not positive.
pub fn durbin_levinson(lags: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = lags.len();
    let mut coeffs = vec![0f64; tri_offset(n)];
    let mut var = Vec::with_capacity(n);
    let scale = lags[0].abs().max(f64::MIN_POSITIVE);
    if lags[0] <= 0.0 {
        return Err(Error::NotPositiveDefinite {
            order: 1,
            pivot: lags[0],
        });
    }
    var.push(lags[0]);
    let mut prev: Vec<f64> = Vec::new();
    for t in 1..n {
        let mut num = lags[t];
        for j in 1..t {
            num -= prev[j - 1] * lags[t - j];
        }
        let kappa = num / var[t - 1];
        let mut cur = vec![0f64; t];
        for j in 1..t {
            cur[j - 1] = prev[j - 1] - kappa * prev[t - j - 1];
        }
        cur[t - 1] = kappa;
        let v = var[t - 1] * (1.0 - kappa * kappa);
        if v <= 1e-14 * scale {
            return Err(Error::NotPositiveDefinite {
                order: t + 1,
                pivot: v,
            });
        }
        var.push(v);
        coeffs[tri_offset(t)..tri_offset(t) + t].copy_from_slice(&cur);
        prev = cur;
    }
    Ok((coeffs, var))
}
