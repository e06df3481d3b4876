//! Stationary correlation kernels ρ: ℤ → ℝ with ρ(0) = 1/2.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Fractional Gaussian noise correlation, normalized so that s_H(0) = 1/2:
/// s_H(k) = ¼(|k+1|^{2H} + |k−1|^{2H} − 2|k|^{2H}).
pub fn s_kernel(k: i64, hurst: f64) -> f64 {
    let k = k.unsigned_abs() as f64;
    let e = 2.0 * hurst;
    0.25 * ((k + 1.0).powf(e) + (k - 1.0).abs().powf(e) - 2.0 * k.powf(e))
}

/// Constant c_H = H(2H−1)/2 in s_H(k) ~ c_H |k|^{2H−2}.
pub fn c_asymptotic(hurst: f64) -> f64 {
    hurst * (2.0 * hurst - 1.0) / 2.0
}

/// Correlation function of a stationary Gaussian die.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum CorrelationKernel {
    /// Fractional Brownian increments with Hurst index in (0, 1).
    FractionalGaussian { hurst: f64 },
    /// ρ(0), ρ(1), …, ρ(L); lags beyond L are zero.
    Tabulated { lags: Vec<f64> },
}

impl CorrelationKernel {
    pub fn fbm(hurst: f64) -> Result<Self> {
        let k = CorrelationKernel::FractionalGaussian { hurst };
        k.validate()?;
        Ok(k)
    }

    pub fn tabulated(lags: Vec<f64>) -> Result<Self> {
        let k = CorrelationKernel::Tabulated { lags };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            CorrelationKernel::FractionalGaussian { hurst } => {
                if !(*hurst > 0.0 && *hurst < 1.0) {
                    return Err(Error::Domain(format!("Hurst index {hurst} outside (0, 1)")));
                }
            }
            CorrelationKernel::Tabulated { lags } => {
                if lags
                    .first()
                    .map(|&r| (r - 0.5).abs() > 1e-12)
                    .unwrap_or(true)
                {
                    return Err(Error::Domain(
                        "tabulated kernel must start with rho(0) = 1/2".into(),
                    ));
                }
                if lags.iter().any(|x| !x.is_finite()) {
                    return Err(Error::Domain(
                        "tabulated kernel has non-finite entries".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn rho(&self, k: i64) -> f64 {
        match self {
            CorrelationKernel::FractionalGaussian { hurst } => s_kernel(k, *hurst),
            CorrelationKernel::Tabulated { lags } => {
                lags.get(k.unsigned_abs() as usize).copied().unwrap_or(0.0)
            }
        }
    }

    /// ρ(0), …, ρ(len−1).
    pub fn lags(&self, len: usize) -> Vec<f64> {
        (0..len as i64).map(|k| self.rho(k)).collect()
    }

    pub fn hurst(&self) -> Option<f64> {
        match self {
            CorrelationKernel::FractionalGaussian { hurst } => Some(*hurst),
            CorrelationKernel::Tabulated { .. } => None,
        }
    }

    /// Whether Σ_k |ρ(k)| < ∞.
    pub fn is_summable(&self) -> bool {
        match self {
            CorrelationKernel::FractionalGaussian { hurst } => *hurst <= 0.5,
            CorrelationKernel::Tabulated { .. } => true,
        }
    }
}
