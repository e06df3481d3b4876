//! Distribution constants and the 1/n pair-probability predictors for
//! face-sum conditioned dice.

use crate::dist::{Dist, FaceDistribution};
use crate::numerics::integrate;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

const QUAD_TOL: f64 = 1e-10;

/// A = E[xF(x)], B = E[x²F(x)], the third and fourth cumulants, and
/// α₁ = 5γ₃²/12 − γ₄/8, α₂ = γ₃/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistConstants {
    pub a: f64,
    pub b: f64,
    pub gamma3: f64,
    pub gamma4: f64,
    pub alpha1: f64,
    pub alpha2: f64,
}

impl DistConstants {
    /// Computes the constants by adaptive quadrature over the support.
    pub fn of<D: FaceDistribution>(dist: &D) -> Self {
        let (lo, hi) = dist.support();
        let e = |g: &dyn Fn(f64) -> f64| integrate(|x| g(x) * dist.pdf(x), lo, hi, QUAD_TOL);
        let m1 = e(&|x| x);
        let m2 = e(&|x| x * x);
        let m3 = e(&|x| x.powi(3));
        let m4 = e(&|x| x.powi(4));
        let var = m2 - m1 * m1;
        let k3 = m3 - 3.0 * m1 * m2 + 2.0 * m1.powi(3);
        let k4 = m4 - 4.0 * m1 * m3 - 3.0 * m2 * m2 + 12.0 * m1 * m1 * m2 - 6.0 * m1.powi(4);
        // standardized cumulants; the built-ins already have unit variance
        let gamma3 = k3 / var.powf(1.5);
        let gamma4 = k4 / (var * var);
        let a = e(&|x| x * dist.cdf(x));
        let b = e(&|x| x * x * dist.cdf(x));
        DistConstants {
            a,
            b,
            gamma3,
            gamma4,
            alpha1: 5.0 * gamma3 * gamma3 / 12.0 - gamma4 / 8.0,
            alpha2: gamma3 / 2.0,
        }
    }
}

/// The four pair probabilities with 1/n expansions, for independent
/// conditioned dice a, b, c. E₀ is the unconditioned event, E_a the event
/// that a beats b with a fixed, and so on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairProbKind {
    /// P[a₁ > b₁ ∧ a₂ > b₂] = ¼ − 2A²/n
    BothUnconditioned,
    /// P[a₁ > b₁ | face-sum of a] = ½ + 1/(4n) + α₂A/n − B/(2n)
    SingleGivenA,
    /// P[a₁ > b₁ ∧ a₂ > b₂ | face-sum of a] = ¼ + 1/(4n) + α₂A/n − B/(2n) − A²/n
    BothGivenA,
    /// P[a₁ > b₁ ∧ a₂ > c₁ | face-sums of a and b] = ¼ + 1/(8n) + α₂A/(2n) − B/(4n) − A²/n
    CrossGivenAB,
}

impl PairProbKind {
    pub const ALL: [PairProbKind; 4] = [
        PairProbKind::BothUnconditioned,
        PairProbKind::SingleGivenA,
        PairProbKind::BothGivenA,
        PairProbKind::CrossGivenAB,
    ];

    /// The n → ∞ limit.
    pub fn limit(&self) -> f64 {
        match self {
            PairProbKind::SingleGivenA => 0.5,
            _ => 0.25,
        }
    }
}

impl fmt::Display for PairProbKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairProbKind::BothUnconditioned => "both-unconditioned",
            PairProbKind::SingleGivenA => "single-given-a",
            PairProbKind::BothGivenA => "both-given-a",
            PairProbKind::CrossGivenAB => "cross-given-ab",
        })
    }
}

impl FromStr for PairProbKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        PairProbKind::ALL
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| crate::Error::InvalidInput(format!("unknown pair probability {s:?}")))
    }
}

/// The 1/n expansion of the selected pair probability.
pub fn pair_prob_from_constants(c: &DistConstants, n: usize, which: PairProbKind) -> f64 {
    let n = n as f64;
    let (a, b, a2) = (c.a, c.b, c.alpha2);
    match which {
        PairProbKind::BothUnconditioned => 0.25 - 2.0 * a * a / n,
        PairProbKind::SingleGivenA => 0.5 + 1.0 / (4.0 * n) + a2 * a / n - b / (2.0 * n),
        PairProbKind::BothGivenA => 0.25 + 1.0 / (4.0 * n) + a2 * a / n - b / (2.0 * n) - a * a / n,
        PairProbKind::CrossGivenAB => {
            0.25 + 1.0 / (8.0 * n) + a2 * a / (2.0 * n) - b / (4.0 * n) - a * a / n
        }
    }
}

pub fn pair_prob_asymptotic(dist: Dist, n: usize, which: PairProbKind) -> f64 {
    pair_prob_from_constants(&DistConstants::of(&dist), n, which)
}
