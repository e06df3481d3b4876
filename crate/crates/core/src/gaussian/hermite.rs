//! Odd Hermite coefficients of the sign/indicator functions and the classical
//! series identities they satisfy.

use crate::numerics::{ln_binomial, ln_factorial, CompensatedSum};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// (d_{2q+1}, ℓ_{2q+1}) with d_{2q+1} = (−1)^q / (2^q q! (2q+1) √(2π)) and
/// ℓ_{2q+1} = d_{2q+1} 2^{−q−1/2}.
pub fn hermite_coeff(q: u64) -> (f64, f64) {
    let ln_d = ln_abs_d(q);
    let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
    let ln_l = ln_d - (q as f64 + 0.5) * 2f64.ln();
    (sign * ln_d.exp(), sign * ln_l.exp())
}

fn ln_abs_d(q: u64) -> f64 {
    -(q as f64) * 2f64.ln() - ln_factorial(q) - ((2 * q + 1) as f64).ln() - 0.5 * (2.0 * PI).ln()
}

/// d²_{2q+1}(2q+1)! = C(2q, q) 4^{−q} / (2π(2q+1)), evaluated in log space.
///
/// These are the Taylor coefficients of arcsin(x)/(2π), the covariance of two
/// sign indicators of unit-variance Gaussians with correlation x.
pub fn odd_energy(q: u64) -> f64 {
    let ln = ln_binomial(2 * q, q)
        - (2 * q) as f64 * 2f64.ln()
        - (2.0 * PI).ln()
        - ((2 * q + 1) as f64).ln();
    ln.exp()
}

/// Probabilists' Hermite polynomial He_k(x) by He_{k+1} = x He_k − k He_{k−1}.
pub fn hermite_poly(k: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if k == 0 {
        return prev;
    }
    for j in 1..k {
        let next = x * cur - j as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Truncated odd Hermite expansion, q = 0..=order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HermiteSeries {
    pub order: u64,
}

impl HermiteSeries {
    pub fn new(order: u64) -> Self {
        HermiteSeries { order }
    }

    pub fn d(&self) -> Vec<f64> {
        (0..=self.order).map(|q| hermite_coeff(q).0).collect()
    }

    pub fn ell(&self) -> Vec<f64> {
        (0..=self.order).map(|q| hermite_coeff(q).1).collect()
    }

    /// Σ_{q ≤ order} d²_{2q+1}(2q+1)! x^{2q+1}.
    pub fn energy_sum(&self, x: f64) -> f64 {
        let x2 = x * x;
        let mut pow = x;
        let mut s = CompensatedSum::new();
        for q in 0..=self.order {
            s.add(odd_energy(q) * pow);
            pow *= x2;
        }
        s.value()
    }
}

/// The four series identities satisfied by the odd coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityKind {
    /// ¼ = Σ d²_{2k+1}(2k+1)!
    Quarter,
    /// π = Σ C(2k,k) / (2^{2k−1}(2k+1))
    RamanujanPi,
    /// π = Σ 3 C(2q,q) / ((2q+1) 2^{4q})
    NewtonPi,
    /// 1/6 = Σ (2q+1)! 2^{−2q} d²_{2q+1}
    Sixth,
}

impl IdentityKind {
    pub const ALL: [IdentityKind; 4] = [
        IdentityKind::Quarter,
        IdentityKind::RamanujanPi,
        IdentityKind::NewtonPi,
        IdentityKind::Sixth,
    ];

    pub fn limit(&self) -> f64 {
        match self {
            IdentityKind::Quarter => 0.25,
            IdentityKind::RamanujanPi | IdentityKind::NewtonPi => PI,
            IdentityKind::Sixth => 1.0 / 6.0,
        }
    }

    /// Whether the terms decay only like k^{−3/2}.
    pub fn is_slow(&self) -> bool {
        matches!(self, IdentityKind::Quarter | IdentityKind::RamanujanPi)
    }

    fn ln_term(&self, k: u64) -> f64 {
        let ln2 = 2f64.ln();
        let kf = k as f64;
        let odd = ((2 * k + 1) as f64).ln();
        match self {
            IdentityKind::Quarter => ln_binomial(2 * k, k) - 2.0 * kf * ln2 - (2.0 * PI).ln() - odd,
            IdentityKind::RamanujanPi => ln_binomial(2 * k, k) - (2.0 * kf - 1.0) * ln2 - odd,
            IdentityKind::NewtonPi => 3f64.ln() + ln_binomial(2 * k, k) - odd - 4.0 * kf * ln2,
            IdentityKind::Sixth => ln_factorial(2 * k + 1) - 2.0 * kf * ln2 + 2.0 * ln_abs_d(k),
        }
    }
}

impl fmt::Display for IdentityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IdentityKind::Quarter => "quarter",
            IdentityKind::RamanujanPi => "ramanujan_pi",
            IdentityKind::NewtonPi => "newton_pi",
            IdentityKind::Sixth => "sixth",
        })
    }
}

impl FromStr for IdentityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityKind::ALL
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown identity {s:?}")))
    }
}

/// Partial sum of the identity through index `q_max` (all terms positive).
pub fn identity_partial_sum(kind: IdentityKind, q_max: u64) -> f64 {
    (0..=q_max)
        .map(|k| kind.ln_term(k).exp())
        .collect::<CompensatedSum>()
        .value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{gaussian_expectation, odd_hermite_energy_closed_form};

    #[test]
    fn first_coefficients() {
        let (d1, l1) = hermite_coeff(0);
        assert!((d1 - 0.398_942_280_4).abs() < 1e-10);
        assert!((l1 - 0.282_094_791_8).abs() < 1e-10);
        assert!((hermite_coeff(1).0 + 0.066_490_380_1).abs() < 1e-10);
        for q in 0..=50u64 {
            let (d, l) = hermite_coeff(q);
            let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(d.signum(), sign);
            assert!((l / d - 2f64.powf(-(q as f64) - 0.5)).abs() < 1e-13);
        }
    }

    #[test]
    fn energy_matches_squared_coefficients() {
        for q in 0..20u64 {
            let (d, _) = hermite_coeff(q);
            let direct = d * d * ln_factorial(2 * q + 1).exp();
            assert!((odd_energy(q) / direct - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn energy_series_is_arcsine() {
        let s = HermiteSeries::new(200);
        for x in [-0.9, -0.3, 0.0, 0.5, 0.8] {
            assert!((s.energy_sum(x) - odd_hermite_energy_closed_form(x)).abs() < 1e-13);
        }
    }

    #[test]
    fn hermite_orthogonality() {
        for m in 0..=8 {
            for n in 0..=8 {
                let v = gaussian_expectation(|x| hermite_poly(m, x) * hermite_poly(n, x), 60);
                let expect = if m == n {
                    ln_factorial(n as u64).exp()
                } else {
                    0.0
                };
                assert!((v - expect).abs() < 1e-8, "{m} {n}: {v}");
            }
        }
    }

    #[test]
    fn identity_values() {
        let q0 = identity_partial_sum(IdentityKind::Quarter, 0);
        assert!((q0 - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!((identity_partial_sum(IdentityKind::Sixth, 30) - 1.0 / 6.0).abs() < 1e-12);
        assert!((identity_partial_sum(IdentityKind::NewtonPi, 30) - PI).abs() < 1e-10);
        for kind in [IdentityKind::Quarter, IdentityKind::RamanujanPi] {
            let q = 10_000;
            let tol = 3.0 / (q as f64).sqrt();
            assert!((identity_partial_sum(kind, q) - kind.limit()).abs() < tol);
        }
    }

    #[test]
    fn identity_terms_are_consistent() {
        // Ramanujan's terms are 4π times the quarter terms
        for k in 0..30 {
            let r = IdentityKind::RamanujanPi.ln_term(k) - IdentityKind::Quarter.ln_term(k);
            assert!((r - (4.0 * PI).ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn partial_sums_increase() {
        for kind in [
            IdentityKind::RamanujanPi,
            IdentityKind::NewtonPi,
            IdentityKind::Sixth,
        ] {
            let sums: Vec<f64> = (0..15).map(|q| identity_partial_sum(kind, q)).collect();
            assert!(sums.windows(2).all(|w| w[1] > w[0]), "{kind}");
        }
    }

    #[test]
    fn parse_names() {
        for k in IdentityKind::ALL {
            assert_eq!(k.to_string().parse::<IdentityKind>().unwrap(), k);
        }
        assert!("pi".parse::<IdentityKind>().is_err());
    }
}
