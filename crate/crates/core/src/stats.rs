//! Goodness-of-fit tests used to validate samplers against their oracles.

use crate::{Error, Result};
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Pearson chi-square statistic and upper-tail p-value of observed counts
/// against expected probabilities; cells with zero probability must be empty.
pub fn chi_square_test(observed: &[u64], probs: &[f64]) -> Result<(f64, f64)> {
    if observed.len() != probs.len() || observed.len() < 2 {
        return Err(Error::InvalidInput(
            "chi-square needs matching cell vectors of length >= 2".into(),
        ));
    }
    let total: u64 = observed.iter().sum();
    let mut stat = 0.0;
    let mut cells = 0usize;
    for (&o, &p) in observed.iter().zip(probs) {
        if p <= 0.0 {
            if o > 0 {
                return Ok((f64::INFINITY, 0.0));
            }
            continue;
        }
        let e = p * total as f64;
        stat += (o as f64 - e).powi(2) / e;
        cells += 1;
    }
    let df = (cells - 1) as f64;
    let dist = ChiSquared::new(df).map_err(|e| Error::InvalidInput(e.to_string()))?;
    Ok((stat, 1.0 - dist.cdf(stat)))
}

/// Kolmogorov survival function Q(λ) = 2 Σ_{k≥1} (−1)^{k−1} e^{−2k²λ²}.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut s = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        s += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

/// Two-sample Kolmogorov–Smirnov statistic D and its asymptotic p-value,
/// with the Stephens small-sample correction.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<(f64, f64)> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidInput("KS needs two nonempty samples".into()));
    }
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (n, m) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0f64);
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    let en = (n * m / (n + m)).sqrt();
    Ok((d, kolmogorov_q((en + 0.12 + 0.11 / en) * d)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn chi_square_known_value() {
        // statistic 4 on one degree of freedom
        let (s, p) = chi_square_test(&[60, 40], &[0.5, 0.5]).unwrap();
        assert!((s - 4.0).abs() < 1e-12);
        assert!((p - 0.045_500_263_896_358_4).abs() < 1e-9);
        let (_, p) = chi_square_test(&[1, 0], &[0.0, 1.0]).unwrap();
        assert_eq!(p, 0.0);
    }

    #[test]
    fn kolmogorov_tail() {
        // Q(1.36) ≈ 0.05 and Q(1.63) ≈ 0.01
        assert!((kolmogorov_q(1.358) - 0.05).abs() < 1e-3);
        assert!((kolmogorov_q(1.628) - 0.01).abs() < 1e-3);
    }

    #[test]
    fn ks_same_and_shifted() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a: Vec<f64> = (0..2000).map(|_| rng.random()).collect();
        let b: Vec<f64> = (0..2000).map(|_| rng.random()).collect();
        let c: Vec<f64> = (0..2000).map(|_| rng.random::<f64>() + 0.1).collect();
        assert!(ks_two_sample(&a, &b).unwrap().1 > 0.001);
        assert!(ks_two_sample(&a, &c).unwrap().1 < 1e-6);
        assert_eq!(ks_two_sample(&a, &a).unwrap().0, 0.0);
    }
}
