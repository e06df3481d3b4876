//! Hermite-series predictions for stationary Gaussian dice.
//!
//! With faces of variance ½, a_i − b_j is standard normal and two such
//! differences have correlation ρ(i−k) + ρ(j−ℓ). Every covariance of win
//! indicators therefore expands as Σ_q d²_{2q+1}(2q+1)! r^{2q+1}.

use super::hermite::{odd_energy, HermiteSeries};
use crate::kernel::CorrelationKernel;
use crate::numerics::{ln_binomial, CompensatedSum};
use crate::{Error, Result};
use log::debug;
use std::f64::consts::PI;

/// Limiting variance 1/6 − 1/(2π) of the unconditioned CLT.
pub const ALPHA: f64 = 1.0 / 6.0 - 1.0 / (2.0 * PI);

/// E[Φ(X)Φ(Y)] ≈ ¼ + Σ_{q ≤ Q} ℓ²_{2q+1}(2q+1)! ρ^{2q+1} for standard
/// normals with correlation ρ.
pub fn phi_product_expectation(rho: f64, q_max: u64) -> f64 {
    assert!(rho.abs() <= 1.0, "|rho| must be at most 1");
    // ℓ²_{2q+1}(2q+1)! = d²_{2q+1}(2q+1)! 2^{−(2q+1)}
    0.25 + HermiteSeries::new(q_max).energy_sum(rho / 2.0)
}

/// Σ_{q ≤ Q} d²_{2q+1}(2q+1)! r^{2q+1}, with |r| = 1 summed in full.
///
/// At |r| = 1 the terms decay like q^{−3/2}, so the exact sum ±¼ is used
/// there instead of a truncation.
fn indicator_covariance(r: f64, energies: &[f64]) -> f64 {
    if (r.abs() - 1.0).abs() < 1e-14 {
        return 0.25 * r.signum();
    }
    let r2 = r * r;
    let mut pow = r;
    let mut s = 0.0;
    for &e in energies {
        let term = e * pow;
        s += term;
        if term.abs() < 1e-18 * s.abs() {
            break;
        }
        pow *= r2;
    }
    s
}

fn energies(q_max: u64) -> Vec<f64> {
    (0..=q_max).map(odd_energy).collect()
}

/// Lag values ρ(0..n) and lag multiplicities: lag u ≥ 0 occurs (n − u) times
/// among ordered index pairs, twice for u > 0 once the sign is folded in.
fn folded_lags(kernel: &CorrelationKernel, n: usize) -> (Vec<f64>, Vec<f64>) {
    let rho = kernel.lags(n);
    let mult = (0..n)
        .map(|u| (n - u) as f64 * if u == 0 { 1.0 } else { 2.0 })
        .collect();
    (rho, mult)
}

/// Var(W) for stationary Gaussian dice of length n, truncated at order Q:
/// Σ_q d²_{2q+1}(2q+1)! Σ_{u,v} (n−|u|)(n−|v|)(ρ(u)+ρ(v))^{2q+1}.
pub fn variance_w_series(kernel: &CorrelationKernel, n: usize, q_max: u64) -> f64 {
    let e = energies(q_max);
    let (rho, mult) = folded_lags(kernel, n);
    let mut total = CompensatedSum::new();
    for u in 0..n {
        let mut row = CompensatedSum::new();
        for v in 0..n {
            row.add(mult[v] * indicator_covariance(rho[u] + rho[v], &e));
        }
        total.add(mult[u] * row.value());
    }
    total.value()
}

/// Var(W − nV) with V = Σ F(a_i) − Σ F(b_i), truncated at order Q:
/// Σ_{q≥1} d²_{2q+1}(2q+1)! Σ_{v=1}^{2q} C(2q+1, v) X_v X_{2q+1−v},
/// X_v = Σ_{|i|<n} (n−|i|) ρ(i)^v.
///
/// Writing X_v = n 2^{−v} + 2^{−v} Z_v, the pure n² part sums in closed form
/// to n²/12 over all q; the remainder involves at least one Z factor and
/// converges geometrically.
pub fn variance_diff_series(kernel: &CorrelationKernel, n: usize, q_max: u64) -> f64 {
    let (rho, mult) = folded_lags(kernel, n);
    let nf = n as f64;
    let top = (2 * q_max + 1) as usize;
    // Z_v = Σ_{i≠0} (n−|i|)(2ρ(i))^v
    let mut z = vec![0.0; top + 1];
    for u in 1..n {
        let x = 2.0 * rho[u];
        let mut p = 1.0;
        for zv in z.iter_mut() {
            *zv += mult[u] * p;
            p *= x;
        }
    }
    let mut total = CompensatedSum::new();
    total.add(nf * nf / 12.0);
    for q in 1..=q_max {
        let m = 2 * q + 1;
        let mut inner = CompensatedSum::new();
        for v in 1..m {
            let w = m - v;
            let c = (ln_binomial(m, v) - m as f64 * 2f64.ln()).exp();
            let (zv, zw) = (z[v as usize], z[w as usize]);
            inner.add(c * (nf * zw + zv * nf + zv * zw));
        }
        total.add(odd_energy(q) * inner.value());
    }
    total.value()
}

/// β = 2 Σ_q d²_{2q+1}(2q+1)! Σ_{|i| ≤ L} ρ(i)^{2q+1}, the n³ coefficient of
/// Var(W) for summable kernels.
pub fn beta_constant(kernel: &CorrelationKernel, q_max: u64, lag_cutoff: usize) -> Result<f64> {
    if !kernel.is_summable() {
        return Err(Error::Domain(format!(
            "beta requires an absolutely summable kernel; {kernel:?} is long-range dependent"
        )));
    }
    if let Some(h) = kernel.hurst() {
        let s = fbm_partial_lag_sum(h, lag_cutoff);
        debug!("sum of s_H over |v| <= {lag_cutoff}: {s:e} (tends to 0 for H < 1/2)");
    }
    let e = energies(q_max);
    let mut total = CompensatedSum::new();
    for i in 0..=lag_cutoff {
        let w = if i == 0 { 1.0 } else { 2.0 };
        total.add(w * indicator_covariance(kernel.rho(i as i64), &e));
    }
    Ok(2.0 * total.value())
}

/// Σ_{|v| ≤ n} s_H(v), summed directly.
pub fn fbm_partial_lag_sum(hurst: f64, n: usize) -> f64 {
    let mut s = CompensatedSum::new();
    s.add(0.5);
    for v in 1..=n as i64 {
        s.add(2.0 * crate::kernel::s_kernel(v, hurst));
    }
    s.value()
}

/// Telescoped form ½((n+1)^{2H} − n^{2H}) of [`fbm_partial_lag_sum`].
pub fn fbm_partial_lag_sum_closed(hurst: f64, n: usize) -> f64 {
    let n = n as f64;
    0.5 * ((n + 1.0).powf(2.0 * hurst) - n.powf(2.0 * hurst))
}

/// Leading term H²(2H−1)/(16π(4H−3)) n^{6H−2} of Var(W − nV) for H > 3/4.
pub fn diff_variance_leading_term(hurst: f64, n: usize) -> f64 {
    hurst * hurst * (2.0 * hurst - 1.0) / (16.0 * PI * (4.0 * hurst - 3.0))
        * (n as f64).powf(6.0 * hurst - 2.0)
}
