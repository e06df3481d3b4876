//! Slow, independent reference implementations used to check the fast paths.
//!
//! Nothing here is tuned; each routine takes the most direct route to its
//! answer (double loops, full enumeration, quadrature, plain simulation).

use crate::dice::{Die, PairStats};
use crate::dist::{std_normal_cdf, FaceDistribution};
use crate::kernel::CorrelationKernel;
use crate::tournament::Tournament;
use crate::triplet::{f_triplets, noise_params, triplet_classes};
use crate::Result;
use nalgebra::{DMatrix, Matrix3, Matrix6, SymmetricEigen};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::PI;

/// O(n²) double loop over all face pairs.
pub fn pair_stats_brute_force(a: &[f64], b: &[f64]) -> PairStats {
    let mut s = PairStats::default();
    for &x in a {
        for &y in b {
            if x > y {
                s.wins += 1;
            } else if x < y {
                s.losses += 1;
            } else {
                s.ties += 1;
            }
        }
    }
    s
}

/// Every sequence in {1..n}^n with face-sum n(n+1)/2, in lexicographic order.
pub fn enumerate_discrete_dice(n: usize) -> Vec<Vec<i64>> {
    assert!((1..=7).contains(&n), "enumeration is meant for tiny n");
    let target = (n * (n + 1) / 2) as i64;
    let total = (n as u64).pow(n as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let mut seq = vec![0i64; n];
        for slot in seq.iter_mut().rev() {
            *slot = (c % n as u64) as i64 + 1;
            c /= n as u64;
        }
        if seq.iter().sum::<i64>() == target {
            out.push(seq);
        }
    }
    out
}

/// Draws full i.i.d. vectors until |Σ a_i| ≤ `slab`, without recentering.
pub fn slab_rejection_sample<D, R>(n: usize, dist: &D, slab: f64, rng: &mut R) -> Die
where
    D: FaceDistribution,
    R: Rng + ?Sized,
{
    loop {
        let faces: Vec<f64> = (0..n).map(|_| dist.sample(rng)).collect();
        if faces.iter().sum::<f64>().abs() <= slab {
            return Die::new(faces).expect("finite faces");
        }
    }
}

/// Gauss–Hermite nodes and weights for the weight e^{−x²} (Golub–Welsch).
pub fn gauss_hermite(nodes: usize) -> (Vec<f64>, Vec<f64>) {
    let mut jac = DMatrix::<f64>::zeros(nodes, nodes);
    for i in 1..nodes {
        let b = (i as f64 / 2.0).sqrt();
        jac[(i, i - 1)] = b;
        jac[(i - 1, i)] = b;
    }
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..nodes)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], PI.sqrt() * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// E[g(Z)] for Z ~ N(0, 1) by Gauss–Hermite quadrature.
pub fn gaussian_expectation<G: Fn(f64) -> f64>(g: G, nodes: usize) -> f64 {
    let (x, w) = gauss_hermite(nodes);
    x.iter()
        .zip(&w)
        .map(|(&xi, &wi)| wi * g(2f64.sqrt() * xi))
        .sum::<f64>()
        / PI.sqrt()
}

/// E[Φ(X)Φ(Y)] for standard normals with correlation ρ, by tensor
/// Gauss–Hermite quadrature on X = Z₁, Y = ρZ₁ + √(1−ρ²)Z₂.
pub fn phi_product_quadrature(rho: f64, nodes: usize) -> f64 {
    let (x, w) = gauss_hermite(nodes);
    let s = 2f64.sqrt();
    let c = (1.0 - rho * rho).max(0.0).sqrt();
    let mut total = 0.0;
    for (&x1, &w1) in x.iter().zip(&w) {
        let z1 = s * x1;
        let inner: f64 = x
            .iter()
            .zip(&w)
            .map(|(&x2, &w2)| w2 * std_normal_cdf(rho * z1 + c * s * x2))
            .sum();
        total += w1 * std_normal_cdf(z1) * inner;
    }
    total / PI
}

/// Σ_{q≥0} d²_{2q+1}(2q+1)! x^{2q+1} in closed form: arcsin(x)/(2π).
pub fn odd_hermite_energy_closed_form(x: f64) -> f64 {
    x.asin() / (2.0 * PI)
}

/// Var(W) for stationary Gaussian dice by summing arcsin(r)/(2π) over all
/// lag pairs, r = ρ(u) + ρ(v).
pub fn variance_w_closed_form(kernel: &CorrelationKernel, n: usize) -> f64 {
    let mut total = 0.0;
    for u in -(n as i64 - 1)..n as i64 {
        for v in -(n as i64 - 1)..n as i64 {
            let w = (n as i64 - u.abs()) as f64 * (n as i64 - v.abs()) as f64;
            let r = (kernel.rho(u) + kernel.rho(v)).clamp(-1.0, 1.0);
            total += w * odd_hermite_energy_closed_form(r);
        }
    }
    total
}

/// Var(W − nV) = Var(W) − 2n² Σ_{i,k} arcsin(ρ(i−k))/(2π), from
/// Cov(W, V) = Var(V)·n = 2n Σ_{i,k} arcsin(ρ(i−k))/(2π).
pub fn variance_diff_closed_form(kernel: &CorrelationKernel, n: usize) -> f64 {
    let s1: f64 = (-(n as i64 - 1)..n as i64)
        .map(|u| (n as i64 - u.abs()) as f64 * odd_hermite_energy_closed_form(kernel.rho(u)))
        .sum();
    variance_w_closed_form(kernel, n) - 2.0 * (n * n) as f64 * s1
}

/// Directed 3-cycles by checking every vertex triple.
pub fn count_triangles_brute_force(t: &Tournament) -> u64 {
    let v = t.vertices();
    let mut count = 0;
    for i in 0..v {
        for j in i + 1..v {
            for k in j + 1..v {
                let cyc = (t.beats(i, j) && t.beats(j, k) && t.beats(k, i))
                    || (t.beats(j, i) && t.beats(k, j) && t.beats(i, k));
                count += cyc as u64;
            }
        }
    }
    count
}

/// Minimum feedback arc set of a tournament by dynamic programming over
/// vertex subsets: best[S ∪ {x}] = best[S] + |{u ∈ S : x → u}|, x placed last.
pub fn min_reversals_subset_dp(t: &Tournament) -> usize {
    let v = t.vertices();
    assert!(v <= 20);
    let full = 1usize << v;
    let mut best = vec![usize::MAX; full];
    best[0] = 0;
    for set in 0..full {
        if best[set] == usize::MAX {
            continue;
        }
        for x in (0..v).filter(|x| set & (1 << x) == 0) {
            let back = (0..v)
                .filter(|&u| set & (1 << u) != 0 && t.beats(x, u))
                .count();
            let next = set | (1 << x);
            best[next] = best[next].min(best[set] + back);
        }
    }
    best[full - 1]
}

/// Monte Carlo estimate (p̂, stderr) of the positive-orthant probability of an
/// equicorrelated trivariate standard normal with correlation r.
pub fn orthant3_monte_carlo<R: Rng + ?Sized>(r: f64, draws: u64, rng: &mut R) -> (f64, f64) {
    let cov = Matrix3::from_fn(|i, j| if i == j { 1.0 } else { r });
    let l = cov.cholesky().expect("positive definite correlation").l();
    let mut hits = 0u64;
    for _ in 0..draws {
        let z = nalgebra::Vector3::from_fn(|_, _| StandardNormal.sample(rng));
        let x = l * z;
        if x[0] >= 0.0 && x[1] >= 0.0 && x[2] >= 0.0 {
            hits += 1;
        }
    }
    let p = hits as f64 / draws as f64;
    (p, (p * (1.0 - p) / draws as f64).sqrt())
}

/// Monte Carlo estimate (mean, stderr) of T_ρ f(x) = E[f(y)], drawing
/// `copies` independent ρ-correlated copies y of x.
pub fn noise_operator_monte_carlo<R: Rng + ?Sized>(
    x: &[i8],
    rho: f64,
    copies: u64,
    rng: &mut R,
) -> Result<(f64, f64)> {
    let e = noise_params(rho)?.epsilon;
    let mut y = x.to_vec();
    let mut plus = 0u64;
    for _ in 0..copies {
        for (yi, &xi) in y.iter_mut().zip(x) {
            *yi = if rng.random::<f64>() < e { -xi } else { xi };
        }
        if f_triplets(&y)? == 1 {
            plus += 1;
        }
    }
    let p = plus as f64 / copies as f64;
    Ok((2.0 * p - 1.0, 2.0 * (p * (1.0 - p) / copies as f64).sqrt()))
}

/// Covariance of the per-triplet noise statistics by enumerating the 216
/// ranking triples: A = Σ_b ±q_b 1[w = b] (plus sign for b > 0) and B = sgn w.
pub fn noise_covariance_enumerated(rho: f64) -> Result<Matrix6<f64>> {
    let np = noise_params(rho)?;
    let a_of = |w: i8| match w {
        3 => np.q3,
        1 => np.q1,
        -1 => -np.q1,
        _ => -np.q3,
    };
    let mut cov = Matrix6::zeros();
    for c in triplet_classes() {
        let mut v = [0.0; 6];
        for j in 0..3 {
            v[j] = a_of(c.w[j]);
            v[3 + j] = c.w[j].signum() as f64;
        }
        let wt = c.weight as f64 / 216.0;
        for i in 0..6 {
            for j in 0..6 {
                cov[(i, j)] += wt * v[i] * v[j];
            }
        }
    }
    Ok(cov)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_sizes() {
        assert_eq!(enumerate_discrete_dice(1), vec![vec![1]]);
        assert_eq!(enumerate_discrete_dice(3).len(), 7);
        assert_eq!(enumerate_discrete_dice(4).len(), 44);
    }

    #[test]
    fn hermite_rule_integrates_moments() {
        assert!((gaussian_expectation(|_| 1.0, 40) - 1.0).abs() < 1e-13);
        assert!((gaussian_expectation(|x| x * x, 40) - 1.0).abs() < 1e-12);
        assert!((gaussian_expectation(|x| x.powi(6), 40) - 15.0).abs() < 1e-10);
    }

    #[test]
    fn quadrature_endpoints() {
        assert!((phi_product_quadrature(0.0, 64) - 0.25).abs() < 1e-12);
        // ρ = 1 gives E[U²] = 1/3
        assert!((phi_product_quadrature(1.0, 64) - 1.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn subset_dp_on_cycle() {
        assert_eq!(min_reversals_subset_dp(&Tournament::three_cycle()), 1);
        assert_eq!(
            min_reversals_subset_dp(&Tournament::transitive(&[2, 0, 1, 3])),
            0
        );
    }

    #[test]
    fn enumerated_noise_covariance_matches_closed_form() {
        for rho in [0.05, 0.3, 0.6, 0.95] {
            let a = noise_covariance_enumerated(rho).unwrap();
            let b = crate::triplet::noise_covariance_matrix(rho).unwrap();
            assert!((a - b).abs().max() < 1e-15, "rho {rho}");
        }
    }

    #[test]
    fn noise_operator_simulation_matches_convolution() {
        use crate::triplet::{t_rho_exact, TripletTallies};
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let x: Vec<i8> = (0..45)
            .map(|_| if rng.random::<bool>() { 1 } else { -1 })
            .collect();
        let exact = t_rho_exact(&TripletTallies::from_votes(&x).unwrap(), 0.5).unwrap();
        let (mc, se) = noise_operator_monte_carlo(&x, 0.5, 40_000, &mut rng).unwrap();
        assert!(
            (mc - exact).abs() < 4.0 * se + 1e-3,
            "{mc} ± {se} vs {exact}"
        );
    }
}
