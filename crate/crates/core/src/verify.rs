//! Quick exact-value and oracle checks, grouped into suites for the CLI.

use crate::elections::theory_values;
use crate::gaussian::{
    identity_partial_sum, pair_prob_asymptotic, phi_product_expectation, variance_diff_series,
    variance_w_series, DistConstants, IdentityKind, PairProbKind, ALPHA,
};
use crate::kernel::CorrelationKernel;
use crate::oracle;
use crate::samplers::{sample_continuous_conditioned, sample_discrete_conditioned};
use crate::stats::{chi_square_test, ks_two_sample};
use crate::tournament::{min_reversals_to_transitive, Tournament};
use crate::triplet::{
    alpha_rho, alpha_star, noise_covariance_matrix, orthant3, residual_correlation,
    sum_covariance_matrix, table1_joint, triplet_covariances, Surd3,
};
use crate::{Dist, Error, Result};
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Identities,
    Covariances,
    Predictors,
    Samplers,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::Identities,
        Suite::Covariances,
        Suite::Predictors,
        Suite::Samplers,
    ];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Identities => "identities",
            Suite::Covariances => "covariances",
            Suite::Predictors => "predictors",
            Suite::Samplers => "samplers",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.to_string() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

fn close(name: &str, got: f64, want: f64, tol: f64) -> Check {
    Check {
        name: name.to_string(),
        passed: (got - want).abs() <= tol,
        detail: format!("{got:.12} vs {want:.12} (tol {tol:e})"),
    }
}

fn exact<T: fmt::Display + PartialEq>(name: &str, got: T, want: T) -> Check {
    Check {
        name: name.to_string(),
        passed: got == want,
        detail: format!("{got} = {want} exact"),
    }
}

fn failed(name: &str, e: Error) -> Check {
    Check {
        name: name.to_string(),
        passed: false,
        detail: e.to_string(),
    }
}

pub fn run_suite(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::Identities => identities(),
        Suite::Covariances => covariances(),
        Suite::Predictors => predictors(),
        Suite::Samplers => samplers(),
    }
}

fn identities() -> Vec<Check> {
    let mut out = vec![
        close(
            "sixth identity, Q = 30",
            identity_partial_sum(IdentityKind::Sixth, 30),
            1.0 / 6.0,
            1e-12,
        ),
        close(
            "Newton pi identity, Q = 30",
            identity_partial_sum(IdentityKind::NewtonPi, 30),
            PI,
            1e-10,
        ),
    ];
    let q = 1_000_000u64;
    let tail = 3.0 / (q as f64).sqrt();
    for kind in [IdentityKind::Quarter, IdentityKind::RamanujanPi] {
        out.push(close(
            &format!("{kind} identity, Q = 10^6"),
            identity_partial_sum(kind, q),
            kind.limit(),
            tail,
        ));
    }
    for rho in [0.1, 0.3, 0.45] {
        out.push(close(
            &format!("E[Phi(X)Phi(Y)] series vs quadrature, rho = {rho}"),
            phi_product_expectation(rho, 200),
            oracle::phi_product_quadrature(rho, 80),
            1e-8,
        ));
    }
    out.push(close(
        "alpha = 1/6 - 1/(2 pi)",
        ALPHA,
        0.007_511_723_6,
        1e-10,
    ));
    out.push(close(
        "orthant3(-1/27)",
        orthant3(-1.0 / 27.0).unwrap_or(f64::NAN),
        0.1165,
        1e-3,
    ));
    out.push(close("alpha*", alpha_star(), 0.2323, 1e-3));
    out
}

fn covariances() -> Vec<Check> {
    let rows: [[i64; 4]; 4] = [
        [1, 6, 12, 8],
        [6, 27, 36, 12],
        [12, 36, 27, 6],
        [8, 12, 6, 1],
    ];
    let table = table1_joint();
    let matches = (0..16).all(|c| table[c / 4][c % 4] == Ratio::new(rows[c / 4][c % 4], 216));
    let mut out = vec![Check {
        name: "joint law of (w, w') over 216".into(),
        passed: matches,
        detail: "16 cells".into(),
    }];
    let c = triplet_covariances();
    out.push(exact(
        "Cov(A,A')",
        c.cov_a_a,
        Surd3::rational(Ratio::new(-1, 3)),
    ));
    out.push(exact(
        "Cov(B,B')",
        c.cov_b_b,
        Surd3::rational(Ratio::new(-7, 27)),
    ));
    out.push(exact(
        "Cov(A,B)",
        c.cov_a_b,
        Surd3::times_sqrt3(Ratio::new(1, 2)),
    ));
    out.push(exact(
        "Cov(A,B')",
        c.cov_a_b_other,
        Surd3::times_sqrt3(Ratio::new(-1, 6)),
    ));
    match residual_correlation(&sum_covariance_matrix(), 0.0) {
        Ok(r) => out.push(close("residual correlation given A", r, -1.0 / 27.0, 1e-12)),
        Err(e) => out.push(failed("residual correlation given A", e)),
    }
    for rho in [0.1, 0.5, 0.9] {
        let name = format!("noise covariance closed form vs enumeration, rho = {rho}");
        match (
            noise_covariance_matrix(rho),
            oracle::noise_covariance_enumerated(rho),
        ) {
            (Ok(a), Ok(b)) => out.push(close(&name, (a - b).abs().max(), 0.0, 1e-14)),
            (Err(e), _) | (_, Err(e)) => out.push(failed(&name, e)),
        }
    }
    for rho in [0.05, 0.5, 0.95] {
        let name = format!("alpha(rho) in [0.17, 0.233], rho = {rho}");
        match alpha_rho(rho) {
            Ok(a) => out.push(Check {
                name,
                passed: (0.17..=0.233).contains(&a),
                detail: format!("{a:.6}"),
            }),
            Err(e) => out.push(failed(&name, e)),
        }
    }
    out
}

fn predictors() -> Vec<Check> {
    let mut out = Vec::new();
    let expected = [
        (Dist::UniformSym, 1.0 / 12f64.sqrt(), 0.5),
        (Dist::StdGaussian, 1.0 / (2.0 * PI.sqrt()), 0.5),
        (Dist::ShiftedExponential, 0.25, 0.75),
    ];
    for (d, a, b) in expected {
        let c = DistConstants::of(&d);
        out.push(close(&format!("A for {d}"), c.a, a, 1e-9));
        out.push(close(&format!("B for {d}"), c.b, b, 1e-9));
    }
    for n in [10, 100, 1000] {
        out.push(close(
            &format!("uniform both-unconditioned, n = {n}"),
            pair_prob_asymptotic(Dist::UniformSym, n, PairProbKind::BothUnconditioned),
            0.25 - 1.0 / (6.0 * n as f64),
            1e-10,
        ));
    }
    for h in [0.25, 0.5, 0.75] {
        let k = CorrelationKernel::FractionalGaussian { hurst: h };
        for n in [16, 64] {
            let series = variance_w_series(&k, n, 400);
            let closed = oracle::variance_w_closed_form(&k, n);
            out.push(close(
                &format!("Var W series vs arcsine form, H = {h}, n = {n}"),
                series / closed,
                1.0,
                1e-6,
            ));
            let series = variance_diff_series(&k, n, 400);
            let closed = oracle::variance_diff_closed_form(&k, n);
            out.push(close(
                &format!("Var(W - nV) series vs arcsine form, H = {h}, n = {n}"),
                series / closed,
                1.0,
                1e-6,
            ));
        }
    }
    let t = theory_values(3);
    out.push(close("P_cond(3) limit", t.p_cond3, 0.912_260_2, 1e-6));
    out.push(close(
        "close-election transitive, k = 3",
        t.transitive_close,
        0.75,
        1e-15,
    ));
    out
}

fn samplers() -> Vec<Check> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    for n in [3usize, 4] {
        let seqs = oracle::enumerate_discrete_dice(n);
        let mut counts = vec![0u64; seqs.len()];
        for _ in 0..20_000 {
            let d = sample_discrete_conditioned(n, &mut rng);
            let faces: Vec<i64> = d.faces().iter().map(|&x| x as i64).collect();
            let idx = seqs
                .iter()
                .position(|s| *s == faces)
                .expect("sample is admissible");
            counts[idx] += 1;
        }
        let probs = vec![1.0 / seqs.len() as f64; seqs.len()];
        let name = format!("discrete sampler vs enumeration, n = {n}");
        match chi_square_test(&counts, &probs) {
            Ok((s, p)) => out.push(Check {
                name,
                passed: p > 0.001,
                detail: format!("chi2 = {s:.2}, p = {p:.4}"),
            }),
            Err(e) => out.push(failed(&name, e)),
        }
    }
    let n = 4;
    let hyper: Result<Vec<f64>> = (0..3000)
        .map(|_| {
            sample_continuous_conditioned(n, &Dist::UniformSym, &mut rng).map(|d| d.faces()[0])
        })
        .collect();
    let slab: Vec<f64> = (0..3000)
        .map(|_| oracle::slab_rejection_sample(n, &Dist::UniformSym, 0.01, &mut rng).faces()[0])
        .collect();
    let name = "hyperplane sampler vs slab rejection, first face".to_string();
    match hyper.and_then(|h| ks_two_sample(&h, &slab)) {
        Ok((d, p)) => out.push(Check {
            name,
            passed: p > 0.001,
            detail: format!("D = {d:.4}, p = {p:.4}"),
        }),
        Err(e) => out.push(failed(&name, e)),
    }
    let mut agree = 0;
    for _ in 0..200 {
        let t = Tournament::random(5, &mut rng);
        if min_reversals_to_transitive(&t).ok() == Some(oracle::min_reversals_subset_dp(&t)) {
            agree += 1;
        }
    }
    out.push(Check {
        name: "min reversals vs subset DP, v = 5".into(),
        passed: agree == 200,
        detail: format!("{agree}/200 agree"),
    });
    out
}
