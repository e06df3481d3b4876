//! Majority of triplets: the aggregator f, its per-pair tallies, the noise
//! operator T_ρ f, exact triplet covariances and the Gaussian paradox
//! probabilities α* and α(ρ).
//!
//! For three alternatives the cyclic pairs are ordered (ab), (bc), (ca).

use crate::numerics::{ln_binomial, CompensatedSum};
use crate::samplers::profile::{all_rankings, pairwise_votes, sample_multinomial, sample_profile};
use crate::{Error, Result};
use nalgebra::{Matrix3, Matrix6};
use num_rational::Ratio;
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};
use statrs::function::erf::erf;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

/// Triplet sums in the order used by every tally: 3, 1, −1, −3.
pub const TRIPLET_SUMS: [i8; 4] = [3, 1, -1, -3];

fn sum_slot(w: i8) -> usize {
    match w {
        3 => 0,
        1 => 1,
        -1 => 2,
        -3 => 3,
        _ => panic!("triplet sum {w} is not one of ±1, ±3"),
    }
}

fn check_triplet_len(n: usize) -> Result<usize> {
    if n % 3 != 0 || (n / 3) % 2 == 0 {
        return Err(Error::InvalidInput(format!(
            "majority of triplets needs n = 3m with m odd, got n = {n}"
        )));
    }
    Ok(n / 3)
}

/// Plain majority of an odd number of ±1 votes.
pub fn majority(x: &[i8]) -> Result<i8> {
    if x.len() % 2 == 0 {
        return Err(Error::InvalidInput(format!(
            "majority needs an odd number of votes, got {}",
            x.len()
        )));
    }
    Ok(x.iter().map(|&v| v as i64).sum::<i64>().signum() as i8)
}

/// f(x) = sgn Σ_i sgn(x_{3i} + x_{3i+1} + x_{3i+2}).
pub fn f_triplets(x: &[i8]) -> Result<i8> {
    check_triplet_len(x.len())?;
    Ok(TripletTallies::from_votes(x)?.f())
}

/// Numbers W_b of triplets with sum b, stored for b = 3, 1, −1, −3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TripletTallies {
    pub counts: [u64; 4],
}

impl TripletTallies {
    pub fn from_votes(x: &[i8]) -> Result<Self> {
        if x.len() % 3 != 0 {
            return Err(Error::InvalidInput(format!(
                "{} votes do not split into triplets",
                x.len()
            )));
        }
        let mut counts = [0u64; 4];
        for t in x.chunks_exact(3) {
            counts[sum_slot(t[0] + t[1] + t[2])] += 1;
        }
        Ok(TripletTallies { counts })
    }

    pub fn from_sums(w: &[i8]) -> Self {
        let mut counts = [0u64; 4];
        for &b in w {
            counts[sum_slot(b)] += 1;
        }
        TripletTallies { counts }
    }

    pub fn m(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn count(&self, b: i8) -> u64 {
        self.counts[sum_slot(b)]
    }

    /// Σ_i x_i = Σ_b b W_b.
    pub fn vote_sum(&self) -> i64 {
        TRIPLET_SUMS
            .iter()
            .zip(&self.counts)
            .map(|(&b, &c)| b as i64 * c as i64)
            .sum()
    }

    /// Σ_i sgn(w_i).
    pub fn sign_sum(&self) -> i64 {
        self.counts[0] as i64 + self.counts[1] as i64
            - self.counts[2] as i64
            - self.counts[3] as i64
    }

    pub fn f(&self) -> i8 {
        self.sign_sum().signum() as i8
    }
}

/// One ordered triple of voters' rankings reduced to its cyclic triplet sums
/// (w^{ab}, w^{bc}, w^{ca}), with the number of the 216 triples that give it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TripletClass {
    pub w: [i8; 3],
    pub weight: u32,
}

fn cyclic_votes(ranking: &[usize]) -> [i8; 3] {
    let v = pairwise_votes(ranking);
    [v[0], v[2], -v[1]]
}

/// The distinct (w^{ab}, w^{bc}, w^{ca}) of three uniformly random voters.
pub fn triplet_classes() -> &'static [TripletClass] {
    static CLASSES: OnceLock<Vec<TripletClass>> = OnceLock::new();
    CLASSES.get_or_init(|| {
        let votes: Vec<[i8; 3]> = all_rankings(3).iter().map(|r| cyclic_votes(r)).collect();
        let mut out: Vec<TripletClass> = Vec::new();
        for x in &votes {
            for y in &votes {
                for z in &votes {
                    let w = [0, 1, 2].map(|j| x[j] + y[j] + z[j]);
                    match out.iter_mut().find(|c| c.w == w) {
                        Some(c) => c.weight += 1,
                        None => out.push(TripletClass { w, weight: 1 }),
                    }
                }
            }
        }
        out
    })
}

/// Joint law of (w^{ab}, w^{bc}) for one triplet, rows and columns ordered
/// −3, −1, 1, 3.
pub fn table1_joint() -> [[Ratio<i64>; 4]; 4] {
    let mut counts = [[0i64; 4]; 4];
    let idx = |w: i8| ((w + 3) / 2) as usize;
    for c in triplet_classes() {
        counts[idx(c.w[0])][idx(c.w[1])] += c.weight as i64;
    }
    counts.map(|row| row.map(|c| Ratio::new(c, 216)))
}

/// r + s√3 with rational r, s.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Surd3 {
    pub rational: Ratio<i64>,
    pub sqrt3: Ratio<i64>,
}

impl Surd3 {
    pub fn rational(r: Ratio<i64>) -> Self {
        Surd3 {
            rational: r,
            sqrt3: Ratio::from_integer(0),
        }
    }

    pub fn times_sqrt3(s: Ratio<i64>) -> Self {
        Surd3 {
            rational: Ratio::from_integer(0),
            sqrt3: s,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let f = |r: Ratio<i64>| *r.numer() as f64 / *r.denom() as f64;
        f(self.rational) + f(self.sqrt3) * 3f64.sqrt()
    }
}

impl fmt::Display for Surd3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let zero = Ratio::from_integer(0);
        match (self.rational == zero, self.sqrt3 == zero) {
            (_, true) => write!(f, "{}", self.rational),
            (true, false) => write!(f, "{}·√3", self.sqrt3),
            (false, false) => write!(f, "{} + {}·√3", self.rational, self.sqrt3),
        }
    }
}

/// Exact per-triplet covariances of A = w/√3 and B = sgn w across two
/// distinct cyclic pairs (primed) and within one pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TripletCovariances {
    pub var_a: Surd3,
    pub var_b: Surd3,
    pub cov_a_a: Surd3,
    pub cov_b_b: Surd3,
    pub cov_a_b: Surd3,
    pub cov_a_b_other: Surd3,
}

/// Covariances by exhaustive enumeration of the 216 ranking triples.
pub fn triplet_covariances() -> TripletCovariances {
    let mut e_ww = [[0i64; 3]; 3];
    let mut e_ss = [[0i64; 3]; 3];
    let mut e_ws = [[0i64; 3]; 3];
    for c in triplet_classes() {
        let wt = c.weight as i64;
        for i in 0..3 {
            for j in 0..3 {
                let (wi, wj) = (c.w[i] as i64, c.w[j] as i64);
                e_ww[i][j] += wt * wi * wj;
                e_ss[i][j] += wt * wi.signum() * wj.signum();
                e_ws[i][j] += wt * wi * wj.signum();
            }
        }
    }
    let r = |x: i64| Ratio::new(x, 216);
    // E[w] = E[sgn w] = 0, so covariances are plain second moments
    TripletCovariances {
        var_a: Surd3::rational(r(e_ww[0][0]) / 3),
        var_b: Surd3::rational(r(e_ss[0][0])),
        cov_a_a: Surd3::rational(r(e_ww[0][1]) / 3),
        cov_b_b: Surd3::rational(r(e_ss[0][1])),
        // E[w sgn w]/√3 = (E[w sgn w]/3)·√3
        cov_a_b: Surd3::times_sqrt3(r(e_ws[0][0]) / 3),
        cov_a_b_other: Surd3::times_sqrt3(r(e_ws[0][1]) / 3),
    }
}

/// Exact 6×6 covariance of (A^{ab}, A^{bc}, A^{ca}, B^{ab}, B^{bc}, B^{ca}).
pub fn sum_covariance_matrix() -> Matrix6<f64> {
    let c = triplet_covariances();
    block_covariance(
        c.var_a.to_f64(),
        c.cov_a_a.to_f64(),
        c.cov_a_b.to_f64(),
        c.cov_a_b_other.to_f64(),
        c.cov_b_b.to_f64(),
    )
}

fn block_covariance(
    var_a: f64,
    cov_aa: f64,
    cov_ab: f64,
    cov_ab_other: f64,
    cov_bb: f64,
) -> Matrix6<f64> {
    Matrix6::from_fn(|i, j| {
        let (bi, bj) = (i / 3, j / 3);
        let same = i % 3 == j % 3;
        match (bi, bj, same) {
            (0, 0, true) => var_a,
            (0, 0, false) => cov_aa,
            (1, 1, true) => 1.0,
            (1, 1, false) => cov_bb,
            (_, _, true) => cov_ab,
            (_, _, false) => cov_ab_other,
        }
    })
}

/// Flip and per-triplet sign-preservation probabilities of the ρ-noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    pub rho: f64,
    /// ε = (1 − ρ)/2
    pub epsilon: f64,
    /// P[noisy sign = +1 | w = 3]
    pub p3: f64,
    /// P[noisy sign = +1 | w = 1]
    pub p1: f64,
    pub q3: f64,
    pub q1: f64,
    pub sigma3_sq: f64,
    pub sigma1_sq: f64,
    /// σ² = (σ₃² + 3σ₁²)/4
    pub sigma_sq: f64,
    /// C = √(π/2) σ
    pub c: f64,
}

pub fn noise_params(rho: f64) -> Result<NoiseParams> {
    if !(-1.0..=1.0).contains(&rho) {
        return Err(Error::Domain(format!(
            "noise correlation {rho} outside [-1, 1]"
        )));
    }
    let e = (1.0 - rho) / 2.0;
    let u = 1.0 - e;
    let p3 = u.powi(3) + 3.0 * e * u * u;
    let p1 = u.powi(3) + e * u * u + 2.0 * e * e * u;
    let sigma3_sq = p3 * (1.0 - p3);
    let sigma1_sq = p1 * (1.0 - p1);
    let sigma_sq = (sigma3_sq + 3.0 * sigma1_sq) / 4.0;
    Ok(NoiseParams {
        rho,
        epsilon: e,
        p3,
        p1,
        q3: p3 - 0.5,
        q1: p1 - 0.5,
        sigma3_sq,
        sigma1_sq,
        sigma_sq,
        c: (PI / 2.0).sqrt() * sigma_sq.sqrt(),
    })
}

fn binomial_pmf(n: u64, p: f64) -> Vec<f64> {
    if p <= 0.0 {
        let mut v = vec![0.0; n as usize + 1];
        v[0] = 1.0;
        return v;
    }
    if p >= 1.0 {
        let mut v = vec![0.0; n as usize + 1];
        v[n as usize] = 1.0;
        return v;
    }
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    (0..=n)
        .map(|k| (ln_binomial(n, k) + k as f64 * lp + (n - k) as f64 * lq).exp())
        .collect()
}

// pmf with its offset, trimmed of entries below 1e-18 of the peak
fn trimmed(pmf: Vec<f64>) -> (usize, Vec<f64>) {
    let peak = pmf.iter().cloned().fold(0.0, f64::max);
    let keep = |x: &f64| *x >= 1e-18 * peak;
    let lo = pmf.iter().position(keep).unwrap_or(0);
    let hi = pmf.iter().rposition(keep).unwrap_or(0);
    (lo, pmf[lo..=hi].to_vec())
}

fn convolve((oa, a): (usize, Vec<f64>), (ob, b): (usize, Vec<f64>)) -> (usize, Vec<f64>) {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    (oa + ob, out)
}

/// T_ρ f at a vote vector with tallies W, by exact convolution of the four
/// binomial counts of triplets that keep a positive sign.
pub fn t_rho_exact(t: &TripletTallies, rho: f64) -> Result<f64> {
    let np = noise_params(rho)?;
    let m = t.m();
    if m % 2 == 0 {
        return Err(Error::InvalidInput(format!(
            "odd number of triplets required, got {m}"
        )));
    }
    let probs = [np.p3, np.p1, 1.0 - np.p1, 1.0 - np.p3];
    let (offset, pmf) = t
        .counts
        .iter()
        .zip(probs)
        .map(|(&w, p)| trimmed(binomial_pmf(w, p)))
        .reduce(convolve)
        .expect("four factors");
    let half = m as f64 / 2.0;
    let s: CompensatedSum = pmf
        .iter()
        .enumerate()
        .map(|(i, &p)| if (offset + i) as f64 > half { p } else { -p })
        .collect();
    Ok(s.value().clamp(-1.0, 1.0))
}

/// Gaussian approximation erf(Ã / (√2 σ √(1 + t))).
pub fn t_rho_approx(t: &TripletTallies, rho: f64) -> Result<f64> {
    let np = noise_params(rho)?;
    let m = t.m() as f64;
    let [v3, v1, vm1, vm3] = t.counts.map(|c| c as f64);
    // W_b − m P(w = b) enters only through the q-weighted combination, whose
    // expectation terms cancel
    let a_tilde = (np.q3 * v3 + np.q1 * v1 - np.q1 * vm1 - np.q3 * vm3) / m.sqrt();
    if np.sigma_sq == 0.0 {
        return Ok(a_tilde.signum());
    }
    let centred = |w: f64, p: f64| w - m * p;
    let tt = (np.sigma3_sq * (centred(v3, 0.125) + centred(vm3, 0.125))
        + np.sigma1_sq * (centred(v1, 0.375) + centred(vm1, 0.375)))
        / (np.sigma_sq * m);
    Ok(erf(
        a_tilde / (2f64.sqrt() * np.sigma_sq.sqrt() * (1.0 + tt).sqrt())
    ))
}

/// Closed-form 6×6 covariance of the noise statistics
/// (A^{ab}, A^{bc}, A^{ca}, B^{ab}, B^{bc}, B^{ca}) per triplet.
pub fn noise_covariance_matrix(rho: f64) -> Result<Matrix6<f64>> {
    let np = noise_params(rho)?;
    let (q3, q1) = (np.q3, np.q1);
    Ok(block_covariance(
        (q3 * q3 + 3.0 * q1 * q1) / 4.0,
        (-14.0 * q3 * q3 - 24.0 * q1 * q3 - 18.0 * q1 * q1) / 216.0,
        (q3 + 3.0 * q1) / 4.0,
        (-26.0 * q3 - 30.0 * q1) / 216.0,
        -7.0 / 27.0,
    ))
}

/// P[Z₁, Z₂, Z₃ > 0] for an equicorrelated standard normal triple,
/// 1/8 + (3/(4π)) arcsin r.
pub fn orthant3(r: f64) -> Result<f64> {
    if !(-0.5..=1.0).contains(&r) {
        return Err(Error::Domain(format!(
            "equicorrelation {r} outside [-1/2, 1]"
        )));
    }
    Ok(0.125 + 3.0 / (4.0 * PI) * r.asin())
}

/// Correlation of the B-block given the A-block, from the Schur complement.
/// The exchangeable structure makes the conditional correlation common to
/// all three pairs; the mean of the off-diagonal entries is returned.
pub fn residual_correlation(sigma: &Matrix6<f64>, rho: f64) -> Result<f64> {
    let saa: Matrix3<f64> = sigma.fixed_view::<3, 3>(0, 0).into();
    let sab: Matrix3<f64> = sigma.fixed_view::<3, 3>(0, 3).into();
    let sbb: Matrix3<f64> = sigma.fixed_view::<3, 3>(3, 3).into();
    let chol = saa.cholesky().ok_or(Error::Singular { rho })?;
    if (0..3).any(|i| chol.l()[(i, i)] < 1e-12) {
        return Err(Error::Singular { rho });
    }
    let cond = sbb - sab.transpose() * chol.solve(&sab);
    let diag = (cond[(0, 0)] + cond[(1, 1)] + cond[(2, 2)]) / 3.0;
    let off = (cond[(0, 1)] + cond[(0, 2)] + cond[(1, 2)]) / 3.0;
    if diag <= 0.0 {
        return Err(Error::Singular { rho });
    }
    Ok(off / diag)
}

/// Paradox probability for a 6×6 (A, B) covariance: 2·orthant3(r_R).
pub fn alpha_from_covariance(sigma: &Matrix6<f64>, rho: f64) -> Result<f64> {
    Ok(2.0 * orthant3(residual_correlation(sigma, rho)?)?)
}

/// α* = 2·orthant3(−1/27), the paradox probability for f under E_d.
pub fn alpha_star() -> f64 {
    2.0 * orthant3(-1.0 / 27.0).expect("in domain")
}

/// α(ρ), the paradox probability for f under the noise event F_{ρ,d}.
pub fn alpha_rho(rho: f64) -> Result<f64> {
    alpha_from_covariance(&noise_covariance_matrix(rho)?, rho)
}

/// d = √n / ln n, the default closeness for the sum event.
pub fn default_sum_threshold(n: usize) -> f64 {
    (n as f64).sqrt() / (n as f64).ln()
}

/// d = √m / ln m, the default closeness for the noise event.
pub fn default_noise_threshold(m: usize) -> f64 {
    (m as f64).sqrt() / (m as f64).ln()
}

/// How T_ρ f is evaluated inside Monte Carlo trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseEval {
    Exact,
    Approx,
    /// Exact up to [`NoiseEval::AUTO_EXACT_MAX_M`] triplets, approximate above.
    #[default]
    Auto,
}

impl NoiseEval {
    pub const AUTO_EXACT_MAX_M: u64 = 301;

    pub fn evaluate(&self, t: &TripletTallies, rho: f64) -> Result<f64> {
        let exact = match self {
            NoiseEval::Exact => true,
            NoiseEval::Approx => false,
            NoiseEval::Auto => t.m() <= Self::AUTO_EXACT_MAX_M,
        };
        if exact {
            t_rho_exact(t, rho)
        } else {
            t_rho_approx(t, rho)
        }
    }
}

impl FromStr for NoiseEval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(NoiseEval::Exact),
            "approx" => Ok(NoiseEval::Approx),
            "auto" => Ok(NoiseEval::Auto),
            _ => Err(Error::InvalidInput(format!(
                "unknown noise evaluation {s:?}"
            ))),
        }
    }
}

/// The three cyclic tallies of one impartial-culture election on a, b, c.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TripletElection {
    pub pairs: [TripletTallies; 3],
}

impl TripletElection {
    pub fn m(&self) -> u64 {
        self.pairs[0].m()
    }

    /// max over pairs of |Σ_i x_i^{(kk')}| ≤ d.
    pub fn sum_event(&self, d: f64) -> bool {
        self.pairs.iter().all(|t| t.vote_sum().abs() as f64 <= d)
    }

    /// max over pairs of |T_ρ f(x^{(kk')})| ≤ d/√m.
    pub fn noise_event(&self, rho: f64, d: f64, eval: NoiseEval) -> Result<bool> {
        let bound = d / (self.m() as f64).sqrt();
        for t in &self.pairs {
            if eval.evaluate(t, rho)?.abs() > bound {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// f(x^{ab}) = f(x^{bc}) = f(x^{ca}), a cyclic outcome.
    pub fn paradox(&self) -> bool {
        let f = self.pairs.map(|t| t.f());
        f[0] == f[1] && f[1] == f[2]
    }
}

/// Samples m triplets of voters as multinomial counts over
/// [`triplet_classes`]; equal in law to [`sample_triplet_election_explicit`].
pub fn sample_triplet_election<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<TripletElection> {
    check_triplet_len(3 * m)?;
    let classes = triplet_classes();
    let probs: Vec<f64> = classes.iter().map(|c| c.weight as f64 / 216.0).collect();
    let counts = sample_multinomial(m as u64, &probs, rng);
    let mut pairs = [TripletTallies::default(); 3];
    for (c, &k) in classes.iter().zip(&counts) {
        for (p, &w) in pairs.iter_mut().zip(&c.w) {
            p.counts[sum_slot(w)] += k;
        }
    }
    Ok(TripletElection { pairs })
}

/// Samples n = 3m explicit rankings and tallies them.
pub fn sample_triplet_election_explicit<R: Rng + ?Sized>(
    m: usize,
    rng: &mut R,
) -> Result<TripletElection> {
    check_triplet_len(3 * m)?;
    let profile = sample_profile(3 * m, 3, rng)?;
    let votes: Vec<[i8; 3]> = profile.rankings().iter().map(|r| cyclic_votes(r)).collect();
    let pairs = [0, 1, 2].map(|j| {
        let x: Vec<i8> = votes.iter().map(|v| v[j]).collect();
        TripletTallies::from_votes(&x).expect("length is a multiple of 3")
    });
    Ok(TripletElection { pairs })
}

/// Aggregators compared by the noise-stability paradox formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Aggregator {
    Dictator,
    Majority,
    Triplets,
}

impl Aggregator {
    pub const ALL: [Aggregator; 3] = [
        Aggregator::Dictator,
        Aggregator::Majority,
        Aggregator::Triplets,
    ];

    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            Aggregator::Dictator if n == 0 => {
                Err(Error::InvalidInput("dictator needs n >= 1".into()))
            }
            Aggregator::Majority if n % 2 == 0 => Err(Error::InvalidInput(format!(
                "majority needs odd n, got {n}"
            ))),
            Aggregator::Triplets => check_triplet_len(n).map(|_| ()),
            _ => Ok(()),
        }
    }

    pub fn apply(&self, x: &[i8]) -> Result<i8> {
        self.validate(x.len())?;
        match self {
            Aggregator::Dictator => Ok(x[0]),
            Aggregator::Majority => majority(x),
            Aggregator::Triplets => f_triplets(x),
        }
    }
}

impl fmt::Display for Aggregator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Aggregator::Dictator => "dictator",
            Aggregator::Majority => "majority",
            Aggregator::Triplets => "triplets",
        })
    }
}

impl FromStr for Aggregator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Aggregator::ALL
            .into_iter()
            .find(|a| a.to_string() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown aggregator {s:?}")))
    }
}

/// ¼(1 − 3 E[g(x)g(y)]) for ⅓-correlated x, y.
pub fn kalai_formula(noise_correlation: f64) -> f64 {
    0.25 * (1.0 - 3.0 * noise_correlation)
}

fn binomial<R: Rng + ?Sized>(n: u64, p: f64, rng: &mut R) -> u64 {
    if n == 0 || p <= 0.0 {
        0
    } else if p >= 1.0 {
        n
    } else {
        Binomial::new(n, p).expect("valid binomial").sample(rng)
    }
}

/// (g(x), g(y)) for uniform x and y a ρ-correlated copy, sampled through
/// sufficient counts rather than explicit vectors.
pub fn noisy_pair_outcome<R: Rng + ?Sized>(
    agg: Aggregator,
    n: usize,
    rho: f64,
    rng: &mut R,
) -> Result<(i8, i8)> {
    agg.validate(n)?;
    let e = noise_params(rho)?.epsilon;
    match agg {
        Aggregator::Dictator => {
            let x: i8 = if rng.random::<bool>() { 1 } else { -1 };
            let y = if rng.random::<f64>() < e { -x } else { x };
            Ok((x, y))
        }
        Aggregator::Majority => {
            let n = n as u64;
            let plus = binomial(n, 0.5, rng);
            let y_plus = plus - binomial(plus, e, rng) + binomial(n - plus, e, rng);
            let sign = |k: u64| (2 * k as i64 - n as i64).signum() as i8;
            Ok((sign(plus), sign(y_plus)))
        }
        Aggregator::Triplets => {
            // joint law of (number of + in a triplet of x, number in y)
            let mut probs = Vec::with_capacity(16);
            for j in 0..=3u64 {
                let pj = (ln_binomial(3, j).exp()) / 8.0;
                let lose = binomial_pmf(j, e);
                let gain = binomial_pmf(3 - j, e);
                let mut row = [0.0; 4];
                for (l, pl) in lose.iter().enumerate() {
                    for (g, pg) in gain.iter().enumerate() {
                        row[j as usize - l + g] += pl * pg;
                    }
                }
                probs.extend(row.iter().map(|r| pj * r));
            }
            let counts = sample_multinomial((n / 3) as u64, &probs, rng);
            let (mut sx, mut sy) = (0i64, 0i64);
            for (cell, &c) in counts.iter().enumerate() {
                let (jx, jy) = (cell / 4, cell % 4);
                sx += if jx >= 2 { c as i64 } else { -(c as i64) };
                sy += if jy >= 2 { c as i64 } else { -(c as i64) };
            }
            Ok((sx.signum() as i8, sy.signum() as i8))
        }
    }
}

/// Same law as [`noisy_pair_outcome`], drawing x and y coordinate by coordinate.
pub fn noisy_pair_outcome_explicit<R: Rng + ?Sized>(
    agg: Aggregator,
    n: usize,
    rho: f64,
    rng: &mut R,
) -> Result<(i8, i8)> {
    agg.validate(n)?;
    let e = noise_params(rho)?.epsilon;
    let x: Vec<i8> = (0..n)
        .map(|_| if rng.random::<bool>() { 1 } else { -1 })
        .collect();
    let y: Vec<i8> = x
        .iter()
        .map(|&v| if rng.random::<f64>() < e { -v } else { v })
        .collect();
    Ok((agg.apply(&x)?, agg.apply(&y)?))
}
