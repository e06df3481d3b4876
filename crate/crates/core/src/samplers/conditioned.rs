//! Face-sum conditioned and unconditioned i.i.d. dice.

use crate::dice::Die;
use crate::dist::FaceDistribution;
use crate::{Error, Result};
use rand::Rng;

/// Attempt budget for the hyperplane sampler before reporting a stall.
pub const DEFAULT_MAX_ATTEMPTS: u64 = 10_000_000;

/// A uniform draw from {1..n}^n restricted to face-sum n(n+1)/2.
///
/// The first n−1 faces are drawn uniformly and the last face is forced by the
/// sum; the draw is kept iff the forced face lies in [1, n]. Every admissible
/// sequence has the same prefix probability, so accepted draws are exactly
/// uniform, and acceptance is Θ(n^{-1/2}).
pub fn sample_discrete_conditioned<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Die {
    assert!(n >= 1, "n must be positive");
    let n_i = n as i64;
    let target = n_i * (n_i + 1) / 2;
    let mut faces = vec![0f64; n];
    loop {
        let mut sum = 0i64;
        for f in faces.iter_mut().take(n - 1) {
            let x = rng.random_range(1..=n_i);
            sum += x;
            *f = x as f64;
        }
        let last = target - sum;
        if (1..=n_i).contains(&last) {
            faces[n - 1] = last as f64;
            return Die::from_vec_unchecked(faces);
        }
    }
}

/// Draws a die from the i.i.d. law conditioned exactly on Σ a_i = 0.
pub fn sample_continuous_conditioned<D, R>(n: usize, dist: &D, rng: &mut R) -> Result<Die>
where
    D: FaceDistribution,
    R: Rng + ?Sized,
{
    sample_continuous_conditioned_with_budget(n, dist, rng, DEFAULT_MAX_ATTEMPTS)
}

pub fn sample_continuous_conditioned_with_budget<D, R>(
    n: usize,
    dist: &D,
    rng: &mut R,
    max_attempts: u64,
) -> Result<Die>
where
    D: FaceDistribution,
    R: Rng + ?Sized,
{
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "n >= 2 required for face-sum conditioning, got {n}"
        )));
    }
    let sup = dist.pdf_sup();
    let mut faces = vec![0f64; n];
    for _ in 0..max_attempts {
        let mut sum = 0.0;
        for f in faces.iter_mut().take(n - 1) {
            *f = dist.sample(rng);
            sum += *f;
        }
        let last = -sum;
        let ratio = dist.pdf(last) / sup;
        if ratio > 0.0 && rng.random::<f64>() < ratio {
            faces[n - 1] = last;
            return Ok(Die::from_vec_unchecked(faces));
        }
    }
    Err(Error::SamplerStall {
        attempts: max_attempts,
        context: format!("hyperplane sampler, n = {n}, pdf_sup = {sup}"),
    })
}

/// Plain i.i.d. faces.
pub fn sample_iid<D, R>(n: usize, dist: &D, rng: &mut R) -> Die
where
    D: FaceDistribution,
    R: Rng + ?Sized,
{
    assert!(n >= 1, "n must be positive");
    Die::from_vec_unchecked((0..n).map(|_| dist.sample(rng)).collect())
}
