//! Impartial-culture ranking profiles.
//!
//! Pairs of alternatives are indexed lexicographically: (0,1), (0,2), …,
//! (k−2,k−1). A voter's pairwise vote on (i, j) is +1 when the voter ranks i
//! above j.

use crate::{Error, Result};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Binomial, Distribution};

/// Number of pairs K = k(k−1)/2.
pub fn pair_count(k: usize) -> usize {
    k * (k.saturating_sub(1)) / 2
}

/// All pairs (i, j), i < j, in lexicographic order.
pub fn pairs(k: usize) -> Vec<(usize, usize)> {
    (0..k)
        .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
        .collect()
}

/// Lexicographic index of the pair {a, b}, together with the sign that
/// orients it as "a over b".
pub fn pair_index(k: usize, a: usize, b: usize) -> (usize, i8) {
    assert!(
        a != b && a < k && b < k,
        "invalid pair ({a}, {b}) for k = {k}"
    );
    let (i, j, sign) = if a < b { (a, b, 1) } else { (b, a, -1) };
    // pairs starting below i contribute (k-1) + (k-2) + ... + (k-i)
    let before = i * (2 * k - i - 1) / 2;
    (before + (j - i - 1), sign)
}

/// Pairwise ±1 votes of one ranking; `ranking[pos]` is the alternative at
/// position `pos` (best first).
pub fn pairwise_votes(ranking: &[usize]) -> Vec<i8> {
    let k = ranking.len();
    let mut position = vec![0usize; k];
    for (pos, &alt) in ranking.iter().enumerate() {
        position[alt] = pos;
    }
    pairs(k)
        .into_iter()
        .map(|(i, j)| if position[i] < position[j] { 1 } else { -1 })
        .collect()
}

/// n voters' rankings of k alternatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankingProfile {
    k: usize,
    rankings: Vec<Vec<usize>>,
}

impl RankingProfile {
    pub fn new(k: usize, rankings: Vec<Vec<usize>>) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidInput(format!("k >= 2 required, got {k}")));
        }
        for r in &rankings {
            let mut seen = vec![false; k];
            if r.len() != k
                || r.iter()
                    .any(|&a| a >= k || std::mem::replace(&mut seen[a], true))
            {
                return Err(Error::InvalidInput(format!(
                    "{r:?} is not a ranking of {k} alternatives"
                )));
            }
        }
        Ok(RankingProfile { k, rankings })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.rankings.len()
    }

    pub fn rankings(&self) -> &[Vec<usize>] {
        &self.rankings
    }

    /// The voters' pairwise tuples x_i ∈ {−1, 1}^K.
    pub fn pairwise(&self) -> Vec<Vec<i8>> {
        self.rankings.iter().map(|r| pairwise_votes(r)).collect()
    }

    /// Every voter's ranking reversed.
    pub fn reversed(&self) -> Self {
        let rankings = self
            .rankings
            .iter()
            .map(|r| r.iter().rev().copied().collect())
            .collect();
        RankingProfile {
            k: self.k,
            rankings,
        }
    }
}

/// n i.i.d. uniform rankings of k alternatives.
pub fn sample_profile<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<RankingProfile> {
    if n < 1 || k < 2 {
        return Err(Error::InvalidInput(format!(
            "need n >= 1 and k >= 2, got n = {n}, k = {k}"
        )));
    }
    let rankings = (0..n)
        .map(|_| {
            let mut r: Vec<usize> = (0..k).collect();
            r.shuffle(rng);
            r
        })
        .collect();
    Ok(RankingProfile { k, rankings })
}

/// All k! rankings in lexicographic order.
pub fn all_rankings(k: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..k).collect();
    let mut out = vec![cur.clone()];
    // standard next-permutation
    loop {
        let Some(i) = (0..k.saturating_sub(1))
            .rev()
            .find(|&i| cur[i] < cur[i + 1])
        else {
            return out;
        };
        let j = (i + 1..k)
            .rev()
            .find(|&j| cur[j] > cur[i])
            .expect("successor exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
}

/// Multinomial(n; p) by sequential conditional binomials.
pub fn sample_multinomial<R: Rng + ?Sized>(n: u64, probs: &[f64], rng: &mut R) -> Vec<u64> {
    let mut counts = vec![0u64; probs.len()];
    let mut remaining = n;
    let mut mass: f64 = probs.iter().sum();
    for (i, &p) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if i + 1 == probs.len() {
            counts[i] = remaining;
            break;
        }
        let q = (p / mass).clamp(0.0, 1.0);
        let c = if q >= 1.0 {
            remaining
        } else {
            Binomial::new(remaining, q)
                .expect("valid binomial")
                .sample(rng)
        };
        counts[i] = c;
        remaining -= c;
        mass -= p;
    }
    counts
}

/// Counts of each of the k! rankings (in [`all_rankings`] order) in an
/// impartial-culture profile of n voters. Equal in law to tallying an
/// explicit [`sample_profile`] draw, at O(k!) cost instead of O(n k).
pub fn sample_ranking_counts<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<u64> {
    let m = (1..=k).product::<usize>();
    sample_multinomial(n as u64, &vec![1.0 / m as f64; m], rng)
}
