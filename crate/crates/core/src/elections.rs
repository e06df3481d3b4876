//! Impartial-culture elections: pairwise margins, the outcome tournament,
//! close-election events and reference probabilities.
//!
//! Pairs are indexed lexicographically, (0,1), (0,2), …, (k−2,k−1). For three
//! alternatives a, b, c that is (ab, ac, bc); the cyclic comparison (ca) is the
//! stored (ac) margin with its sign flipped.

use crate::samplers::profile::{all_rankings, pair_count, pairwise_votes, RankingProfile};
use crate::tournament::{count_triangles, Tournament};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// The K-vector of pairwise vote margins S^{(j)} = Σ_i x_i^{(j)}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairwiseScores {
    n: usize,
    k: usize,
    s: Vec<i64>,
}

impl PairwiseScores {
    /// Validates |S^{(j)}| ≤ n and S^{(j)} ≡ n (mod 2).
    pub fn new(n: usize, k: usize, s: Vec<i64>) -> Result<Self> {
        if s.len() != pair_count(k) {
            return Err(Error::InvalidInput(format!(
                "expected {} margins, got {}",
                pair_count(k),
                s.len()
            )));
        }
        let ni = n as i64;
        if let Some(bad) = s
            .iter()
            .find(|&&x| x.abs() > ni || (x - ni).rem_euclid(2) != 0)
        {
            return Err(Error::InvalidInput(format!(
                "margin {bad} inconsistent with n = {n}"
            )));
        }
        Ok(PairwiseScores { n, k, s })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn margins(&self) -> &[i64] {
        &self.s
    }

    /// Negated margins, the scores of the reversed profile.
    pub fn negated(&self) -> Self {
        PairwiseScores {
            n: self.n,
            k: self.k,
            s: self.s.iter().map(|x| -x).collect(),
        }
    }
}

/// Exact margins of an explicit profile.
pub fn tally(profile: &RankingProfile) -> PairwiseScores {
    let k = profile.k();
    let mut s = vec![0i64; pair_count(k)];
    for x in profile.pairwise() {
        for (acc, v) in s.iter_mut().zip(x) {
            *acc += v as i64;
        }
    }
    PairwiseScores {
        n: profile.n(),
        k,
        s,
    }
}

/// Margins from counts of each ranking, indexed as in [`all_rankings`].
pub fn tally_counts(k: usize, counts: &[u64]) -> PairwiseScores {
    let rankings = all_rankings(k);
    assert_eq!(rankings.len(), counts.len(), "one count per ranking");
    let mut s = vec![0i64; pair_count(k)];
    for (r, &c) in rankings.iter().zip(counts) {
        if c == 0 {
            continue;
        }
        for (acc, v) in s.iter_mut().zip(pairwise_votes(r)) {
            *acc += v as i64 * c as i64;
        }
    }
    PairwiseScores {
        n: counts.iter().sum::<u64>() as usize,
        k,
        s,
    }
}

/// Y^{(j)} = sgn(S^{(j)}); a zero margin is a parity violation.
pub fn outcome(s: &PairwiseScores) -> Result<Tournament> {
    let mut y = Vec::with_capacity(s.s.len());
    for (pair, &m) in s.s.iter().enumerate() {
        if m == 0 {
            return Err(Error::ParityViolation { pair });
        }
        y.push(m.signum() as i8);
    }
    Tournament::from_pairwise(s.k, &y)
}

/// Whether max_{j ∈ subset} |S^{(j)}| ≤ d; `None` means all pairs.
pub fn is_close(s: &PairwiseScores, d: i64, subset: Option<&[usize]>) -> bool {
    match subset {
        None => s.s.iter().all(|m| m.abs() <= d),
        Some(idx) => idx.iter().all(|&j| s.s[j].abs() <= d),
    }
}

/// All pair indices except `excluded`.
pub fn subset_excluding(k: usize, excluded: usize) -> Vec<usize> {
    (0..pair_count(k)).filter(|&j| j != excluded).collect()
}

pub fn condorcet_winner(t: &Tournament) -> Option<usize> {
    t.condorcet_winner()
}

/// True iff the tournament has no directed 3-cycle.
pub fn is_transitive_outcome(t: &Tournament) -> bool {
    count_triangles(t) == 0
}

/// (S^{(ab)}, S^{(bc)}, S^{(ca)}) for three alternatives.
pub fn cyclic_margins(s: &PairwiseScores) -> [i64; 3] {
    assert_eq!(s.k, 3, "cyclic margins are defined for three alternatives");
    [s.s[0], s.s[2], -s.s[1]]
}

/// Bit pattern of Y (bit j set iff Y^{(j)} = +1); indexes the 2^K outcomes.
pub fn tournament_index(t: &Tournament) -> usize {
    t.to_pairwise()
        .iter()
        .enumerate()
        .fold(0, |acc, (j, &y)| if y == 1 { acc | (1 << j) } else { acc })
}

/// Reference probabilities for k alternatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoryValues {
    /// Limiting Condorcet-winner probability for three alternatives,
    /// (3/(2π)) arccos(−1/3).
    pub p_cond3: f64,
    /// √(8π log k)/k, the large-k decay of the Condorcet-winner probability.
    pub may_asymptotic: f64,
    /// 2^{−K}, each tournament under close-election conditioning.
    pub uniform_tournament: f64,
    /// k!/2^K, transitive outcome under close-election conditioning.
    pub transitive_close: f64,
    /// k/2^{k−1}, Condorcet winner under close-election conditioning.
    pub condorcet_close: f64,
}

pub fn theory_values(k: usize) -> TheoryValues {
    assert!(k >= 2);
    let big_k = pair_count(k) as i32;
    let kf = k as f64;
    let ln_fact: f64 = (2..=k).map(|i| (i as f64).ln()).sum();
    TheoryValues {
        p_cond3: 3.0 / (2.0 * PI) * (-1.0f64 / 3.0).acos(),
        may_asymptotic: (8.0 * PI * kf.ln()).sqrt() / kf,
        uniform_tournament: 2f64.powi(-big_k),
        transitive_close: (ln_fact - big_k as f64 * 2f64.ln()).exp(),
        condorcet_close: kf / 2f64.powi(k as i32 - 1),
    }
}
