//! Dice, the "beats" relation and triple classification.
//!
//! Faces are compared with exact equality. Continuous models produce ties
//! with probability zero; discrete dice store small integers, which are exact
//! in `f64`.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// An n-sided die: a finite sequence of real face values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Die(Vec<f64>);

impl Die {
    pub fn new(faces: Vec<f64>) -> Result<Self> {
        if faces.is_empty() {
            return Err(Error::InvalidInput("a die needs at least one face".into()));
        }
        if let Some(x) = faces.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite face value {x}")));
        }
        Ok(Die(faces))
    }

    /// Builds a die from integer faces.
    pub fn from_ints(faces: &[i64]) -> Result<Self> {
        Die::new(faces.iter().map(|&x| x as f64).collect())
    }

    pub(crate) fn from_vec_unchecked(faces: Vec<f64>) -> Self {
        Die(faces)
    }

    pub fn faces(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn face_sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn into_faces(self) -> Vec<f64> {
        self.0
    }

    fn sorted(&self) -> Vec<f64> {
        let mut v = self.0.clone();
        v.sort_by(f64::total_cmp);
        v
    }
}

/// Outcome counts over all n² face pairs of two dice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PairStats {
    pub wins: u64,
    pub losses: u64,
    pub ties: u64,
}

impl PairStats {
    /// Σ sgn(a_i - b_j); positive iff the first die beats the second.
    pub fn margin(&self) -> i64 {
        self.wins as i64 - self.losses as i64
    }

    pub fn total(&self) -> u64 {
        self.wins + self.losses + self.ties
    }
}

/// Classification of a triple of dice by their pairwise margins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TripleClass {
    Transitive,
    Intransitive,
    HasTie,
}

fn check_lengths(a: &Die, b: &Die) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}

/// Counts wins, losses and ties of `a` against `b` by a sorted merge.
pub fn pair_stats(a: &Die, b: &Die) -> Result<PairStats> {
    check_lengths(a, b)?;
    Ok(pair_stats_sorted(&a.sorted(), &b.sorted()))
}

/// Same as [`pair_stats`] for face slices that are already sorted ascending.
pub fn pair_stats_sorted(a: &[f64], b: &[f64]) -> PairStats {
    let n = b.len() as u64;
    let (mut below, mut upto) = (0usize, 0usize);
    let (mut wins, mut ties) = (0u64, 0u64);
    for &x in a {
        // b[..below] < x, b[..upto] <= x
        while below < b.len() && b[below] < x {
            below += 1;
        }
        if upto < below {
            upto = below;
        }
        while upto < b.len() && b[upto].total_cmp(&x) != Ordering::Greater {
            upto += 1;
        }
        wins += below as u64;
        ties += (upto - below) as u64;
    }
    let total = a.len() as u64 * n;
    PairStats {
        wins,
        losses: total - wins - ties,
        ties,
    }
}

/// W = Σ_{i,j} I[a_i > b_j].
pub fn w_statistic(a: &Die, b: &Die) -> Result<u64> {
    Ok(pair_stats(a, b)?.wins)
}

/// Σ F(a_i) for a CDF-like function F.
pub fn cdf_sum<F: Fn(f64) -> f64>(a: &Die, cdf: F) -> f64 {
    a.faces().iter().map(|&x| cdf(x)).sum()
}

/// V = Σ F(a_i) − Σ F(b_i).
pub fn cdf_sum_difference<F: Fn(f64) -> f64>(a: &Die, b: &Die, cdf: F) -> f64 {
    cdf_sum(a, &cdf) - cdf_sum(b, &cdf)
}

/// Classifies a triple from the signs of the margins (a,b), (b,c), (c,a).
pub fn classify_margins(ab: i64, bc: i64, ca: i64) -> TripleClass {
    if ab == 0 || bc == 0 || ca == 0 {
        TripleClass::HasTie
    } else if ab.signum() == bc.signum() && bc.signum() == ca.signum() {
        TripleClass::Intransitive
    } else {
        TripleClass::Transitive
    }
}

pub fn classify_triple(a: &Die, b: &Die, c: &Die) -> Result<TripleClass> {
    let ab = pair_stats(a, b)?.margin();
    let bc = pair_stats(b, c)?.margin();
    let ca = pair_stats(c, a)?.margin();
    Ok(classify_margins(ab, bc, ca))
}

/// Margins and CDF-sum differences for the three cyclic pairs of a triple,
/// computed with one sort per die.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleReport {
    /// Margins for (a,b), (b,c), (c,a).
    pub margins: [i64; 3],
    /// CDF-sum differences for (a,b), (b,c), (c,a).
    pub cdf_diffs: [f64; 3],
    pub class: TripleClass,
}

impl TripleReport {
    /// Number of pairs (out of three) where the beats relation and the
    /// CDF-sum predictor point the same way.
    pub fn agreements(&self) -> u32 {
        self.margins
            .iter()
            .zip(self.cdf_diffs.iter())
            .filter(|(&m, &v)| m != 0 && (m > 0) == (v > 0.0))
            .count() as u32
    }
}

pub fn triple_report<F: Fn(f64) -> f64>(dice: [&Die; 3], cdf: F) -> Result<TripleReport> {
    check_lengths(dice[0], dice[1])?;
    check_lengths(dice[1], dice[2])?;
    let sorted: Vec<Vec<f64>> = dice.iter().map(|d| d.sorted()).collect();
    let sums: Vec<f64> = dice.iter().map(|d| cdf_sum(d, &cdf)).collect();
    let mut margins = [0i64; 3];
    let mut cdf_diffs = [0f64; 3];
    for i in 0..3 {
        let j = (i + 1) % 3;
        margins[i] = pair_stats_sorted(&sorted[i], &sorted[j]).margin();
        cdf_diffs[i] = sums[i] - sums[j];
    }
    Ok(TripleReport {
        margins,
        cdf_diffs,
        class: classify_margins(margins[0], margins[1], margins[2]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::pair_stats_brute_force;
    use proptest::prelude::*;

    fn die(v: &[i64]) -> Die {
        Die::from_ints(v).unwrap()
    }

    #[test]
    fn classic_example() {
        let (a, b, c) = (die(&[2, 4, 9]), die(&[1, 6, 8]), die(&[3, 5, 7]));
        assert_eq!(
            pair_stats(&a, &b).unwrap(),
            PairStats {
                wins: 5,
                losses: 4,
                ties: 0
            }
        );
        assert_eq!(
            pair_stats(&c, &a).unwrap(),
            PairStats {
                wins: 5,
                losses: 4,
                ties: 0
            }
        );
        assert_eq!(w_statistic(&a, &b).unwrap(), 5);
        assert_eq!(
            classify_triple(&a, &b, &c).unwrap(),
            TripleClass::Intransitive
        );
    }

    #[test]
    fn ties_and_constants() {
        let one = die(&[1, 1]);
        assert_eq!(
            pair_stats(&one, &one).unwrap(),
            PairStats {
                wins: 0,
                losses: 0,
                ties: 4
            }
        );
        assert_eq!(w_statistic(&die(&[7, 7]), &die(&[7, 7])).unwrap(), 0);
        assert_eq!(w_statistic(&die(&[1]), &die(&[0])).unwrap(), 1);
        let a = die(&[3, 3, 3]);
        assert_eq!(classify_triple(&a, &a, &a).unwrap(), TripleClass::HasTie);
        let (x, y, z) = (die(&[3, 3, 3]), die(&[2, 2, 2]), die(&[1, 1, 1]));
        assert_eq!(
            classify_triple(&x, &y, &z).unwrap(),
            TripleClass::Transitive
        );
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let err = pair_stats(&die(&[1, 2]), &die(&[1])).unwrap_err();
        assert_eq!(err, Error::LengthMismatch { left: 2, right: 1 });
        assert!(classify_triple(&die(&[1]), &die(&[1]), &die(&[1, 2])).is_err());
    }

    #[test]
    fn cdf_sums() {
        let clamp = |x: f64| x.clamp(0.0, 1.0);
        assert_eq!(cdf_sum(&Die::new(vec![0.5, 0.5]).unwrap(), clamp), 1.0);
        let zeros = Die::new(vec![0.0; 3]).unwrap();
        assert_eq!(cdf_sum(&zeros, crate::dist::half_variance_normal_cdf), 1.5);
        use crate::dist::{Dist, FaceDistribution};
        let s = cdf_sum(&Die::new(vec![-1.0, 1.0]).unwrap(), |x| {
            Dist::UniformSym.cdf(x)
        });
        assert!((s - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rotations_of_example_stay_intransitive() {
        let dice = [die(&[2, 4, 9]), die(&[1, 6, 8]), die(&[3, 5, 7])];
        for r in 0..3 {
            let t = [&dice[r], &dice[(r + 1) % 3], &dice[(r + 2) % 3]];
            assert_eq!(
                classify_triple(t[0], t[1], t[2]).unwrap(),
                TripleClass::Intransitive
            );
            // reversing orientation keeps it a cycle
            assert_eq!(
                classify_triple(t[2], t[1], t[0]).unwrap(),
                TripleClass::Intransitive
            );
        }
        // relabel faces by a strictly increasing map and permute face order
        let g = |x: f64| x.powi(3) + 10.0;
        let remap: Vec<Die> = dice
            .iter()
            .map(|d| {
                let mut f: Vec<f64> = d.faces().iter().map(|&x| g(x)).collect();
                f.reverse();
                Die::new(f).unwrap()
            })
            .collect();
        assert_eq!(
            classify_triple(&remap[0], &remap[1], &remap[2]).unwrap(),
            TripleClass::Intransitive
        );
    }

    #[test]
    fn triple_report_matches_pairwise() {
        let dice = [die(&[2, 4, 9]), die(&[1, 6, 8]), die(&[3, 5, 7])];
        let rep = triple_report([&dice[0], &dice[1], &dice[2]], |x| x).unwrap();
        assert_eq!(rep.margins, [1, 1, 1]);
        assert_eq!(rep.class, TripleClass::Intransitive);
        // face sums are all 15, so the identity "CDF" predicts nothing
        assert_eq!(rep.agreements(), 0);
    }

    fn small_die(n: usize) -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::vec(-5i64..6, n)
    }

    proptest! {
        #[test]
        fn merge_agrees_with_brute_force((a, b) in (1usize..=64).prop_flat_map(|n| (small_die(n), small_die(n)))) {
            let (da, db) = (die(&a), die(&b));
            let fast = pair_stats(&da, &db).unwrap();
            prop_assert_eq!(fast, pair_stats_brute_force(da.faces(), db.faces()));
            prop_assert_eq!(fast.total(), (a.len() * a.len()) as u64);
        }

        #[test]
        fn antisymmetry((a, b) in (1usize..=40).prop_flat_map(|n| (small_die(n), small_die(n)))) {
            let (da, db) = (die(&a), die(&b));
            let ab = pair_stats(&da, &db).unwrap();
            let ba = pair_stats(&db, &da).unwrap();
            prop_assert_eq!(ab.wins, ba.losses);
            prop_assert_eq!(ab.ties, ba.ties);
        }

        #[test]
        fn monotone_transform_keeps_margin_sign(
            (a, b) in (1usize..=30).prop_flat_map(|n| (
                proptest::collection::vec(-3.0f64..3.0, n),
                proptest::collection::vec(-3.0f64..3.0, n),
            )),
            scale in 0.1f64..5.0,
        ) {
            let g = |x: f64| (scale * x).exp() + x;
            let da = Die::new(a.clone()).unwrap();
            let db = Die::new(b.clone()).unwrap();
            let ga = Die::new(a.iter().map(|&x| g(x)).collect()).unwrap();
            let gb = Die::new(b.iter().map(|&x| g(x)).collect()).unwrap();
            prop_assert_eq!(
                pair_stats(&da, &db).unwrap().margin().signum(),
                pair_stats(&ga, &gb).unwrap().margin().signum()
            );
        }
    }
}
