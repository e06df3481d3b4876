//! Tournaments: transitivity, directed triangles and distance to transitivity.

use crate::dice::{pair_stats, Die};
use crate::samplers::profile::{pair_count, pairs};
use crate::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Largest vertex count accepted by [`min_reversals_to_transitive`].
pub const MAX_EXHAUSTIVE_VERTICES: usize = 10;

/// An orientation of the complete graph on `v` vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tournament {
    v: usize,
    /// `adj[i * v + j]` is true iff i → j (i beats j).
    adj: Vec<bool>,
}

impl Tournament {
    /// Builds from a predicate; `beats(i, j)` is queried for i < j only.
    pub fn from_fn<F: FnMut(usize, usize) -> bool>(v: usize, mut beats: F) -> Self {
        let mut adj = vec![false; v * v];
        for i in 0..v {
            for j in i + 1..v {
                if beats(i, j) {
                    adj[i * v + j] = true;
                } else {
                    adj[j * v + i] = true;
                }
            }
        }
        Tournament { v, adj }
    }

    /// From Y ∈ {−1, 1}^K in lexicographic pair order; +1 on (i, j) means i → j.
    pub fn from_pairwise(k: usize, y: &[i8]) -> Result<Self> {
        if y.len() != pair_count(k) {
            return Err(Error::InvalidInput(format!(
                "expected {} pairwise outcomes for k = {k}, got {}",
                pair_count(k),
                y.len()
            )));
        }
        if y.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidInput(
                "pairwise outcomes must be +1 or -1".into(),
            ));
        }
        let mut it = y.iter();
        Ok(Self::from_fn(k, |_, _| {
            *it.next().expect("length checked") == 1
        }))
    }

    /// The transitive tournament in which earlier entries of `order` beat later ones.
    pub fn transitive(order: &[usize]) -> Self {
        let v = order.len();
        let mut pos = vec![0; v];
        for (p, &x) in order.iter().enumerate() {
            pos[x] = p;
        }
        Self::from_fn(v, |i, j| pos[i] < pos[j])
    }

    /// The directed 3-cycle 0 → 1 → 2 → 0.
    pub fn three_cycle() -> Self {
        Self::from_fn(3, |i, j| !(i == 0 && j == 2))
    }

    /// Each edge oriented by a fair coin.
    pub fn random<R: Rng + ?Sized>(v: usize, rng: &mut R) -> Self {
        Self::from_fn(v, |_, _| rng.random::<bool>())
    }

    pub fn vertices(&self) -> usize {
        self.v
    }

    pub fn beats(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.v + j]
    }

    pub fn out_degree(&self, i: usize) -> usize {
        (0..self.v).filter(|&j| self.beats(i, j)).count()
    }

    /// Back to Y ∈ {−1, 1}^K.
    pub fn to_pairwise(&self) -> Vec<i8> {
        pairs(self.v)
            .into_iter()
            .map(|(i, j)| if self.beats(i, j) { 1 } else { -1 })
            .collect()
    }

    /// Vertex i of the result is vertex `perm[i]` of `self`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.v);
        Self::from_fn(self.v, |i, j| self.beats(perm[i], perm[j]))
    }

    /// Replaces every vertex by a transitive block of `block` vertices; edges
    /// between blocks follow `self`.
    pub fn blow_up(&self, block: usize) -> Self {
        Self::from_fn(self.v * block, |x, y| {
            let (bx, by) = (x / block, y / block);
            if bx == by {
                x < y
            } else {
                self.beats(bx, by)
            }
        })
    }

    /// The vertex beating every other one, if any.
    pub fn condorcet_winner(&self) -> Option<usize> {
        (0..self.v).find(|&i| self.out_degree(i) + 1 == self.v)
    }

    pub fn is_transitive(&self) -> bool {
        count_triangles(self) == 0
    }
}

/// Number of directed 3-cycles, C(v,3) − Σ_i C(out_i, 2).
pub fn count_triangles(t: &Tournament) -> u64 {
    let v = t.vertices() as u64;
    let all = v * v.saturating_sub(1) * v.saturating_sub(2) / 6;
    let transitive: u64 = (0..t.vertices())
        .map(|i| {
            let d = t.out_degree(i) as u64;
            d * d.saturating_sub(1) / 2
        })
        .sum();
    all - transitive
}

/// Number of edges pointing backwards when vertices are listed in `order`.
pub fn backward_edges(t: &Tournament, order: &[usize]) -> usize {
    let mut count = 0;
    for (p, &x) in order.iter().enumerate() {
        for &y in &order[p + 1..] {
            if t.beats(y, x) {
                count += 1;
            }
        }
    }
    count
}

/// Minimum number of edge reversals that make `t` transitive, by exhaustive
/// search over all vertex orderings.
pub fn min_reversals_to_transitive(t: &Tournament) -> Result<usize> {
    let v = t.vertices();
    if v > MAX_EXHAUSTIVE_VERTICES {
        return Err(Error::TooLarge {
            vertices: v,
            limit: MAX_EXHAUSTIVE_VERTICES,
        });
    }
    if v < 3 {
        return Ok(0);
    }
    // Heap's algorithm; vertex 0 can stay anywhere so all v! orders are visited
    let mut order: Vec<usize> = (0..v).collect();
    let mut best = backward_edges(t, &order);
    let mut c = vec![0usize; v];
    let mut i = 0;
    while i < v {
        if c[i] < i {
            if i % 2 == 0 {
                order.swap(0, i);
            } else {
                order.swap(c[i], i);
            }
            best = best.min(backward_edges(t, &order));
            if best == 0 {
                return Ok(0);
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(best)
}

/// Orients dice by the beats relation; a zero margin is an error so the
/// caller can resample.
pub fn dice_tournament(dice: &[Die]) -> Result<Tournament> {
    let v = dice.len();
    let mut margins = Vec::with_capacity(pair_count(v));
    for (i, j) in pairs(v) {
        let m = pair_stats(&dice[i], &dice[j])?.margin();
        if m == 0 {
            return Err(Error::Tie {
                first: i,
                second: j,
            });
        }
        margins.push(m > 0);
    }
    let mut it = margins.into_iter();
    Ok(Tournament::from_fn(v, |_, _| {
        it.next().expect("one margin per pair")
    }))
}

/// Distance to transitivity and triangle density of a small tournament.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FoxSudakovReport {
    pub vertices: usize,
    pub reversals: usize,
    pub triangles: u64,
    /// reversals / v².
    pub epsilon_far: f64,
    /// triangles / v³.
    pub triangle_density: f64,
}

pub fn fox_sudakov_report(t: &Tournament) -> Result<FoxSudakovReport> {
    let reversals = min_reversals_to_transitive(t)?;
    let triangles = count_triangles(t);
    let v = t.vertices() as f64;
    Ok(FoxSudakovReport {
        vertices: t.vertices(),
        reversals,
        triangles,
        epsilon_far: reversals as f64 / (v * v),
        triangle_density: triangles as f64 / (v * v * v),
    })
}
