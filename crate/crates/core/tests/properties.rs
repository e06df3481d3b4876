//! Randomized invariants across elections, tournaments and triplet majority.

use intrans_core::elections::{
    cyclic_margins, is_transitive_outcome, outcome, tally, tally_counts, tournament_index,
};
use intrans_core::samplers::profile::all_rankings;
use intrans_core::tournament::{count_triangles, min_reversals_to_transitive};
use intrans_core::triplet::{
    noise_covariance_matrix, noise_params, residual_correlation, sum_covariance_matrix,
    t_rho_exact, TripletTallies,
};
use intrans_core::{RankingProfile, Tournament};
use proptest::prelude::*;

fn ranking(k: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..k).collect::<Vec<_>>()).prop_shuffle()
}

fn profile(k: usize, n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = RankingProfile> {
    proptest::collection::vec(ranking(k), n).prop_map(move |r| RankingProfile::new(k, r).unwrap())
}

fn any_profile() -> impl Strategy<Value = RankingProfile> {
    (3usize..=5).prop_flat_map(|k| profile(k, 1..=40))
}

fn odd_profile() -> impl Strategy<Value = RankingProfile> {
    (3usize..=5, 0usize..20).prop_flat_map(|(k, h)| profile(k, 2 * h + 1..=2 * h + 1))
}

fn tournament(v: usize) -> impl Strategy<Value = Tournament> {
    proptest::collection::vec(any::<bool>(), v * (v - 1) / 2).prop_map(move |bits| {
        let mut it = bits.into_iter();
        Tournament::from_fn(v, |_, _| it.next().unwrap())
    })
}

fn tallies_with_odd_m() -> impl Strategy<Value = TripletTallies> {
    proptest::array::uniform4(0u64..15)
        .prop_filter("odd m", |c| c.iter().sum::<u64>() % 2 == 1)
        .prop_map(|counts| TripletTallies { counts })
}

proptest! {
    #[test]
    fn margins_have_parity_of_n_and_are_bounded(p in any_profile()) {
        let s = tally(&p);
        let n = p.n() as i64;
        for &m in s.margins() {
            prop_assert_eq!((m - n).rem_euclid(2), 0);
            prop_assert!(m.abs() <= n);
        }
    }

    #[test]
    fn count_tally_matches_profile_tally(p in any_profile()) {
        let orders = all_rankings(p.k());
        let mut counts = vec![0u64; orders.len()];
        for r in p.rankings() {
            counts[orders.iter().position(|o| o == r).unwrap()] += 1;
        }
        prop_assert_eq!(tally_counts(p.k(), &counts), tally(&p));
    }

    #[test]
    fn reversing_every_ranking_negates_the_outcome(p in odd_profile()) {
        let y = outcome(&tally(&p)).unwrap().to_pairwise();
        let y_rev = outcome(&tally(&p.reversed())).unwrap().to_pairwise();
        prop_assert_eq!(y_rev, y.iter().map(|v| -v).collect::<Vec<_>>());
        prop_assert_eq!(tally(&p.reversed()), tally(&p).negated());
    }

    #[test]
    fn three_candidate_cycles_match_cyclic_margins(p in (0usize..20).prop_flat_map(|h| profile(3, 2 * h + 1..=2 * h + 1))) {
        let s = tally(&p);
        let t = outcome(&s).unwrap();
        let c = cyclic_margins(&s);
        let cyclic = c.iter().all(|&m| m > 0) || c.iter().all(|&m| m < 0);
        prop_assert_eq!(cyclic, !is_transitive_outcome(&t));
        prop_assert!(tournament_index(&t) < 8);
    }

    #[test]
    fn triangles_survive_relabeling(
        (t, perm) in (3usize..=8).prop_flat_map(|v| (tournament(v), ranking(v)))
    ) {
        prop_assert_eq!(count_triangles(&t), count_triangles(&t.relabel(&perm)));
    }

    #[test]
    fn transitive_iff_no_triangles(t in (2usize..=7).prop_flat_map(tournament)) {
        let r = min_reversals_to_transitive(&t).unwrap();
        prop_assert_eq!(r == 0, count_triangles(&t) == 0);
        prop_assert_eq!(Tournament::from_pairwise(t.vertices(), &t.to_pairwise()).unwrap(), t);
    }

    #[test]
    fn noise_operator_is_odd(t in tallies_with_odd_m(), rho in 0.0f64..1.0) {
        let mut flipped = t.counts;
        flipped.reverse();
        let a = t_rho_exact(&t, rho).unwrap();
        let b = t_rho_exact(&TripletTallies { counts: flipped }, rho).unwrap();
        prop_assert!((a + b).abs() < 1e-12, "{} vs {}", a, b);
        prop_assert!(a.abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn vote_tallies_are_consistent(x in proptest::collection::vec(prop_oneof![Just(-1i8), Just(1i8)], 0..20).prop_map(|mut v| { v.truncate(v.len() / 3 * 3); v })) {
        let t = TripletTallies::from_votes(&x).unwrap();
        prop_assert_eq!(t.m() as usize * 3, x.len());
        prop_assert_eq!(t.vote_sum(), x.iter().map(|&v| v as i64).sum::<i64>());
    }

    #[test]
    fn noise_keep_probabilities_are_ordered(rho in 0.0001f64..0.9999) {
        let np = noise_params(rho).unwrap();
        prop_assert!(np.p3 >= np.p1 && np.p1 >= 0.5);
    }

    #[test]
    fn noise_b_block_does_not_depend_on_rho(rho in 0.01f64..0.99) {
        let noisy = noise_covariance_matrix(rho).unwrap();
        let exact = sum_covariance_matrix();
        let diff = noisy.fixed_view::<3, 3>(3, 3) - exact.fixed_view::<3, 3>(3, 3);
        prop_assert!(diff.abs().max() < 1e-15);
    }
}

#[test]
fn noise_params_at_endpoints() {
    let zero = noise_params(0.0).unwrap();
    assert_eq!((zero.p3, zero.p1), (0.5, 0.5));
    let one = noise_params(1.0).unwrap();
    assert_eq!((one.p3, one.p1), (1.0, 1.0));
}

#[test]
fn residual_correlation_stays_below_minus_one_27th() {
    for i in 1..=17 {
        let rho = i as f64 / 18.0;
        let r = residual_correlation(&noise_covariance_matrix(rho).unwrap(), rho).unwrap();
        assert!(r <= -1.0 / 27.0 + 1e-12, "rho {rho}: {r}");
    }
}
