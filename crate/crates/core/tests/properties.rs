//! Distribution-level invariants of the belief update, checked over
//! randomly generated priors.

mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use common::{rational_failure_update, to_f64};
use explanation_search::belief::{
    benefit_trajectory, classify_trend, OverlapPrior, TrendClass,
};

fn random_prior(rng: &mut ChaCha12Rng) -> (OverlapPrior, usize) {
    let support = rng.gen_range(2..=60usize);
    let masses: Vec<f64> = (0..support).map(|_| rng.gen_range(0.01..1.0)).collect();
    let n_r = support + rng.gen_range(0..=20usize);
    (OverlapPrior::from_masses(masses).unwrap(), n_r.max(support))
}

#[test]
fn normalization_survives_update_chains() {
    let mut rng = ChaCha12Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let (prior, n_r) = random_prior(&mut rng);
        let mut belief = prior;
        for t in 1..n_r {
            let pool = n_r - t;
            belief = match belief.after_failure(pool) {
                Ok(b) => b,
                Err(_) => break,
            };
            let total: f64 = belief.probs().iter().sum();
            assert!((total - 1.0).abs() <= 1e-12, "sum {total} at pool {pool}");
        }
    }
}

#[test]
fn update_mean_matches_mean_recursion() {
    // distribution-level posterior mean vs the scalar recursion
    // mu' = mu - V / (pool - mu), over 1000 random priors
    let mut rng = ChaCha12Rng::seed_from_u64(2);
    for case in 0..1000 {
        let (prior, n_r) = random_prior(&mut rng);
        let pool = n_r - 1;
        let (mean, variance) = prior.moments();
        if mean >= pool as f64 {
            continue;
        }
        let updated = prior.after_failure(pool).unwrap();
        let recursion = mean - variance / (pool as f64 - mean);
        assert!(
            (updated.mean() - recursion).abs() <= 1e-10,
            "case {case}: {} vs {recursion}",
            updated.mean()
        );
    }
}

#[test]
fn mean_decays_monotonically_unless_degenerate() {
    let mut rng = ChaCha12Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let (prior, n_r) = random_prior(&mut rng);
        let pool = n_r - 1;
        let (mean, variance) = prior.moments();
        if mean >= pool as f64 {
            continue;
        }
        let updated = prior.after_failure(pool).unwrap();
        if variance > 0.0 {
            assert!(updated.mean() < mean);
        } else {
            assert!((updated.mean() - mean).abs() <= 1e-12);
        }
    }
}

#[test]
fn posterior_mass_at_pool_is_exactly_zero() {
    let mut rng = ChaCha12Rng::seed_from_u64(4);
    for _ in 0..1000 {
        let (prior, _) = random_prior(&mut rng);
        let pool = prior.max_support().max(1);
        if prior.mean() >= pool as f64 {
            continue;
        }
        let updated = prior.after_failure(pool).unwrap();
        if pool < updated.probs().len() {
            assert_eq!(updated.probs()[pool], 0.0);
        }
    }
}

#[test]
fn trend_class_matches_trajectory_sign() {
    let mut rng = ChaCha12Rng::seed_from_u64(5);
    for case in 0..1000 {
        let (prior, n_r) = random_prior(&mut rng);
        let n_r = n_r.max(3);
        if prior.mean() <= 0.0 {
            continue;
        }
        let trend = classify_trend(&prior, n_r).unwrap();
        let tr = benefit_trajectory(&prior, n_r, 1.0, 2).unwrap();
        let eb = tr.expected_benefits();
        let rising = eb[1] - eb[0] > 1e-12;
        assert_eq!(
            trend == TrendClass::Rising,
            rising,
            "case {case}: trend {trend:?} but E(B2)-E(B1) = {}",
            eb[1] - eb[0]
        );
    }
}

proptest! {
    #[test]
    fn float_update_tracks_rational_update(
        raw in proptest::collection::vec(1u32..1000, 2..30),
        extra in 0usize..10,
    ) {
        let pool = raw.len() - 1 + extra;
        let masses_f: Vec<f64> = raw.iter().map(|&m| m as f64).collect();
        let masses_q: Vec<BigRational> =
            raw.iter().map(|&m| BigRational::from(BigInt::from(m))).collect();
        let prior = OverlapPrior::from_masses(masses_f).unwrap();
        prop_assume!(prior.mean() < pool as f64);
        let updated = prior.after_failure(pool).unwrap();
        let exact = rational_failure_update(&masses_q, pool);
        for (p, q) in updated.probs().iter().zip(exact.iter()) {
            prop_assert!((p - to_f64(q)).abs() <= 1e-12);
        }
    }

    #[test]
    fn graph_json_round_trip_is_lossless(seed in 0u64..500, p in 0.05f64..0.9) {
        use explanation_search::graph::{generate, GraphSpec, KnowledgeGraph, OverlapPlacement};
        let g = generate(&GraphSpec::ErdosRenyi { n: 20, p }, seed).unwrap();
        let g = match g.place_overlap(3, &OverlapPlacement::UniformRandom, seed) {
            Ok(g) => g,
            Err(_) => g,
        };
        let back = KnowledgeGraph::from_json(&g.to_json()).unwrap();
        prop_assert_eq!(g, back);
    }
}
