//! Property tests on the public API, checked against the test oracle where possible.

mod common;

use num_traits::One;
use outerspace::folding::{fast_fold, prepare_folding_setup, sample_path, Strategy as FoldStrategy, TargetScale};
use outerspace::graph::MarkedMetricGraph;
use outerspace::rational::{q, Rational};
use outerspace::stretch::{lambda_r, stretch_report};
use outerspace::AutomorphismPair;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{oracle_length, random_graph, random_word, Kind};

const KINDS: [Kind; 3] = [Kind::Rose, Kind::Theta, Kind::Barbell];

fn pair(seed: u64) -> (ChaCha8Rng, MarkedMetricGraph, MarkedMetricGraph) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_graph(&mut rng, &KINDS, 0..=2);
    let b = random_graph(&mut rng, &KINDS, 0..=3);
    (rng, a, b)
}

fn positive() -> impl Strategy<Value = Rational> {
    (1i64..50, 1i64..50).prop_map(|(p, d)| q(p, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn stretch_is_scale_invariant(seed in 0u64..10_000, c in positive(), c2 in positive()) {
        let (_, a, b) = pair(seed);
        let plain = stretch_report(&a, &b).unwrap();
        let scaled = stretch_report(&a.scaled(&c), &b.scaled(&c2)).unwrap();
        prop_assert_eq!(&plain.lambda, &scaled.lambda);
        prop_assert_eq!(&plain.lambda_r_normalized, &scaled.lambda_r_normalized);
        prop_assert_eq!(&plain.lambda_l_normalized, &scaled.lambda_l_normalized);
        prop_assert_eq!(plain.d, scaled.d);
    }

    #[test]
    fn lambda_is_sup_over_inf(seed in 0u64..10_000) {
        let (mut rng, a, b) = pair(seed);
        let r = stretch_report(&a, &b).unwrap();
        let mut words = vec![r.witness_r.word.clone(), r.witness_l.word.clone()];
        words.extend((0..20).map(|_| {
            let len = rng.gen_range(1..12);
            random_word(&mut rng, len)
        }));
        let ratios: Vec<Rational> = words.iter().map(|w| oracle_length(&b, w) / oracle_length(&a, w)).collect();
        let sup = ratios.iter().max().unwrap();
        let inf = ratios.iter().min().unwrap();
        prop_assert_eq!(sup, &r.lambda_r);
        prop_assert_eq!(Rational::one() / inf, r.lambda_l.clone());
        prop_assert_eq!(sup / inf, r.lambda.clone());
    }

    #[test]
    fn normalizing_scales_every_length(seed in 0u64..10_000) {
        let (mut rng, a, _) = pair(seed);
        let (n, scale) = a.normalize_volume();
        prop_assert_eq!(n.volume(), Rational::one());
        for _ in 0..10 {
            let len = rng.gen_range(1..10);
            let w = random_word(&mut rng, len);
            prop_assert_eq!(n.translation_length(&w).unwrap(), oracle_length(&a, &w) * &scale);
        }
    }

    #[test]
    fn automorphism_then_inverse_restores_lengths(seed in 0u64..10_000, moves in 1usize..6) {
        let (mut rng, a, _) = pair(seed);
        let phi = AutomorphismPair::random(2, moves, &mut rng);
        let back = a.apply_automorphism(&phi).unwrap().apply_automorphism(&phi.inverted()).unwrap();
        for _ in 0..10 {
            let len = rng.gen_range(1..10);
            let w = random_word(&mut rng, len);
            prop_assert_eq!(oracle_length(&back, &w), oracle_length(&a, &w));
            prop_assert_eq!(back.translation_length(&w).unwrap(), a.translation_length(&w).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Samples at random times: folding is 1-Lipschitz, the witness keeps its length,
    /// volume drops at least as fast as time and the 4-point property holds.
    #[test]
    fn folding_samples_behave(seed in 0u64..10_000) {
        let (mut rng, a, b) = pair(seed);
        let setup = prepare_folding_setup(&a, &b, TargetScale::VolumeOne, 1000).unwrap();
        let path = fast_fold(&setup, FoldStrategy::Simultaneous).unwrap();
        let end = path.end_time().clone();
        let mut times: Vec<Rational> = (0..5).map(|_| &end * q(rng.gen_range(0..=64), 64)).collect();
        times.sort();
        times.dedup();
        let snaps: Vec<MarkedMetricGraph> = times.iter().map(|t| sample_path(&path, t).unwrap().source).collect();
        let word = &setup.witness.word;
        let witness_length = oracle_length(setup.prepared(), word);
        for (i, s) in snaps.iter().enumerate() {
            prop_assert_eq!(oracle_length(s, word), witness_length.clone());
            for j in i + 1..snaps.len() {
                prop_assert_eq!(lambda_r(s, &snaps[j]).unwrap().0, Rational::one());
                prop_assert!(s.volume() - snaps[j].volume() >= &times[j] - &times[i]);
            }
        }
        let n = snaps.len();
        let lam: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|j| if i <= j { stretch_report(&snaps[i], &snaps[j]).unwrap().lambda } else { Rational::one() }).collect())
            .collect();
        for s in 0..n {
            for t in s..n {
                for x in s..=t {
                    for y in x..=t {
                        prop_assert!(lam[s][t] >= lam[x][y]);
                    }
                }
            }
        }
    }
}
