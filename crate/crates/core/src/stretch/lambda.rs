//! Right and left stretching factors and the derived distances.

use num_traits::One;

use crate::freegroup::{FreeGroupError, Word};
use crate::graph::MarkedMetricGraph;
use crate::rational::{ln, Rational};

use super::candidates::{enumerate_candidates, CandidateLoop};
use super::StretchError;

/// A maximising candidate together with the word it reads in the source marking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub candidate: CandidateLoop,
    pub word: Word,
    pub source_length: Rational,
    pub target_length: Rational,
}

fn check_ranks(a: &MarkedMetricGraph, b: &MarkedMetricGraph) -> Result<(), StretchError> {
    if a.rank() != b.rank() {
        return Err(FreeGroupError::RankMismatch { expected: a.rank(), found: b.rank() }.into());
    }
    Ok(())
}

/// `Λ_R(A, B)` over the given candidates of `A`; ties go to the earliest candidate.
pub fn lambda_r_over(
    a: &MarkedMetricGraph,
    b: &MarkedMetricGraph,
    candidates: &[CandidateLoop],
) -> Result<(Rational, Witness), StretchError> {
    check_ranks(a, b)?;
    let mut best: Option<(Rational, Witness)> = None;
    for c in candidates {
        let word = a.word_of_loop(&c.path)?;
        let la = a.loop_length(&c.path)?;
        let lb = b.translation_length(&word)?;
        let ratio = &lb / &la;
        if best.as_ref().is_none_or(|(v, _)| ratio > *v) {
            best = Some((
                ratio,
                Witness { candidate: c.clone(), word, source_length: la, target_length: lb },
            ));
        }
    }
    best.ok_or(StretchError::NoCandidates)
}

pub fn lambda_r(a: &MarkedMetricGraph, b: &MarkedMetricGraph) -> Result<(Rational, Witness), StretchError> {
    lambda_r_over(a, b, &enumerate_candidates(a))
}

/// `Λ_R(Ā, B̄)` of the volume-one representatives, without rescaling either graph.
pub fn lambda_r_normalized(a: &MarkedMetricGraph, b: &MarkedMetricGraph) -> Result<Rational, StretchError> {
    let (v, _) = lambda_r(a, b)?;
    Ok(v * a.volume() / b.volume())
}

#[derive(Debug, Clone, PartialEq)]
pub struct StretchReport {
    pub lambda_r: Rational,
    pub lambda_l: Rational,
    pub lambda: Rational,
    /// `Λ_R` and `Λ_L` between the volume-one representatives.
    pub lambda_r_normalized: Rational,
    pub lambda_l_normalized: Rational,
    pub d: f64,
    pub d_r: f64,
    pub d_l: f64,
    /// Candidate of `A`.
    pub witness_r: Witness,
    /// Candidate of `B`.
    pub witness_l: Witness,
}

pub fn stretch_report(a: &MarkedMetricGraph, b: &MarkedMetricGraph) -> Result<StretchReport, StretchError> {
    let (lr, wr) = lambda_r(a, b)?;
    let (ll, wl) = lambda_r(b, a)?;
    let ratio = a.volume() / b.volume();
    let lrn = &lr * &ratio;
    let lln = &ll / &ratio;
    let lambda = &lr * &ll;
    Ok(StretchReport {
        d: ln(&lambda),
        d_r: ln(&lrn),
        d_l: ln(&lln),
        lambda_r: lr,
        lambda_l: ll,
        lambda,
        lambda_r_normalized: lrn,
        lambda_l_normalized: lln,
        witness_r: wr,
        witness_l: wl,
    })
}

/// Marked isometry of the projective classes: both normalized factors equal one.
pub fn projectively_equal(a: &MarkedMetricGraph, b: &MarkedMetricGraph) -> Result<bool, StretchError> {
    let r = stretch_report(a, b)?;
    Ok(r.lambda_r_normalized.is_one() && r.lambda_l_normalized.is_one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::AutomorphismPair;
    use crate::graph::test_graphs::*;
    use crate::rational::{int, q};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn identity_factors() {
        let x = theta(q(1, 6), q(1, 3), q(1, 2));
        let r = stretch_report(&x, &x).unwrap();
        assert_eq!(r.lambda, int(1));
        assert_eq!(r.d, 0.0);
        assert_eq!(r.d_r, 0.0);
        let s = stretch_report(&x, &x.scaled(&int(3))).unwrap();
        assert_eq!(s.lambda, int(1));
        assert_eq!(s.lambda_r, int(3));
        assert_eq!(s.lambda_r_normalized, int(1));
        assert!(projectively_equal(&x, &x.scaled(&q(2, 7))).unwrap());
    }

    #[test]
    fn rank_mismatch_rejected() {
        let x = theta(int(1), int(1), int(1));
        let three = crate::graph::GraphBuilder::new(3)
            .vertex("v")
            .edge("a", "v", "v", int(1), None)
            .edge("b", "v", "v", int(1), None)
            .edge("c", "v", "v", int(1), None)
            .petal("a")
            .petal("b")
            .petal("c")
            .build()
            .unwrap();
        assert!(matches!(lambda_r(&x, &three), Err(StretchError::Group(FreeGroupError::RankMismatch { .. }))));
    }

    #[test]
    fn rose_to_twisted_rose() {
        let r = unit_rose();
        let phi = AutomorphismPair::new(vec![w("a"), w("ba")], vec![w("a"), w("bA")]);
        let g = r.apply_automorphism(&phi).unwrap();
        // l_g(w) = l_r(φ(w)); b ↦ ba has length 2
        let (v, wit) = lambda_r(&r, &g).unwrap();
        assert_eq!(v, int(2));
        assert_eq!(wit.word, w("b"));
    }

    fn random_graph(rng: &mut impl Rng) -> MarkedMetricGraph {
        let len = |rng: &mut dyn rand::RngCore| q(rng.gen_range(1..8), rng.gen_range(1..5));
        let base = match rng.gen_range(0..3) {
            0 => rose(len(rng), len(rng)),
            1 => theta(len(rng), len(rng), len(rng)),
            _ => barbell(len(rng), len(rng), len(rng)),
        };
        let phi = AutomorphismPair::random(2, 2, rng);
        base.apply_automorphism(&phi).unwrap()
    }

    fn random_words(rng: &mut impl Rng, count: usize) -> Vec<Word> {
        (0..count)
            .filter_map(|_| {
                let n = rng.gen_range(1..10);
                let raw: Vec<i32> = (0..n).map(|_| [1, -1, 2, -2][rng.gen_range(0..4)]).collect();
                let w = crate::freegroup::free_reduce(&raw, 2).unwrap();
                (!w.is_identity()).then_some(w)
            })
            .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn sampled_words_never_beat_candidates(seed in 0u64..10_000) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let a = random_graph(&mut rng);
            let b = random_graph(&mut rng);
            let (v, wit) = lambda_r(&a, &b).unwrap();
            prop_assert_eq!(&b.translation_length(&wit.word).unwrap() / a.translation_length(&wit.word).unwrap(), v.clone());
            for w in random_words(&mut rng, 60) {
                let ratio = b.translation_length(&w).unwrap() / a.translation_length(&w).unwrap();
                prop_assert!(ratio <= v);
            }
        }

        #[test]
        fn triangle_and_symmetry(seed in 0u64..10_000) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let a = random_graph(&mut rng);
            let b = random_graph(&mut rng);
            let c = random_graph(&mut rng);
            let ab = stretch_report(&a, &b).unwrap();
            let ba = stretch_report(&b, &a).unwrap();
            let bc = stretch_report(&b, &c).unwrap();
            let ac = stretch_report(&a, &c).unwrap();
            prop_assert!(ac.lambda_r <= &ab.lambda_r * &bc.lambda_r);
            prop_assert!(ac.lambda_l <= &ab.lambda_l * &bc.lambda_l);
            prop_assert_eq!(&ab.lambda, &ba.lambda);
            prop_assert_eq!(&ab.lambda_l, &ba.lambda_r);
            prop_assert!(ab.lambda >= int(1));
            prop_assert!(ab.lambda_r_normalized >= int(1));
            let scaled = stretch_report(&a.scaled(&q(3, 2)), &b.scaled(&q(1, 5))).unwrap();
            prop_assert_eq!(scaled.lambda, ab.lambda);
            prop_assert_eq!(scaled.lambda_r_normalized, ab.lambda_r_normalized);
        }
    }
}
