//! Graph generators and an independent translation-length oracle for the integration tests.
#![allow(dead_code)]

use outerspace::fixtures::rose;
use outerspace::freegroup::Letter;
use outerspace::graph::{Dart, GraphBuilder, MarkedMetricGraph};
use outerspace::rational::{int, q, Rational};
use outerspace::{AutomorphismPair, Word};
use rand::Rng;
use std::ops::RangeInclusive;

pub fn theta(la: Rational, lb: Rational, lc: Rational) -> MarkedMetricGraph {
    GraphBuilder::new(2)
        .vertex("p")
        .vertex("q")
        .edge("A", "p", "q", la, None)
        .edge("B", "p", "q", lb, None)
        .edge("C", "p", "q", lc, None)
        .basepoint("p")
        .petal("A -B")
        .petal("C -B")
        .build()
        .expect("theta")
}

pub fn barbell(la: Rational, lc: Rational, lb: Rational) -> MarkedMetricGraph {
    GraphBuilder::new(2)
        .vertex("u")
        .vertex("v")
        .edge("a", "u", "u", la, None)
        .edge("c", "u", "v", lc, None)
        .edge("b", "v", "v", lb, None)
        .basepoint("u")
        .petal("a")
        .petal("c b -c")
        .build()
        .expect("barbell")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Rose,
    Theta,
    Barbell,
}

pub fn random_length<R: Rng>(rng: &mut R) -> Rational {
    q(rng.gen_range(1..=24), rng.gen_range(1..=12))
}

/// A rank-2 graph of a random kind with random lengths, re-marked by a random number of Nielsen moves.
pub fn random_graph<R: Rng>(rng: &mut R, kinds: &[Kind], moves: RangeInclusive<usize>) -> MarkedMetricGraph {
    let kind = kinds[rng.gen_range(0..kinds.len())];
    let moves = rng.gen_range(moves);
    let g = match kind {
        Kind::Rose => rose(&[random_length(rng), random_length(rng)]),
        Kind::Theta => theta(random_length(rng), random_length(rng), random_length(rng)),
        Kind::Barbell => barbell(random_length(rng), random_length(rng), random_length(rng)),
    };
    if moves == 0 {
        return g;
    }
    g.apply_automorphism(&AutomorphismPair::random(2, moves, rng)).expect("re-marking")
}

/// Inner automorphism `x ↦ g x g⁻¹` by the first generator.
pub fn conjugation() -> AutomorphismPair {
    let a = Word::generator(2, 1);
    let gens: Vec<Word> = (1..=2).map(|i| Word::generator(2, i)).collect();
    let fwd = gens.iter().map(|x| a.mul(x).mul(&a.inverse())).collect();
    let inv = gens.iter().map(|x| a.inverse().mul(x).mul(&a)).collect();
    AutomorphismPair::new(fwd, inv)
}

/// Edge counts of the cyclically reduced loop representing `w`.
///
/// Reads the marking paths letter by letter and cancels backtracks with a
/// stack, without using the library's own tightening.
pub fn cyclic_counts(g: &MarkedMetricGraph, w: &Word) -> Vec<u64> {
    let mut stack: Vec<Dart> = Vec::new();
    for l in w.letters() {
        let path = &g.marking()[l.index() - 1];
        let darts: Vec<Dart> = if l.is_inverse() {
            path.darts.iter().rev().map(|d| d.reverse()).collect()
        } else {
            path.darts.clone()
        };
        for d in darts {
            if stack.last() == Some(&d.reverse()) {
                stack.pop();
            } else {
                stack.push(d);
            }
        }
    }
    let (mut lo, mut hi) = (0, stack.len());
    while hi - lo >= 2 && stack[lo] == stack[hi - 1].reverse() {
        lo += 1;
        hi -= 1;
    }
    let mut counts = vec![0; g.num_edges()];
    for d in &stack[lo..hi] {
        counts[d.edge()] += 1;
    }
    counts
}

pub fn dot(g: &MarkedMetricGraph, counts: &[u64]) -> Rational {
    counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(e, &c)| int(c as i64) * &g.edge(e).length).sum()
}

pub fn oracle_length(g: &MarkedMetricGraph, w: &Word) -> Rational {
    dot(g, &cyclic_counts(g, w))
}

/// Every cyclically reduced word of rank 2 with `1 ≤ length ≤ max_len`.
pub fn cyclically_reduced_words(max_len: usize) -> Vec<Word> {
    fn grow(prefix: &mut Vec<i32>, max_len: usize, out: &mut Vec<Word>) {
        if !prefix.is_empty() && prefix[0] != -prefix[prefix.len() - 1] {
            out.push(Word::from_letters(2, prefix.iter().copied().map(Letter::new)).expect("reduced"));
        }
        if prefix.len() == max_len {
            return;
        }
        for l in [1, -1, 2, -2] {
            if prefix.last() == Some(&-l) {
                continue;
            }
            prefix.push(l);
            grow(prefix, max_len, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::new(), max_len, &mut out);
    out
}

/// A random freely reduced word of rank 2 with exactly `len` letters.
pub fn random_word<R: Rng>(rng: &mut R, len: usize) -> Word {
    let mut letters: Vec<i32> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = [1, -1, 2, -2][rng.gen_range(0..4)];
        if letters.last() != Some(&-l) {
            letters.push(l);
        }
    }
    Word::from_letters(2, letters.into_iter().map(Letter::new)).expect("reduced")
}
