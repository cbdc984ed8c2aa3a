//! Turn multiplicities, folding speeds and the thin part.

use std::cmp::Ordering;

use crate::freegroup::Word;
use crate::graph::{Dart, EdgePath, MarkedMetricGraph};
use crate::rational::Rational;
use crate::stretch::{enumerate_candidates, CandidateLoop, PLMap, Shape, StretchError};

use super::path::{fold_groups, turns_of, FoldTurn, FoldingPath, Strategy};
use super::{sample_path, FoldError};

/// Currently folding turns of the map.
pub fn folding_turns(f: &PLMap, strategy: Strategy) -> Vec<FoldTurn> {
    turns_of(&fold_groups(f, strategy))
}

/// Number of passages of a cyclic dart sequence through folding turns.
pub fn loop_multiplicity(f: &PLMap, strategy: Strategy, darts: &[Dart]) -> u64 {
    let groups = fold_groups(f, strategy);
    let same_group = |x: Dart, y: Dart| groups.iter().any(|(_, g)| g.contains(&x) && g.contains(&y));
    let n = darts.len();
    (0..n).filter(|&i| same_group(darts[i].reverse(), darts[(i + 1) % n])).count() as u64
}

/// `μ_t(γ)` for a loop of the snapshot at time `t`.
pub fn multiplicity(path: &FoldingPath, t: &Rational, gamma: &EdgePath) -> Result<u64, FoldError> {
    let f = sample_path(path, t)?;
    let g = &f.source;
    if gamma.is_empty() || g.check_incidence(gamma).is_err() || g.path_end(gamma) != gamma.start {
        return Err(FoldError::NotALoop);
    }
    if !g.is_cyclically_reduced(&gamma.darts) {
        return Err(FoldError::NotALoop);
    }
    Ok(loop_multiplicity(&f, path.strategy, &gamma.darts))
}

/// Bound on the folding multiplicity of an embedded circle or figure-eight in rank `n`.
///
/// Such a loop passes at most `2n - 2` vertices of valence three or more, and
/// a figure-eight passes its junction twice.
pub fn max_simple_loop_multiplicity(rank: usize) -> u64 {
    2 * rank as u64 - 1
}

#[derive(Debug, Clone, PartialEq)]
pub struct Speeds {
    /// `2μ/l` for the folded circle or figure-eight minimising `l/μ`.
    pub local: Rational,
    pub local_loop: Vec<Dart>,
    pub local_multiplicity: u64,
    /// `2μ/l` for the loop of the target maximally stretched towards the snapshot.
    pub toward: Rational,
    pub toward_word: Word,
    pub toward_loop: Vec<Dart>,
    pub toward_multiplicity: u64,
    /// `toward / local`.
    pub ratio: Rational,
}

/// Speeds of the folding map `f` whose target is the end of the path.
pub fn speeds_of(f: &PLMap, strategy: Strategy) -> Result<Speeds, StretchError> {
    let a = &f.source;
    let b = &f.target;
    let two = Rational::from_integer(2.into());
    let candidates = enumerate_candidates(a);
    let mut local: Option<(Rational, Vec<Dart>, u64)> = None;
    // dumbbells only when a folding turn sits on a separating edge
    for simple_only in [true, false] {
        for c in &candidates {
            if simple_only != (c.shape != Shape::Dumbbell) {
                continue;
            }
            let mu = loop_multiplicity(f, strategy, c.darts());
            if mu == 0 {
                continue;
            }
            let speed = &two * Rational::from_integer(mu.into()) / a.loop_length(&c.path)?;
            if local.as_ref().is_none_or(|(s, _, _)| speed > *s) {
                local = Some((speed, c.darts().to_vec(), mu));
            }
        }
        if local.is_some() {
            break;
        }
    }
    let Some((local, local_loop, local_multiplicity)) = local else {
        return Err(StretchError::Internal("no folded loop".into()));
    };
    let mut toward: Option<(Rational, Rational, Word, Vec<Dart>, u64)> = None;
    for c in enumerate_candidates(b) {
        let word = b.word_of_loop(&c.path)?;
        let lt = a.translation_length(&word)?;
        let stretch = &lt / b.loop_length(&c.path)?;
        let lp = a.loop_of_word(&word)?;
        let mu = loop_multiplicity(f, strategy, &lp.darts);
        let speed = &two * Rational::from_integer(mu.into()) / &lt;
        let better = match &toward {
            None => true,
            Some((s, v, ..)) => match stretch.cmp(s) {
                Ordering::Greater => true,
                Ordering::Equal => speed < *v,
                Ordering::Less => false,
            },
        };
        if better {
            toward = Some((stretch, speed, word, lp.darts, mu));
        }
    }
    let (_, toward, toward_word, toward_loop, toward_multiplicity) = toward.ok_or(StretchError::NoCandidates)?;
    let ratio = &toward / &local;
    Ok(Speeds { local, local_loop, local_multiplicity, toward, toward_word, toward_loop, toward_multiplicity, ratio })
}

/// Local speed of the path and its speed towards the target at time `t < t̄`.
pub fn speeds(path: &FoldingPath, t: &Rational) -> Result<Speeds, FoldError> {
    let f = sample_path(path, t)?;
    if t == path.end_time() || fold_groups(&f, path.strategy).is_empty() {
        return Err(FoldError::Finished(Box::new(t.clone())));
    }
    Ok(speeds_of(&f, path.strategy)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Systole {
    /// Shortest embedded circle over volume.
    pub systole: Rational,
    pub shortest: CandidateLoop,
    pub is_thin: bool,
}

pub fn systole_and_thin_test(g: &MarkedMetricGraph, eps: &Rational) -> Result<Systole, StretchError> {
    let vol = g.volume();
    let mut best: Option<(Rational, CandidateLoop)> = None;
    for c in enumerate_candidates(g).into_iter().filter(|c| c.shape == Shape::O) {
        let s = g.loop_length(&c.path)? / &vol;
        if best.as_ref().is_none_or(|(b, _)| s < *b) {
            best = Some((s, c));
        }
    }
    let (systole, shortest) = best.ok_or(StretchError::NoCandidates)?;
    let is_thin = systole < *eps;
    Ok(Systole { systole, shortest, is_thin })
}
