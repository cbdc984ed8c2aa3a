//! Bounded cancellation constant of a PL map, by exhaustive loop pairing.

use num_traits::Zero;

use crate::graph::{Dart, EdgePath};
use crate::rational::Rational;

use super::bpath::BPath;
use super::lambda::lambda_r;
use super::plmap::PLMap;
use super::StretchError;

#[derive(Debug, Clone)]
pub struct CancellationOptions {
    /// Overrides the loop-length search bound `4 λ vol(A) Λ_L(A, B)`.
    pub length_cap: Option<Rational>,
    /// Also bounds the number of based loops and search steps.
    pub pair_cap: u64,
}

impl Default for CancellationOptions {
    fn default() -> Self {
        CancellationOptions { length_cap: None, pair_cap: 1_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CancellationReport {
    pub k: Rational,
    /// `K + λ vol(A)`.
    pub bound: Rational,
    pub search_length: Rational,
    pub loops: usize,
    pub pairs: u64,
}

struct BasedLoop {
    first: Dart,
    last: Dart,
    image: BPath,
}

fn loops_at(f: &PLMap, v: usize, cap: &Rational, limit: u64, out: &mut Vec<BasedLoop>) -> Result<(), u64> {
    let mut stack: Vec<Dart> = Vec::new();
    let mut steps = limit.saturating_mul(limit).saturating_mul(4);
    #[allow(clippy::too_many_arguments)]
    fn rec(
        f: &PLMap,
        v: usize,
        at: usize,
        used: Rational,
        cap: &Rational,
        limit: u64,
        steps: &mut u64,
        stack: &mut Vec<Dart>,
        out: &mut Vec<BasedLoop>,
    ) -> Result<(), u64> {
        let a = &f.source;
        for d in a.darts_from(at) {
            if stack.last().is_some_and(|l| *l == d.reverse()) {
                continue;
            }
            let len = &used + a.dart_length(d);
            if len > *cap {
                continue;
            }
            if *steps == 0 {
                return Err(limit);
            }
            *steps -= 1;
            stack.push(d);
            let y = a.terminus(d);
            if y == v {
                if out.len() as u64 >= limit {
                    return Err(limit);
                }
                let image = f.push_path(&EdgePath::new(v, stack.clone()));
                out.push(BasedLoop { first: stack[0], last: d, image });
            }
            rec(f, v, y, len, cap, limit, steps, stack, out)?;
            stack.pop();
        }
        Ok(())
    }
    rec(f, v, v, Rational::zero(), cap, limit, &mut steps, &mut stack, out)
}

pub fn bounded_cancellation_bound(f: &PLMap, opts: &CancellationOptions) -> Result<CancellationReport, StretchError> {
    let a = &f.source;
    let lambda = f.lipschitz();
    let vol = a.volume();
    let search_length = match &opts.length_cap {
        Some(c) => c.clone(),
        None => {
            let (ll, _) = lambda_r(&f.target, a)?;
            Rational::from_integer(4.into()) * &lambda * &vol * ll
        }
    };
    let b = &f.target;
    let mut k = Rational::zero();
    let mut pairs: u64 = 0;
    let mut total_loops = 0;
    for v in 0..a.num_vertices() {
        let mut loops = Vec::new();
        // pairs grow quadratically in loops, so a larger loop count cannot fit under the cap
        let loop_cap = 2 * opts.pair_cap.isqrt() + 16;
        if loops_at(f, v, &search_length, loop_cap, &mut loops).is_err() {
            return Err(StretchError::PairCap { cap: opts.pair_cap, partial: Box::new(k) });
        }
        total_loops += loops.len();
        let reversed: Vec<BPath> = loops.iter().map(|l| l.image.reversed(b)).collect();
        for (i, alpha) in loops.iter().enumerate() {
            for beta in &loops {
                if alpha.last == beta.first.reverse() || beta.last == alpha.first.reverse() {
                    continue;
                }
                pairs += 1;
                if pairs > opts.pair_cap {
                    return Err(StretchError::PairCap { cap: opts.pair_cap, partial: Box::new(k) });
                }
                let overlap = reversed[i].common_prefix_length(&beta.image);
                if overlap > k {
                    k = overlap;
                }
            }
        }
    }
    let bound = &k + &lambda * &vol;
    Ok(CancellationReport { k, bound, search_length, loops: total_loops, pairs })
}
