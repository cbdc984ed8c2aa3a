//! Growth of `d(Φʰ R, R)` along the orbit of an automorphism.

use num_bigint::BigInt;
use num_traits::{One, Pow};

use crate::freegroup::AutomorphismPair;
use crate::graph::MarkedMetricGraph;
use crate::rational::{ln, Rational};
use crate::stretch::{lambda_r, stretch_report, StretchError};

/// `M[i][j]` counts the letters `a_i^{±1}` in `φ(a_j)`.
pub fn transition_matrix(phi: &AutomorphismPair) -> Vec<Vec<u64>> {
    let n = phi.rank();
    let mut m = vec![vec![0u64; n]; n];
    for (j, img) in phi.forward.iter().enumerate() {
        for l in img.letters() {
            m[l.index() - 1][j] += 1;
        }
    }
    m
}

/// Power iteration for the Perron–Frobenius eigenvalue and a positive eigenvector of `m`.
///
/// The eigenvector is scaled to sum one.
pub fn perron_frobenius(m: &[Vec<u64>], iterations: usize) -> (f64, Vec<f64>) {
    let n = m.len();
    let mut v = vec![1.0 / n as f64; n];
    let mut lambda = 0.0;
    for _ in 0..iterations {
        // add the identity so that periodic matrices converge too
        let mut next: Vec<f64> = (0..n).map(|i| v[i] + (0..n).map(|j| m[i][j] as f64 * v[j]).sum::<f64>()).collect();
        let s: f64 = next.iter().sum();
        next.iter_mut().for_each(|x| *x /= s);
        lambda = s - 1.0;
        v = next;
    }
    (lambda, v)
}

/// Rose whose petal lengths approximate the edge lengths of a train track for `φ`.
///
/// Petal `j` gets `l(φ(a_j)) = λ l(a_j)`, so the lengths form the eigenvector of
/// the transposed transition matrix; they are rounded to `1/denominator`.
pub fn train_track_rose(phi: &AutomorphismPair, denominator: i64) -> (f64, MarkedMetricGraph) {
    let m = transition_matrix(phi);
    let n = m.len();
    let mt: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| m[j][i]).collect()).collect();
    let (lambda, v) = perron_frobenius(&mt, 500);
    let lengths: Vec<Rational> = v
        .iter()
        .map(|x| Rational::new(BigInt::from(((x * denominator as f64).round() as i64).max(1)), BigInt::from(denominator)))
        .collect();
    (lambda, crate::fixtures::rose(&lengths))
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitRow {
    pub h: i32,
    pub lambda_r: Rational,
    pub lambda_l: Rational,
    pub lambda: Rational,
    /// `log Λ(Φʰ R, R)`.
    pub d: f64,
}

/// Distances from `Φʰ R` back to `R` for each `h`.
pub fn orbit_distances(r: &MarkedMetricGraph, phi: &AutomorphismPair, hs: &[i32]) -> Result<Vec<OrbitRow>, StretchError> {
    hs.iter()
        .map(|&h| {
            let rh = r.apply_automorphism(&phi.power(h))?;
            let s = stretch_report(&rh, r)?;
            Ok(OrbitRow { h, lambda_r: s.lambda_r, lambda_l: s.lambda_l, lambda: s.lambda, d: s.d })
        })
        .collect()
}

/// Linear bounds `c₁h − c ≤ L_h ≤ c₂h` fitted to `(h, L_h)` with `h > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearEnvelope {
    pub c1: f64,
    pub c2: f64,
    pub c: f64,
    pub holds: bool,
}

/// `c₂` is the largest `L_h/h`, `c₁` the slope between the end points and `c` the
/// smallest offset making the lower bound hold.
pub fn linear_envelope(points: &[(i32, f64)]) -> LinearEnvelope {
    assert!(points.len() >= 2 && points.iter().all(|&(h, _)| h > 0));
    let c2 = points.iter().map(|&(h, l)| l / h as f64).fold(f64::NEG_INFINITY, f64::max);
    let (h0, l0) = points[0];
    let (h1, l1) = points[points.len() - 1];
    let c1 = (l1 - l0) / (h1 - h0) as f64;
    let c = points.iter().map(|&(h, l)| c1 * h as f64 - l).fold(0.0, f64::max);
    let holds = c1 > 0.0
        && c2 > 0.0
        && points.iter().all(|&(h, l)| c1 * h as f64 - c <= l + 1e-12 && l <= c2 * h as f64 + 1e-12);
    LinearEnvelope { c1, c2, c, holds }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubadditivityReport {
    pub holds: bool,
    /// `(h, m, Λ(Φ^{h+m}R, Φ^m R), Λ(ΦR, R)^h)` for every pair checked.
    pub rows: Vec<(i32, i32, Rational, Rational)>,
}

/// Exact check of `Λ(Φ^{h+m}R, Φ^m R) ≤ Λ(ΦR, R)^h`.
pub fn check_subadditivity(
    r: &MarkedMetricGraph,
    phi: &AutomorphismPair,
    hs: &[i32],
    ms: &[i32],
) -> Result<SubadditivityReport, StretchError> {
    let step = stretch_report(&r.apply_automorphism(phi)?, r)?.lambda;
    let mut rows = Vec::new();
    for &h in hs {
        let bound = Pow::pow(&step, h as u32);
        for &m in ms {
            let a = r.apply_automorphism(&phi.power(h + m))?;
            let b = r.apply_automorphism(&phi.power(m))?;
            let lam = stretch_report(&a, &b)?.lambda;
            rows.push((h, m, lam, bound.clone()));
        }
    }
    let holds = rows.iter().all(|(_, _, l, b)| l <= b);
    Ok(SubadditivityReport { holds, rows })
}

/// `log Λ_R(Φ^m A, Φ^{h+m} A) / h` for a rose `A`; equals `log λ` on a train track.
pub fn train_track_growth(a: &MarkedMetricGraph, phi: &AutomorphismPair, h: i32, m: i32) -> Result<f64, StretchError> {
    let x = a.apply_automorphism(&phi.power(m))?;
    let y = a.apply_automorphism(&phi.power(h + m))?;
    let (lam, _) = lambda_r(&x, &y)?;
    debug_assert!(lam >= Rational::one() || h < 0);
    Ok(ln(&lam) / h as f64)
}
