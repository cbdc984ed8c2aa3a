//! Checks for geodesics, quasi-geodesics and the 4-point property.

use crate::graph::MarkedMetricGraph;
use crate::rational::{to_f64, Rational};
use crate::stretch::{lambda_r, stretch_report, StretchError, Witness};

/// Slack allowed when comparing floating-point distances in the quasi-geodesic test.
pub const QUASI_GEODESIC_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourPointReport {
    pub holds: bool,
    /// First `(s, x, y, t)` with `d(s, t) < d(x, y)`.
    pub violation: Option<[usize; 4]>,
}

/// Checks `d(s, t) ≥ d(x, y)` for all sample indices `s ≤ x ≤ y ≤ t`.
pub fn check_four_point<D, F>(n: usize, mut dist: F) -> FourPointReport
where
    D: PartialOrd,
    F: FnMut(usize, usize) -> D,
{
    let table: Vec<Vec<Option<D>>> =
        (0..n).map(|i| (0..n).map(|j| (i <= j).then(|| dist(i, j))).collect()).collect();
    let d = |i: usize, j: usize| table[i][j].as_ref().expect("ordered pair");
    for s in 0..n {
        for t in s..n {
            for x in s..=t {
                for y in x..=t {
                    if d(s, t) < d(x, y) {
                        return FourPointReport { holds: false, violation: Some([s, x, y, t]) };
                    }
                }
            }
        }
    }
    FourPointReport { holds: true, violation: None }
}

/// Which distance a path is measured in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathMetric {
    /// `d = log Λ`.
    Symmetric,
    /// `d_R`, between volume-one representatives.
    Right,
}

pub fn graph_distance(a: &MarkedMetricGraph, b: &MarkedMetricGraph, metric: PathMetric) -> Result<f64, StretchError> {
    let r = stretch_report(a, b)?;
    Ok(match metric {
        PathMetric::Symmetric => r.d,
        PathMetric::Right => r.d_r,
    })
}

/// Cumulative sums of consecutive distances.
pub fn arc_length_parameters<F: FnMut(usize, usize) -> f64>(n: usize, mut dist: F) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let mut s = 0.0;
    for i in 0..n {
        if i > 0 {
            s += dist(i - 1, i);
        }
        out.push(s);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuasiGeodesicReport {
    pub holds: bool,
    /// Smallest slack over both inequalities and all pairs; negative on failure.
    pub worst_margin: f64,
    pub worst_pair: Option<(usize, usize)>,
}

/// Checks `|x−y|/λ − ε ≤ d(x, y) ≤ λ|x−y| + ε` over all sample pairs.
pub fn check_quasi_geodesic<F: FnMut(usize, usize) -> f64>(
    params: &[f64],
    mut dist: F,
    lambda: &Rational,
    eps: &Rational,
) -> QuasiGeodesicReport {
    assert!(params.windows(2).all(|w| w[0] < w[1]), "parameters must increase");
    let (l, e) = (to_f64(lambda), to_f64(eps));
    let mut worst = f64::INFINITY;
    let mut worst_pair = None;
    for i in 0..params.len() {
        for j in i + 1..params.len() {
            let gap = params[j] - params[i];
            let d = dist(i, j);
            let margin = (d - (gap / l - e)).min(l * gap + e - d);
            if margin < worst {
                worst = margin;
                worst_pair = Some((i, j));
            }
        }
    }
    QuasiGeodesicReport { holds: worst >= -QUASI_GEODESIC_TOLERANCE, worst_margin: worst, worst_pair }
}

/// Quasi-geodesic test on a sampled path, parametrised by arc length.
///
/// Consecutive samples that coincide in the metric are merged first.
pub fn check_quasi_geodesic_graphs(
    points: &[MarkedMetricGraph],
    lambda: &Rational,
    eps: &Rational,
    metric: PathMetric,
) -> Result<QuasiGeodesicReport, StretchError> {
    let n = points.len();
    let mut table = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            table[i][j] = graph_distance(&points[i], &points[j], metric)?;
        }
    }
    let params = arc_length_parameters(n, |i, j| table[i][j]);
    let mut keep: Vec<usize> = Vec::new();
    for i in 0..n {
        if keep.last().is_none_or(|&k| params[i] > params[k]) {
            keep.push(i);
        }
    }
    let kept: Vec<f64> = keep.iter().map(|&i| params[i]).collect();
    let mut r = check_quasi_geodesic(&kept, |i, j| table[keep[i]][keep[j]], lambda, eps);
    r.worst_pair = r.worst_pair.map(|(i, j)| (keep[i], keep[j]));
    Ok(r)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicReport {
    pub holds: bool,
    /// First triple `(x, y, z)` where the triangle equality fails.
    pub failure: Option<(usize, usize, usize)>,
    /// Witness of `Λ_R` between consecutive points.
    pub witnesses: Vec<Witness>,
}

/// Exact `d_R(x, z) = d_R(x, y) + d_R(y, z)` over all ordered triples.
pub fn check_dr_geodesic(points: &[MarkedMetricGraph]) -> Result<GeodesicReport, StretchError> {
    let n = points.len();
    let mut table: Vec<Vec<Option<Rational>>> = vec![vec![None; n]; n];
    let mut witnesses = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (lam, wit) = lambda_r(&points[i], &points[j])?;
            table[i][j] = Some(lam * points[i].volume() / points[j].volume());
            if j == i + 1 {
                witnesses.push(wit);
            }
        }
    }
    let lam = |i: usize, j: usize| table[i][j].as_ref().expect("ordered pair");
    for x in 0..n {
        for y in x + 1..n {
            for z in y + 1..n {
                if *lam(x, z) != lam(x, y) * lam(y, z) {
                    return Ok(GeodesicReport { holds: false, failure: Some((x, y, z)), witnesses });
                }
            }
        }
    }
    Ok(GeodesicReport { holds: true, failure: None, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::test_graphs::*;
    use crate::rational::{int, q};

    #[test]
    fn square_root_metric_has_the_four_point_property() {
        let ts: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
        let r = check_four_point(ts.len(), |i, j| (ts[j] - ts[i]).sqrt());
        assert!(r.holds);
    }

    #[test]
    fn doubling_back_breaks_the_four_point_property() {
        // A, B, A on a line: outer pair at distance 0, inner pair at distance 1
        let pos = [0.0f64, 1.0, 0.0];
        let r = check_four_point(3, |i, j| (pos[j] - pos[i]).abs());
        assert!(!r.holds);
        assert_eq!(r.violation, Some([0, 0, 1, 2]));
    }

    #[test]
    fn simplex_segments_are_right_geodesics() {
        let a = theta(q(1, 6), q(1, 3), q(1, 2));
        let b = theta(q(1, 2), q(1, 3), q(1, 6));
        let pts: Vec<_> = (0..=6).map(|i| a.interpolate_in_simplex(&b, &q(i, 6)).unwrap()).collect();
        let r = check_dr_geodesic(&pts).unwrap();
        assert!(r.holds);
        assert_eq!(r.witnesses.len(), 6);
        let qg = check_quasi_geodesic_graphs(&pts, &int(1), &int(0), PathMetric::Right).unwrap();
        assert!(qg.holds, "{qg:?}");
        let qg = check_quasi_geodesic_graphs(&pts, &int(1), &int(0), PathMetric::Symmetric).unwrap();
        assert!(qg.holds, "{qg:?}");
    }

    #[test]
    fn going_out_and_back_is_not_geodesic() {
        let a = theta(q(1, 6), q(1, 3), q(1, 2));
        let b = theta(q(1, 2), q(1, 3), q(1, 6));
        let r = check_dr_geodesic(&[a.clone(), b, a]).unwrap();
        assert!(!r.holds);
        assert_eq!(r.failure, Some((0, 1, 2)));
    }

    #[test]
    fn quasi_geodesic_bounds() {
        let params = [0.0, 1.0, 2.0, 3.0];
        let half = |i: usize, j: usize| (params[j] - params[i]) / 2.0;
        assert!(check_quasi_geodesic(&params, half, &int(2), &int(0)).holds);
        assert!(!check_quasi_geodesic(&params, half, &q(3, 2), &int(0)).holds);
        assert!(check_quasi_geodesic(&params, half, &q(3, 2), &int(1)).holds);
    }
}
