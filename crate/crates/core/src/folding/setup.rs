//! Turning an optimal map into an isometric, simplicial one.

use num_traits::{One, Zero};

use crate::graph::MarkedMetricGraph;
use crate::rational::Rational;
use crate::stretch::{lambda_r, optimize_pl_map, BPath, PLMap, Piece, StretchError, Witness};

/// Scale of the folding target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TargetScale {
    /// Rescale the target to volume one.
    #[default]
    VolumeOne,
    /// Keep the target's lengths.
    AsGiven,
}

#[derive(Debug, Clone)]
pub struct FoldingSetup {
    /// The source as given.
    pub source: MarkedMetricGraph,
    /// Optimal map from `source` to the target.
    pub optimal: PLMap,
    pub lambda_r: Rational,
    /// Maximally stretched candidate of `source`; never folded.
    pub witness: Witness,
    /// Isometric map whose edges each cover a single segment of one target edge.
    pub map: PLMap,
    pub moves: usize,
}

impl FoldingSetup {
    /// The prepared source `A₀`.
    pub fn prepared(&self) -> &MarkedMetricGraph {
        &self.map.source
    }

    pub fn target(&self) -> &MarkedMetricGraph {
        &self.map.target
    }

    /// The shrinking segment from the source towards `A₀`, at parameter `s ∈ [0, 1]`.
    ///
    /// Each edge shrinks linearly to `|f(e)| / Λ_R`; at `s = 1` the prepared graph
    /// is returned, since edges with constant image have vanished there.
    pub fn shrink_sample(&self, s: &Rational) -> MarkedMetricGraph {
        if s.is_one() {
            return self.prepared().clone();
        }
        let t = Rational::one() - s;
        let lengths: Vec<Rational> = (0..self.source.num_edges())
            .map(|e| &t * &self.source.edge(e).length + s * self.optimal.edge_image[e].length() / &self.lambda_r)
            .collect();
        self.source.with_lengths(&lengths)
    }
}

/// Splits the image of `e` at `offset` along with the edge and returns `(vertex, tail edge)`.
pub(crate) fn split_edge(f: &mut PLMap, e: usize, offset: &Rational) -> (usize, usize) {
    let b = &f.target;
    let img = &f.edge_image[e];
    let mut head = Vec::new();
    let mut tail = Vec::new();
    let mut left = offset.clone();
    for p in &img.pieces {
        if left.is_zero() {
            tail.push(p.clone());
            continue;
        }
        let len = p.length();
        if len <= left {
            left -= &len;
            head.push(p.clone());
        } else {
            let mid = if p.to > p.from { &p.from + &left } else { &p.from - &left };
            head.push(Piece { edge: p.edge, from: p.from.clone(), to: mid.clone() });
            tail.push(Piece { edge: p.edge, from: mid, to: p.to.clone() });
            left = Rational::zero();
        }
    }
    let start = img.start.clone();
    let head = BPath { start, pieces: head };
    let point = head.end(b);
    let tail = BPath { start: point.clone(), pieces: tail };
    let m = f.source.subdivide(e, offset);
    f.edge_image[e] = head;
    f.edge_image.push(tail);
    f.vertex_image.push(point);
    (m, f.source.num_edges() - 1)
}

/// Builds `A₀` and the isometric simplicial map used to fold.
///
/// Each edge of the source gets the length of its image under a certified
/// optimal map, edges with constant image are collapsed, and edges are cut at
/// the preimages of target vertices.
pub fn prepare_folding_setup(
    a: &MarkedMetricGraph,
    b: &MarkedMetricGraph,
    scale: TargetScale,
    budget: usize,
) -> Result<FoldingSetup, StretchError> {
    let target = match scale {
        TargetScale::VolumeOne => b.normalized(),
        TargetScale::AsGiven => b.clone(),
    };
    let opt = optimize_pl_map(a, &target, budget)?;
    let (_, witness) = lambda_r(a, &target)?;
    let mut f = opt.map.clone();
    while let Some(e) = f.edge_image.iter().position(BPath::is_empty) {
        let gone = f.source.contract_edge(e)?;
        f.edge_image.remove(e);
        f.vertex_image.remove(gone);
    }
    let lengths: Vec<Rational> = f.edge_image.iter().map(BPath::length).collect();
    f.source = f.source.with_lengths(&lengths);
    let mut e = 0;
    while e < f.source.num_edges() {
        if f.edge_image[e].pieces.len() > 1 {
            let first = f.edge_image[e].pieces[0].length();
            split_edge(&mut f, e, &first);
        }
        e += 1;
    }
    f.validate()?;
    debug_assert!(f.edge_image.iter().all(|p| p.pieces.len() == 1));
    Ok(FoldingSetup { source: a.clone(), optimal: opt.map, lambda_r: opt.lambda_r, witness, map: f, moves: opt.moves })
}
