//! In-place edits: subdivision, contraction, folding and basepoint moves.
//!
//! Every edit keeps the marking consistent. Labels are re-gauged at the vertex
//! that disappears so that loops at the basepoint read out the same words.

use crate::freegroup::Word;
use crate::rational::Rational;

use super::{tighten_darts, Dart, Edge, EdgePath, GraphError, MarkedMetricGraph};

/// Result of identifying two darts with a common origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FoldOutcome {
    /// Index the removed edge had before removal.
    pub removed_edge: usize,
    /// The original dart that was absorbed.
    pub absorbed: Dart,
    /// The surviving dart, with indices valid after removal.
    pub kept: Dart,
    /// Index the merged-away vertex had before removal.
    pub removed_vertex: usize,
}

fn shift_dart(d: Dart, removed: usize) -> Dart {
    if d.edge() > removed {
        Dart::new(d.edge() - 1, d.is_reversed())
    } else {
        d
    }
}

impl MarkedMetricGraph {
    /// Multiplies labels so that loops based at `v` read out `g w g⁻¹`.
    pub fn gauge(&mut self, v: usize, g: &Word) {
        if g.is_identity() {
            return;
        }
        let gi = g.inverse();
        for e in &mut self.edges {
            if e.origin == v {
                e.label = g.mul(&e.label);
            }
            if e.terminus == v {
                e.label = e.label.mul(&gi);
            }
        }
    }

    /// Splits `e` at distance `offset` from its origin and returns the new vertex.
    ///
    /// The first half keeps index `e` and the label; the second half is appended.
    pub fn subdivide(&mut self, e: usize, offset: &Rational) -> usize {
        let old = self.edges[e].clone();
        assert!(*offset > Rational::from_integer(0.into()) && *offset < old.length);
        let m = self.vertex_names.len();
        self.vertex_names.push(self.fresh_vertex_name());
        let tail = self.edges.len();
        let tail_name = self.fresh_edge_name(&old.name);
        self.edges[e].terminus = m;
        self.edges[e].length = offset.clone();
        self.edges.push(Edge {
            name: tail_name,
            origin: m,
            terminus: old.terminus,
            length: &old.length - offset,
            label: Word::identity(self.rank),
        });
        self.map_marking(|d| {
            if d.edge() != e {
                vec![d]
            } else if d.is_reversed() {
                vec![Dart::new(tail, true), Dart::new(e, true)]
            } else {
                vec![Dart::forward(e), Dart::forward(tail)]
            }
        });
        m
    }

    fn fresh_vertex_name(&self) -> String {
        let mut k = self.vertex_names.len();
        loop {
            let n = format!("v{k}");
            if !self.vertex_names.contains(&n) {
                return n;
            }
            k += 1;
        }
    }

    fn fresh_edge_name(&self, stem: &str) -> String {
        let mut k = 1;
        loop {
            let n = format!("{stem}.{k}");
            if !self.edges.iter().any(|e| e.name == n) {
                return n;
            }
            k += 1;
        }
    }

    fn map_marking<F: Fn(Dart) -> Vec<Dart>>(&mut self, f: F) {
        for m in &mut self.marking {
            m.darts = m.darts.iter().flat_map(|&d| f(d)).collect();
        }
    }

    fn retighten_marking(&mut self) {
        for m in &mut self.marking {
            m.darts = tighten_darts(&m.darts);
        }
    }

    /// Deletes an edge that no marking path uses.
    fn remove_edge(&mut self, e: usize) {
        debug_assert!(self.marking.iter().all(|m| m.darts.iter().all(|d| d.edge() != e)));
        self.edges.remove(e);
        for m in &mut self.marking {
            for d in &mut m.darts {
                *d = shift_dart(*d, e);
            }
        }
    }

    /// Redirects every end at `from` to `into`, deletes `from`, returns the new index of `into`.
    fn merge_vertex(&mut self, from: usize, into: usize) -> usize {
        assert_ne!(from, self.basepoint);
        for e in &mut self.edges {
            if e.origin == from {
                e.origin = into;
            }
            if e.terminus == from {
                e.terminus = into;
            }
        }
        self.vertex_names.remove(from);
        for e in &mut self.edges {
            if e.origin > from {
                e.origin -= 1;
            }
            if e.terminus > from {
                e.terminus -= 1;
            }
        }
        if self.basepoint > from {
            self.basepoint -= 1;
        }
        for m in &mut self.marking {
            if m.start > from {
                m.start -= 1;
            }
        }
        if into > from {
            into - 1
        } else {
            into
        }
    }

    /// Collapses a non-loop edge to a point and returns the index the removed vertex had.
    pub fn contract_edge(&mut self, e: usize) -> Result<usize, GraphError> {
        let Edge { origin: u, terminus: v, label, .. } = self.edges[e].clone();
        if u == v {
            return Err(GraphError::NotIsomorphism("cannot contract a loop"));
        }
        let (gone, keep, g) = if v != self.basepoint { (v, u, label) } else { (u, v, label.inverse()) };
        self.gauge(gone, &g);
        debug_assert!(self.edges[e].label.is_identity());
        self.map_marking(|d| if d.edge() == e { vec![] } else { vec![d] });
        self.merge_vertex(gone, keep);
        self.remove_edge(e);
        self.retighten_marking();
        Ok(gone)
    }

    /// Identifies two equal-length darts leaving the same vertex.
    pub fn fold_darts(&mut self, d1: Dart, d2: Dart) -> Result<FoldOutcome, GraphError> {
        assert_eq!(self.origin(d1), self.origin(d2));
        if d1.edge() == d2.edge() {
            return Err(GraphError::NotIsomorphism("fold of an edge with itself"));
        }
        let (mut d1, mut d2) = (d1, d2);
        if self.terminus(d1) == self.terminus(d2) {
            return Err(GraphError::NotIsomorphism("fold would drop rank"));
        }
        if self.terminus(d2) == self.basepoint {
            std::mem::swap(&mut d1, &mut d2);
        }
        let y1 = self.terminus(d1);
        let y2 = self.terminus(d2);
        let g = self.dart_label(d1).inverse().mul(&self.dart_label(d2));
        self.gauge(y2, &g);
        debug_assert_eq!(self.dart_label(d1), self.dart_label(d2));
        self.map_marking(|d| {
            if d == d2 {
                vec![d1]
            } else if d == d2.reverse() {
                vec![d1.reverse()]
            } else {
                vec![d]
            }
        });
        self.merge_vertex(y2, y1);
        let removed = d2.edge();
        self.remove_edge(removed);
        self.retighten_marking();
        Ok(FoldOutcome { removed_edge: removed, absorbed: d2, kept: shift_dart(d1, removed), removed_vertex: y2 })
    }

    /// Moves the basepoint to the start of `path`, which must end at the current basepoint.
    pub fn rebase(&mut self, path: &EdgePath) {
        assert_eq!(self.path_end(path), self.basepoint);
        let back: Vec<Dart> = path.darts.iter().rev().map(|d| d.reverse()).collect();
        let lp = self.word_of_path(path);
        for m in &mut self.marking {
            let mut darts = path.darts.clone();
            darts.extend_from_slice(&m.darts);
            darts.extend_from_slice(&back);
            m.darts = tighten_darts(&darts);
            m.start = path.start;
        }
        self.basepoint = path.start;
        self.gauge(path.start, &lp.inverse());
    }

    /// Replaces the two edges at a bivalent non-base vertex by one edge.
    ///
    /// With `[d1, d2]` the darts leaving `v`, the edge of `d1` survives and runs
    /// along `d1` reversed then `d2`; the edge of `d2` and the vertex are removed.
    pub fn smooth_vertex(&mut self, v: usize) {
        let ds = self.darts_from(v);
        assert_eq!(ds.len(), 2);
        let (d1, d2) = (ds[0], ds[1]);
        assert_ne!(d1.edge(), d2.edge());
        let e1 = d1.edge();
        let merged = Edge {
            name: self.edges[e1].name.clone(),
            origin: self.terminus(d1),
            terminus: self.terminus(d2),
            length: self.dart_length(d1) + self.dart_length(d2),
            label: self.dart_label(d1.reverse()).mul(&self.dart_label(d2)),
        };
        let (in1, in2) = (d1.reverse(), d2.reverse());
        for m in &mut self.marking {
            let mut out = Vec::with_capacity(m.darts.len());
            let mut i = 0;
            while i < m.darts.len() {
                let d = m.darts[i];
                if d == in1 {
                    debug_assert_eq!(m.darts.get(i + 1), Some(&d2));
                    out.push(Dart::forward(e1));
                    i += 2;
                } else if d == in2 {
                    debug_assert_eq!(m.darts.get(i + 1), Some(&d1));
                    out.push(Dart::new(e1, true));
                    i += 2;
                } else {
                    out.push(d);
                    i += 1;
                }
            }
            m.darts = out;
        }
        self.edges[e1] = merged;
        self.remove_edge(d2.edge());
        self.vertex_names.remove(v);
        for e in &mut self.edges {
            if e.origin > v {
                e.origin -= 1;
            }
            if e.terminus > v {
                e.terminus -= 1;
            }
        }
        if self.basepoint > v {
            self.basepoint -= 1;
        }
        for m in &mut self.marking {
            if m.start > v {
                m.start -= 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::test_graphs::*;
    use super::*;
    use crate::rational::{int, q};

    #[test]
    fn subdivide_then_contract_round_trips_lengths() {
        let x = theta(q(1, 6), q(1, 3), q(1, 2));
        let mut g = x.clone();
        let m = g.subdivide(2, &q(1, 5));
        assert_eq!(m, 2);
        assert!(g.validate().is_ok());
        assert_eq!(g.volume(), int(1));
        for s in ["a", "b", "ab", "aB"] {
            assert_eq!(g.translation_length(&w(s)).unwrap(), x.translation_length(&w(s)).unwrap());
        }
        g.contract_edge(3).unwrap();
        assert!(g.validate().is_ok());
        assert_eq!(g.num_vertices(), 2);
    }

    #[test]
    fn contraction_keeps_basepoint_and_marking() {
        let mut g = theta(int(1), int(2), int(3));
        g.contract_edge(1).unwrap();
        assert_eq!(g.num_vertices(), 1);
        assert!(g.validate().is_ok());
        assert_eq!(g.translation_length(&w("a")).unwrap(), int(1));
        assert_eq!(g.translation_length(&w("b")).unwrap(), int(3));
        assert!(g.contract_edge(0).is_err());
    }

    #[test]
    fn fold_of_theta_edges_gives_barbell_like_graph() {
        let mut g = theta(int(1), int(1), int(2));
        let s = g.subdivide(2, &int(1));
        assert!(g.validate().is_ok());
        // fold A with the first half of C at p
        let out = g.fold_darts(Dart::forward(0), Dart::forward(2)).unwrap();
        assert_eq!(out.removed_edge, 2);
        assert!(g.validate().is_ok());
        assert_eq!(g.num_vertices(), 2);
        let _ = s;
        assert!(g.fold_darts(Dart::forward(0), Dart::forward(1)).is_err());
    }

    #[test]
    fn rebase_preserves_lengths() {
        let x = theta(q(1, 6), q(1, 3), q(1, 2));
        let mut g = x.clone();
        let p = g.hop_path(1, 0).unwrap();
        g.rebase(&p);
        assert_eq!(g.basepoint(), 1);
        assert!(g.validate().is_ok());
        for s in ["a", "b", "ab", "aB", "aaB"] {
            assert_eq!(g.translation_length(&w(s)).unwrap(), x.translation_length(&w(s)).unwrap());
        }
    }
}
