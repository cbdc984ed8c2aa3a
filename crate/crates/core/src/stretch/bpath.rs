//! Paths in a metric graph that may start or stop inside an edge.

use num_traits::Zero;

use crate::freegroup::Word;
use crate::graph::{Dart, MarkedMetricGraph};
use crate::rational::Rational;

/// A point of the geometric realisation. Endpoint offsets are always `Vertex`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Point {
    Vertex(usize),
    Interior { edge: usize, offset: Rational },
}

impl Point {
    /// Normalises `offset` along `edge` (measured from its origin).
    pub fn on_edge(g: &MarkedMetricGraph, edge: usize, offset: Rational) -> Point {
        let e = g.edge(edge);
        if offset.is_zero() {
            Point::Vertex(e.origin)
        } else if offset == e.length {
            Point::Vertex(e.terminus)
        } else {
            debug_assert!(offset > Rational::zero() && offset < e.length);
            Point::Interior { edge, offset }
        }
    }

    pub fn as_vertex(&self) -> Option<usize> {
        match self {
            Point::Vertex(v) => Some(*v),
            Point::Interior { .. } => None,
        }
    }

    pub fn describe(&self, g: &MarkedMetricGraph) -> String {
        match self {
            Point::Vertex(v) => g.vertex_name(*v).to_string(),
            Point::Interior { edge, offset } => {
                format!("{}@{}", g.edge(*edge).name, crate::rational::fmt_rational(offset))
            }
        }
    }
}

/// A straight run along one edge, offsets measured from the edge origin.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Piece {
    pub edge: usize,
    pub from: Rational,
    pub to: Rational,
}

impl Piece {
    pub fn full(g: &MarkedMetricGraph, d: Dart) -> Piece {
        let len = g.edge(d.edge()).length.clone();
        if d.is_reversed() {
            Piece { edge: d.edge(), from: len, to: Rational::zero() }
        } else {
            Piece { edge: d.edge(), from: Rational::zero(), to: len }
        }
    }

    pub fn length(&self) -> Rational {
        if self.to > self.from {
            &self.to - &self.from
        } else {
            &self.from - &self.to
        }
    }

    pub fn direction(&self) -> Dart {
        Dart::new(self.edge, self.to < self.from)
    }

    pub fn reversed(&self) -> Piece {
        Piece { edge: self.edge, from: self.to.clone(), to: self.from.clone() }
    }

    pub fn start(&self, g: &MarkedMetricGraph) -> Point {
        Point::on_edge(g, self.edge, self.from.clone())
    }

    pub fn end(&self, g: &MarkedMetricGraph) -> Point {
        Point::on_edge(g, self.edge, self.to.clone())
    }

    pub fn is_full(&self, g: &MarkedMetricGraph) -> bool {
        self.length() == g.edge(self.edge).length
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BPath {
    pub start: Point,
    pub pieces: Vec<Piece>,
}

impl BPath {
    pub fn constant(p: Point) -> BPath {
        BPath { start: p, pieces: Vec::new() }
    }

    pub fn from_darts(g: &MarkedMetricGraph, start: usize, darts: &[Dart]) -> BPath {
        BPath { start: Point::Vertex(start), pieces: darts.iter().map(|&d| Piece::full(g, d)).collect() }
    }

    /// The segment of length `t` leaving `p` in direction `dir`; `t` must not pass a vertex.
    pub fn segment(g: &MarkedMetricGraph, p: &Point, dir: Dart, t: &Rational) -> BPath {
        let e = dir.edge();
        let from = match p {
            Point::Vertex(v) => {
                debug_assert_eq!(g.origin(dir), *v);
                if dir.is_reversed() {
                    g.edge(e).length.clone()
                } else {
                    Rational::zero()
                }
            }
            Point::Interior { edge, offset } => {
                debug_assert_eq!(*edge, e);
                offset.clone()
            }
        };
        let to = if dir.is_reversed() { &from - t } else { &from + t };
        BPath { start: p.clone(), pieces: vec![Piece { edge: e, from, to }] }
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn end(&self, g: &MarkedMetricGraph) -> Point {
        self.pieces.last().map(|p| p.end(g)).unwrap_or_else(|| self.start.clone())
    }

    pub fn length(&self) -> Rational {
        self.pieces.iter().map(Piece::length).sum()
    }

    pub fn first_direction(&self) -> Option<Dart> {
        self.pieces.first().map(Piece::direction)
    }

    pub fn reversed(&self, g: &MarkedMetricGraph) -> BPath {
        BPath { start: self.end(g), pieces: self.pieces.iter().rev().map(Piece::reversed).collect() }
    }

    /// Concatenates and tightens; `other` must start where `self` ends.
    pub fn then(&self, g: &MarkedMetricGraph, other: &BPath) -> BPath {
        debug_assert_eq!(self.end(g), other.start);
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().cloned());
        BPath { start: self.start.clone(), pieces: tighten_pieces(pieces) }
    }

    pub fn tightened(&self) -> BPath {
        BPath { start: self.start.clone(), pieces: tighten_pieces(self.pieces.clone()) }
    }

    /// Label readout when every piece is a full edge.
    pub fn word(&self, g: &MarkedMetricGraph) -> Option<Word> {
        let mut w = Word::identity(g.rank());
        for p in &self.pieces {
            if !p.is_full(g) {
                return None;
            }
            w = w.mul(&g.dart_label(p.direction()));
        }
        Some(w)
    }

    /// Edge-occurrence darts when every piece is a full edge.
    pub fn darts(&self, g: &MarkedMetricGraph) -> Option<Vec<Dart>> {
        self.pieces.iter().map(|p| p.is_full(g).then(|| p.direction())).collect()
    }

    /// Length of the longest common initial segment of two paths with the same start.
    pub fn common_prefix_length(&self, other: &BPath) -> Rational {
        let mut total = Rational::zero();
        for (p, q) in self.pieces.iter().zip(&other.pieces) {
            if p == q {
                total += p.length();
                continue;
            }
            if p.edge == q.edge && p.from == q.from && p.direction() == q.direction() {
                total += p.length().min(q.length());
            }
            break;
        }
        total
    }
}

/// Free reduction of a connected piece sequence.
pub fn tighten_pieces(pieces: Vec<Piece>) -> Vec<Piece> {
    let mut out: Vec<Piece> = Vec::with_capacity(pieces.len());
    for p in pieces {
        if p.from == p.to {
            continue;
        }
        match out.last_mut() {
            Some(q) if q.edge == p.edge && q.to == p.from => {
                if q.from == p.to {
                    out.pop();
                } else {
                    q.to = p.to;
                }
            }
            _ => out.push(p),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::test_graphs::*;
    use crate::rational::{int, q};

    #[test]
    fn partial_cancellation() {
        let g = unit_rose();
        let a = BPath::from_darts(&g, 0, &[Dart::forward(0), Dart::forward(1)]);
        let back = BPath {
            start: Point::Vertex(0),
            pieces: vec![Piece { edge: 1, from: int(1), to: q(1, 4) }],
        };
        let t = a.then(&g, &back);
        assert_eq!(t.pieces.len(), 2);
        assert_eq!(t.length(), q(5, 4));
        assert_eq!(t.end(&g), Point::Interior { edge: 1, offset: q(1, 4) });
        let r = t.reversed(&g);
        assert!(t.then(&g, &r).is_empty());
    }

    #[test]
    fn loops_at_a_vertex_do_not_cancel_around() {
        let g = unit_rose();
        let twice = BPath::from_darts(&g, 0, &[Dart::forward(0), Dart::forward(0)]);
        assert_eq!(twice.tightened().pieces.len(), 2);
        let there_and_back = BPath::from_darts(&g, 0, &[Dart::forward(0), Dart::new(0, true)]);
        assert!(there_and_back.tightened().is_empty());
    }

    #[test]
    fn segments_and_prefixes() {
        let g = theta(int(1), int(2), int(3));
        let s = BPath::segment(&g, &Point::Vertex(1), Dart::new(2, true), &q(1, 2));
        assert_eq!(s.end(&g), Point::Interior { edge: 2, offset: q(5, 2) });
        let full = BPath::from_darts(&g, 1, &[Dart::new(2, true)]);
        assert_eq!(s.common_prefix_length(&full), q(1, 2));
        assert_eq!(full.common_prefix_length(&full), int(3));
        assert_eq!(full.word(&g), Some(g.dart_label(Dart::new(2, true))));
        assert_eq!(s.word(&g), None);
    }
}
