//! Marked metric graphs: points of unprojectivised Outer Space.
//!
//! A graph stores its marking in both directions. `marking[i]` is a tight
//! loop at the basepoint, the image of the i-th rose petal. Every edge also
//! carries a label word, the readout of the homotopy inverse. Reading labels
//! along `marking[i]` must reduce to exactly the generator `a_i`.

mod marking;
mod surgery;

pub use marking::derive_inverse_marking;
pub use surgery::FoldOutcome;

use std::collections::VecDeque;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::freegroup::{AutomorphismPair, FreeGroupError, Word};
use crate::rational::Rational;

/// An oriented edge: `2 * edge` is the stored orientation, `2 * edge + 1` its reverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dart(usize);

impl Dart {
    pub fn new(edge: usize, reversed: bool) -> Self {
        Dart(2 * edge + reversed as usize)
    }

    pub fn forward(edge: usize) -> Self {
        Dart(2 * edge)
    }

    pub fn edge(self) -> usize {
        self.0 / 2
    }

    pub fn is_reversed(self) -> bool {
        self.0 % 2 == 1
    }

    pub fn reverse(self) -> Self {
        Dart(self.0 ^ 1)
    }

    pub fn raw(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub origin: usize,
    pub terminus: usize,
    pub length: Rational,
    /// Readout of the inverse marking along the stored orientation.
    pub label: Word,
}

/// A sequence of incident darts starting at `start`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgePath {
    pub start: usize,
    pub darts: Vec<Dart>,
}

impl EdgePath {
    pub fn empty(at: usize) -> Self {
        EdgePath { start: at, darts: Vec::new() }
    }

    pub fn new(start: usize, darts: Vec<Dart>) -> Self {
        EdgePath { start, darts }
    }

    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TightenMode {
    Path,
    Loop,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("vertex {0} is not reachable from the basepoint")]
    Disconnected(String),
    #[error("first Betti number is {found}, rank is {expected}")]
    BettiMismatch { expected: usize, found: usize },
    #[error("edge {0} has non-positive length")]
    NonPositiveLength(String),
    #[error("edge {edge} refers to a missing vertex")]
    BadEndpoint { edge: String },
    #[error("vertex {0} has valence below two")]
    LowValence(String),
    #[error("marking has {found} petals, rank is {expected}")]
    MarkingSize { expected: usize, found: usize },
    #[error("marking path for generator {0} is not a loop at the basepoint")]
    MarkingNotLoop(usize),
    #[error("marking path for generator {generator} reads out `{readout}` instead of the generator")]
    MarkingInconsistent { generator: usize, readout: String },
    #[error("label of edge {0} has the wrong rank")]
    LabelRank(String),
    #[error("path steps {0} and {1} are not incident")]
    NotIncident(usize, usize),
    #[error("path does not close up into a loop")]
    NotALoop,
    #[error("loop is not cyclically reduced")]
    NotCyclicallyReduced,
    #[error("graphs do not lie in the same simplex: {0}")]
    SimplexMismatch(&'static str),
    #[error("interpolation parameter outside [0, 1]")]
    ParameterOutOfRange,
    #[error("forward marking does not induce an isomorphism on fundamental groups: {0}")]
    NotIsomorphism(&'static str),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error(transparent)]
    Group(#[from] FreeGroupError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedMetricGraph {
    rank: usize,
    vertex_names: Vec<String>,
    edges: Vec<Edge>,
    basepoint: usize,
    marking: Vec<EdgePath>,
}

impl MarkedMetricGraph {
    /// Assembles a graph without checking invariants; see [`Self::validate`].
    pub fn from_parts(
        rank: usize,
        vertex_names: Vec<String>,
        edges: Vec<Edge>,
        basepoint: usize,
        marking: Vec<EdgePath>,
    ) -> Self {
        MarkedMetricGraph { rank, vertex_names, edges, basepoint, marking }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertex_names[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn marking(&self) -> &[EdgePath] {
        &self.marking
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<usize> {
        self.vertex_names.iter().position(|n| n == name)
    }

    pub fn edge_by_name(&self, name: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.name == name)
    }

    pub fn origin(&self, d: Dart) -> usize {
        let e = &self.edges[d.edge()];
        if d.is_reversed() {
            e.terminus
        } else {
            e.origin
        }
    }

    pub fn terminus(&self, d: Dart) -> usize {
        self.origin(d.reverse())
    }

    pub fn dart_length(&self, d: Dart) -> &Rational {
        &self.edges[d.edge()].length
    }

    pub fn dart_label(&self, d: Dart) -> Word {
        let l = &self.edges[d.edge()].label;
        if d.is_reversed() {
            l.inverse()
        } else {
            l.clone()
        }
    }

    pub fn dart_name(&self, d: Dart) -> String {
        let n = &self.edges[d.edge()].name;
        if d.is_reversed() {
            format!("-{n}")
        } else {
            n.clone()
        }
    }

    /// Darts leaving `v`; a loop at `v` contributes both orientations.
    pub fn darts_from(&self, v: usize) -> Vec<Dart> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.origin == v {
                out.push(Dart::new(i, false));
            }
            if e.terminus == v {
                out.push(Dart::new(i, true));
            }
        }
        out
    }

    pub fn valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.origin == v) as usize + (e.terminus == v) as usize)
            .sum()
    }

    pub fn all_darts(&self) -> impl Iterator<Item = Dart> {
        (0..2 * self.edges.len()).map(Dart)
    }

    pub fn fmt_path(&self, p: &EdgePath) -> String {
        p.darts.iter().map(|&d| self.dart_name(d)).collect::<Vec<_>>().join(" ")
    }

    /// Compact edge-name rendering without separators, e.g. `AC` or `A-B`.
    pub fn fmt_loop_compact(&self, darts: &[Dart]) -> String {
        darts.iter().map(|&d| self.dart_name(d)).collect::<Vec<_>>().concat()
    }

    // ---------------------------------------------------------------- validation

    pub fn validate(&self) -> Result<(), GraphError> {
        let nv = self.num_vertices();
        if nv == 0 {
            return Err(GraphError::Empty);
        }
        if self.basepoint >= nv {
            return Err(GraphError::UnknownName(format!("basepoint #{}", self.basepoint)));
        }
        for e in &self.edges {
            if e.origin >= nv || e.terminus >= nv {
                return Err(GraphError::BadEndpoint { edge: e.name.clone() });
            }
            if e.length <= Rational::zero() {
                return Err(GraphError::NonPositiveLength(e.name.clone()));
            }
            if e.label.rank() != self.rank {
                return Err(GraphError::LabelRank(e.name.clone()));
            }
        }
        let reach = self.reachable_from(self.basepoint);
        if let Some(v) = reach.iter().position(|r| !r) {
            return Err(GraphError::Disconnected(self.vertex_names[v].clone()));
        }
        let betti = self.edges.len() + 1 - nv;
        if self.edges.len() + 1 < nv || betti != self.rank {
            return Err(GraphError::BettiMismatch {
                expected: self.rank,
                found: (self.edges.len() + 1).saturating_sub(nv),
            });
        }
        for v in 0..nv {
            if self.valence(v) < 2 {
                return Err(GraphError::LowValence(self.vertex_names[v].clone()));
            }
        }
        if self.marking.len() != self.rank {
            return Err(GraphError::MarkingSize { expected: self.rank, found: self.marking.len() });
        }
        for (i, m) in self.marking.iter().enumerate() {
            if m.start != self.basepoint {
                return Err(GraphError::MarkingNotLoop(i + 1));
            }
            self.check_incidence(m)?;
            if self.path_end(m) != self.basepoint {
                return Err(GraphError::MarkingNotLoop(i + 1));
            }
            let readout = self.word_of_path(m);
            if readout != Word::generator(self.rank, i + 1) {
                return Err(GraphError::MarkingInconsistent {
                    generator: i + 1,
                    readout: readout.to_string(),
                });
            }
        }
        Ok(())
    }

    fn reachable_from(&self, v: usize) -> Vec<bool> {
        let mut seen = vec![false; self.num_vertices()];
        let mut queue = VecDeque::from([v]);
        seen[v] = true;
        while let Some(x) = queue.pop_front() {
            for d in self.darts_from(x) {
                let y = self.terminus(d);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// Shortest-hop path from `from` to `to` (BFS over darts).
    pub fn hop_path(&self, from: usize, to: usize) -> Option<EdgePath> {
        let mut prev: Vec<Option<Dart>> = vec![None; self.num_vertices()];
        let mut seen = vec![false; self.num_vertices()];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            if x == to {
                break;
            }
            for d in self.darts_from(x) {
                let y = self.terminus(d);
                if !seen[y] {
                    seen[y] = true;
                    prev[y] = Some(d);
                    queue.push_back(y);
                }
            }
        }
        if !seen[to] {
            return None;
        }
        let mut darts = Vec::new();
        let mut cur = to;
        while cur != from {
            let d = prev[cur].expect("bfs tree");
            darts.push(d);
            cur = self.origin(d);
        }
        darts.reverse();
        Some(EdgePath::new(from, darts))
    }

    pub fn check_incidence(&self, p: &EdgePath) -> Result<(), GraphError> {
        let mut at = p.start;
        for (k, &d) in p.darts.iter().enumerate() {
            if d.edge() >= self.edges.len() || self.origin(d) != at {
                return Err(GraphError::NotIncident(k.saturating_sub(1), k));
            }
            at = self.terminus(d);
        }
        Ok(())
    }

    pub fn path_end(&self, p: &EdgePath) -> usize {
        p.darts.last().map(|&d| self.terminus(d)).unwrap_or(p.start)
    }

    // ---------------------------------------------------------------- tightening

    pub fn tighten(&self, p: &EdgePath, mode: TightenMode) -> Result<EdgePath, GraphError> {
        self.check_incidence(p)?;
        let end = self.path_end(p);
        match mode {
            TightenMode::Path => Ok(EdgePath::new(p.start, tighten_darts(&p.darts))),
            TightenMode::Loop => {
                if end != p.start {
                    return Err(GraphError::NotALoop);
                }
                let darts = cyclically_tighten_darts(&p.darts);
                let start = darts.first().map(|&d| self.origin(d)).unwrap_or(p.start);
                Ok(EdgePath::new(start, darts))
            }
        }
    }

    pub fn is_cyclically_reduced(&self, darts: &[Dart]) -> bool {
        let n = darts.len();
        if n == 0 {
            return false;
        }
        (0..n).all(|i| darts[(i + 1) % n] != darts[i].reverse())
    }

    /// Concatenation of marking petals spelled by `w` (not tightened).
    pub fn word_image(&self, w: &Word) -> EdgePath {
        let mut darts = Vec::new();
        for l in w.letters() {
            let petal = &self.marking[l.index() - 1];
            if l.is_inverse() {
                darts.extend(petal.darts.iter().rev().map(|d| d.reverse()));
            } else {
                darts.extend_from_slice(&petal.darts);
            }
        }
        EdgePath::new(self.basepoint, darts)
    }

    /// The cyclically tight loop representing the conjugacy class of `w`.
    pub fn loop_of_word(&self, w: &Word) -> Result<EdgePath, GraphError> {
        if w.rank() != self.rank {
            return Err(FreeGroupError::RankMismatch { expected: self.rank, found: w.rank() }.into());
        }
        let img = self.word_image(w);
        let darts = cyclically_tighten_darts(&img.darts);
        let start = darts.first().map(|&d| self.origin(d)).unwrap_or(self.basepoint);
        Ok(EdgePath::new(start, darts))
    }

    pub fn translation_length(&self, w: &Word) -> Result<Rational, GraphError> {
        let l = self.loop_of_word(w)?;
        Ok(self.sum_lengths(&l.darts))
    }

    pub fn sum_lengths(&self, darts: &[Dart]) -> Rational {
        let counts = self.counting_vector(darts);
        self.inner_product(&counts)
    }

    /// Unoriented occurrence counts per edge.
    pub fn counting_vector(&self, darts: &[Dart]) -> Vec<u64> {
        let mut counts = vec![0u64; self.edges.len()];
        for d in darts {
            counts[d.edge()] += 1;
        }
        counts
    }

    pub fn inner_product(&self, counts: &[u64]) -> Rational {
        let mut total = Rational::zero();
        for (e, &c) in counts.iter().enumerate() {
            if c > 0 {
                total += &self.edges[e].length * Rational::from_integer(c.into());
            }
        }
        total
    }

    pub fn loop_length(&self, gamma: &EdgePath) -> Result<Rational, GraphError> {
        self.check_incidence(gamma)?;
        if self.path_end(gamma) != gamma.start {
            return Err(GraphError::NotALoop);
        }
        if !self.is_cyclically_reduced(&gamma.darts) {
            return Err(GraphError::NotCyclicallyReduced);
        }
        let mut total = Rational::zero();
        for d in &gamma.darts {
            total += self.dart_length(*d);
        }
        Ok(total)
    }

    pub fn path_length(&self, darts: &[Dart]) -> Rational {
        let mut total = Rational::zero();
        for d in darts {
            total += self.dart_length(*d);
        }
        total
    }

    /// `⟨lengths, counting vector⟩` of a cyclically reduced loop.
    pub fn counting_inner_product(&self, gamma: &EdgePath) -> Result<Rational, GraphError> {
        self.check_incidence(gamma)?;
        if !self.is_cyclically_reduced(&gamma.darts) {
            return Err(GraphError::NotCyclicallyReduced);
        }
        Ok(self.inner_product(&self.counting_vector(&gamma.darts)))
    }

    pub fn word_of_path(&self, p: &EdgePath) -> Word {
        let mut w = Word::identity(self.rank);
        for &d in &p.darts {
            w = w.mul(&self.dart_label(d));
        }
        w
    }

    pub fn word_of_loop(&self, gamma: &EdgePath) -> Result<Word, GraphError> {
        self.check_incidence(gamma)?;
        if self.path_end(gamma) != gamma.start {
            return Err(GraphError::NotALoop);
        }
        Ok(self.word_of_path(gamma))
    }

    // ---------------------------------------------------------------- metric

    pub fn volume(&self) -> Rational {
        self.edges.iter().map(|e| e.length.clone()).sum()
    }

    pub fn scaled(&self, c: &Rational) -> MarkedMetricGraph {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.length = &e.length * c;
        }
        g
    }

    /// Returns the volume-one representative and the applied scale `1/vol`.
    pub fn normalize_volume(&self) -> (MarkedMetricGraph, Rational) {
        let scale = Rational::one() / self.volume();
        (self.scaled(&scale), scale)
    }

    pub fn normalized(&self) -> MarkedMetricGraph {
        self.normalize_volume().0
    }

    pub fn with_lengths(&self, lengths: &[Rational]) -> MarkedMetricGraph {
        assert_eq!(lengths.len(), self.edges.len());
        let mut g = self.clone();
        for (e, l) in g.edges.iter_mut().zip(lengths) {
            e.length = l.clone();
        }
        g
    }

    pub fn lengths(&self) -> Vec<Rational> {
        self.edges.iter().map(|e| e.length.clone()).collect()
    }

    /// Same topological type and marking, ignoring lengths.
    pub fn same_simplex(&self, other: &MarkedMetricGraph) -> Result<(), GraphError> {
        if self.rank != other.rank {
            return Err(GraphError::SimplexMismatch("rank"));
        }
        if self.num_vertices() != other.num_vertices() || self.edges.len() != other.edges.len() {
            return Err(GraphError::SimplexMismatch("size"));
        }
        for (a, b) in self.edges.iter().zip(&other.edges) {
            if a.origin != b.origin || a.terminus != b.terminus {
                return Err(GraphError::SimplexMismatch("incidence"));
            }
            if a.label != b.label {
                return Err(GraphError::SimplexMismatch("labels"));
            }
        }
        if self.basepoint != other.basepoint || self.marking != other.marking {
            return Err(GraphError::SimplexMismatch("marking"));
        }
        Ok(())
    }

    pub fn interpolate_in_simplex(
        &self,
        other: &MarkedMetricGraph,
        t: &Rational,
    ) -> Result<MarkedMetricGraph, GraphError> {
        self.same_simplex(other)?;
        if *t < Rational::zero() || *t > Rational::one() {
            return Err(GraphError::ParameterOutOfRange);
        }
        let s = Rational::one() - t;
        let lengths: Vec<Rational> = self
            .edges
            .iter()
            .zip(&other.edges)
            .map(|(a, b)| &s * &a.length + t * &b.length)
            .collect();
        Ok(self.with_lengths(&lengths))
    }

    // ---------------------------------------------------------------- marking changes

    /// The point `(G, τ φ)`: lengths of `w` become lengths of `φ(w)`.
    pub fn apply_automorphism(&self, phi: &AutomorphismPair) -> Result<MarkedMetricGraph, GraphError> {
        if phi.rank() != self.rank {
            return Err(FreeGroupError::RankMismatch { expected: self.rank, found: phi.rank() }.into());
        }
        phi.validate()?;
        let mut g = self.clone();
        g.marking = phi
            .forward
            .iter()
            .map(|w| {
                let img = self.word_image(w);
                EdgePath::new(self.basepoint, tighten_darts(&img.darts))
            })
            .collect();
        for e in &mut g.edges {
            e.label = phi.apply_inverse(&e.label);
        }
        debug_assert!(g.validate().is_ok());
        Ok(g)
    }

    /// Suppresses valence-two vertices, moving the basepoint if needed.
    pub fn canonicalize(&self) -> MarkedMetricGraph {
        let mut g = self.clone();
        if g.rank < 2 {
            return g;
        }
        if g.valence(g.basepoint) == 2 {
            if let Some(target) = (0..g.num_vertices()).find(|&v| g.valence(v) >= 3) {
                let path = g.hop_path(target, g.basepoint).expect("connected");
                g.rebase(&path);
            }
        }
        while let Some(v) = (0..g.num_vertices())
            .find(|&v| v != g.basepoint && g.valence(v) == 2 && g.darts_from(v).iter().all(|d| g.terminus(*d) != v))
        {
            g.smooth_vertex(v);
        }
        g
    }
}

/// Free reduction of a dart sequence.
pub fn tighten_darts(darts: &[Dart]) -> Vec<Dart> {
    let mut out: Vec<Dart> = Vec::with_capacity(darts.len());
    for &d in darts {
        if out.last() == Some(&d.reverse()) {
            out.pop();
        } else {
            out.push(d);
        }
    }
    out
}

/// Free then cyclic reduction of a closed dart sequence.
pub fn cyclically_tighten_darts(darts: &[Dart]) -> Vec<Dart> {
    let t = tighten_darts(darts);
    let n = t.len();
    let mut i = 0;
    while 2 * i + 1 < n && t[i] == t[n - 1 - i].reverse() {
        i += 1;
    }
    t[i..n - i].to_vec()
}

/// Lexicographically least rotation over both orientations.
pub fn canonical_cyclic(darts: &[Dart]) -> Vec<Dart> {
    let n = darts.len();
    if n == 0 {
        return Vec::new();
    }
    let rev: Vec<Dart> = darts.iter().rev().map(|d| d.reverse()).collect();
    let mut best: Option<Vec<Dart>> = None;
    for seq in [darts, &rev[..]] {
        for k in 0..n {
            let rot: Vec<Dart> = seq[k..].iter().chain(&seq[..k]).copied().collect();
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap()
}

/// Convenience constructor keyed by names.
#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    rank: usize,
    vertices: Vec<String>,
    edges: Vec<(String, String, String, Rational, Option<Word>)>,
    basepoint: Option<String>,
    marking: Vec<Vec<(String, bool)>>,
}

impl GraphBuilder {
    pub fn new(rank: usize) -> Self {
        GraphBuilder { rank, ..Default::default() }
    }

    pub fn vertex(mut self, name: &str) -> Self {
        self.vertices.push(name.to_string());
        self
    }

    pub fn edge(mut self, name: &str, from: &str, to: &str, length: Rational, label: Option<Word>) -> Self {
        self.edges.push((name.into(), from.into(), to.into(), length, label));
        self
    }

    pub fn basepoint(mut self, name: &str) -> Self {
        self.basepoint = Some(name.to_string());
        self
    }

    /// Petal path as space-separated edge names, `-X` for a reversed edge.
    pub fn petal(mut self, spec: &str) -> Self {
        let steps = spec
            .split_whitespace()
            .map(|t| match t.strip_prefix('-') {
                Some(n) => (n.to_string(), true),
                None => (t.to_string(), false),
            })
            .collect();
        self.marking.push(steps);
        self
    }

    pub fn petal_steps(mut self, steps: Vec<(String, bool)>) -> Self {
        self.marking.push(steps);
        self
    }

    /// Builds and validates. Missing labels are derived from the forward marking.
    pub fn build(self) -> Result<MarkedMetricGraph, GraphError> {
        let vid = |n: &str| -> Result<usize, GraphError> {
            self.vertices.iter().position(|v| v == n).ok_or_else(|| GraphError::UnknownName(n.to_string()))
        };
        let mut edges = Vec::new();
        let mut all_labels = true;
        for (name, from, to, len, label) in &self.edges {
            all_labels &= label.is_some();
            edges.push(Edge {
                name: name.clone(),
                origin: vid(from)?,
                terminus: vid(to)?,
                length: len.clone(),
                label: label.clone().unwrap_or_else(|| Word::identity(self.rank)),
            });
        }
        let base = match &self.basepoint {
            Some(b) => vid(b)?,
            None => 0,
        };
        let mut marking = Vec::new();
        for steps in &self.marking {
            let mut darts = Vec::new();
            for (n, rev) in steps {
                let e = edges
                    .iter()
                    .position(|e| &e.name == n)
                    .ok_or_else(|| GraphError::UnknownName(n.clone()))?;
                darts.push(Dart::new(e, *rev));
            }
            marking.push(EdgePath::new(base, darts));
        }
        let mut g = MarkedMetricGraph::from_parts(self.rank, self.vertices.clone(), edges, base, marking);
        for m in &g.marking {
            g.check_incidence(m)?;
        }
        g.marking = g.marking.iter().map(|m| EdgePath::new(base, tighten_darts(&m.darts))).collect();
        if !all_labels {
            let labels = derive_inverse_marking(&g)?;
            for (e, l) in g.edges.iter_mut().zip(labels) {
                e.label = l;
            }
        }
        g.validate()?;
        Ok(g)
    }
}

/// Shared small fixtures for unit tests across modules.
#[cfg(test)]
pub(crate) mod test_graphs {
    use super::*;
    use crate::cli::syntax::parse_word;
    use crate::rational::int;

    pub fn w(s: &str) -> Word {
        parse_word(s, 2).unwrap()
    }

    pub fn rose(la: Rational, lb: Rational) -> MarkedMetricGraph {
        GraphBuilder::new(2)
            .vertex("v")
            .edge("a", "v", "v", la, Some(w("a")))
            .edge("b", "v", "v", lb, Some(w("b")))
            .basepoint("v")
            .petal("a")
            .petal("b")
            .build()
            .unwrap()
    }

    pub fn unit_rose() -> MarkedMetricGraph {
        rose(int(1), int(1))
    }

    /// Theta graph with the marking `a = A -B`, `b = C -B`.
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
            .unwrap()
    }

    /// Two circles joined by a separating edge `c`.
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
            .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::test_graphs::*;
    use super::*;
    use crate::rational::{int, q};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn rose_validates_and_bad_labels_rejected() {
        let g = unit_rose();
        assert!(g.validate().is_ok());
        let mut bad = g.clone();
        bad.edges[1].label = w("a");
        assert!(matches!(
            bad.validate(),
            Err(GraphError::MarkingInconsistent { generator: 2, .. })
        ));
    }

    #[test]
    fn validation_catches_structural_faults() {
        let mut g = unit_rose();
        g.edges[0].length = int(0);
        assert_eq!(g.validate(), Err(GraphError::NonPositiveLength("a".into())));
        let mut g = unit_rose();
        g.rank = 3;
        assert!(matches!(g.validate(), Err(GraphError::LabelRank(_))));
        let mut g = theta(int(1), int(1), int(1));
        g.marking[0].darts.pop();
        assert_eq!(g.validate(), Err(GraphError::MarkingNotLoop(1)));
    }

    #[test]
    fn tighten_examples() {
        let g = theta(int(1), int(1), int(1));
        let e = Dart::forward(0);
        let f = Dart::forward(1);
        let p = EdgePath::new(0, vec![e, e.reverse(), f]);
        assert_eq!(g.tighten(&p, TightenMode::Path).unwrap().darts, vec![f]);
        let l = EdgePath::new(0, vec![e, f.reverse(), f, e.reverse()]);
        assert!(g.tighten(&l, TightenMode::Loop).unwrap().is_empty());
        let broken = EdgePath::new(0, vec![e, e]);
        assert!(matches!(g.tighten(&broken, TightenMode::Path), Err(GraphError::NotIncident(0, 1))));
    }

    #[test]
    fn translation_lengths_on_theta() {
        let x = theta(q(1, 6), q(1, 3), q(1, 2));
        assert_eq!(x.translation_length(&w("a")).unwrap(), q(1, 2));
        assert_eq!(x.translation_length(&w("aB")).unwrap(), q(2, 3));
        assert_eq!(x.translation_length(&w("b")).unwrap(), q(5, 6));
        assert_eq!(x.translation_length(&Word::identity(2)).unwrap(), int(0));
        assert_eq!(x.volume(), int(1));
        assert!(x.translation_length(&Word::identity(3)).is_err());
    }

    #[test]
    fn loop_and_counting_lengths() {
        let x = theta(q(1, 6), q(1, 3), q(1, 2));
        let ac = EdgePath::new(0, vec![Dart::forward(0), Dart::new(2, true)]);
        assert_eq!(x.loop_length(&ac).unwrap(), q(2, 3));
        assert_eq!(x.counting_inner_product(&ac).unwrap(), q(2, 3));
        assert_eq!(x.counting_vector(&ac.darts), vec![1, 0, 1]);
        let r = unit_rose();
        assert_eq!(r.loop_length(&EdgePath::new(0, vec![Dart::forward(0)])).unwrap(), int(1));
        let bad = EdgePath::new(0, vec![Dart::forward(0), Dart::new(0, true)]);
        assert_eq!(r.loop_length(&bad), Err(GraphError::NotCyclicallyReduced));
    }

    #[test]
    fn word_of_loop_examples() {
        let r = unit_rose();
        assert_eq!(r.word_of_loop(&EdgePath::new(0, vec![Dart::forward(0)])).unwrap(), w("a"));
        let x = theta(q(1, 6), q(1, 3), q(1, 2));
        let ab = EdgePath::new(0, vec![Dart::forward(0), Dart::new(1, true)]);
        assert_eq!(x.word_of_loop(&ab).unwrap(), w("a"));
        assert_eq!(x.word_of_loop(&EdgePath::new(0, vec![Dart::forward(0)])), Err(GraphError::NotALoop));
    }

    #[test]
    fn volume_normalization() {
        for k in 1..5 {
            let r = rose(int(k + 1), int(k + 1));
            let (n, s) = r.normalize_volume();
            assert_eq!(s, q(1, 2 * k + 2));
            assert_eq!(n.volume(), int(1));
            assert_eq!(n.normalized(), n);
        }
    }

    #[test]
    fn simplex_interpolation() {
        let a = barbell(int(1), int(1), int(1));
        let b = barbell(int(2), int(1), q(1, 2));
        assert_eq!(a.interpolate_in_simplex(&b, &int(0)).unwrap(), a);
        assert_eq!(a.interpolate_in_simplex(&b, &int(1)).unwrap(), b);
        let mid = a.interpolate_in_simplex(&b, &q(1, 2)).unwrap();
        assert_eq!(mid.lengths(), vec![q(3, 2), int(1), q(3, 4)]);
        assert!(matches!(
            a.interpolate_in_simplex(&unit_rose(), &q(1, 2)),
            Err(GraphError::SimplexMismatch(_))
        ));
        assert_eq!(a.interpolate_in_simplex(&b, &int(2)), Err(GraphError::ParameterOutOfRange));
    }

    #[test]
    fn automorphism_changes_marking() {
        let r = unit_rose();
        let phi = AutomorphismPair::new(vec![w("a"), w("ba")], vec![w("a"), w("bA")]);
        let g = r.apply_automorphism(&phi).unwrap();
        assert_eq!(g.fmt_path(&g.marking()[1]), "b a");
        assert!(g.validate().is_ok());
        assert_eq!(r.apply_automorphism(&AutomorphismPair::identity(2)).unwrap(), r);
        let bad = AutomorphismPair::new(vec![w("a"), w("ba")], vec![w("a"), w("ba")]);
        assert!(r.apply_automorphism(&bad).is_err());
    }

    #[test]
    fn derived_labels_on_theta() {
        let x = theta(q(1, 6), q(1, 3), q(1, 2));
        assert!(x.validate().is_ok());
        // B closes the spanning tree; it needs no label.
        let labels = derive_inverse_marking(&x).unwrap();
        assert_eq!(labels.iter().filter(|l| l.is_identity()).count(), 1);
    }

    #[test]
    fn canonicalize_subdivided_rose() {
        let g = GraphBuilder::new(2)
            .vertex("v")
            .vertex("m")
            .edge("a1", "v", "m", q(1, 3), None)
            .edge("a2", "m", "v", q(2, 3), None)
            .edge("b", "v", "v", int(1), None)
            .basepoint("v")
            .petal("a1 a2")
            .petal("b")
            .build()
            .unwrap();
        let c = g.canonicalize();
        assert_eq!(c.num_vertices(), 1);
        assert_eq!(c.num_edges(), 2);
        assert!(c.validate().is_ok());
        assert_eq!(c.canonicalize(), c);
        assert_eq!(c.translation_length(&w("aB")).unwrap(), int(2));
        // basepoint on the bivalent vertex
        let g2 = GraphBuilder::new(2)
            .vertex("m")
            .vertex("v")
            .edge("a1", "v", "m", q(1, 3), None)
            .edge("a2", "m", "v", q(2, 3), None)
            .edge("b", "v", "v", int(1), None)
            .basepoint("m")
            .petal("a2 a1")
            .petal("a2 b -a2")
            .build()
            .unwrap();
        let c2 = g2.canonicalize();
        assert_eq!(c2.num_vertices(), 1);
        assert!(c2.validate().is_ok());
        for s in ["a", "b", "ab", "aB", "aab"] {
            assert_eq!(c2.translation_length(&w(s)).unwrap(), g2.translation_length(&w(s)).unwrap());
        }
    }

    fn random_word(rng: &mut impl Rng, rank: usize, len: usize) -> Word {
        let raw: Vec<i32> = (0..len)
            .map(|_| {
                let i = rng.gen_range(1..=rank as i32);
                if rng.gen_bool(0.5) {
                    i
                } else {
                    -i
                }
            })
            .collect();
        crate::freegroup::free_reduce(&raw, rank).unwrap()
    }

    #[test]
    fn automorphism_length_identity_and_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let base = theta(q(1, 6), q(1, 3), q(1, 2));
        for _ in 0..10 {
            let phi = AutomorphismPair::random(2, 6, &mut rng);
            let g = base.apply_automorphism(&phi).unwrap();
            let back = g.apply_automorphism(&phi.inverted()).unwrap();
            for _ in 0..50 {
                let x = random_word(&mut rng, 2, 12);
                assert_eq!(g.translation_length(&x).unwrap(), base.translation_length(&phi.apply(&x)).unwrap());
                assert_eq!(back.translation_length(&x).unwrap(), base.translation_length(&x).unwrap());
            }
            // derived labels agree with the transported ones up to conjugacy
            let derived = derive_inverse_marking(&g).unwrap();
            let mut g2 = g.clone();
            for (e, l) in g2.edges.iter_mut().zip(derived) {
                e.label = l;
            }
            assert!(g2.validate().is_ok());
            for _ in 0..20 {
                let x = random_word(&mut rng, 2, 10);
                let lp = g.loop_of_word(&x).unwrap();
                if lp.is_empty() {
                    continue;
                }
                let w1 = g.word_of_loop(&lp).unwrap();
                let w2 = g2.word_of_loop(&lp).unwrap();
                assert!(w1.is_conjugate_to(&w2));
            }
        }
    }

    #[test]
    fn canonicalize_preserves_lengths_on_subdivisions() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let base = barbell(int(1), q(1, 2), int(2));
        for _ in 0..5 {
            let phi = AutomorphismPair::random(2, 4, &mut rng);
            let g = base.apply_automorphism(&phi).unwrap();
            let mut sub = g.clone();
            for e in 0..g.num_edges() {
                let len = sub.edge(e).length.clone();
                sub.subdivide(e, &(len / int(3)));
            }
            assert!(sub.validate().is_ok());
            let c = sub.canonicalize();
            assert!(c.validate().is_ok());
            assert_eq!(c.num_edges(), 3);
            for _ in 0..50 {
                let x = random_word(&mut rng, 2, 10);
                assert_eq!(c.translation_length(&x).unwrap(), g.translation_length(&x).unwrap());
            }
        }
    }

    fn random_based_loop(g: &MarkedMetricGraph, rng: &mut impl Rng, steps: usize) -> Vec<Dart> {
        let mut at = g.basepoint();
        let mut darts: Vec<Dart> = Vec::new();
        for _ in 0..steps {
            let options: Vec<Dart> = g
                .darts_from(at)
                .into_iter()
                .filter(|d| darts.last().is_none_or(|l| *d != l.reverse()))
                .collect();
            let d = options[rng.gen_range(0..options.len())];
            darts.push(d);
            at = g.terminus(d);
        }
        let back = g.hop_path(at, g.basepoint()).unwrap();
        darts.extend(back.darts);
        tighten_darts(&darts)
    }

    fn random_loop(g: &MarkedMetricGraph, rng: &mut impl Rng, steps: usize) -> Vec<Dart> {
        cyclically_tighten_darts(&random_based_loop(g, rng, steps))
    }

    proptest! {
        #[test]
        fn backtrack_insertion_is_removed(seed in 0u64..500, k in 1usize..6) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let g = theta(q(1, 6), q(1, 3), q(1, 2));
            let path = random_based_loop(&g, &mut rng, 8);
            let mut noisy = path.clone();
            for _ in 0..k {
                let pos = rng.gen_range(0..=noisy.len());
                let at = if pos == 0 { g.basepoint() } else { g.terminus(noisy[pos - 1]) };
                let ds = g.darts_from(at);
                let d = ds[rng.gen_range(0..ds.len())];
                noisy.insert(pos, d.reverse());
                noisy.insert(pos, d);
            }
            let p = EdgePath::new(g.basepoint(), noisy);
            prop_assert_eq!(g.tighten(&p, TightenMode::Path).unwrap().darts, path);
        }

        #[test]
        fn loop_routes_agree(seed in 0u64..500) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let phi = AutomorphismPair::random(2, 3, &mut rng);
            let g = barbell(q(1, 3), q(1, 5), q(7, 4)).apply_automorphism(&phi).unwrap();
            let darts = random_loop(&g, &mut rng, 9);
            prop_assume!(!darts.is_empty());
            let gamma = EdgePath::new(g.origin(darts[0]), darts);
            let len = g.loop_length(&gamma).unwrap();
            prop_assert_eq!(&g.counting_inner_product(&gamma).unwrap(), &len);
            let word = g.word_of_loop(&gamma).unwrap();
            prop_assert_eq!(g.translation_length(&word).unwrap(), len);
            // pushing the word back through the marking recovers the same free homotopy class
            let again = g.loop_of_word(&word).unwrap();
            prop_assert_eq!(canonical_cyclic(&again.darts), canonical_cyclic(&gamma.darts));
        }

        #[test]
        fn length_function_laws(seed in 0u64..300, k in 1u32..4) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let g = theta(q(1, 7), q(2, 7), q(4, 7));
            let x = random_word(&mut rng, 2, 8);
            let u = random_word(&mut rng, 2, 6);
            let lx = g.translation_length(&x).unwrap();
            prop_assert_eq!(g.translation_length(&x.conjugate_by(&u)).unwrap(), lx.clone());
            prop_assert_eq!(g.translation_length(&x.pow(k)).unwrap(), &lx * int(k as i64));
            let (n, s) = g.scaled(&q(5, 3)).normalize_volume();
            prop_assert_eq!(n.translation_length(&x).unwrap(), lx * q(5, 3) * s);
        }
    }
}
