//! Embedded circles, figure-eights and dumbbells of a graph.
//!
//! These loops depend only on the source graph, and the supremum of length
//! ratios over all conjugacy classes is attained among them.

use std::collections::BTreeSet;
use std::fmt;

use crate::graph::{canonical_cyclic, Dart, EdgePath, MarkedMetricGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Shape {
    O,
    FigureEight,
    Dumbbell,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::O => "O",
            Shape::FigureEight => "EIGHT",
            Shape::Dumbbell => "DUMBBELL",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateLoop {
    pub shape: Shape,
    /// Canonical rotation; starts at the origin of its first dart.
    pub path: EdgePath,
    /// The circles, followed by the connecting arc for a dumbbell.
    pub components: Vec<EdgePath>,
}

impl CandidateLoop {
    pub fn darts(&self) -> &[Dart] {
        &self.path.darts
    }

    fn key(&self) -> (Shape, &[Dart]) {
        (self.shape, &self.path.darts)
    }
}

/// Every embedded circle, each once up to rotation and inversion.
pub fn simple_cycles(g: &MarkedMetricGraph) -> Vec<Vec<Dart>> {
    let mut found: BTreeSet<Vec<Dart>> = BTreeSet::new();
    let nv = g.num_vertices();
    let out: Vec<Vec<Dart>> = (0..nv).map(|v| g.darts_from(v)).collect();
    for s in 0..nv {
        // cycles whose least vertex is s
        let mut on_path = vec![false; nv];
        let mut stack: Vec<Dart> = Vec::new();
        let mut used_edges = vec![false; g.num_edges()];
        cycle_dfs(g, &out, s, s, &mut on_path, &mut used_edges, &mut stack, &mut found);
    }
    found.into_iter().collect()
}

#[allow(clippy::too_many_arguments)]
fn cycle_dfs(
    g: &MarkedMetricGraph,
    out: &[Vec<Dart>],
    s: usize,
    at: usize,
    on_path: &mut [bool],
    used: &mut [bool],
    stack: &mut Vec<Dart>,
    found: &mut BTreeSet<Vec<Dart>>,
) {
    on_path[at] = true;
    for &d in &out[at] {
        if used[d.edge()] {
            continue;
        }
        let y = g.terminus(d);
        if y == s {
            stack.push(d);
            found.insert(canonical_cyclic(stack));
            stack.pop();
        } else if y > s && !on_path[y] {
            used[d.edge()] = true;
            stack.push(d);
            cycle_dfs(g, out, s, y, on_path, used, stack, found);
            stack.pop();
            used[d.edge()] = false;
        }
    }
    on_path[at] = false;
}

fn vertices_of(g: &MarkedMetricGraph, cyc: &[Dart]) -> BTreeSet<usize> {
    cyc.iter().map(|&d| g.origin(d)).collect()
}

/// Rotation of a cycle so that it starts at `v`.
fn rotate_to(g: &MarkedMetricGraph, cyc: &[Dart], v: usize) -> Vec<Dart> {
    let k = cyc.iter().position(|&d| g.origin(d) == v).expect("vertex on cycle");
    cyc[k..].iter().chain(&cyc[..k]).copied().collect()
}

fn reversed(cyc: &[Dart]) -> Vec<Dart> {
    cyc.iter().rev().map(|d| d.reverse()).collect()
}

fn make(g: &MarkedMetricGraph, shape: Shape, darts: Vec<Dart>, components: Vec<EdgePath>) -> CandidateLoop {
    let canon = canonical_cyclic(&darts);
    let start = g.origin(canon[0]);
    CandidateLoop { shape, path: EdgePath::new(start, canon), components }
}

/// Embedded arcs from a vertex of `from` to a vertex of `to` meeting both sets only at their ends.
fn arcs_between(g: &MarkedMetricGraph, from: &BTreeSet<usize>, to: &BTreeSet<usize>) -> Vec<Vec<Dart>> {
    let mut arcs = Vec::new();
    for &u in from {
        let mut visited = vec![false; g.num_vertices()];
        visited[u] = true;
        let mut stack = Vec::new();
        arc_dfs(g, u, from, to, &mut visited, &mut stack, &mut arcs);
    }
    arcs
}

fn arc_dfs(
    g: &MarkedMetricGraph,
    at: usize,
    from: &BTreeSet<usize>,
    to: &BTreeSet<usize>,
    visited: &mut [bool],
    stack: &mut Vec<Dart>,
    arcs: &mut Vec<Vec<Dart>>,
) {
    for d in g.darts_from(at) {
        let y = g.terminus(d);
        if visited[y] || from.contains(&y) {
            continue;
        }
        stack.push(d);
        if to.contains(&y) {
            arcs.push(stack.clone());
        } else {
            visited[y] = true;
            arc_dfs(g, y, from, to, visited, stack, arcs);
            visited[y] = false;
        }
        stack.pop();
    }
}

/// All candidate loops, sorted by shape and then by canonical dart sequence.
pub fn enumerate_candidates(g: &MarkedMetricGraph) -> Vec<CandidateLoop> {
    let cycles = simple_cycles(g);
    let verts: Vec<BTreeSet<usize>> = cycles.iter().map(|c| vertices_of(g, c)).collect();
    let mut out: Vec<CandidateLoop> = Vec::new();
    let mut seen: BTreeSet<(Shape, Vec<Dart>)> = BTreeSet::new();
    let mut push = |c: CandidateLoop, out: &mut Vec<CandidateLoop>| {
        if seen.insert((c.shape, c.path.darts.clone())) {
            out.push(c);
        }
    };
    for c in &cycles {
        let start = g.origin(c[0]);
        push(make(g, Shape::O, c.clone(), vec![EdgePath::new(start, c.clone())]), &mut out);
    }
    for i in 0..cycles.len() {
        for j in i + 1..cycles.len() {
            let common: Vec<usize> = verts[i].intersection(&verts[j]).copied().collect();
            if common.len() == 1 {
                let v = common[0];
                let c1 = rotate_to(g, &cycles[i], v);
                let c2 = rotate_to(g, &cycles[j], v);
                for second in [c2.clone(), reversed(&c2)] {
                    let darts: Vec<Dart> = c1.iter().chain(&second).copied().collect();
                    let comps = vec![EdgePath::new(v, c1.clone()), EdgePath::new(v, second.clone())];
                    push(make(g, Shape::FigureEight, darts, comps), &mut out);
                }
            } else if common.is_empty() {
                for arc in arcs_between(g, &verts[i], &verts[j]) {
                    let u = g.origin(arc[0]);
                    let w = g.terminus(*arc.last().unwrap());
                    let c1 = rotate_to(g, &cycles[i], u);
                    let c2 = rotate_to(g, &cycles[j], w);
                    let back = reversed(&arc);
                    for second in [c2.clone(), reversed(&c2)] {
                        let darts: Vec<Dart> =
                            c1.iter().chain(&arc).chain(&second).chain(&back).copied().collect();
                        let comps = vec![
                            EdgePath::new(u, c1.clone()),
                            EdgePath::new(w, second.clone()),
                            EdgePath::new(u, arc.clone()),
                        ];
                        push(make(g, Shape::Dumbbell, darts, comps), &mut out);
                    }
                }
            }
        }
    }
    out.sort_by(|a, b| a.key().cmp(&b.key()));
    out
}
