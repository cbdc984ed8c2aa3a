//! Recovering the inverse marking from the forward marking.
//!
//! Non-tree edges of a spanning tree give a free basis `x_j`. Each petal is
//! spelled in the `x_j`; a wedge of circles spelling those words is folded
//! until it becomes a rose on the `x_j`, transporting generator labels.

use std::collections::{HashMap, VecDeque};

use crate::freegroup::{free_reduce, Word};
use crate::rational::int;

use super::{Dart, Edge, EdgePath, GraphError, MarkedMetricGraph};

/// Labels (one per edge, stored orientation) making `g` basepoint-consistent.
pub fn derive_inverse_marking(g: &MarkedMetricGraph) -> Result<Vec<Word>, GraphError> {
    let n = g.rank();
    let nv = g.num_vertices();
    let mut in_tree = vec![false; g.num_edges()];
    let mut seen = vec![false; nv];
    seen[g.basepoint()] = true;
    let mut queue = VecDeque::from([g.basepoint()]);
    while let Some(v) = queue.pop_front() {
        for d in g.darts_from(v) {
            let y = g.terminus(d);
            if !seen[y] {
                seen[y] = true;
                in_tree[d.edge()] = true;
                queue.push_back(y);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        let v = seen.iter().position(|s| !s).unwrap();
        return Err(GraphError::Disconnected(g.vertex_name(v).to_string()));
    }
    let x_of_edge: HashMap<usize, usize> = (0..g.num_edges())
        .filter(|&e| !in_tree[e])
        .enumerate()
        .map(|(j, e)| (e, j + 1))
        .collect();
    if x_of_edge.len() != n {
        return Err(GraphError::BettiMismatch { expected: n, found: x_of_edge.len() });
    }
    if g.marking().len() != n {
        return Err(GraphError::MarkingSize { expected: n, found: g.marking().len() });
    }

    // Wedge of circles; xlab[e] is the x-letter of the stored orientation.
    let mut names = vec!["o".to_string()];
    let mut edges: Vec<Edge> = Vec::new();
    let mut xlab: Vec<usize> = Vec::new();
    for (i, m) in g.marking().iter().enumerate() {
        let raw: Vec<i32> = m
            .darts
            .iter()
            .filter_map(|d| {
                x_of_edge.get(&d.edge()).map(|&j| if d.is_reversed() { -(j as i32) } else { j as i32 })
            })
            .collect();
        let xw = free_reduce(&raw, n)?;
        if xw.is_identity() {
            return Err(GraphError::NotIsomorphism("a petal is null-homotopic"));
        }
        let k = xw.len();
        let mut prev = 0;
        for (t, l) in xw.letters().iter().enumerate() {
            let next = if t + 1 == k {
                0
            } else {
                names.push(format!("c{i}_{t}"));
                names.len() - 1
            };
            let a = if t == 0 { Word::generator(n, i + 1) } else { Word::identity(n) };
            let (origin, terminus, label) = if l.is_inverse() { (next, prev, a.inverse()) } else { (prev, next, a) };
            edges.push(Edge { name: format!("e{}", edges.len()), origin, terminus, length: int(1), label });
            xlab.push(l.index());
            prev = next;
        }
    }
    let mut t = MarkedMetricGraph::from_parts(n, names, edges, 0, Vec::<EdgePath>::new());

    loop {
        let mut pair = None;
        'search: for v in 0..t.num_vertices() {
            let mut by_x: HashMap<(usize, bool), Dart> = HashMap::new();
            for d in t.darts_from(v) {
                let key = (xlab[d.edge()], d.is_reversed());
                if let Some(&other) = by_x.get(&key) {
                    pair = Some((other, d));
                    break 'search;
                }
                by_x.insert(key, d);
            }
        }
        let Some((d1, d2)) = pair else { break };
        let out = t.fold_darts(d1, d2)?;
        xlab.remove(out.removed_edge);
    }
    if t.num_vertices() != 1 || t.num_edges() != n {
        return Err(GraphError::NotIsomorphism("petals do not generate"));
    }
    let mut by_x: Vec<Option<Word>> = vec![None; n + 1];
    for (e, &j) in xlab.iter().enumerate() {
        by_x[j] = Some(t.edge(e).label.clone());
    }
    (0..g.num_edges())
        .map(|e| match x_of_edge.get(&e) {
            None => Ok(Word::identity(n)),
            Some(&j) => by_x[j].clone().ok_or(GraphError::NotIsomorphism("petals do not generate")),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::test_graphs::*;
    use super::super::GraphBuilder;
    use super::*;
    use crate::rational::int;

    #[test]
    fn rose_labels_are_generators() {
        let r = unit_rose();
        assert_eq!(derive_inverse_marking(&r).unwrap(), vec![w("a"), w("b")]);
    }

    #[test]
    fn twisted_rose_gets_inverse_automorphism_labels() {
        let g = GraphBuilder::new(2)
            .vertex("v")
            .edge("x", "v", "v", int(1), None)
            .edge("y", "v", "v", int(1), None)
            .basepoint("v")
            .petal("x")
            .petal("y x")
            .build()
            .unwrap();
        assert_eq!(g.edge(1).label, w("bA"));
    }

    #[test]
    fn non_generating_marking_rejected() {
        let r = unit_rose();
        let mut bad = r.clone();
        bad.marking[1] = EdgePath::new(0, vec![Dart::forward(1), Dart::forward(1)]);
        assert!(matches!(derive_inverse_marking(&bad), Err(GraphError::NotIsomorphism(_))));
        let mut null = r;
        null.marking[1] = EdgePath::empty(0);
        assert!(derive_inverse_marking(&null).is_err());
    }
}
