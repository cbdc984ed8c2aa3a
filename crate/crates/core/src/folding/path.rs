//! Event-driven construction of fast folding paths.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::graph::{Dart, MarkedMetricGraph};
use crate::rational::Rational;
use crate::stretch::PLMap;

use super::setup::{split_edge, FoldingSetup};
use super::FoldError;

/// Safety net against a construction that fails to terminate.
const MAX_EVENTS: usize = 100_000;

/// Which vertices fold at the same time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Every vertex with a folding turn folds at once.
    #[default]
    Simultaneous,
    /// Only the lowest-numbered vertex with a folding turn folds.
    SingleVertex,
}

/// A pair of germs at a vertex identified at unit speed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct FoldTurn {
    pub vertex: usize,
    pub first: Dart,
    pub second: Dart,
}

/// Completion of a stage: at `time` some pair of segments has been fully identified.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldEvent {
    pub time: Rational,
    /// Turns that were folding during the stage ending here.
    pub turns: Vec<FoldTurn>,
}

#[derive(Debug, Clone)]
pub struct FoldingPath {
    pub setup: FoldingSetup,
    pub strategy: Strategy,
    /// `0 = t₀ < t₁ < … < t̄`.
    pub times: Vec<Rational>,
    /// Map `A_{tᵢ} → B̄` at each time; its source is the snapshot graph.
    pub maps: Vec<PLMap>,
    pub events: Vec<FoldEvent>,
}

impl FoldingPath {
    pub fn end_time(&self) -> &Rational {
        self.times.last().expect("path has a start")
    }

    pub fn snapshot(&self, i: usize) -> &MarkedMetricGraph {
        &self.maps[i].source
    }

    pub fn snapshots(&self) -> impl Iterator<Item = &MarkedMetricGraph> {
        self.maps.iter().map(|m| &m.source)
    }

    pub fn target(&self) -> &MarkedMetricGraph {
        self.setup.target()
    }
}

/// Groups of at least two darts at one vertex whose images leave in the same direction.
pub(crate) fn fold_groups(f: &PLMap, strategy: Strategy) -> Vec<(usize, Vec<Dart>)> {
    let mut out = Vec::new();
    for v in 0..f.source.num_vertices() {
        let mut by_dir: BTreeMap<Dart, Vec<Dart>> = BTreeMap::new();
        for d in f.source.darts_from(v) {
            if let Some(dir) = f.dart_image(d).first_direction() {
                by_dir.entry(dir).or_default().push(d);
            }
        }
        let before = out.len();
        out.extend(by_dir.into_values().filter(|g| g.len() > 1).map(|g| (v, g)));
        if strategy == Strategy::SingleVertex && out.len() > before {
            break;
        }
    }
    out
}

pub(crate) fn turns_of(groups: &[(usize, Vec<Dart>)]) -> Vec<FoldTurn> {
    let mut turns = Vec::new();
    for (v, g) in groups {
        for i in 0..g.len() {
            for j in i + 1..g.len() {
                turns.push(FoldTurn { vertex: *v, first: g[i], second: g[j] });
            }
        }
    }
    turns
}

/// Time until the first segment of some group is completely identified.
fn stage_length(f: &PLMap, groups: &[(usize, Vec<Dart>)]) -> Rational {
    let folding: BTreeSet<Dart> = groups.iter().flat_map(|(_, g)| g.iter().copied()).collect();
    folding
        .iter()
        .map(|d| {
            let len = f.source.edge(d.edge()).length.clone();
            if folding.contains(&d.reverse()) {
                len / Rational::from_integer(2.into())
            } else {
                len
            }
        })
        .min()
        .expect("at least one folding dart")
}

fn shift(d: Dart, removed: usize) -> Dart {
    if d.edge() > removed {
        Dart::new(d.edge() - 1, d.is_reversed())
    } else {
        d
    }
}

/// Folds every group for time `tau`, which must not exceed the stage length.
fn fold_for(f: &PLMap, groups: &[(usize, Vec<Dart>)], tau: &Rational) -> Result<PLMap, FoldError> {
    let mut g = f.clone();
    let folding: BTreeSet<Dart> = groups.iter().flat_map(|(_, gr)| gr.iter().copied()).collect();
    let mut initial: BTreeMap<Dart, Dart> = BTreeMap::new();
    let edges: BTreeSet<usize> = folding.iter().map(|d| d.edge()).collect();
    for e in edges {
        let len = g.source.edge(e).length.clone();
        let fwd = folding.contains(&Dart::forward(e));
        let rev = folding.contains(&Dart::new(e, true));
        let two_tau = tau + tau;
        match (fwd, rev) {
            (true, true) if two_tau == len => {
                let (_, tail) = split_edge(&mut g, e, tau);
                initial.insert(Dart::forward(e), Dart::forward(e));
                initial.insert(Dart::new(e, true), Dart::new(tail, true));
            }
            (true, true) => {
                let (_, t1) = split_edge(&mut g, e, tau);
                let (_, t2) = split_edge(&mut g, t1, &(&len - &two_tau));
                initial.insert(Dart::forward(e), Dart::forward(e));
                initial.insert(Dart::new(e, true), Dart::new(t2, true));
            }
            (true, false) => {
                if *tau < len {
                    split_edge(&mut g, e, tau);
                }
                initial.insert(Dart::forward(e), Dart::forward(e));
            }
            (false, true) => {
                let d = if *tau < len {
                    let (_, tail) = split_edge(&mut g, e, &(&len - tau));
                    Dart::new(tail, true)
                } else {
                    Dart::new(e, true)
                };
                initial.insert(Dart::new(e, true), d);
            }
            (false, false) => unreachable!(),
        }
    }
    let mut pending: Vec<Vec<Dart>> = groups.iter().map(|(_, gr)| gr.iter().map(|d| initial[d]).collect()).collect();
    for gi in 0..pending.len() {
        for j in 1..pending[gi].len() {
            let (d1, d2) = (pending[gi][0], pending[gi][j]);
            if d1 == d2 {
                continue;
            }
            if g.dart_image(d1) != g.dart_image(d2) {
                return Err(FoldError::Internal(format!(
                    "segments {} and {} have different images",
                    g.source.dart_name(d1),
                    g.source.dart_name(d2)
                )));
            }
            let out = g.source.fold_darts(d1, d2)?;
            g.edge_image.remove(out.removed_edge);
            g.vertex_image.remove(out.removed_vertex);
            for group in pending.iter_mut() {
                for d in group.iter_mut() {
                    *d = if *d == out.absorbed {
                        out.kept
                    } else if *d == out.absorbed.reverse() {
                        out.kept.reverse()
                    } else {
                        shift(*d, out.removed_edge)
                    };
                }
            }
        }
    }
    prune_hairs(&mut g)?;
    debug_assert!(g.validate().is_ok());
    Ok(g)
}

/// Collapses valence-one edges left behind when every dart at a vertex folds together.
fn prune_hairs(f: &mut PLMap) -> Result<(), FoldError> {
    while let Some(v) = (0..f.source.num_vertices()).find(|&v| f.source.valence(v) == 1) {
        let d = f.source.darts_from(v)[0];
        let core = f.source.terminus(d);
        if v == f.source.basepoint() {
            f.base_track = f.base_track.then(&f.target, &f.dart_image(d));
        }
        f.vertex_image[v] = f.vertex_image[core].clone();
        let gone = f.source.contract_edge(d.edge())?;
        f.edge_image.remove(d.edge());
        f.vertex_image.remove(gone);
    }
    Ok(())
}

/// Folds the prepared map until it is an isometry.
pub fn fast_fold(setup: &FoldingSetup, strategy: Strategy) -> Result<FoldingPath, FoldError> {
    let mut f = setup.map.clone();
    let mut t = Rational::zero();
    let mut times = vec![t.clone()];
    let mut maps = vec![f.clone()];
    let mut events = Vec::new();
    loop {
        let groups = fold_groups(&f, strategy);
        if groups.is_empty() {
            break;
        }
        if events.len() == MAX_EVENTS {
            return Err(FoldError::Internal("folding did not terminate".into()));
        }
        let tau = stage_length(&f, &groups);
        let next = fold_for(&f, &groups, &tau)?;
        if next.source.volume() > f.source.volume() - &tau {
            return Err(FoldError::Internal("volume dropped by less than the elapsed time".into()));
        }
        t += &tau;
        events.push(FoldEvent { time: t.clone(), turns: turns_of(&groups) });
        times.push(t.clone());
        maps.push(next.clone());
        f = next;
    }
    Ok(FoldingPath { setup: setup.clone(), strategy, times, maps, events })
}

/// The map `A_t → B̄` at an arbitrary time of the path.
pub fn sample_path(path: &FoldingPath, t: &Rational) -> Result<PLMap, FoldError> {
    if *t < Rational::zero() || t > path.end_time() {
        return Err(FoldError::TimeOutOfRange { t: Box::new(t.clone()), end: Box::new(path.end_time().clone()) });
    }
    let i = path.times.partition_point(|s| s <= t) - 1;
    if path.times[i] == *t {
        return Ok(path.maps[i].clone());
    }
    let f = &path.maps[i];
    let groups = fold_groups(f, path.strategy);
    fold_for(f, &groups, &(t - &path.times[i]))
}
