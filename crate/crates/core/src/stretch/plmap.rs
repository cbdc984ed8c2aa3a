//! Piecewise-linear maps between marked graphs and their optimisation.

use num_traits::Zero;

use crate::graph::{Dart, EdgePath, MarkedMetricGraph};
use crate::rational::{fmt_rational, Rational};

use super::bpath::{BPath, Point};
use super::lambda::lambda_r;
use super::StretchError;

/// A map linear on edges, in the homotopy class `τ_B ∘ τ_A⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct PLMap {
    pub source: MarkedMetricGraph,
    pub target: MarkedMetricGraph,
    pub vertex_image: Vec<Point>,
    /// Tight image of each source edge in its stored orientation.
    pub edge_image: Vec<BPath>,
    /// Path in the target from its basepoint to the image of the source basepoint.
    pub base_track: BPath,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StretchAnalysis {
    pub s_f: Rational,
    pub per_edge: Vec<Rational>,
    pub a_max: Vec<usize>,
    pub boundary: Vec<usize>,
}

impl PLMap {
    /// Vertices go to the target basepoint; each edge follows its label word.
    /// Two graphs in one simplex get the identity on cells instead.
    pub fn initial(a: &MarkedMetricGraph, b: &MarkedMetricGraph) -> Result<PLMap, StretchError> {
        if a.rank() != b.rank() {
            return Err(crate::freegroup::FreeGroupError::RankMismatch { expected: a.rank(), found: b.rank() }.into());
        }
        let f = if a.same_simplex(b).is_ok() {
            PLMap {
                source: a.clone(),
                target: b.clone(),
                vertex_image: (0..a.num_vertices()).map(Point::Vertex).collect(),
                edge_image: (0..a.num_edges())
                    .map(|e| BPath::from_darts(b, a.edge(e).origin, &[Dart::forward(e)]))
                    .collect(),
                base_track: BPath::constant(Point::Vertex(b.basepoint())),
            }
        } else {
            let base = b.basepoint();
            PLMap {
                source: a.clone(),
                target: b.clone(),
                vertex_image: vec![Point::Vertex(base); a.num_vertices()],
                edge_image: a
                    .edges()
                    .iter()
                    .map(|e| {
                        let img = b.word_image(&e.label);
                        BPath::from_darts(b, base, &img.darts).tightened()
                    })
                    .collect(),
                base_track: BPath::constant(Point::Vertex(base)),
            }
        };
        f.validate()?;
        Ok(f)
    }

    pub fn dart_image(&self, d: Dart) -> BPath {
        let p = &self.edge_image[d.edge()];
        if d.is_reversed() {
            p.reversed(&self.target)
        } else {
            p.clone()
        }
    }

    /// Tight image of a source edge path.
    pub fn push_path(&self, p: &EdgePath) -> BPath {
        let mut out = BPath::constant(self.vertex_image[p.start].clone());
        for &d in &p.darts {
            out = out.then(&self.target, &self.dart_image(d));
        }
        out
    }

    /// Checks endpoints, tightness and the homotopy class on each petal.
    pub fn validate(&self) -> Result<(), StretchError> {
        let b = &self.target;
        for (e, img) in self.edge_image.iter().enumerate() {
            let edge = self.source.edge(e);
            if img.start != self.vertex_image[edge.origin] || img.end(b) != self.vertex_image[edge.terminus] {
                return Err(StretchError::Internal(format!("image of edge {} has wrong endpoints", edge.name)));
            }
            if img.tightened() != *img {
                return Err(StretchError::Internal(format!("image of edge {} is not tight", edge.name)));
            }
        }
        let base = self.source.basepoint();
        if self.base_track.start != Point::Vertex(b.basepoint()) || self.base_track.end(b) != self.vertex_image[base] {
            return Err(StretchError::Internal("basepoint track does not end at the basepoint image".into()));
        }
        let back = self.base_track.reversed(b);
        for (i, m) in self.source.marking().iter().enumerate() {
            let loop_b = self.base_track.then(b, &self.push_path(m)).then(b, &back);
            let expected = crate::freegroup::Word::generator(b.rank(), i + 1);
            if loop_b.word(b).as_ref() != Some(&expected) {
                return Err(StretchError::Internal(format!("petal {} maps to the wrong class", i + 1)));
            }
        }
        Ok(())
    }

    pub fn edge_stretch(&self, e: usize) -> Rational {
        self.edge_image[e].length() / &self.source.edge(e).length
    }

    pub fn analysis(&self) -> StretchAnalysis {
        let per_edge: Vec<Rational> = (0..self.source.num_edges()).map(|e| self.edge_stretch(e)).collect();
        let s_f = per_edge.iter().max().cloned().unwrap_or_else(Rational::zero);
        let a_max: Vec<usize> = (0..per_edge.len()).filter(|&e| per_edge[e] == s_f).collect();
        let boundary = (0..self.source.num_vertices())
            .filter(|&v| self.common_direction(v, &a_max).is_some())
            .collect();
        StretchAnalysis { s_f, per_edge, a_max, boundary }
    }

    /// The shared first direction of all `A_max` germs at `v`, if they all agree.
    fn common_direction(&self, v: usize, a_max: &[usize]) -> Option<Dart> {
        let mut dir: Option<Dart> = None;
        let mut any = false;
        for d in self.source.darts_from(v) {
            if !a_max.contains(&d.edge()) {
                continue;
            }
            any = true;
            let here = self.dart_image(d).first_direction()?;
            match dir {
                None => dir = Some(here),
                Some(x) if x == here => {}
                Some(_) => return None,
            }
        }
        if any {
            dir
        } else {
            None
        }
    }

    pub fn is_optimal(&self) -> (bool, Vec<usize>) {
        let a = self.analysis();
        (a.boundary.is_empty(), a.boundary)
    }

    /// Violations of `∂_f A_i ⊆ A_{i-1}` as `(i, v)`, where `A_i` holds the edges with the
    /// `i`-th largest stretch (counted from 1) and `A_0` is empty.
    ///
    /// Level 1 defects are exactly the offending vertices of `A_max`.
    pub fn stratification_defects(&self) -> Vec<(usize, usize)> {
        let per_edge: Vec<Rational> = (0..self.source.num_edges()).map(|e| self.edge_stretch(e)).collect();
        let mut levels = per_edge.clone();
        levels.sort_by(|x, y| y.cmp(x));
        levels.dedup();
        let mut out = Vec::new();
        let mut prev: Vec<usize> = Vec::new();
        for (i, lam) in levels.iter().enumerate() {
            let level: Vec<usize> = (0..per_edge.len()).filter(|&e| per_edge[e] == *lam).collect();
            for v in 0..self.source.num_vertices() {
                let in_prev = self.source.darts_from(v).iter().any(|d| prev.contains(&d.edge()));
                if !in_prev && self.common_direction(v, &level).is_some() {
                    out.push((i + 1, v));
                }
            }
            prev = level;
        }
        out
    }

    /// Per-edge rate of length change when `f(v)` moves along `alpha`.
    fn rates(&self, v: usize, alpha: Dart) -> Vec<i64> {
        let mut r = vec![0i64; self.source.num_edges()];
        for d in self.source.darts_from(v) {
            let shrinking = self.dart_image(d).first_direction() == Some(alpha);
            r[d.edge()] += if shrinking { -1 } else { 1 };
        }
        r
    }

    /// Candidate step lengths whose minimum is the Next_v step.
    pub fn next_v_breakpoints(&self, v: usize) -> Result<(Dart, Vec<Rational>), StretchError> {
        let an = self.analysis();
        let alpha = self.common_direction(v, &an.a_max).ok_or(StretchError::NotOffending(v))?;
        let rates = self.rates(v, alpha);
        let mut bps = Vec::new();
        for d in self.source.darts_from(v) {
            let img = self.dart_image(d);
            if img.first_direction() == Some(alpha) {
                bps.push(img.pieces[0].length());
            }
        }
        let slope = |e: usize| Rational::from_integer(rates[e].into()) / &self.source.edge(e).length;
        for &m in &an.a_max {
            for e in 0..self.source.num_edges() {
                if an.a_max.contains(&e) {
                    continue;
                }
                let (se, sm) = (slope(e), slope(m));
                if se > sm {
                    bps.push((&an.per_edge[m] - &an.per_edge[e]) / (se - sm));
                }
            }
        }
        Ok((alpha, bps))
    }

    /// Moves `f(v)` backwards along the common direction of its maximal germs.
    pub fn next_v(&self, v: usize) -> Result<PLMap, StretchError> {
        let before = self.analysis();
        let (alpha, bps) = self.next_v_breakpoints(v)?;
        let t0 = bps.into_iter().min().expect("an A_max germ exists at an offending vertex");
        let b = &self.target;
        let seg = BPath::segment(b, &self.vertex_image[v], alpha, &t0);
        let back = seg.reversed(b);
        let mut next = self.clone();
        for (e, edge) in self.source.edges().iter().enumerate() {
            let mut img = self.edge_image[e].clone();
            if edge.origin == v {
                img = back.then(b, &img);
            }
            if edge.terminus == v {
                img = img.then(b, &seg);
            }
            next.edge_image[e] = img;
        }
        next.vertex_image[v] = seg.end(b);
        if v == self.source.basepoint() {
            next.base_track = self.base_track.then(b, &seg);
        }
        let after = next.analysis();
        let decreased =
            after.s_f < before.s_f || (after.s_f == before.s_f && after.a_max.len() < before.a_max.len());
        if !decreased {
            return Err(StretchError::Internal(format!(
                "move at vertex {} did not decrease (S_f, |A_max|)",
                self.source.vertex_name(v)
            )));
        }
        debug_assert!(next.validate().is_ok());
        Ok(next)
    }

    /// Directions in the target available to the image of `v`.
    fn directions_at(&self, v: usize) -> Vec<Dart> {
        match &self.vertex_image[v] {
            Point::Vertex(x) => self.target.darts_from(*x),
            Point::Interior { edge, .. } => vec![Dart::forward(*edge), Dart::new(*edge, true)],
        }
    }

    fn room_along(&self, v: usize, dir: Dart) -> Rational {
        let len = &self.target.edge(dir.edge()).length;
        match &self.vertex_image[v] {
            Point::Vertex(_) => len.clone(),
            Point::Interior { offset, .. } => {
                if dir.is_reversed() {
                    offset.clone()
                } else {
                    len - offset
                }
            }
        }
    }

    fn shrinks(&self, d: Dart, choice: &[Option<Dart>]) -> bool {
        let v = self.source.origin(d);
        choice[v].is_some() && self.dart_image(d).first_direction() == choice[v]
    }

    /// Best joint displacement for one choice of directions, as `(gain, distances)`.
    fn best_displacement(&self, s0: &Rational, choice: &[Option<Dart>]) -> Option<(Rational, Vec<Rational>)> {
        let nv = self.source.num_vertices();
        let mut var = vec![usize::MAX; nv];
        let mut nvar = 0;
        for v in 0..nv {
            if choice[v].is_some() {
                var[v] = nvar;
                nvar += 1;
            }
        }
        if nvar == 0 {
            return None;
        }
        let y = nvar;
        let width = nvar + 1;
        let zero_row = || vec![Rational::zero(); width];
        let one = || Rational::from_integer(1.into());
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        let mut rhs: Vec<Rational> = Vec::new();
        for (e, edge) in self.source.edges().iter().enumerate() {
            let l = &edge.length;
            let (u, w) = (edge.origin, edge.terminus);
            let len0 = self.edge_image[e].length();
            let cap = l * s0 - &len0;
            if self.edge_image[e].is_empty() && u != w && choice[u].is_some() && choice[u] == choice[w] {
                for sign in [1i64, -1] {
                    let mut row = zero_row();
                    row[var[u]] = Rational::from_integer(sign.into());
                    row[var[w]] = Rational::from_integer((-sign).into());
                    row[y] = l.clone();
                    rows.push(row);
                    rhs.push(cap.clone());
                }
                continue;
            }
            let mut row = zero_row();
            for d in [Dart::forward(e), Dart::new(e, true)] {
                let v = self.source.origin(d);
                if choice[v].is_some() {
                    if self.shrinks(d, choice) {
                        row[var[v]] -= one();
                    } else {
                        row[var[v]] += one();
                    }
                }
            }
            row[y] = l.clone();
            rows.push(row);
            rhs.push(cap);
        }
        for v in 0..nv {
            let Some(dir) = choice[v] else { continue };
            let mut row = zero_row();
            row[var[v]] = one();
            rows.push(row);
            rhs.push(self.room_along(v, dir));
        }
        for d in self.source.all_darts() {
            if !self.shrinks(d, choice) {
                continue;
            }
            let v = self.source.origin(d);
            let img = self.dart_image(d);
            let mut row = zero_row();
            row[var[v]] = one();
            let w = self.source.terminus(d);
            if img.pieces.len() == 1 && w != v {
                if self.shrinks(d.reverse(), choice) {
                    row[var[w]] = one();
                } else if choice[w] == Some(img.pieces[0].direction())
                    && self.vertex_image[w].as_vertex().is_none()
                {
                    // the far end runs ahead along the same edge
                    row[var[w]] = -one();
                }
            }
            rows.push(row);
            rhs.push(img.pieces[0].length());
        }
        let mut c = vec![Rational::zero(); width];
        c[y] = one();
        match super::lp::maximize(&c, &rows, &rhs) {
            super::lp::LpOutcome::Optimal { value, x } if value > Rational::zero() => {
                let mut dist = vec![Rational::zero(); nv];
                for v in 0..nv {
                    if choice[v].is_some() {
                        dist[v] = x[var[v]].clone();
                    }
                }
                Some((value, dist))
            }
            _ => None,
        }
    }

    /// Jumps to the best nearby map over all joint moves of vertex images.
    ///
    /// Each vertex image either stays or slides along one direction; for every
    /// such choice, edge lengths are affine in the slide distances until a
    /// vertex of the target or the end of a cancelling segment is reached, and
    /// the largest drop of `S_f` is found exactly by linear programming.
    /// Returns `None` when no joint move lowers `S_f`.
    pub fn descent_step(&self) -> Result<Option<PLMap>, StretchError> {
        let an = self.analysis();
        let nv = self.source.num_vertices();
        let touching: Vec<bool> = (0..nv)
            .map(|v| self.source.darts_from(v).iter().any(|d| an.a_max.contains(&d.edge())))
            .collect();
        let mut options: Vec<(usize, Vec<Dart>)> = (0..nv).map(|v| (v, self.directions_at(v))).collect();
        let count = |o: &[(usize, Vec<Dart>)]| o.iter().map(|(_, d)| d.len() + 1).product::<usize>();
        if count(&options) > 4096 {
            options.retain(|(v, _)| touching[*v]);
        }
        if count(&options) > 4096 {
            return Ok(None);
        }
        let combos = count(&options);
        let mut best: Option<(Rational, Vec<Option<Dart>>, Vec<Rational>)> = None;
        for mut code in 0..combos {
            let mut choice: Vec<Option<Dart>> = vec![None; nv];
            for (v, dirs) in &options {
                let k = code % (dirs.len() + 1);
                code /= dirs.len() + 1;
                choice[*v] = if k == 0 { None } else { Some(dirs[k - 1]) };
            }
            if let Some((gain, dist)) = self.best_displacement(&an.s_f, &choice) {
                if best.as_ref().is_none_or(|(g, _, _)| gain > *g) {
                    best = Some((gain, choice, dist));
                }
            }
        }
        let Some((gain, choice, dist)) = best else { return Ok(None) };
        let b = &self.target;
        let segs: Vec<Option<BPath>> = (0..nv)
            .map(|v| match choice[v] {
                Some(dir) if !dist[v].is_zero() => Some(BPath::segment(b, &self.vertex_image[v], dir, &dist[v])),
                _ => None,
            })
            .collect();
        let mut next = self.clone();
        for (e, edge) in self.source.edges().iter().enumerate() {
            let mut img = self.edge_image[e].clone();
            if let Some(s) = &segs[edge.origin] {
                img = s.reversed(b).then(b, &img);
            }
            if let Some(s) = &segs[edge.terminus] {
                img = img.then(b, s);
            }
            next.edge_image[e] = img;
        }
        for (v, seg) in segs.iter().enumerate() {
            if let Some(s) = seg {
                next.vertex_image[v] = s.end(b);
            }
        }
        if let Some(s) = &segs[self.source.basepoint()] {
            next.base_track = self.base_track.then(b, s);
        }
        let s_new = next.analysis().s_f;
        if s_new != &an.s_f - &gain {
            return Err(StretchError::Internal("joint move disagrees with its linear model".into()));
        }
        debug_assert!(next.validate().is_ok());
        Ok(Some(next))
    }

    pub fn lipschitz(&self) -> Rational {
        self.analysis().s_f
    }
}

/// Outcome of optimisation, certified against the candidate value.
#[derive(Debug, Clone)]
pub struct OptimizedMap {
    pub map: PLMap,
    pub moves: usize,
    pub lambda_r: Rational,
}

pub fn optimize_pl_map(
    a: &MarkedMetricGraph,
    b: &MarkedMetricGraph,
    max_moves: usize,
) -> Result<OptimizedMap, StretchError> {
    let (lam, _) = lambda_r(a, b)?;
    let mut f = PLMap::initial(a, b)?;
    let mut moves = 0;
    loop {
        let an = f.analysis();
        if an.s_f == lam {
            return Ok(OptimizedMap { map: f, moves, lambda_r: lam });
        }
        if an.s_f < lam {
            return Err(StretchError::Internal("map beats the stretching factor".into()));
        }
        let Some(&v) = an.boundary.first() else {
            return Err(StretchError::Internal(format!(
                "optimal map with S_f = {} above the candidate value {}",
                fmt_rational(&an.s_f),
                fmt_rational(&lam)
            )));
        };
        if moves == max_moves {
            return Err(StretchError::Budget { moves, best: Box::new(an.s_f.clone()), gap: Box::new(&an.s_f - &lam) });
        }
        f = match f.descent_step()? {
            Some(g) => g,
            None => f.next_v(v)?,
        };
        moves += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::AutomorphismPair;
    use crate::graph::test_graphs::*;
    use crate::graph::GraphBuilder;
    use crate::rational::{int, q};
    use rand::{Rng, SeedableRng};

    #[test]
    fn identity_map_is_optimal() {
        let x = theta(q(1, 6), q(1, 3), q(1, 2));
        let f = PLMap::initial(&x, &x).unwrap();
        let an = f.analysis();
        assert_eq!(an.s_f, int(1));
        assert_eq!(an.a_max, vec![0, 1, 2]);
        assert!(an.boundary.is_empty());
        let opt = optimize_pl_map(&x, &x, 0).unwrap();
        assert_eq!(opt.moves, 0);
    }

    #[test]
    fn single_stretched_edge_is_a_max() {
        let a = barbell(int(1), int(1), int(1));
        let b = barbell(int(2), int(1), int(1));
        let an = PLMap::initial(&a, &b).unwrap().analysis();
        assert_eq!(an.a_max, vec![0]);
        assert_eq!(an.s_f, int(2));
    }

    #[test]
    fn folded_turn_is_reported() {
        let a = GraphBuilder::new(2)
            .vertex("p")
            .vertex("q")
            .edge("A", "p", "q", int(1), Some(w("a")))
            .edge("B", "p", "q", int(1), Some(w("")))
            .edge("C", "p", "q", int(2), Some(w("b")))
            .basepoint("p")
            .petal("A -B")
            .petal("C -B")
            .build()
            .unwrap();
        let b = GraphBuilder::new(2)
            .vertex("v")
            .edge("x", "v", "v", int(1), None)
            .edge("y", "v", "v", int(1), None)
            .basepoint("v")
            .petal("x")
            .petal("x y")
            .build()
            .unwrap();
        let f = PLMap::initial(&a, &b).unwrap();
        let an = f.analysis();
        assert_eq!(an.a_max, vec![0, 2]);
        // A and C both leave p along x; at q they leave along -x and -y
        assert_eq!(f.is_optimal(), (false, vec![0]));
    }

    #[test]
    fn theta_to_theta_optimises_to_candidate_value() {
        let x = theta(q(1, 6), q(1, 3), q(1, 2));
        let y = GraphBuilder::new(2)
            .vertex("p")
            .vertex("q")
            .edge("E", "p", "q", q(1, 2), None)
            .edge("F", "p", "q", q(1, 3), None)
            .edge("G", "p", "q", q(1, 6), None)
            .basepoint("p")
            .petal("E -F")
            .petal("F -G")
            .build()
            .unwrap();
        let init = PLMap::initial(&x, &y).unwrap();
        assert!(init.lipschitz() >= int(2));
        let opt = optimize_pl_map(&x, &y, 200).unwrap();
        assert_eq!(opt.map.lipschitz(), int(2));
        assert!(opt.map.validate().is_ok());
    }

    fn random_pair(rng: &mut impl Rng) -> (MarkedMetricGraph, MarkedMetricGraph) {
        let len = |rng: &mut dyn rand::RngCore| q(rng.gen_range(1..6), rng.gen_range(1..4));
        let pick = |rng: &mut dyn rand::RngCore| -> MarkedMetricGraph {
            match rng.gen_range(0..3) {
                0 => rose(len(rng), len(rng)),
                1 => theta(len(rng), len(rng), len(rng)),
                _ => barbell(len(rng), len(rng), len(rng)),
            }
        };
        let a = pick(rng);
        let phi = AutomorphismPair::random(2, 2, rng);
        let b = pick(rng).apply_automorphism(&phi).unwrap();
        (a, b)
    }

    #[test]
    fn random_pairs_certify() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..40 {
            let (a, b) = random_pair(&mut rng);
            let opt = optimize_pl_map(&a, &b, 500).unwrap();
            assert_eq!(opt.map.lipschitz(), opt.lambda_r);
            assert!(opt.map.validate().is_ok());
        }
    }

    #[test]
    fn stratification_top_level_is_optimality() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..30 {
            let (a, b) = random_pair(&mut rng);
            let init = PLMap::initial(&a, &b).unwrap();
            let opt = optimize_pl_map(&a, &b, 500).unwrap().map;
            for f in [init, opt] {
                let top: Vec<usize> =
                    f.stratification_defects().into_iter().filter(|&(i, _)| i == 1).map(|(_, v)| v).collect();
                assert_eq!(top, f.analysis().boundary);
            }
        }
        let x = theta(q(1, 6), q(1, 3), q(1, 2));
        assert!(PLMap::initial(&x, &x).unwrap().stratification_defects().is_empty());
    }

    #[test]
    fn deeply_twisted_pairs_certify() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let len = |rng: &mut dyn rand::RngCore| q(rng.gen_range(1..9), rng.gen_range(1..6));
        let pick = |rng: &mut dyn rand::RngCore| -> MarkedMetricGraph {
            let g = match rng.gen_range(0..3) {
                0 => rose(len(rng), len(rng)),
                1 => theta(len(rng), len(rng), len(rng)),
                _ => barbell(len(rng), len(rng), len(rng)),
            };
            g.apply_automorphism(&AutomorphismPair::random(2, 5, rng)).unwrap()
        };
        for _ in 0..150 {
            let a = pick(&mut rng);
            let b = pick(&mut rng);
            let opt = optimize_pl_map(&a, &b, 300).unwrap();
            assert_eq!(opt.map.lipschitz(), opt.lambda_r);
        }
    }

    #[test]
    fn next_v_decreases_and_matches_linear_prediction() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        let mut checked = 0;
        for _ in 0..30 {
            let (a, b) = random_pair(&mut rng);
            let mut f = PLMap::initial(&a, &b).unwrap();
            for _ in 0..20 {
                let an = f.analysis();
                let Some(&v) = an.boundary.first() else { break };
                let (alpha, bps) = f.next_v_breakpoints(v).unwrap();
                let t0 = bps.iter().min().unwrap().clone();
                assert!(t0 > int(0));
                let rates = f.rates(v, alpha);
                let g = f.next_v(v).unwrap();
                for (e, &rate) in rates.iter().enumerate() {
                    let predicted = f.edge_image[e].length() + Rational::from_integer(rate.into()) * &t0;
                    assert_eq!(g.edge_image[e].length(), predicted);
                }
                let after = g.analysis();
                assert!(after.s_f < an.s_f || (after.s_f == an.s_f && after.a_max.len() < an.a_max.len()));
                f = g;
                checked += 1;
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn not_offending_vertex_rejected() {
        let x = theta(q(1, 6), q(1, 3), q(1, 2));
        let f = PLMap::initial(&x, &x).unwrap();
        assert!(matches!(f.next_v(0), Err(StretchError::NotOffending(0))));
    }

    #[test]
    fn images_of_words_are_lipschitz() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let (a, b) = random_pair(&mut rng);
        let f = PLMap::initial(&a, &b).unwrap();
        let s = f.lipschitz();
        for _ in 0..50 {
            let raw: Vec<i32> = (0..rng.gen_range(1..9)).map(|_| [1, -1, 2, -2][rng.gen_range(0..4)]).collect();
            let w = crate::freegroup::free_reduce(&raw, 2).unwrap();
            if w.is_identity() {
                continue;
            }
            assert!(b.translation_length(&w).unwrap() <= &s * a.translation_length(&w).unwrap());
        }
    }
}
