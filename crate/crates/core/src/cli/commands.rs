//! One function per subcommand, each returning a report.

use std::path::PathBuf;

use rand::SeedableRng;

use crate::folding::orbit::{check_subadditivity, linear_envelope, orbit_distances};
use crate::folding::{
    check_dr_geodesic, check_four_point, fast_fold, prepare_folding_setup, sample_path, speeds, systole_and_thin_test,
    FoldingPath, Strategy, TargetScale,
};
use crate::freegroup::{AutomorphismPair, Word};
use crate::graph::MarkedMetricGraph;
use crate::rational::{fmt_log, fmt_rational, ln, parse_rational, Rational};
use crate::stretch::{
    bounded_cancellation_bound, enumerate_candidates, lambda_r_normalized, optimize_pl_map, stretch_report,
    CancellationOptions, Piece, StretchError, Witness,
};

use super::doc::{read_graph, GraphDocument};
use super::report::{Report, Table};
use super::syntax::{format_word, parse_word};
use super::{CliError, MetricArg, StrategyArg};

fn load_pair(a: &str, b: &str) -> Result<(MarkedMetricGraph, MarkedMetricGraph), CliError> {
    let (x, y) = (read_graph(a)?, read_graph(b)?);
    if x.rank() != y.rank() {
        return Err(CliError::RankMismatch(x.rank(), y.rank()));
    }
    Ok((x, y))
}

fn parse_q(s: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|e| CliError::Invalid(e.to_string()))
}

fn parse_w(s: &str, rank: usize) -> Result<Word, CliError> {
    parse_word(s, rank).map_err(|e| CliError::Invalid(e.to_string()))
}

pub fn cmd_validate(file: &str) -> Result<Report, CliError> {
    let g = read_graph(file)?;
    let mut t = Table::new("graph", &["rank", "vertices", "edges", "volume", "valid"]);
    t.row([
        g.rank().to_string(),
        g.num_vertices().to_string(),
        g.num_edges().to_string(),
        fmt_rational(&g.volume()),
        "true".to_string(),
    ]);
    let mut r = Report::default();
    r.push(t);
    let mut c = Table::new("canonical", &["document"]);
    c.row([serde_json::to_string(&GraphDocument::from_graph(&g)).expect("documents serialize")]);
    r.push(c);
    Ok(r)
}

pub fn cmd_tlength(file: &str, words: &[String]) -> Result<Report, CliError> {
    let g = read_graph(file)?;
    let mut t = Table::new("translation lengths", &["word", "cyclic_core", "loop", "length"]);
    for s in words {
        let w = parse_w(s, g.rank())?;
        if w.is_identity() {
            return Err(CliError::Invalid(format!("`{s}` is the identity")));
        }
        let lp = g.loop_of_word(&w).map_err(|e| CliError::Internal(e.to_string()))?;
        let len = g.translation_length(&w).map_err(|e| CliError::Internal(e.to_string()))?;
        t.row([s.clone(), format_word(&w.cyclic_reduce().0), g.fmt_path(&lp), fmt_rational(&len)]);
    }
    let mut r = Report::default();
    r.push(t);
    Ok(r)
}

pub fn cmd_candidates(file: &str) -> Result<Report, CliError> {
    let g = read_graph(file)?;
    let mut t = Table::new("candidates", &["shape", "loop", "word", "length"]);
    for c in enumerate_candidates(&g) {
        let w = g.word_of_loop(&c.path).map_err(|e| CliError::Internal(e.to_string()))?;
        let len = g.loop_length(&c.path).map_err(|e| CliError::Internal(e.to_string()))?;
        t.row([c.shape.to_string(), g.fmt_path(&c.path), format_word(&w), fmt_rational(&len)]);
    }
    let mut r = Report::default();
    r.push(t);
    Ok(r)
}

fn witness_row(side: &str, g: &MarkedMetricGraph, w: &Witness) -> Vec<String> {
    vec![
        side.to_string(),
        w.candidate.shape.to_string(),
        g.fmt_path(&w.candidate.path),
        format_word(&w.word),
        fmt_rational(&w.source_length),
        fmt_rational(&w.target_length),
    ]
}

pub fn cmd_distance(a: &str, b: &str, metric: MetricArg, witness: bool) -> Result<Report, CliError> {
    let (x, y) = load_pair(a, b)?;
    let s = stretch_report(&x, &y)?;
    let mut t = Table::new("distance", &["lambda_R", "lambda_L", "lambda", "d", "d_R", "d_L"]);
    t.row([
        fmt_rational(&s.lambda_r_normalized),
        fmt_rational(&s.lambda_l_normalized),
        fmt_rational(&s.lambda),
        fmt_log(s.d),
        fmt_log(s.d_r),
        fmt_log(s.d_l),
    ]);
    let mut r = Report::default();
    r.push(t);
    let mut m = Table::new("metric", &["metric", "value"]);
    let (name, v) = match metric {
        MetricArg::D => ("d", s.d),
        MetricArg::DR => ("dR", s.d_r),
        MetricArg::DL => ("dL", s.d_l),
    };
    m.row([name.to_string(), fmt_log(v)]);
    r.push(m);
    if witness {
        let mut w = Table::new("witness", &["side", "shape", "loop", "word", "source_length", "target_length"]);
        w.row(witness_row("R", &x, &s.witness_r));
        w.row(witness_row("L", &y, &s.witness_l));
        r.push(w);
    }
    Ok(r)
}

fn fmt_piece(target: &MarkedMetricGraph, p: &Piece) -> String {
    format!("{}[{},{}]", target.edge(p.edge).name, fmt_rational(&p.from), fmt_rational(&p.to))
}

pub fn cmd_optmap(a: &str, b: &str, budget: usize) -> Result<Report, CliError> {
    let (x, y) = load_pair(a, b)?;
    let opt = optimize_pl_map(&x, &y, budget)?;
    let f = &opt.map;
    let mut s = Table::new("optimal map", &["lambda_R", "lipschitz", "moves", "tension_edges"]);
    let an = f.analysis();
    s.row([
        fmt_rational(&opt.lambda_r),
        fmt_rational(&an.s_f),
        opt.moves.to_string(),
        an.a_max.iter().map(|&e| x.edge(e).name.clone()).collect::<Vec<_>>().join(" "),
    ]);
    let mut e = Table::new("edges", &["edge", "length", "image", "image_length", "stretch"]);
    for i in 0..x.num_edges() {
        let img = &f.edge_image[i];
        let pieces: Vec<String> = img.pieces.iter().map(|p| fmt_piece(&y, p)).collect();
        e.row([
            x.edge(i).name.clone(),
            fmt_rational(&x.edge(i).length),
            if pieces.is_empty() { "-".to_string() } else { pieces.join(" ") },
            fmt_rational(&img.length()),
            fmt_rational(&f.edge_stretch(i)),
        ]);
    }
    let mut v = Table::new("vertices", &["vertex", "image"]);
    for i in 0..x.num_vertices() {
        v.row([x.vertex_name(i).to_string(), f.vertex_image[i].describe(&y)]);
    }
    let mut r = Report::default();
    r.push(s);
    r.push(e);
    r.push(v);
    let defects = f.stratification_defects();
    if defects.is_empty() {
        r.note("every stretch level satisfies the boundary condition");
    } else {
        let list: Vec<String> = defects.iter().map(|&(i, v)| format!("level {i} at {}", x.vertex_name(v))).collect();
        r.note(format!("boundary defects below the top level: {}", list.join(", ")));
    }
    Ok(r)
}

#[derive(Debug, Clone)]
pub struct FoldpathOptions {
    pub samples: usize,
    pub trace: Option<PathBuf>,
    pub strategy: StrategyArg,
    pub budget: usize,
    pub as_given: bool,
    pub eps: String,
}

pub const TRACE_COLUMNS: [&str; 11] = [
    "kind",
    "time",
    "volume",
    "systole",
    "thin",
    "local_speed",
    "toward_speed",
    "ratio",
    "d_R_to_target",
    "residual",
    "edges",
];

/// One trace row per time: `kind` is `event` or `sample`.
pub fn trace_table(path: &FoldingPath, times: &[(String, Rational)], eps: &Rational) -> Result<Table, CliError> {
    let a = &path.setup.source;
    let b = path.target();
    let total = lambda_r_normalized(a, b)?;
    let mut t = Table::new("trace", &TRACE_COLUMNS);
    for (kind, time) in times {
        let f = sample_path(path, time)?;
        let g = &f.source;
        let sys = systole_and_thin_test(g, eps)?;
        let (local, toward, ratio) = match speeds(path, time) {
            Ok(s) => (fmt_rational(&s.local), fmt_rational(&s.toward), fmt_rational(&s.ratio)),
            Err(crate::folding::FoldError::Finished(_)) => ("-".into(), "-".into(), "-".into()),
            Err(e) => return Err(e.into()),
        };
        let to_target = lambda_r_normalized(g, b)?;
        let residual = lambda_r_normalized(a, g)? * &to_target - &total;
        t.row([
            kind.clone(),
            fmt_rational(time),
            fmt_rational(&g.volume()),
            fmt_rational(&sys.systole),
            sys.is_thin.to_string(),
            local,
            toward,
            ratio,
            fmt_log(ln(&to_target)),
            fmt_rational(&residual),
            g.canonicalize().num_edges().to_string(),
        ]);
    }
    Ok(t)
}

/// Event times plus `samples` evenly spaced interior times, in increasing order.
pub fn trace_times(path: &FoldingPath, samples: usize) -> Vec<(String, Rational)> {
    let mut out: Vec<(String, Rational)> = path.events.iter().map(|e| ("event".to_string(), e.time.clone())).collect();
    let end = path.end_time().clone();
    for i in 1..=samples {
        let t = &end * Rational::from_integer(i.into()) / Rational::from_integer((samples + 1).into());
        if !path.times.contains(&t) {
            out.push(("sample".to_string(), t));
        }
    }
    out.sort_by(|x, y| x.1.cmp(&y.1));
    out
}

pub fn strategy_of(s: StrategyArg) -> Strategy {
    match s {
        StrategyArg::Simultaneous => Strategy::Simultaneous,
        StrategyArg::SingleVertex => Strategy::SingleVertex,
    }
}

pub fn cmd_foldpath(a: &str, b: &str, opts: &FoldpathOptions) -> Result<Report, CliError> {
    let (x, y) = load_pair(a, b)?;
    let eps = parse_q(&opts.eps)?;
    let scale = if opts.as_given { TargetScale::AsGiven } else { TargetScale::VolumeOne };
    let setup = prepare_folding_setup(&x, &y, scale, opts.budget)?;
    let path = fast_fold(&setup, strategy_of(opts.strategy))?;
    let mut summary = Table::new("path", &["lambda_R", "d_R", "end_time", "events", "moves", "witness"]);
    let d_r = lambda_r_normalized(&x, path.target())?;
    summary.row([
        fmt_rational(&setup.lambda_r),
        fmt_log(ln(&d_r)),
        fmt_rational(path.end_time()),
        path.events.len().to_string(),
        setup.moves.to_string(),
        format_word(&setup.witness.word),
    ]);
    let mut events = Table::new("events", &["time", "turns"]);
    for ev in &path.events {
        let g = path.snapshot(path.times.iter().position(|t| *t == ev.time).expect("event time") - 1);
        let turns: Vec<String> = ev
            .turns
            .iter()
            .map(|t| format!("{}:{}/{}", g.vertex_name(t.vertex), g.dart_name(t.first), g.dart_name(t.second)))
            .collect();
        events.row([fmt_rational(&ev.time), turns.join(" ")]);
    }
    let trace = trace_table(&path, &trace_times(&path, opts.samples), &eps)?;
    if let Some(p) = &opts.trace {
        let mut r = Report::default();
        r.push(trace.clone());
        std::fs::write(p, r.render(super::Format::Tsv)).map_err(|e| CliError::Invalid(format!("{}: {e}", p.display())))?;
    }
    let mut r = Report::default();
    r.push(summary);
    r.push(events);
    r.push(trace);
    Ok(r)
}

pub fn cmd_checkgeod(files: &[String]) -> Result<Report, CliError> {
    let points: Vec<MarkedMetricGraph> = files.iter().map(|f| read_graph(f)).collect::<Result<_, _>>()?;
    if let Some(p) = points.iter().find(|p| p.rank() != points[0].rank()) {
        return Err(CliError::RankMismatch(points[0].rank(), p.rank()));
    }
    let geo = check_dr_geodesic(&points)?;
    let n = points.len();
    let mut table = vec![vec![None; n]; n];
    let mut sym = vec![vec![None; n]; n];
    let mut pairs = Table::new("pairs", &["i", "j", "lambda_R", "d_R", "lambda", "d"]);
    for i in 0..n {
        for j in i..n {
            let r = stretch_report(&points[i], &points[j])?;
            if i < j {
                pairs.row([
                    i.to_string(),
                    j.to_string(),
                    fmt_rational(&r.lambda_r_normalized),
                    fmt_log(r.d_r),
                    fmt_rational(&r.lambda),
                    fmt_log(r.d),
                ]);
            }
            table[i][j] = Some(r.lambda_r_normalized);
            sym[i][j] = Some(r.lambda);
        }
    }
    let four = check_four_point(n, |i, j| table[i][j].clone().expect("ordered pair"));
    let four_d = check_four_point(n, |i, j| sym[i][j].clone().expect("ordered pair"));
    let mut v = Table::new("verdict", &["check", "holds", "detail"]);
    v.row([
        "d_R triangle equality".to_string(),
        geo.holds.to_string(),
        geo.failure.map_or("-".to_string(), |(x, y, z)| format!("{x},{y},{z}")),
    ]);
    v.row([
        "4-point (d_R)".to_string(),
        four.holds.to_string(),
        four.violation.map_or("-".to_string(), |q| q.map(|i| i.to_string()).join(",")),
    ]);
    v.row([
        "4-point (d)".to_string(),
        four_d.holds.to_string(),
        four_d.violation.map_or("-".to_string(), |q| q.map(|i| i.to_string()).join(",")),
    ]);
    let mut w = Table::new("witnesses", &["from", "to", "shape", "loop", "word"]);
    for (i, wit) in geo.witnesses.iter().enumerate() {
        w.row([
            i.to_string(),
            (i + 1).to_string(),
            wit.candidate.shape.to_string(),
            points[i].fmt_path(&wit.candidate.path),
            format_word(&wit.word),
        ]);
    }
    let mut r = Report::default();
    r.push(v);
    r.push(pairs);
    r.push(w);
    Ok(r)
}

fn parse_images(s: &str, rank: usize) -> Result<Vec<Word>, CliError> {
    let ws: Vec<Word> = s.split(',').map(|w| parse_w(w.trim(), rank)).collect::<Result<_, _>>()?;
    if ws.len() != rank {
        return Err(CliError::Invalid(format!("expected {rank} images, found {}", ws.len())));
    }
    Ok(ws)
}

/// Orbit rows plus envelope and subadditivity verdicts for positive `h`.
pub fn orbit_report(r: &MarkedMetricGraph, phi: &AutomorphismPair, from: i32, to: i32) -> Result<Report, CliError> {
    let hs: Vec<i32> = (from..=to).collect();
    let rows = orbit_distances(r, phi, &hs)?;
    let mut t = Table::new("orbit", &["h", "lambda_R", "lambda_L", "lambda", "d"]);
    for row in &rows {
        t.row([
            row.h.to_string(),
            fmt_rational(&row.lambda_r),
            fmt_rational(&row.lambda_l),
            fmt_rational(&row.lambda),
            fmt_log(row.d),
        ]);
    }
    let mut rep = Report::default();
    rep.push(t);
    let positive: Vec<(i32, f64)> = rows.iter().filter(|x| x.h > 0).map(|x| (x.h, x.d)).collect();
    let mut v = Table::new("verdict", &["check", "holds", "detail"]);
    if positive.len() >= 2 {
        let env = linear_envelope(&positive);
        v.row([
            "linear envelope".to_string(),
            env.holds.to_string(),
            format!("c1={} c2={} c={}", fmt_log(env.c1), fmt_log(env.c2), fmt_log(env.c)),
        ]);
    }
    let sub_hs: Vec<i32> = (1..=to.max(0)).collect();
    if !sub_hs.is_empty() {
        let sub = check_subadditivity(r, phi, &sub_hs, &[0, 1, 2])?;
        v.row(["subadditivity".to_string(), sub.holds.to_string(), format!("{} pairs", sub.rows.len())]);
    }
    if !v.rows.is_empty() {
        rep.push(v);
    }
    Ok(rep)
}

pub fn cmd_orbit(
    file: &str,
    phi: Option<&str>,
    inverse: Option<&str>,
    random: Option<usize>,
    seed: u64,
    from: i32,
    to: i32,
) -> Result<Report, CliError> {
    let g = read_graph(file)?;
    if from > to {
        return Err(CliError::Invalid("--from exceeds --to".into()));
    }
    let n = g.rank();
    let phi = match (phi, inverse, random) {
        (Some(f), Some(i), _) => AutomorphismPair::new(parse_images(f, n)?, parse_images(i, n)?),
        (_, _, Some(moves)) => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            AutomorphismPair::random(n, moves, &mut rng)
        }
        _ => return Err(CliError::Invalid("give --phi with --inverse, or --random".into())),
    };
    phi.validate().map_err(|e| CliError::Invalid(e.to_string()))?;
    let mut rep = orbit_report(&g, &phi, from, to)?;
    let mut a = Table::new("automorphism", &["generator", "image", "inverse_image"]);
    for i in 0..n {
        a.row([
            format_word(&Word::generator(n, i + 1)),
            format_word(&phi.forward[i]),
            format_word(&phi.inverse[i]),
        ]);
    }
    rep.tables.insert(0, a);
    Ok(rep)
}

pub fn cmd_bcc(a: &str, b: &str, budget: usize, pair_cap: u64, length_cap: Option<&str>) -> Result<Report, CliError> {
    let (x, y) = load_pair(a, b)?;
    let length_cap = length_cap.map(parse_q).transpose()?;
    let opt = optimize_pl_map(&x, &y, budget)?;
    let opts = CancellationOptions { pair_cap, length_cap };
    let rep = bounded_cancellation_bound(&opt.map, &opts).map_err(|e| match e {
        StretchError::PairCap { .. } => CliError::Budget(e.to_string()),
        other => other.into(),
    })?;
    let mut t = Table::new("bounded cancellation", &["lipschitz", "K", "bound", "search_length", "loops", "pairs"]);
    t.row([
        fmt_rational(&opt.lambda_r),
        fmt_rational(&rep.k),
        fmt_rational(&rep.bound),
        fmt_rational(&rep.search_length),
        rep.loops.to_string(),
        rep.pairs.to_string(),
    ]);
    let mut r = Report::default();
    r.push(t);
    Ok(r)
}
