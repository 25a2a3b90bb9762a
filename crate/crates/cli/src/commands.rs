use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigInt;
use num_rational::BigRational;

use obsnum::arrangement::{
    build_arrangement, face_complexity, face_nonedge_incidence, obstacle_face_check, Drawing,
    FaceSet, NodeKind,
};
use obsnum::bounds::{bounds_threshold, BoundsQuery};
use obsnum::cover::solve_cover;
use obsnum::geom::{is_general_position, Point};
use obsnum::order_type::{
    canonical_unlabeled, chirotope, chirotope_lenient, scene_signature, OrderType,
};
use obsnum::scene_file::SceneFile;
use obsnum::search::{
    default_group_size, edge_deletion_chain, lower_bound, min_obstacles_for_placement,
    obs_upper_bound, partition_lemma_check, partition_lemma_check_faces, random_graph_experiment,
    DeletionOrder, ObsResult, PartitionReport, SearchConfig, Source, Trials,
};
use obsnum::tangent::{
    decode_visibility, derive_pattern_table, encode_tangent, PatternTable, TangentError,
    TangentSequence,
};
use obsnum::visibility::{validate_representation, visibility_report, Scene};
use obsnum::{Coord, Graph};

use crate::{Command, Contradiction, SearchArgs};

pub(crate) struct Ctx {
    strict: bool,
    pub(crate) out: String,
    pub(crate) warnings: Vec<String>,
}

macro_rules! line {
    ($ctx:expr, $($arg:tt)*) => {{
        let _ = writeln!($ctx.out, $($arg)*);
    }};
}

/// Calls `$f::<i64>` when every coordinate of the file fits, else `$f::<BigInt>`.
macro_rules! in_ring {
    ($file:expr, $f:ident($($arg:expr),*)) => {
        if fits_i64(&$file) {
            $f::<i64>($($arg),*)
        } else {
            $f::<BigInt>($($arg),*)
        }
    };
}

impl Ctx {
    pub(crate) fn new(strict: bool) -> Self {
        Ctx {
            strict,
            out: String::new(),
            warnings: Vec::new(),
        }
    }

    fn scene<T: Coord>(&mut self, file: &SceneFile) -> Result<Scene<T>> {
        if self.strict {
            return Ok(file.to_strict_scene()?);
        }
        let scene: Scene<T> = file.to_scene()?;
        self.warnings
            .extend(scene.degeneracies().iter().map(|d| d.to_string()));
        Ok(scene)
    }
}

fn fits_i64(file: &SceneFile) -> bool {
    file.points_as::<i64>().is_ok() && file.polygons::<i64>().is_ok()
}

fn load(path: &str) -> Result<SceneFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {path}"))?;
    SceneFile::parse(&text).with_context(|| format!("invalid scene file {path}"))
}

fn contradiction(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(Contradiction(msg.into()))
}

fn pair(i: usize, j: usize) -> String {
    format!("{{{},{}}}", i + 1, j + 1)
}

fn pairs(list: &[(usize, usize)]) -> String {
    list.iter()
        .map(|&(i, j)| pair(i, j))
        .collect::<Vec<_>>()
        .join(" ")
}

fn ids(list: &[usize]) -> String {
    list.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn point<T: std::fmt::Display>(p: &Point<T>) -> String {
    format!("({}, {})", p.x, p.y)
}

fn signs(ot: &OrderType) -> String {
    ot.signs()
        .iter()
        .map(|&s| match s {
            1 => '+',
            -1 => '-',
            _ => '0',
        })
        .collect()
}

pub(crate) fn execute(ctx: &mut Ctx, cmd: &Command) -> Result<()> {
    match cmd {
        Command::Visibility { file, json } => {
            let f = load(file)?;
            in_ring!(f, visibility(ctx, &f, *json))
        }
        Command::Validate { file } => {
            let f = load(file)?;
            in_ring!(f, validate(ctx, &f))
        }
        Command::Encode { file, obstacle } => {
            let f = load(file)?;
            in_ring!(f, encode(ctx, &f, *obstacle))
        }
        Command::Decode {
            sequence,
            table,
            seed,
            samples,
        } => decode(ctx, sequence, table.as_deref(), *seed, *samples),
        Command::DeriveTable { seed, samples } => derive_table(ctx, *seed, *samples),
        Command::Ordertype { file } => {
            let f = load(file)?;
            in_ring!(f, ordertype(ctx, &f))
        }
        Command::Signature { file } => {
            let f = load(file)?;
            in_ring!(f, signature(ctx, &f))
        }
        Command::Faces { file } => {
            let f = load(file)?;
            let fs = in_ring!(f, arrangement_of(ctx, &f))?;
            faces(ctx, &fs)
        }
        Command::Incidence { file } => {
            let f = load(file)?;
            let fs = in_ring!(f, arrangement_of(ctx, &f))?;
            incidence(ctx, &fs);
            Ok(())
        }
        Command::Cover { file } => {
            let f = load(file)?;
            let fs = in_ring!(f, arrangement_of(ctx, &f))?;
            cover(ctx, &fs)
        }
        Command::ObsSearch { file, search } => obs_search(ctx, &load(file)?, search),
        Command::Chain {
            file,
            n,
            lexicographic,
            search,
        } => {
            let target = match (file, n) {
                (Some(path), _) => graph_of(ctx, &load(path)?)?,
                (None, Some(n)) => Graph::empty(*n),
                (None, None) => bail!("either a target file or --n is required"),
            };
            chain(ctx, &target, *lexicographic, search)
        }
        Command::PartitionCheck { file, k } => {
            let f = load(file)?;
            in_ring!(f, partition_check(ctx, &f, *k))
        }
        Command::RandomExp {
            n,
            trials,
            exhaustive,
            list,
            search,
        } => {
            let trials = if *exhaustive {
                Trials::Exhaustive
            } else {
                Trials::Random(
                    trials.ok_or_else(|| anyhow!("--trials or --exhaustive is required"))?,
                )
            };
            random_exp(ctx, *n, trials, *list, search)
        }
        Command::Bounds { h, s, c } => bounds(ctx, *h, *s, c.as_deref()),
    }
}

fn visibility<T: Coord>(ctx: &mut Ctx, file: &SceneFile, json: bool) -> Result<()> {
    let scene: Scene<T> = ctx.scene(file)?;
    let report = visibility_report(&scene);
    if json {
        ctx.out
            .push_str(&SceneFile::from_scene(&scene, Some(report.graph)).to_json());
        return Ok(());
    }
    line!(ctx, "vertices: {}", scene.n());
    line!(ctx, "obstacles: {}", scene.obstacles().len());
    line!(ctx, "edge_count: {}", report.graph.edge_count());
    line!(ctx, "edges: {}", report.graph);
    for ((i, j), by) in &report.blockers {
        let by: Vec<usize> = by.iter().map(|k| k + 1).collect();
        line!(ctx, "blocked {}: obstacles {}", pair(*i, *j), ids(&by));
    }
    Ok(())
}

fn validate<T: Coord>(ctx: &mut Ctx, file: &SceneFile) -> Result<()> {
    let scene: Scene<T> = ctx.scene(file)?;
    line!(ctx, "scene: ok");
    line!(ctx, "vertices: {}", scene.n());
    line!(ctx, "obstacles: {}", scene.obstacles().len());
    line!(ctx, "sides: {}", scene.total_sides());
    line!(ctx, "degeneracies: {}", scene.degeneracies().len());
    let convex = scene.obstacles().iter().filter(|p| p.is_convex()).count();
    line!(ctx, "convex_obstacles: {convex}");
    if is_general_position(scene.points()).is_ok() {
        let placed = obstacle_face_check(&scene)?;
        for (k, face) in placed.assignment.iter().enumerate() {
            match face {
                Some(f) => line!(ctx, "obstacle {}: face {f}", k + 1),
                None => line!(ctx, "obstacle {}: meets the drawing", k + 1),
            }
        }
        if !placed.ok() {
            let bad: Vec<usize> = placed.offending().iter().map(|k| k + 1).collect();
            return Err(contradiction(format!(
                "obstacles {} meet the drawing of their own visibility graph",
                ids(&bad)
            )));
        }
    } else {
        line!(
            ctx,
            "obstacle_faces: skipped, vertices not in general position"
        );
    }
    let Some(g) = &file.graph else {
        return Ok(());
    };
    let check = validate_representation(&scene, g)?;
    line!(
        ctx,
        "representation: {}",
        if check.is_valid() { "valid" } else { "invalid" }
    );
    line!(ctx, "wrongly_present: {}", pairs(&check.wrongly_present));
    line!(ctx, "wrongly_absent: {}", pairs(&check.wrongly_absent));
    if !check.is_valid() {
        bail!(
            "scene does not represent the graph: {} pairs visible but not adjacent, {} edges blocked",
            check.wrongly_present.len(),
            check.wrongly_absent.len()
        );
    }
    Ok(())
}

fn encode<T: Coord>(ctx: &mut Ctx, file: &SceneFile, obstacle: usize) -> Result<()> {
    let scene: Scene<T> = ctx.scene(file)?;
    let poly = obstacle
        .checked_sub(1)
        .and_then(|k| scene.obstacles().get(k))
        .ok_or_else(|| anyhow!("obstacle {obstacle} does not exist"))?;
    let seq = encode_tangent(scene.points(), poly)?;
    line!(ctx, "sequence: {seq}");
    Ok(())
}

fn decode(
    ctx: &mut Ctx,
    sequence: &str,
    table: Option<&str>,
    seed: Option<u64>,
    samples: u64,
) -> Result<()> {
    let seq: TangentSequence = sequence.parse()?;
    let table = match (table, seed) {
        (Some(path), _) => {
            let text =
                std::fs::read_to_string(path).with_context(|| format!("cannot read {path}"))?;
            PatternTable::from_text(&text)?
        }
        (None, Some(seed)) => learn_table(ctx, seed, samples)?,
        (None, None) => bail!("either --table or --seed is required"),
    };
    let g = decode_visibility(&seq, &table)?;
    line!(ctx, "vertices: {}", g.n());
    line!(ctx, "edge_count: {}", g.edge_count());
    line!(ctx, "edges: {g}");
    Ok(())
}

fn learn_table(ctx: &mut Ctx, seed: u64, samples: u64) -> Result<PatternTable> {
    match derive_pattern_table(samples, seed) {
        Err(TangentError::Contradiction {
            pattern,
            visible_sample,
            blocked_sample,
            witnesses,
        }) => {
            line!(ctx, "pattern: {pattern}");
            line!(ctx, "visible_sample: {visible_sample}");
            ctx.out
                .push_str(&SceneFile::from_scene(&witnesses.0, None).to_json());
            line!(ctx, "blocked_sample: {blocked_sample}");
            ctx.out
                .push_str(&SceneFile::from_scene(&witnesses.1, None).to_json());
            Err(contradiction(format!(
                "pattern {pattern} is both visible and blocked"
            )))
        }
        other => Ok(other?),
    }
}

fn derive_table(ctx: &mut Ctx, seed: u64, samples: u64) -> Result<()> {
    let table = learn_table(ctx, seed, samples)?;
    line!(ctx, "# seed {seed}");
    line!(ctx, "# samples {samples}");
    line!(ctx, "# patterns {}", table.len());
    line!(ctx, "# symmetric {}", table.is_symmetric());
    ctx.out.push_str(&table.to_text());
    if !table.is_symmetric() {
        return Err(contradiction(
            "table changes when the two vertex roles are swapped",
        ));
    }
    Ok(())
}

fn ordertype<T: Coord>(ctx: &mut Ctx, file: &SceneFile) -> Result<()> {
    let pts: Vec<Point<T>> = file.points_as()?;
    let ot = if ctx.strict {
        chirotope(&pts)?
    } else {
        let ot = chirotope_lenient(&pts);
        if !ot.is_uniform() {
            ctx.warnings
                .push("some point triples are collinear".to_string());
        }
        ot
    };
    line!(ctx, "points: {}", ot.n());
    line!(ctx, "uniform: {}", ot.is_uniform());
    line!(ctx, "signs: {}", signs(&ot));
    if let Ok(canon) = canonical_unlabeled(&ot) {
        let text: String = canon
            .iter()
            .map(|&s| if s > 0 { '+' } else { '-' })
            .collect();
        line!(ctx, "unlabeled: {text}");
    }
    Ok(())
}

fn signature<T: Coord>(ctx: &mut Ctx, file: &SceneFile) -> Result<()> {
    let scene: Scene<T> = ctx.scene(file)?;
    let sig = scene_signature(&scene);
    line!(ctx, "vertices: {}", sig.vertex_count);
    line!(ctx, "points: {}", sig.point_count());
    for (k, r) in sig.obstacle_ranges.iter().enumerate() {
        line!(ctx, "obstacle {}: points {}..{}", k + 1, r.start + 1, r.end);
    }
    line!(ctx, "uniform: {}", sig.order_type.is_uniform());
    line!(ctx, "signs: {}", signs(&sig.order_type));
    Ok(())
}

/// The file's graph, or the visibility graph of its scene.
fn graph_of(ctx: &mut Ctx, file: &SceneFile) -> Result<Graph> {
    if let Some(g) = &file.graph {
        return Ok(g.clone());
    }
    let scene: Scene<BigInt> = ctx.scene(file)?;
    Ok(visibility_report(&scene).graph)
}

fn arrangement_of<T: Coord>(ctx: &mut Ctx, file: &SceneFile) -> Result<FaceSet> {
    let g = graph_of(ctx, file)?;
    if file.points.is_empty() && g.n() > 0 {
        bail!("the drawing needs points");
    }
    let drawing = Drawing::new(file.points_as::<T>()?, g)?;
    Ok(build_arrangement(&drawing))
}

fn node_name(fs: &FaceSet, id: usize) -> String {
    match &fs.nodes()[id].kind {
        NodeKind::Vertex(v) => format!("v{}", v + 1),
        NodeKind::Crossing(_) => format!("x{}", id + 1 - fs.drawing().points().len()),
    }
}

fn rational(q: &BigRational) -> String {
    q.to_string()
}

fn faces(ctx: &mut Ctx, fs: &FaceSet) -> Result<()> {
    let v = fs.nodes().len();
    let e = fs.piece_count();
    let f = fs.face_count();
    let c = fs.component_count();
    line!(ctx, "nodes: {v}");
    line!(ctx, "pieces: {e}");
    line!(ctx, "faces: {f}");
    line!(ctx, "components: {c}");
    line!(ctx, "euler: {}", fs.euler_characteristic());
    let complexity = face_complexity(fs);
    line!(ctx, "max_complexity: {}", complexity.max);
    for (id, node) in fs.nodes().iter().enumerate() {
        if let NodeKind::Crossing(edges) = &node.kind {
            let edges: Vec<(usize, usize)> = edges
                .iter()
                .map(|&k| fs.drawing().graph().edges().nth(k).unwrap())
                .collect();
            line!(
                ctx,
                "node {}: crossing of {} at ({}, {})",
                node_name(fs, id),
                pairs(&edges),
                rational(&node.position.x),
                rational(&node.position.y)
            );
        }
    }
    for face in fs.faces() {
        let cycles: Vec<String> = face
            .boundary
            .iter()
            .map(|cycle| {
                let names: Vec<String> = cycle.iter().map(|s| node_name(fs, s.from)).collect();
                format!("[{}]", names.join(" "))
            })
            .collect();
        let isolated: Vec<String> = face
            .isolated_vertices
            .iter()
            .map(|v| format!("v{}", v + 1))
            .collect();
        line!(
            ctx,
            "face {}: {} complexity {} point ({}, {}) boundary {}{}",
            face.id,
            if face.bounded { "bounded" } else { "unbounded" },
            face.complexity(),
            rational(&face.representative.x),
            rational(&face.representative.y),
            if cycles.is_empty() {
                "-".to_string()
            } else {
                cycles.join(" ")
            },
            if isolated.is_empty() {
                String::new()
            } else {
                format!(" isolated {}", isolated.join(" "))
            }
        );
    }
    if fs.euler_characteristic() != 1 + c as i64 {
        return Err(contradiction(format!(
            "V - E + F = {} but there are {c} components",
            fs.euler_characteristic()
        )));
    }
    if fs.complexity_total() != 2 * e {
        return Err(contradiction(
            "face boundaries do not use every piece twice",
        ));
    }
    Ok(())
}

fn incidence(ctx: &mut Ctx, fs: &FaceSet) {
    let inst = face_nonedge_incidence(fs);
    line!(ctx, "faces: {}", inst.face_count());
    line!(ctx, "nonedges: {}", inst.nonedges.len());
    for (&(i, j), faces) in inst.nonedges.iter().zip(inst.faces_of_nonedges()) {
        line!(ctx, "nonedge {}: faces {}", pair(i, j), ids(&faces));
    }
}

fn cover(ctx: &mut Ctx, fs: &FaceSet) -> Result<()> {
    let inst = face_nonedge_incidence(fs);
    let sol = solve_cover(&inst).ok_or_else(|| contradiction("some non-edge meets no face"))?;
    line!(ctx, "nonedges: {}", inst.nonedges.len());
    line!(ctx, "cover_size: {}", sol.size());
    line!(ctx, "faces: {}", ids(&sol.faces));
    for &f in &sol.faces {
        let rep = &fs.face(f).representative;
        line!(
            ctx,
            "face {f}: point ({}, {})",
            rational(&rep.x),
            rational(&rep.y)
        );
    }
    Ok(())
}

fn config(args: &SearchArgs) -> SearchConfig {
    SearchConfig {
        grid: args.grid,
        sweep: args.sweep,
        ..SearchConfig::new(args.placements, args.seed)
    }
}

fn source(s: Source) -> String {
    match s {
        Source::Hint => "file".to_string(),
        Source::Sample(i) => format!("sample {i}"),
        Source::Sweep(i) => format!("sweep {i}"),
    }
}

fn report_result(ctx: &mut Ctx, g: &Graph, r: &ObsResult) -> Result<()> {
    line!(ctx, "upper_bound: {}", r.upper_bound);
    line!(ctx, "lower_bound: {}", lower_bound(g));
    line!(ctx, "certified: {}", r.certified_exact);
    line!(ctx, "source: {}", source(r.source));
    let pts: Vec<String> = r.witness.points.iter().map(point).collect();
    line!(ctx, "witness_points: {}", pts.join(" "));
    line!(ctx, "witness_faces: {}", ids(&r.witness.faces));
    if !r.replays(g) {
        return Err(contradiction("the witness does not replay"));
    }
    Ok(())
}

fn obs_search(ctx: &mut Ctx, file: &SceneFile, args: &SearchArgs) -> Result<()> {
    let g = graph_of(ctx, file)?;
    let mut cfg = config(args);
    if !file.points.is_empty() {
        let pts: Vec<Point<i64>> = file
            .points_as()
            .context("points given as a starting placement must fit in 64 bits")?;
        if is_general_position(&pts).is_ok() {
            cfg.hint = Some(pts);
        } else {
            ctx.warnings
                .push("points are not in general position; ignoring them".to_string());
        }
    }
    let r = obs_upper_bound(&g, &cfg)?;
    line!(ctx, "vertices: {}", g.n());
    line!(ctx, "edge_count: {}", g.edge_count());
    report_result(ctx, &g, &r)
}

fn chain(ctx: &mut Ctx, target: &Graph, lexicographic: bool, args: &SearchArgs) -> Result<()> {
    let order = if lexicographic {
        DeletionOrder::Lexicographic
    } else {
        DeletionOrder::Seeded(args.seed)
    };
    let record = edge_deletion_chain(target, order, &config(args))?;
    line!(ctx, "vertices: {}", target.n());
    line!(ctx, "steps: {}", record.steps.len());
    for (t, step) in record.steps.iter().enumerate() {
        let deleted = step.deleted.map_or("-".to_string(), |(i, j)| pair(i, j));
        line!(
            ctx,
            "step {t}: deleted {deleted} edges {} bound {} certified {}",
            step.graph.edge_count(),
            step.result.upper_bound,
            step.result.certified_exact
        );
    }
    for (b, t) in &record.first_reach {
        line!(ctx, "first_reach {b}: step {t}");
    }
    let monotone = record.steps_up_by_at_most_one();
    line!(ctx, "steps_up_by_at_most_one: {monotone}");
    if !monotone {
        return Err(contradiction(
            "a single deletion raised the bound by more than one",
        ));
    }
    for step in &record.steps {
        if !step.result.replays(&step.graph) {
            return Err(contradiction("a chain witness does not replay"));
        }
    }
    Ok(())
}

fn report_partition(ctx: &mut Ctx, r: &PartitionReport) -> Result<()> {
    line!(ctx, "vertices: {}", r.n);
    line!(ctx, "group_size: {}", r.k);
    line!(ctx, "groups: {}", r.groups.len());
    line!(ctx, "obstacles: {}", r.obstacle_count);
    for (grp, flagged) in r.groups.iter().zip(&r.flagged) {
        let labels: Vec<usize> = grp.iter().map(|v| v + 1).collect();
        line!(
            ctx,
            "group {}: {}",
            ids(&labels),
            if *flagged { "empty" } else { "holds obstacle" }
        );
    }
    line!(ctx, "empty_groups: {}", r.flagged_count());
    line!(ctx, "count_holds: {}", r.count_holds());
    line!(ctx, "lemma_applies: {}", r.lemma_applies());
    if r.lemma_applies() {
        line!(ctx, "lemma_conclusion: {}", r.lemma_conclusion());
    }
    if !r.count_holds() {
        return Err(contradiction(
            "fewer empty groups than groups minus obstacles",
        ));
    }
    if r.lemma_applies() && !r.lemma_conclusion() {
        return Err(contradiction("too few empty groups for the obstacle count"));
    }
    Ok(())
}

/// Obstacles of the scene, or, for a graph drawn without obstacles, the
/// faces of a smallest cover.
fn partition_check<T: Coord>(ctx: &mut Ctx, file: &SceneFile, k: Option<usize>) -> Result<()> {
    let scene: Scene<T> = ctx.scene(file)?;
    let k = k.unwrap_or_else(|| default_group_size(scene.n()).max(1));
    let report = match (&file.graph, scene.obstacles().is_empty()) {
        (Some(g), true) => {
            let pc = min_obstacles_for_placement(scene.points(), g)?;
            line!(ctx, "mode: faces");
            partition_lemma_check_faces(&pc.faces, &pc.chosen, k)?
        }
        _ => {
            line!(ctx, "mode: obstacles");
            partition_lemma_check(&scene, k)?
        }
    };
    report_partition(ctx, &report)
}

fn random_exp(
    ctx: &mut Ctx,
    n: usize,
    trials: Trials,
    list: bool,
    args: &SearchArgs,
) -> Result<()> {
    let report = random_graph_experiment(n, trials, &config(args))?;
    line!(ctx, "vertices: {n}");
    line!(ctx, "trials: {}", report.trials());
    line!(
        ctx,
        "certified_at_most_one: {}",
        report.certified_at_most_one()
    );
    line!(ctx, "unresolved: {}", report.unresolved());
    line!(ctx, "fraction_certified: {}", report.fraction_certified());
    line!(ctx, "fraction_unresolved: {}", report.fraction_unresolved());
    if list {
        for (i, o) in report.outcomes.iter().enumerate() {
            line!(
                ctx,
                "graph {i}: bound {} certified {} edges {}",
                o.result.upper_bound,
                o.result.certified_exact,
                o.graph
            );
        }
    }
    Ok(())
}

fn bounds(ctx: &mut Ctx, h: Option<u64>, s: Option<u64>, c: Option<&str>) -> Result<()> {
    let query = match (h, s) {
        (Some(h), _) => BoundsQuery::Obstacles { h },
        (None, Some(s)) => {
            let c: BigRational = match c {
                Some(text) => text
                    .trim()
                    .parse()
                    .map_err(|_| anyhow!("--c: expected an integer or p/q, got '{text}'"))?,
                None => BigRational::from_integer(1.into()),
            };
            BoundsQuery::Sides { s, c }
        }
        (None, None) => bail!("either --h or --s is required"),
    };
    let n = bounds_threshold(&query)?;
    match &query {
        BoundsQuery::Obstacles { h } => line!(ctx, "mode: obstacles {h}"),
        BoundsQuery::Sides { s, c } => line!(ctx, "mode: sides {s} for the supplied constant {c}"),
    }
    line!(ctx, "threshold: {n}");
    Ok(())
}
