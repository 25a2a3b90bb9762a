//! Upper bounds on the obstacle number from sampled placements.
//!
//! For a fixed placement, obstacles can be taken to be faces of the drawing
//! of the graph, and the fewest faces meeting every non-edge is an exact
//! set cover. The bound is the minimum over placements.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::arrangement::{
    build_arrangement, face_nonedge_incidence, ArrangementError, CoverInstance, Drawing, FaceSet,
};
use crate::cover::{is_cover, solve_cover};
use crate::geom::{convex_hull, in_closed_hull, is_general_position, Point};
use crate::graph::{all_pairs, Graph};
use crate::sampling::{random_placement, stream_rng, SamplingError};
use crate::scalar::Coord;
use crate::visibility::Scene;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error(transparent)]
    Drawing(#[from] ArrangementError),
    #[error(transparent)]
    Sampling(#[from] SamplingError),
    #[error("at least one placement is required")]
    NoPlacements,
    #[error("grid {grid} is smaller than n^2 = {min}")]
    GridTooSmall { grid: i64, min: i64 },
    #[error("trials must be positive")]
    NoTrials,
    #[error("deletion order must list each missing edge of the target once")]
    BadDeletionOrder,
    #[error("exhaustive mode supports at most {max} vertices, got {n}")]
    TooLargeForExhaustive { n: usize, max: usize },
}

#[derive(Debug, Clone)]
pub struct PlacementCover {
    pub faces: FaceSet,
    pub instance: CoverInstance,
    /// Chosen face ids, ascending; lexicographically smallest optimum.
    pub chosen: Vec<usize>,
}

impl PlacementCover {
    pub fn size(&self) -> usize {
        self.chosen.len()
    }
}

/// Fewest faces of the drawing of `g` on `points` that together meet every
/// non-edge.
pub fn min_obstacles_for_placement<T: Coord>(
    points: &[Point<T>],
    g: &Graph,
) -> Result<PlacementCover, SearchError> {
    let drawing = Drawing::new(points.to_vec(), g.clone())?;
    let faces = build_arrangement(&drawing);
    let instance = face_nonedge_incidence(&faces);
    let chosen = solve_cover(&instance)
        .expect("in general position every non-edge meets a face")
        .faces;
    Ok(PlacementCover {
        faces,
        instance,
        chosen,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub points: Vec<Point<i64>>,
    pub faces: Vec<usize>,
}

/// Where the winning placement came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Source {
    Hint,
    Sample(usize),
    Sweep(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObsResult {
    pub upper_bound: usize,
    pub witness: Witness,
    pub source: Source,
    pub certified_exact: bool,
}

impl ObsResult {
    /// Rebuilds the drawing on the witness placement and checks that the
    /// witness faces meet every non-edge and that no smaller set does.
    pub fn replays(&self, g: &Graph) -> bool {
        let Ok(pc) = min_obstacles_for_placement(&self.witness.points, g) else {
            return false;
        };
        self.witness.faces.len() == self.upper_bound
            && self
                .witness
                .faces
                .iter()
                .all(|&f| f < pc.faces.face_count())
            && is_cover(&pc.instance, &self.witness.faces)
            && pc.size() == self.upper_bound
    }
}

/// Trivial lower bound: 0 for complete graphs, 1 otherwise.
pub fn lower_bound(g: &Graph) -> usize {
    usize::from(!g.is_complete())
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub placements: usize,
    /// Side of the sampling grid; defaults to `100 n^2`.
    pub grid: Option<i64>,
    pub seed: u64,
    /// Placement tried before the samples.
    pub hint: Option<Vec<Point<i64>>>,
    /// For `n <= 5`, also try every labeled general-position placement on
    /// a `sweep x sweep` grid.
    pub sweep: Option<i64>,
}

impl SearchConfig {
    pub fn new(placements: usize, seed: u64) -> Self {
        SearchConfig {
            placements,
            grid: None,
            seed,
            hint: None,
            sweep: None,
        }
    }
}

pub fn default_grid(n: usize) -> i64 {
    (100 * n * n).max(1) as i64
}

const CHUNK: usize = 32;
pub const MAX_SWEEP_N: usize = 5;

type Candidate = (usize, Source, Vec<Point<i64>>, Vec<usize>);

fn evaluate(g: &Graph, src: Source, pts: Vec<Point<i64>>) -> Result<Candidate, SearchError> {
    let pc = min_obstacles_for_placement(&pts, g)?;
    Ok((pc.size(), src, pts, pc.chosen))
}

fn better(a: Candidate, b: Candidate) -> Candidate {
    if (b.0, b.1) < (a.0, a.1) {
        b
    } else {
        a
    }
}

/// Runs the jobs chunk by chunk in parallel, stopping after a chunk once
/// the trivial lower bound is met. The result does not depend on thread
/// scheduling.
fn run_jobs(
    g: &Graph,
    jobs: impl Iterator<Item = (Source, Result<Vec<Point<i64>>, SearchError>)>,
    mut best: Option<Candidate>,
) -> Result<Option<Candidate>, SearchError> {
    let floor = lower_bound(g);
    let jobs: Vec<_> = jobs.collect();
    for chunk in jobs.chunks(CHUNK) {
        if best.as_ref().is_some_and(|b| b.0 <= floor) {
            break;
        }
        let results: Vec<Result<Candidate, SearchError>> = chunk
            .par_iter()
            .map(|(src, pts)| evaluate(g, *src, pts.clone()?))
            .collect();
        for r in results {
            let c = r?;
            best = Some(match best {
                None => c,
                Some(b) => better(b, c),
            });
        }
    }
    Ok(best)
}

/// Every labeled general-position placement of `n` points on the
/// `side x side` grid, in lexicographic order of grid indices.
fn sweep_placements(n: usize, side: i64) -> Vec<Vec<Point<i64>>> {
    let cells: Vec<Point<i64>> = (0..side)
        .flat_map(|x| (0..side).map(move |y| Point::new(x, y)))
        .collect();
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    fn rec(cells: &[Point<i64>], n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<Point<i64>>>) {
        if cur.len() == n {
            let pts: Vec<Point<i64>> = cur.iter().map(|&i| cells[i].clone()).collect();
            if is_general_position(&pts).is_ok() {
                out.push(pts);
            }
            return;
        }
        for i in 0..cells.len() {
            if !cur.contains(&i) {
                cur.push(i);
                rec(cells, n, cur, out);
                cur.pop();
            }
        }
    }
    rec(&cells, n, &mut cur, &mut out);
    out
}

/// Minimum over the hint, `placements` seeded samples and the optional
/// sweep. Ties go to the earliest source in that order.
pub fn obs_upper_bound(g: &Graph, cfg: &SearchConfig) -> Result<ObsResult, SearchError> {
    let n = g.n();
    if cfg.placements == 0 && cfg.hint.is_none() {
        return Err(SearchError::NoPlacements);
    }
    let grid = cfg.grid.unwrap_or_else(|| default_grid(n));
    let min = (n * n) as i64;
    if grid < min {
        return Err(SearchError::GridTooSmall { grid, min });
    }
    let mut best = None;
    if let Some(h) = &cfg.hint {
        best = Some(evaluate(g, Source::Hint, h.clone())?);
    }
    let seed = cfg.seed;
    let samples = (0..cfg.placements).map(|i| {
        (
            Source::Sample(i),
            random_placement(&mut stream_rng(seed, i as u64), n, grid).map_err(SearchError::from),
        )
    });
    best = run_jobs(g, samples, best)?;
    if let Some(side) = cfg.sweep {
        if n <= MAX_SWEEP_N {
            let sweep = sweep_placements(n, side)
                .into_iter()
                .enumerate()
                .map(|(i, p)| (Source::Sweep(i), Ok(p)));
            best = run_jobs(g, sweep, best)?;
        }
    }
    let (upper_bound, source, points, faces) = best.expect("at least one placement was evaluated");
    Ok(ObsResult {
        upper_bound,
        certified_exact: upper_bound <= 1 && upper_bound == lower_bound(g),
        source,
        witness: Witness { points, faces },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeletionOrder {
    Lexicographic,
    Seeded(u64),
    /// Must list every non-edge of the target exactly once.
    Explicit(Vec<(usize, usize)>),
}

#[derive(Debug, Clone)]
pub struct ChainStep {
    /// Edge removed to reach this graph; `None` for the complete graph.
    pub deleted: Option<(usize, usize)>,
    pub graph: Graph,
    pub result: ObsResult,
}

#[derive(Debug, Clone)]
pub struct ChainRecord {
    pub steps: Vec<ChainStep>,
    /// First step at which each bound value appears.
    pub first_reach: BTreeMap<usize, usize>,
}

impl ChainRecord {
    pub fn bounds(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.result.upper_bound).collect()
    }

    /// No step raises the bound by more than one.
    pub fn steps_up_by_at_most_one(&self) -> bool {
        self.bounds().windows(2).all(|w| w[1] <= w[0] + 1)
    }
}

/// Deletes the edges of `K_n` missing from `target` one at a time,
/// bounding each intermediate graph. Each search first retries the
/// previous witness placement, which already gives at most one more
/// obstacle than before.
pub fn edge_deletion_chain(
    target: &Graph,
    order: DeletionOrder,
    cfg: &SearchConfig,
) -> Result<ChainRecord, SearchError> {
    let n = target.n();
    let mut missing: Vec<(usize, usize)> = target.non_edges();
    match order {
        DeletionOrder::Lexicographic => {}
        DeletionOrder::Seeded(s) => missing.shuffle(&mut stream_rng(s, u64::MAX)),
        DeletionOrder::Explicit(list) => {
            let mut given: Vec<(usize, usize)> =
                list.iter().map(|&(i, j)| (i.min(j), i.max(j))).collect();
            given.sort_unstable();
            if given != missing {
                return Err(SearchError::BadDeletionOrder);
            }
            missing = list.iter().map(|&(i, j)| (i.min(j), i.max(j))).collect();
        }
    }
    let mut graph = Graph::complete(n);
    let mut steps: Vec<ChainStep> = Vec::with_capacity(missing.len() + 1);
    let mut first_reach = BTreeMap::new();
    let mut hint = cfg.hint.clone();
    for (t, deleted) in std::iter::once(None)
        .chain(missing.into_iter().map(Some))
        .enumerate()
    {
        if let Some((i, j)) = deleted {
            graph.remove(i, j);
        }
        let step_cfg = SearchConfig {
            seed: cfg.seed.wrapping_add(t as u64),
            hint: hint.clone(),
            ..cfg.clone()
        };
        let result = obs_upper_bound(&graph, &step_cfg)?;
        first_reach.entry(result.upper_bound).or_insert(t);
        hint = Some(result.witness.points.clone());
        steps.push(ChainStep {
            deleted,
            graph: graph.clone(),
            result,
        });
    }
    Ok(ChainRecord { steps, first_reach })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("group size must be at least 1")]
    ZeroGroupSize,
    #[error("vertices {} and {} share an x-coordinate", .0 + 1, .1 + 1)]
    SharedX(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionReport {
    pub k: usize,
    pub n: usize,
    /// Full groups of `k` vertices in increasing x order.
    pub groups: Vec<Vec<usize>>,
    /// Group hull contains no obstacle.
    pub flagged: Vec<bool>,
    pub obstacle_count: usize,
}

impl PartitionReport {
    pub fn flagged_count(&self) -> usize {
        self.flagged.iter().filter(|&&f| f).count()
    }

    /// `flagged >= floor(n / k) - m`, true for every representation since
    /// group hulls lie in disjoint vertical slabs.
    pub fn count_holds(&self) -> bool {
        self.flagged_count() + self.obstacle_count >= self.groups.len()
    }

    /// `m < n / (2k)`.
    pub fn lemma_applies(&self) -> bool {
        2 * self.k * self.obstacle_count < self.n
    }

    /// `flagged > floor(n / k) - n / (2k)`, compared exactly.
    pub fn lemma_conclusion(&self) -> bool {
        2 * self.k * self.flagged_count() + self.n > 2 * self.k * self.groups.len()
    }
}

fn groups_by_x<T: Coord>(points: &[Point<T>], k: usize) -> Result<Vec<Vec<usize>>, PartitionError> {
    if k == 0 {
        return Err(PartitionError::ZeroGroupSize);
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].x.cmp(&points[b].x).then(a.cmp(&b)));
    for w in order.windows(2) {
        if points[w[0]].x == points[w[1]].x {
            let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
            return Err(PartitionError::SharedX(a, b));
        }
    }
    Ok(order
        .chunks(k)
        .filter(|c| c.len() == k)
        .map(<[usize]>::to_vec)
        .collect())
}

/// Splits the vertices into groups of `k` by x-coordinate and flags the
/// groups whose closed convex hull contains no obstacle.
pub fn partition_lemma_check<T: Coord>(
    scene: &Scene<T>,
    k: usize,
) -> Result<PartitionReport, PartitionError> {
    let groups = groups_by_x(scene.points(), k)?;
    let flagged = groups
        .iter()
        .map(|grp| {
            let pts: Vec<Point<T>> = grp.iter().map(|&i| scene.points()[i].clone()).collect();
            let hull = convex_hull(&pts);
            !scene
                .obstacles()
                .iter()
                .any(|poly| poly.vertices().iter().all(|c| in_closed_hull(&hull, c)))
        })
        .collect();
    Ok(PartitionReport {
        k,
        n: scene.n(),
        groups,
        flagged,
        obstacle_count: scene.obstacles().len(),
    })
}

/// The same check for a face-level witness: a group is flagged when no
/// chosen face lies in its closed hull. The unbounded face lies in none.
pub fn partition_lemma_check_faces(
    faces: &FaceSet,
    chosen: &[usize],
    k: usize,
) -> Result<PartitionReport, PartitionError> {
    let points = faces.drawing().points();
    let groups = groups_by_x(points, k)?;
    let flagged = groups
        .iter()
        .map(|grp| {
            let pts: Vec<Point<BigInt>> = grp.iter().map(|&i| points[i].clone()).collect();
            let hull = convex_hull(&pts);
            !chosen.iter().any(|&f| faces.face_within_hull(f, &hull))
        })
        .collect();
    Ok(PartitionReport {
        k,
        n: points.len(),
        groups,
        flagged,
        obstacle_count: chosen.len(),
    })
}

/// Largest `k` with `2^k <= n^5`, i.e. `floor(5 log2 n)`.
pub fn default_group_size(n: usize) -> usize {
    let target = BigInt::from(n).pow(5);
    let mut k = 0;
    while BigInt::from(1) << (k + 1) <= target {
        k += 1;
    }
    k
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphOutcome {
    pub graph: Graph,
    pub result: ObsResult,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentReport {
    pub n: usize,
    pub outcomes: Vec<GraphOutcome>,
}

impl ExperimentReport {
    pub fn trials(&self) -> usize {
        self.outcomes.len()
    }

    /// Graphs certified to have obstacle number at most one.
    pub fn certified_at_most_one(&self) -> usize {
        self.outcomes
            .iter()
            .filter(|o| o.result.certified_exact && o.result.upper_bound <= 1)
            .count()
    }

    pub fn unresolved(&self) -> usize {
        self.trials() - self.certified_at_most_one()
    }

    pub fn fraction_certified(&self) -> BigRational {
        BigRational::new(self.certified_at_most_one().into(), self.trials().into())
    }

    pub fn fraction_unresolved(&self) -> BigRational {
        BigRational::new(self.unresolved().into(), self.trials().into())
    }
}

pub const MAX_EXHAUSTIVE_N: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trials {
    Random(usize),
    /// Every labeled graph on `n` vertices.
    Exhaustive,
}

/// Bounds random graphs with independent edges of probability 1/2, or all
/// labeled graphs. Each graph gets its own seeded search.
pub fn random_graph_experiment(
    n: usize,
    trials: Trials,
    cfg: &SearchConfig,
) -> Result<ExperimentReport, SearchError> {
    let pairs: Vec<(usize, usize)> = all_pairs(n).collect();
    let graphs: Vec<Graph> = match trials {
        Trials::Random(0) => return Err(SearchError::NoTrials),
        Trials::Random(t) => (0..t)
            .map(|i| {
                let mut rng = stream_rng(cfg.seed, i as u64);
                let edges: Vec<_> = pairs
                    .iter()
                    .copied()
                    .filter(|_| rng.gen_bool(0.5))
                    .collect();
                Graph::from_edges(n, edges).expect("pairs are valid")
            })
            .collect(),
        Trials::Exhaustive => {
            if n > MAX_EXHAUSTIVE_N {
                return Err(SearchError::TooLargeForExhaustive {
                    n,
                    max: MAX_EXHAUSTIVE_N,
                });
            }
            (0..1u128 << pairs.len())
                .map(|m| Graph::from_mask(n, m))
                .collect()
        }
    };
    let outcomes = graphs
        .into_par_iter()
        .enumerate()
        .map(|(i, graph)| {
            let c = SearchConfig {
                seed: cfg.seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
                ..cfg.clone()
            };
            obs_upper_bound(&graph, &c).map(|result| GraphOutcome { graph, result })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ExperimentReport { n, outcomes })
}
