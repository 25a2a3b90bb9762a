//! Chirotopes of labeled point sequences and scene signatures.

use std::ops::Range;

use rand::Rng;
use thiserror::Error;

use crate::geom::{orient, Point, Polygon};
use crate::scalar::Coord;
use crate::visibility::{Scene, SceneError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderTypeError {
    #[error("collinear triples: {}", fmt_triples(.0))]
    Collinear(Vec<(usize, usize, usize)>),
    #[error("configurations have {0} and {1} points")]
    SizeMismatch(usize, usize),
    #[error("unlabeled canonical form is limited to {max} points, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("perturbed scene is invalid: {0}")]
    Scene(#[from] SceneError),
}

fn fmt_triples(t: &[(usize, usize, usize)]) -> String {
    t.iter()
        .map(|(i, j, k)| format!("({},{},{})", i + 1, j + 1, k + 1))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Orientation of every triple `i < j < k`, in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderType {
    n: usize,
    signs: Vec<i8>,
}

fn triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| (i, j, k))))
}

/// Position of `i < j < k` in the lexicographic list of triples of `0..n`.
fn triple_rank(n: usize, i: usize, j: usize, k: usize) -> usize {
    let c3 = |m: usize| if m < 3 { 0 } else { m * (m - 1) * (m - 2) / 6 };
    let c2 = |m: usize| if m < 2 { 0 } else { m * (m - 1) / 2 };
    // Triples starting below i, then pairs (j', k') with i < j' < j, then k.
    let before_i = c3(n) - c3(n - i);
    let before_j = c2(n - i - 1) - c2(n - j);
    before_i + before_j + (k - j - 1)
}

impl OrderType {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// No zero entries.
    pub fn is_uniform(&self) -> bool {
        self.signs.iter().all(|&s| s != 0)
    }

    /// Orientation of any triple of distinct labels, applying the sign of
    /// the sorting permutation.
    pub fn get(&self, i: usize, j: usize, k: usize) -> i8 {
        assert!(i != j && j != k && i != k, "labels must be distinct");
        let mut t = [i, j, k];
        let mut parity = 1i8;
        for a in 0..3 {
            for b in 0..2 - a {
                if t[b] > t[b + 1] {
                    t.swap(b, b + 1);
                    parity = -parity;
                }
            }
        }
        parity * self.signs[triple_rank(self.n, t[0], t[1], t[2])]
    }

    /// Relabels: entry for `(a, b, c)` of the result is `self.get(perm[a], perm[b], perm[c])`.
    pub fn relabel(&self, perm: &[usize]) -> OrderType {
        OrderType {
            n: self.n,
            signs: triples(self.n)
                .map(|(a, b, c)| self.get(perm[a], perm[b], perm[c]))
                .collect(),
        }
    }
}

/// Chirotope allowing zero entries for collinear triples.
pub fn chirotope_lenient<T: Coord>(points: &[Point<T>]) -> OrderType {
    OrderType {
        n: points.len(),
        signs: triples(points.len())
            .map(|(i, j, k)| orient(&points[i], &points[j], &points[k]).as_i8())
            .collect(),
    }
}

pub fn chirotope<T: Coord>(points: &[Point<T>]) -> Result<OrderType, OrderTypeError> {
    let ot = chirotope_lenient(points);
    let bad: Vec<_> = triples(points.len())
        .zip(&ot.signs)
        .filter(|(_, &s)| s == 0)
        .map(|(t, _)| t)
        .collect();
    if bad.is_empty() {
        Ok(ot)
    } else {
        Err(OrderTypeError::Collinear(bad))
    }
}

pub fn same_labeled_order_type<T: Coord>(
    p1: &[Point<T>],
    p2: &[Point<T>],
) -> Result<bool, OrderTypeError> {
    if p1.len() != p2.len() {
        return Err(OrderTypeError::SizeMismatch(p1.len(), p2.len()));
    }
    Ok(chirotope(p1)? == chirotope(p2)?)
}

pub const MAX_UNLABELED: usize = 8;

/// Lexicographically smallest sign vector over all relabelings.
pub fn canonical_unlabeled(ot: &OrderType) -> Result<Vec<i8>, OrderTypeError> {
    if ot.n > MAX_UNLABELED {
        return Err(OrderTypeError::TooLarge {
            n: ot.n,
            max: MAX_UNLABELED,
        });
    }
    let mut perm: Vec<usize> = (0..ot.n).collect();
    let mut best = ot.signs.clone();
    // Heap's algorithm.
    let mut c = vec![0usize; ot.n];
    let mut i = 0;
    while i < ot.n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            let cand = ot.relabel(&perm).signs;
            if cand < best {
                best = cand;
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(best)
}

/// Order type of the sequence: graph vertices, then each obstacle's
/// corners in boundary order, with the obstacle ranges recorded.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SceneSignature {
    pub order_type: OrderType,
    pub vertex_count: usize,
    pub obstacle_ranges: Vec<Range<usize>>,
}

impl SceneSignature {
    pub fn point_count(&self) -> usize {
        self.order_type.n
    }
}

pub fn scene_signature<T: Coord>(scene: &Scene<T>) -> SceneSignature {
    let (pts, _) = scene.joint_points();
    let mut ranges = Vec::with_capacity(scene.obstacles().len());
    let mut start = scene.n();
    for poly in scene.obstacles() {
        ranges.push(start..start + poly.len());
        start += poly.len();
    }
    SceneSignature {
        order_type: chirotope_lenient(&pts),
        vertex_count: scene.n(),
        obstacle_ranges: ranges,
    }
}

/// Whether moving point `idx` of `pts` to `to` keeps every orientation.
fn move_preserves<T: Coord>(pts: &[Point<T>], idx: usize, to: &Point<T>) -> bool {
    let n = pts.len();
    for a in 0..n {
        if a == idx {
            continue;
        }
        for b in a + 1..n {
            if b == idx {
                continue;
            }
            if orient(&pts[a], &pts[b], &pts[idx]) != orient(&pts[a], &pts[b], to) {
                return false;
            }
        }
    }
    true
}

/// Scales the configuration by `scale`, then applies `rounds` random
/// single-coordinate moves of size at most `max_step`, keeping only the
/// moves that leave the chirotope unchanged.
pub fn perturb_preserving<R: Rng>(
    points: &[Point<i64>],
    rng: &mut R,
    scale: i64,
    max_step: i64,
    rounds: usize,
) -> Vec<Point<i64>> {
    let mut pts: Vec<Point<i64>> = points.iter().map(|p| p.scale(&scale)).collect();
    if pts.is_empty() || max_step < 1 {
        return pts;
    }
    for _ in 0..rounds {
        let idx = rng.gen_range(0..pts.len());
        let mut step = rng.gen_range(1..=max_step);
        if rng.gen_bool(0.5) {
            step = -step;
        }
        let mut cand = pts[idx].clone();
        if rng.gen_bool(0.5) {
            cand.x += step;
        } else {
            cand.y += step;
        }
        if move_preserves(&pts, idx, &cand) {
            pts[idx] = cand;
        }
    }
    pts
}

/// A scene with the same signature as `scene`, built with
/// [`perturb_preserving`] on the joint point sequence.
pub fn perturb_scene<R: Rng>(
    scene: &Scene<i64>,
    rng: &mut R,
    scale: i64,
    max_step: i64,
    rounds: usize,
) -> Result<Scene<i64>, OrderTypeError> {
    let (joint, _) = scene.joint_points();
    let moved = perturb_preserving(&joint, rng, scale, max_step, rounds);
    let points = moved[..scene.n()].to_vec();
    let mut obstacles = Vec::with_capacity(scene.obstacles().len());
    let mut start = scene.n();
    for poly in scene.obstacles() {
        let corners = moved[start..start + poly.len()].to_vec();
        start += poly.len();
        obstacles.push(Polygon::new(corners).map_err(|_| SceneError::Invalid(vec![]))?);
    }
    Ok(Scene::lenient(points, obstacles)?)
}
