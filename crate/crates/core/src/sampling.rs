//! Seeded random generators for placements and scenes.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geom::{convex_hull, extends_general_position, Location, Point, Polygon};
use crate::visibility::Scene;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no valid configuration found after {0} attempts")]
pub struct SamplingError(pub usize);

const MAX_ATTEMPTS: usize = 10_000;

/// Independent, reproducible stream `index` of the generator seeded by `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `n` points on the grid `[0, grid)^2` in general position.
pub fn random_placement<R: Rng>(
    rng: &mut R,
    n: usize,
    grid: i64,
) -> Result<Vec<Point<i64>>, SamplingError> {
    let mut pts: Vec<Point<i64>> = Vec::with_capacity(n);
    let mut attempts = 0;
    while pts.len() < n {
        attempts += 1;
        if attempts > MAX_ATTEMPTS {
            return Err(SamplingError(MAX_ATTEMPTS));
        }
        let p = Point::new(rng.gen_range(0..grid), rng.gen_range(0..grid));
        if extends_general_position(&pts, &p) {
            pts.push(p);
        }
    }
    Ok(pts)
}

/// Strictly convex polygon: the hull of a few random points in
/// `[-half, half]^2`.
pub fn random_convex_polygon<R: Rng>(
    rng: &mut R,
    half: i64,
    max_corners: usize,
) -> Result<Polygon<i64>, SamplingError> {
    for _ in 0..MAX_ATTEMPTS {
        let k = rng.gen_range(3..=max_corners.max(3));
        let pts: Vec<_> = (0..k)
            .map(|_| Point::new(rng.gen_range(-half..=half), rng.gen_range(-half..=half)))
            .collect();
        let hull = convex_hull(&pts);
        if hull.len() >= 3 {
            if let Ok(poly) = Polygon::new(hull) {
                return Ok(poly);
            }
        }
    }
    Err(SamplingError(MAX_ATTEMPTS))
}

/// One convex obstacle near the origin and `n` vertices around it, all
/// coordinates within `[-coord_max, coord_max]`, jointly in general
/// position.
pub fn random_convex_scene<R: Rng>(
    rng: &mut R,
    n: usize,
    coord_max: i64,
) -> Result<Scene<i64>, SamplingError> {
    let poly = random_convex_polygon(rng, coord_max * 3 / 10, 8)?;
    let mut joint: Vec<Point<i64>> = poly.vertices().to_vec();
    let mut pts = Vec::with_capacity(n);
    let mut attempts = 0;
    while pts.len() < n {
        attempts += 1;
        if attempts > MAX_ATTEMPTS {
            return Err(SamplingError(MAX_ATTEMPTS));
        }
        let p = Point::new(
            rng.gen_range(-coord_max..=coord_max),
            rng.gen_range(-coord_max..=coord_max),
        );
        if poly.locate(&p) == Location::Outside && extends_general_position(&joint, &p) {
            joint.push(p.clone());
            pts.push(p);
        }
    }
    Scene::new(pts, vec![poly]).map_err(|_| SamplingError(attempts))
}
