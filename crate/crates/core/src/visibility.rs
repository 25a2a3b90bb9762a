//! Scenes (points plus polygonal obstacles) and their visibility graphs.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::geom::{
    closed_segments_intersect, is_general_position, segment_intersects_polygon, Location, Point,
    Polygon, Segment,
};
use crate::graph::Graph;
use crate::scalar::Coord;

/// A point of a scene: either a graph vertex or an obstacle corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointRef {
    Vertex(usize),
    Corner { obstacle: usize, index: usize },
}

impl fmt::Display for PointRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointRef::Vertex(i) => write!(f, "vertex {}", i + 1),
            PointRef::Corner { obstacle, index } => {
                write!(f, "obstacle {} corner {}", obstacle + 1, index + 1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Duplicate(PointRef, PointRef),
    Collinear(PointRef, PointRef, PointRef),
    VertexInObstacle { vertex: usize, obstacle: usize },
    ObstaclesOverlap(usize, usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Duplicate(a, b) => write!(f, "general position: {a} coincides with {b}"),
            Violation::Collinear(a, b, c) => {
                write!(f, "general position: {a}, {b}, {c} are collinear")
            }
            Violation::VertexInObstacle { vertex, obstacle } => write!(
                f,
                "vertex {} lies inside or on obstacle {}",
                vertex + 1,
                obstacle + 1
            ),
            Violation::ObstaclesOverlap(a, b) => {
                write!(f, "obstacles {} and {} overlap", a + 1, b + 1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SceneError {
    #[error("invalid scene: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("graph has {graph} vertices but the scene has {scene} points")]
    SizeMismatch { graph: usize, scene: usize },
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Graph vertices placed in the plane together with polygonal obstacles.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scene<T> {
    points: Vec<Point<T>>,
    obstacles: Vec<Polygon<T>>,
}

impl<T: Coord> Scene<T> {
    /// Strict constructor: rejects every violation, including collinear
    /// triples among vertices and obstacle corners.
    pub fn new(points: Vec<Point<T>>, obstacles: Vec<Polygon<T>>) -> Result<Self, SceneError> {
        let scene = Scene { points, obstacles };
        let violations = scene.violations();
        if violations.is_empty() {
            Ok(scene)
        } else {
            Err(SceneError::Invalid(violations))
        }
    }

    /// Accepts collinear triples (see [`Scene::degeneracies`]) but still
    /// rejects coincident points, vertices in obstacles and overlapping
    /// obstacles. Visibility stays well defined; order types may contain
    /// zero entries.
    pub fn lenient(points: Vec<Point<T>>, obstacles: Vec<Polygon<T>>) -> Result<Self, SceneError> {
        let scene = Scene { points, obstacles };
        let hard: Vec<_> = scene
            .violations()
            .into_iter()
            .filter(|v| !matches!(v, Violation::Collinear(..)))
            .collect();
        if hard.is_empty() {
            Ok(scene)
        } else {
            Err(SceneError::Invalid(hard))
        }
    }

    /// Collinear triples of the joint point set.
    pub fn degeneracies(&self) -> Vec<Violation> {
        self.violations()
            .into_iter()
            .filter(|v| matches!(v, Violation::Collinear(..)))
            .collect()
    }

    pub fn is_general_position(&self) -> bool {
        let (pts, _) = self.joint_points();
        is_general_position(&pts).is_ok()
    }

    /// Skips validation. Only for building deliberately invalid inputs.
    pub fn new_unchecked(points: Vec<Point<T>>, obstacles: Vec<Polygon<T>>) -> Self {
        Scene { points, obstacles }
    }

    pub fn points(&self) -> &[Point<T>] {
        &self.points
    }

    pub fn obstacles(&self) -> &[Polygon<T>] {
        &self.obstacles
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    /// Total number of obstacle sides.
    pub fn total_sides(&self) -> usize {
        self.obstacles.iter().map(Polygon::len).sum()
    }

    /// Vertices first, then every obstacle's corners in boundary order.
    pub fn joint_points(&self) -> (Vec<Point<T>>, Vec<PointRef>) {
        let mut pts = self.points.clone();
        let mut refs: Vec<PointRef> = (0..self.points.len()).map(PointRef::Vertex).collect();
        for (o, poly) in self.obstacles.iter().enumerate() {
            for (index, v) in poly.vertices().iter().enumerate() {
                pts.push(v.clone());
                refs.push(PointRef::Corner { obstacle: o, index });
            }
        }
        (pts, refs)
    }

    pub fn violations(&self) -> Vec<Violation> {
        let (pts, refs) = self.joint_points();
        let gp = is_general_position(&pts);
        let mut out: Vec<Violation> = gp
            .duplicates
            .iter()
            .map(|&(i, j)| Violation::Duplicate(refs[i], refs[j]))
            .collect();
        out.extend(
            gp.collinear
                .iter()
                .map(|&(i, j, k)| Violation::Collinear(refs[i], refs[j], refs[k])),
        );
        for (v, p) in self.points.iter().enumerate() {
            for (o, poly) in self.obstacles.iter().enumerate() {
                if poly.locate(p) != Location::Outside {
                    out.push(Violation::VertexInObstacle {
                        vertex: v,
                        obstacle: o,
                    });
                }
            }
        }
        for a in 0..self.obstacles.len() {
            for b in a + 1..self.obstacles.len() {
                if polygons_overlap(&self.obstacles[a], &self.obstacles[b]) {
                    out.push(Violation::ObstaclesOverlap(a, b));
                }
            }
        }
        out
    }

    pub fn without_obstacle(&self, k: usize) -> Scene<T> {
        let mut obstacles = self.obstacles.clone();
        obstacles.remove(k);
        Scene {
            points: self.points.clone(),
            obstacles,
        }
    }

    /// Applies `f` to every point; fails if the image is not a valid scene.
    pub fn try_map<U: Coord>(
        &self,
        f: impl Fn(&Point<T>) -> Point<U>,
    ) -> Result<Scene<U>, SceneError> {
        let points = self.points.iter().map(&f).collect();
        let mut obstacles = Vec::with_capacity(self.obstacles.len());
        for poly in &self.obstacles {
            match poly.try_map(&f) {
                Ok(p) => obstacles.push(p),
                Err(_) => return Err(SceneError::Invalid(vec![])),
            }
        }
        Scene::new(points, obstacles)
    }

    pub fn convert<U: Coord>(&self) -> Option<Scene<U>> {
        let points = self
            .points
            .iter()
            .map(|p| p.convert())
            .collect::<Option<Vec<_>>>()?;
        let mut obstacles = Vec::with_capacity(self.obstacles.len());
        for poly in &self.obstacles {
            let vs = poly
                .vertices()
                .iter()
                .map(|p| p.convert())
                .collect::<Option<Vec<_>>>()?;
            obstacles.push(Polygon::new(vs).ok()?);
        }
        Some(Scene { points, obstacles })
    }
}

fn polygons_overlap<T: Coord>(a: &Polygon<T>, b: &Polygon<T>) -> bool {
    for (p, q) in a.edges() {
        for (r, s) in b.edges() {
            if closed_segments_intersect(p, q, r, s) {
                return true;
            }
        }
    }
    b.locate(&a.vertices()[0]) != Location::Outside
        || a.locate(&b.vertices()[0]) != Location::Outside
}

/// Visibility graph plus, for every missing pair, the obstacles that meet
/// its segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VisibilityReport {
    pub graph: Graph,
    pub blockers: BTreeMap<(usize, usize), Vec<usize>>,
}

fn boxes_disjoint<T: Coord>(a: &Point<T>, b: &Point<T>, poly: &Polygon<T>) -> bool {
    let vs = poly.vertices();
    let min_x = vs.iter().map(|p| &p.x).min().unwrap();
    let max_x = vs.iter().map(|p| &p.x).max().unwrap();
    let min_y = vs.iter().map(|p| &p.y).min().unwrap();
    let max_y = vs.iter().map(|p| &p.y).max().unwrap();
    (a.x < *min_x && b.x < *min_x)
        || (a.x > *max_x && b.x > *max_x)
        || (a.y < *min_y && b.y < *min_y)
        || (a.y > *max_y && b.y > *max_y)
}

/// Obstacles (by index) meeting the open segment between vertices `i`, `j`.
pub fn blocking_obstacles<T: Coord>(scene: &Scene<T>, i: usize, j: usize) -> Vec<usize> {
    let (a, b) = (&scene.points[i], &scene.points[j]);
    let seg = Segment::open(a.clone(), b.clone()).expect("scene points are distinct");
    scene
        .obstacles
        .iter()
        .enumerate()
        .filter(|(_, poly)| {
            !boxes_disjoint(a, b, poly)
                && segment_intersects_polygon(&seg, poly)
                    .expect("scene vertices lie outside obstacles")
        })
        .map(|(k, _)| k)
        .collect()
}

pub fn visibility_report<T: Coord>(scene: &Scene<T>) -> VisibilityReport {
    let n = scene.n();
    let mut graph = Graph::empty(n);
    let mut blockers = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let blocking = blocking_obstacles(scene, i, j);
            if blocking.is_empty() {
                graph.insert(i, j);
            } else {
                blockers.insert((i, j), blocking);
            }
        }
    }
    VisibilityReport { graph, blockers }
}

pub fn visibility_graph<T: Coord>(scene: &Scene<T>) -> Graph {
    visibility_report(scene).graph
}

/// Differences between a scene's visibility graph and a target graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentationCheck {
    /// Visible in the scene but not edges of the target.
    pub wrongly_present: Vec<(usize, usize)>,
    /// Edges of the target that some obstacle blocks.
    pub wrongly_absent: Vec<(usize, usize)>,
}

impl RepresentationCheck {
    pub fn is_valid(&self) -> bool {
        self.wrongly_present.is_empty() && self.wrongly_absent.is_empty()
    }
}

/// Checks, under the identity labelling, whether `scene` represents `g`.
pub fn validate_representation<T: Coord>(
    scene: &Scene<T>,
    g: &Graph,
) -> Result<RepresentationCheck, SceneError> {
    if g.n() != scene.n() {
        return Err(SceneError::SizeMismatch {
            graph: g.n(),
            scene: scene.n(),
        });
    }
    let vis = visibility_graph(scene);
    let mut check = RepresentationCheck {
        wrongly_present: vec![],
        wrongly_absent: vec![],
    };
    for (i, j) in crate::graph::all_pairs(g.n()) {
        match (vis.has_edge(i, j), g.has_edge(i, j)) {
            (true, false) => check.wrongly_present.push((i, j)),
            (false, true) => check.wrongly_absent.push((i, j)),
            _ => {}
        }
    }
    Ok(check)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point<i64> {
        Point::new(x, y)
    }

    pub(crate) fn hexagon_scene() -> Scene<i64> {
        let hex =
            Polygon::from_boundary(vec![p(0, 0), p(2, 2), p(5, 2), p(7, 0), p(5, -2), p(2, -2)])
                .unwrap();
        Scene::lenient(vec![p(-2, 0), p(4, 6), p(6, -5)], vec![hex]).unwrap()
    }

    #[test]
    fn hexagon_scene_is_degenerate_but_lenient() {
        let hex =
            Polygon::from_boundary(vec![p(0, 0), p(2, 2), p(5, 2), p(7, 0), p(5, -2), p(2, -2)])
                .unwrap();
        let err = Scene::new(vec![p(-2, 0), p(4, 6), p(6, -5)], vec![hex]).unwrap_err();
        assert!(matches!(err, SceneError::Invalid(ref v) if v.len() == 1));
        assert_eq!(hexagon_scene().degeneracies().len(), 1);
        assert!(!hexagon_scene().is_general_position());
    }

    #[test]
    fn hexagon_visibility() {
        let s = hexagon_scene();
        let r = visibility_report(&s);
        assert_eq!(r.graph.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2)]);
        assert_eq!(r.blockers.get(&(1, 2)), Some(&vec![0]));
    }

    #[test]
    fn no_obstacles_is_complete() {
        let s = Scene::new(vec![p(0, 0), p(5, 1), p(2, 7), p(-3, 4)], vec![]).unwrap();
        assert!(visibility_graph(&s).is_complete());
    }

    #[test]
    fn square_blocks_one_diagonal() {
        // Convex quadrilateral; a small square sits on the diagonal 0-2 only.
        let sq = Polygon::new(vec![p(3, 4), p(4, 3), p(5, 4), p(4, 5)]).unwrap();
        let s = Scene::new(vec![p(0, 0), p(20, 1), p(21, 23), p(-1, 20)], vec![sq]).unwrap();
        let g = visibility_graph(&s);
        let mut expected = Graph::complete(4);
        expected.remove(0, 2);
        assert_eq!(g, expected);
    }

    #[test]
    fn validation_examples() {
        let s = hexagon_scene();
        let g = Graph::from_edges(3, [(0, 1), (0, 2)]).unwrap();
        assert!(validate_representation(&s, &g).unwrap().is_valid());
        let k3 = validate_representation(&s, &Graph::complete(3)).unwrap();
        assert!(!k3.is_valid());
        assert_eq!(k3.wrongly_absent, vec![(1, 2)]);
        assert!(k3.wrongly_present.is_empty());
        let open = Scene::new(vec![p(0, 0), p(1, 0), p(0, 1)], vec![]).unwrap();
        assert!(validate_representation(&open, &Graph::complete(3))
            .unwrap()
            .is_valid());
        assert!(matches!(
            validate_representation(&open, &Graph::complete(4)),
            Err(SceneError::SizeMismatch { .. })
        ));
    }

    #[test]
    fn invalid_scenes_list_violations() {
        let tri = Polygon::new(vec![p(0, 0), p(10, 0), p(0, 10)]).unwrap();
        let err = Scene::new(vec![p(1, 1), p(20, 20), p(30, 31)], vec![tri.clone()]).unwrap_err();
        let SceneError::Invalid(v) = err else {
            panic!()
        };
        assert!(v.contains(&Violation::VertexInObstacle {
            vertex: 0,
            obstacle: 0
        }));
        // (20,20), (30,31) and nothing else collinear; but (0,0),(20,20) and (1,1) are.
        assert!(v.iter().any(|x| matches!(x, Violation::Collinear(..))));

        let tri2 = Polygon::new(vec![p(3, 2), p(13, 3), p(4, 12)]).unwrap();
        let err = Scene::new(vec![p(50, 51)], vec![tri, tri2]).unwrap_err();
        let SceneError::Invalid(v) = err else {
            panic!()
        };
        assert!(v.contains(&Violation::ObstaclesOverlap(0, 1)));
    }
}
