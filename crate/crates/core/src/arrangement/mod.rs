//! Faces of straight-line drawings.
//!
//! Edges may cross; every crossing becomes a node of the subdivision and
//! concurrent crossings are merged. All coordinates, including crossings
//! and representative points, are exact rationals.

mod planar;
mod rational;

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use thiserror::Error;

use crate::geom::{
    closed_segments_intersect, is_general_position, on_closed_segment, GeneralPosition, Location,
    Point, Polygon,
};
use crate::graph::Graph;
use crate::scalar::Coord;
use crate::visibility::{visibility_graph, Scene};

pub use planar::NodeKind;
use planar::Planar;
use rational::QPoint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArrangementError {
    #[error("drawing has {points} points but the graph has {graph} vertices")]
    SizeMismatch { points: usize, graph: usize },
    #[error("drawing points are not in general position: {0:?}")]
    Degenerate(GeneralPosition),
}

/// Graph vertices at fixed points, each edge drawn as an open segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Drawing<T> {
    points: Vec<Point<T>>,
    graph: Graph,
}

impl<T: Coord> Drawing<T> {
    pub fn new(points: Vec<Point<T>>, graph: Graph) -> Result<Self, ArrangementError> {
        if points.len() != graph.n() {
            return Err(ArrangementError::SizeMismatch {
                points: points.len(),
                graph: graph.n(),
            });
        }
        let gp = is_general_position(&points);
        if !gp.is_ok() {
            return Err(ArrangementError::Degenerate(gp));
        }
        Ok(Drawing { points, graph })
    }

    pub fn points(&self) -> &[Point<T>] {
        &self.points
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }
}

/// One side of a piece of a drawn edge, traversed with the face on its left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Side {
    /// Drawn edge `(i, j)`, `i < j`.
    pub edge: (usize, usize),
    /// Piece index along the edge, counted from `i`, between consecutive
    /// crossings.
    pub piece: usize,
    /// Traversed from `i` towards `j`.
    pub forward: bool,
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub id: usize,
    pub bounded: bool,
    /// Boundary walks; for a bounded face the enclosing walk comes first,
    /// followed by the outer walks of the pieces of the drawing inside it.
    pub boundary: Vec<Vec<Side>>,
    /// Vertices without incident edges lying in the face.
    pub isolated_vertices: Vec<usize>,
    pub representative: Point<BigRational>,
}

impl Face {
    /// Number of segment sides bordering the face, each piece side counted
    /// once per traversal.
    pub fn complexity(&self) -> usize {
        self.boundary.iter().map(Vec::len).sum()
    }
}

#[derive(Debug, Clone)]
pub struct NodeInfo {
    pub position: Point<BigRational>,
    pub kind: NodeKind,
}

#[derive(Debug, Clone)]
enum Inner {
    Small(Planar<i128>),
    Big(Planar<BigInt>),
}

/// Coordinates up to this bound keep every predicate inside `i128`.
const SMALL_BOUND: i64 = 1 << 15;

#[derive(Debug, Clone)]
pub struct FaceSet {
    drawing: Drawing<BigInt>,
    inner: Inner,
    big: OnceLock<Planar<BigInt>>,
    faces: Vec<Face>,
    nodes: Vec<NodeInfo>,
    pieces: usize,
    components: usize,
}

fn fits_small<T: Coord>(p: &Point<T>) -> bool {
    let b = BigInt::from(SMALL_BOUND);
    p.x.big().abs() <= b && p.y.big().abs() <= b
}

fn ring_points<R: Coord, T: Coord>(pts: &[Point<T>]) -> Vec<Point<R>> {
    pts.iter()
        .map(|p| p.convert().expect("coordinate fits the ring"))
        .collect()
}

pub fn build_arrangement<T: Coord>(drawing: &Drawing<T>) -> FaceSet {
    let edges: Vec<(usize, usize)> = drawing.graph.edges().collect();
    let inner = if drawing.points.iter().all(fits_small) {
        Inner::Small(Planar::build(ring_points(&drawing.points), edges))
    } else {
        Inner::Big(Planar::build(ring_points(&drawing.points), edges))
    };
    let big_drawing = Drawing {
        points: drawing.points.iter().map(Point::to_big).collect(),
        graph: drawing.graph.clone(),
    };
    match inner {
        Inner::Small(pl) => assemble(big_drawing, pl, Inner::Small),
        Inner::Big(pl) => assemble(big_drawing, pl, Inner::Big),
    }
}

fn assemble<R: Coord>(
    drawing: Drawing<BigInt>,
    pl: Planar<R>,
    wrap: fn(Planar<R>) -> Inner,
) -> FaceSet {
    let side = |h: usize| {
        let he = pl.half_edges[h];
        Side {
            edge: pl.edges[he.edge],
            piece: he.piece,
            forward: he.forward,
            from: he.from,
            to: he.to,
        }
    };
    let faces = (0..pl.faces.len())
        .map(|f| {
            let topo = &pl.faces[f];
            let mut boundary: Vec<Vec<Side>> = Vec::new();
            if let Some(c) = topo.outer {
                boundary.push(pl.cycles[c].iter().map(|&h| side(h)).collect());
            }
            for &ci in &topo.holes {
                if let Some(o) = pl.components[ci].outer_cycle {
                    boundary.push(pl.cycles[o].iter().map(|&h| side(h)).collect());
                }
            }
            Face {
                id: f,
                bounded: topo.outer.is_some(),
                boundary,
                isolated_vertices: pl.isolated_vertices(f),
                representative: pl.representative(f),
            }
        })
        .collect();
    let nodes = pl
        .nodes
        .iter()
        .map(|nd| NodeInfo {
            position: nd.xy.to_rational(),
            kind: nd.kind.clone(),
        })
        .collect();
    FaceSet {
        drawing,
        pieces: pl.half_edges.len() / 2,
        components: pl.components.len(),
        faces,
        nodes,
        big: OnceLock::new(),
        inner: wrap(pl),
    }
}

fn big_planar_of(d: &Drawing<BigInt>) -> Planar<BigInt> {
    Planar::build(d.points.clone(), d.graph.edges().collect())
}

impl FaceSet {
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, id: usize) -> &Face {
        &self.faces[id]
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Drawing vertices plus crossing points.
    pub fn nodes(&self) -> &[NodeInfo] {
        &self.nodes
    }

    /// Number of edge pieces between consecutive nodes.
    pub fn piece_count(&self) -> usize {
        self.pieces
    }

    /// Connected pieces of the drawing, isolated vertices included.
    pub fn component_count(&self) -> usize {
        self.components
    }

    /// `V - E + F`; equals `1 + component_count()`.
    pub fn euler_characteristic(&self) -> i64 {
        self.nodes.len() as i64 - self.pieces as i64 + self.faces.len() as i64
    }

    pub fn drawing(&self) -> &Drawing<BigInt> {
        &self.drawing
    }

    pub fn unbounded_face(&self) -> usize {
        0
    }

    fn big(&self) -> &Planar<BigInt> {
        match &self.inner {
            Inner::Big(pl) => pl,
            Inner::Small(_) => self.big.get_or_init(|| big_planar_of(&self.drawing)),
        }
    }

    /// Whether `p` lies on a drawn vertex or edge.
    pub fn on_drawing<T: Coord>(&self, p: &Point<T>) -> bool {
        let p = p.to_big();
        let pts = &self.drawing.points;
        pts.contains(&p)
            || self
                .drawing
                .graph
                .edges()
                .any(|(i, j)| on_closed_segment(&p, &pts[i], &pts[j]))
    }

    /// Face containing the integer point `p`, or `None` if `p` is on the
    /// drawing.
    pub fn locate<T: Coord>(&self, p: &Point<T>) -> Option<usize> {
        if self.on_drawing(p) {
            return None;
        }
        Some(match &self.inner {
            Inner::Small(pl) if fits_small(p) => {
                pl.locate(&QPoint::from_int(&p.convert().expect("fits")))
            }
            _ => self.big().locate(&QPoint::from_int(&p.to_big())),
        })
    }

    /// Face containing the rational point `p`. `p` must not be on the
    /// drawing.
    pub fn locate_rational(&self, p: &Point<BigRational>) -> usize {
        let d = p.x.denom() * p.y.denom();
        let q = QPoint {
            x: p.x.numer() * p.y.denom(),
            y: p.y.numer() * p.x.denom(),
            d,
        };
        self.big().locate(&q)
    }

    /// Faces crossed by the open segment between vertices `u` and `v`.
    pub fn faces_along(&self, u: usize, v: usize) -> Vec<usize> {
        match &self.inner {
            Inner::Small(pl) => pl.faces_along(u, v),
            Inner::Big(pl) => pl.faces_along(u, v),
        }
    }

    /// Nodes on the enclosing walk of a bounded face; empty for the
    /// unbounded face.
    pub fn outer_nodes(&self, face: usize) -> Vec<usize> {
        if !self.faces[face].bounded {
            return Vec::new();
        }
        self.faces[face].boundary[0]
            .iter()
            .map(|s| s.from)
            .collect()
    }

    /// Whether the closure of a bounded face lies in the closed convex hull
    /// of `hull` (counterclockwise, as returned by `convex_hull`).
    pub fn face_within_hull<T: Coord>(&self, face: usize, hull: &[Point<T>]) -> bool {
        if !self.faces[face].bounded || hull.len() < 3 {
            return false;
        }
        let hull: Vec<Point<BigRational>> = hull
            .iter()
            .map(|p| {
                Point::new(
                    BigRational::from_integer(p.x.big()),
                    BigRational::from_integer(p.y.big()),
                )
            })
            .collect();
        self.outer_nodes(face).iter().all(|&v| {
            let q = &self.nodes[v].position;
            (0..hull.len()).all(|i| {
                let a = &hull[i];
                let b = &hull[(i + 1) % hull.len()];
                let c = (&b.x - &a.x) * (&q.y - &a.y) - (&b.y - &a.y) * (&q.x - &a.x);
                !c.is_negative()
            })
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceComplexity {
    pub per_face: Vec<usize>,
    pub max: usize,
}

pub fn face_complexity(fs: &FaceSet) -> FaceComplexity {
    let per_face: Vec<usize> = fs.faces.iter().map(Face::complexity).collect();
    let max = per_face.iter().copied().max().unwrap_or(0);
    FaceComplexity { per_face, max }
}

/// Faces of a drawing against the non-edges of its graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverInstance {
    /// Non-edges `(u, v)`, `u < v`, in lexicographic order.
    pub nonedges: Vec<(usize, usize)>,
    /// For each face, the indices into `nonedges` whose open segment
    /// passes through it, ascending.
    pub incidence: Vec<Vec<usize>>,
}

impl CoverInstance {
    pub fn face_count(&self) -> usize {
        self.incidence.len()
    }

    /// Faces incident to each non-edge.
    pub fn faces_of_nonedges(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.nonedges.len()];
        for (f, list) in self.incidence.iter().enumerate() {
            for &k in list {
                out[k].push(f);
            }
        }
        out
    }
}

/// `fs` must have been built from a drawing of `g`.
pub fn face_nonedge_incidence(fs: &FaceSet) -> CoverInstance {
    let nonedges = fs.drawing.graph.non_edges();
    let mut incidence = vec![Vec::new(); fs.face_count()];
    for (k, &(u, v)) in nonedges.iter().enumerate() {
        for f in fs.faces_along(u, v) {
            incidence[f].push(k);
        }
    }
    CoverInstance {
        nonedges,
        incidence,
    }
}

#[derive(Debug, Clone)]
pub struct ObstacleFaces {
    pub faces: FaceSet,
    /// Face holding each obstacle, or `None` if the obstacle meets the
    /// drawing.
    pub assignment: Vec<Option<usize>>,
}

impl ObstacleFaces {
    pub fn ok(&self) -> bool {
        self.assignment.iter().all(Option::is_some)
    }

    pub fn offending(&self) -> Vec<usize> {
        (0..self.assignment.len())
            .filter(|&k| self.assignment[k].is_none())
            .collect()
    }
}

/// Face of `fs` containing the closed polygon, if it avoids the drawing.
pub fn polygon_face<T: Coord>(fs: &FaceSet, poly: &Polygon<T>) -> Option<usize> {
    let poly = poly.map(Point::to_big);
    let pts = &fs.drawing.points;
    if pts.iter().any(|p| poly.locate(p) != Location::Outside) {
        return None;
    }
    for (i, j) in fs.drawing.graph.edges() {
        if poly
            .edges()
            .any(|(c, d)| closed_segments_intersect(&pts[i], &pts[j], c, d))
        {
            return None;
        }
    }
    // The closed polygon is connected and disjoint from the drawing.
    let faces: Vec<usize> = poly
        .vertices()
        .iter()
        .map(|c| fs.locate(c).expect("corner is off the drawing"))
        .collect();
    debug_assert!(faces.iter().all(|&f| f == faces[0]));
    Some(faces[0])
}

/// Assigns each obstacle to a face of the drawing of `g` on the scene's
/// points. The drawing points must be in general position.
pub fn obstacles_in_faces<T: Coord>(
    scene: &Scene<T>,
    g: &Graph,
) -> Result<ObstacleFaces, ArrangementError> {
    let drawing = Drawing::new(scene.points().to_vec(), g.clone())?;
    let faces = build_arrangement(&drawing);
    let assignment = scene
        .obstacles()
        .iter()
        .map(|poly| polygon_face(&faces, poly))
        .collect();
    Ok(ObstacleFaces { faces, assignment })
}

/// [`obstacles_in_faces`] for the scene's own visibility graph.
pub fn obstacle_face_check<T: Coord>(scene: &Scene<T>) -> Result<ObstacleFaces, ArrangementError> {
    obstacles_in_faces(scene, &visibility_graph(scene))
}

impl FaceSet {
    /// Sum of complexities over all faces equals twice the piece count.
    pub fn complexity_total(&self) -> usize {
        self.faces.iter().map(Face::complexity).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::visibility::tests::hexagon_scene;

    fn p(x: i64, y: i64) -> Point<i64> {
        Point::new(x, y)
    }

    fn square() -> Vec<Point<i64>> {
        vec![p(0, 0), p(4, 0), p(4, 4), p(0, 4)]
    }

    fn build(pts: Vec<Point<i64>>, g: Graph) -> FaceSet {
        build_arrangement(&Drawing::new(pts, g).unwrap())
    }

    #[test]
    fn forced_face_counts() {
        let tri = vec![p(0, 0), p(4, 0), p(0, 4)];
        let k3 = build(tri.clone(), Graph::complete(3));
        assert_eq!(k3.face_count(), 2);
        assert_eq!(
            face_complexity(&k3),
            FaceComplexity {
                per_face: vec![3, 3],
                max: 3
            }
        );
        assert_eq!(build(tri, Graph::empty(3)).face_count(), 1);
        let k4 = build(square(), Graph::complete(4));
        assert_eq!(k4.face_count(), 5);
        assert!(k4
            .faces()
            .iter()
            .filter(|f| f.bounded)
            .all(|f| f.complexity() == 3));
        assert_eq!(k4.euler_characteristic(), 2);
        assert_eq!(k4.complexity_total(), 2 * k4.piece_count());
    }

    #[test]
    fn degenerate_drawing_rejected() {
        let err = Drawing::new(vec![p(0, 0), p(1, 1), p(2, 2)], Graph::empty(3)).unwrap_err();
        assert!(matches!(err, ArrangementError::Degenerate(_)));
        assert!(Drawing::new(vec![p(0, 0)], Graph::empty(2)).is_err());
    }

    #[test]
    fn four_cycle_incidence() {
        let fs = build(square(), Graph::cycle(4));
        assert_eq!(fs.face_count(), 2);
        let ci = face_nonedge_incidence(&fs);
        assert_eq!(ci.nonedges, vec![(0, 2), (1, 3)]);
        let inner = fs.faces().iter().find(|f| f.bounded).unwrap().id;
        assert_eq!(ci.incidence[inner], vec![0, 1]);
        assert!(ci.incidence[fs.unbounded_face()].is_empty());
    }

    #[test]
    fn complete_and_empty_incidence() {
        let k4 = build(square(), Graph::complete(4));
        assert!(face_nonedge_incidence(&k4).nonedges.is_empty());
        let e = build(square(), Graph::empty(4));
        let ci = face_nonedge_incidence(&e);
        assert_eq!(ci.incidence, vec![vec![0, 1, 2, 3, 4, 5]]);
    }

    #[test]
    fn representatives_locate_to_their_faces() {
        let pts = vec![p(0, 0), p(9, 1), p(10, 8), p(2, 11), p(4, 4), p(7, 5)];
        let g = Graph::complete(6);
        let fs = build(pts, g);
        for f in fs.faces() {
            assert_eq!(fs.locate_rational(&f.representative), f.id);
        }
    }

    #[test]
    fn hexagon_obstacle_sits_in_one_face() {
        let scene = hexagon_scene();
        let check = obstacle_face_check(&scene).unwrap();
        assert!(check.ok());
        let f = check.assignment[0].unwrap();
        // Edges 1-2 and 1-3 form a path, so their face is the unbounded one.
        assert_eq!(f, check.faces.unbounded_face());
        let sides: Vec<(usize, usize)> = check.faces.face(f).boundary[0]
            .iter()
            .map(|s| s.edge)
            .collect();
        assert!(sides.contains(&(0, 1)) && sides.contains(&(0, 2)));
    }

    #[test]
    fn obstacle_on_an_edge_fails() {
        let hex = Polygon::new(vec![p(1, -1), p(3, -1), p(3, 1), p(1, 1)]).unwrap();
        let scene = Scene::new_unchecked(vec![p(0, 0), p(4, 0), p(2, 5)], vec![hex]);
        let check = obstacles_in_faces(&scene, &Graph::complete(3)).unwrap();
        assert!(!check.ok());
        assert_eq!(check.offending(), vec![0]);
        let empty = Scene::new(vec![p(0, 0), p(4, 0), p(2, 5)], vec![]).unwrap();
        assert!(obstacle_face_check(&empty).unwrap().ok());
    }

    #[test]
    fn large_coordinates_use_big_ring() {
        let k = 1i64 << 40;
        let pts = vec![p(0, 0), p(4 * k, 0), p(4 * k, 4 * k), p(0, 4 * k)];
        let fs = build(pts, Graph::complete(4));
        assert_eq!(fs.face_count(), 5);
        assert!(matches!(fs.inner, Inner::Big(_)));
        assert_eq!(fs.locate(&p(2 * k, k)), fs.locate(&p(2 * k, k / 2)));
        assert_eq!(fs.locate(&p(2 * k, 2 * k)), None);
    }
}
