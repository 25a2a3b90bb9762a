//! Exact planar primitives: orientation, segment and polygon predicates,
//! general-position checks.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::scalar::Coord;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("segment endpoints coincide")]
    DegenerateSegment,
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon has zero signed area")]
    ZeroArea,
    #[error("polygon is not counterclockwise")]
    Clockwise,
    #[error("polygon edges {0} and {1} intersect")]
    NotSimple(usize, usize),
    #[error("polygon is not convex")]
    NotConvex,
    #[error("segment endpoint {0} lies inside or on the obstacle")]
    EndpointInObstacle(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T> Point<T> {
    pub const fn new(x: T, y: T) -> Self {
        Point { x, y }
    }
}

impl<T: Coord> Point<T> {
    pub fn translate(&self, dx: &T, dy: &T) -> Self {
        Point::new(self.x.clone() + dx.clone(), self.y.clone() + dy.clone())
    }

    pub fn scale(&self, k: &T) -> Self {
        Point::new(self.x.clone() * k.clone(), self.y.clone() * k.clone())
    }

    /// Quarter turn counterclockwise about the origin.
    pub fn rotate90(&self) -> Self {
        Point::new(-self.y.clone(), self.x.clone())
    }

    pub fn to_big(&self) -> Point<BigInt> {
        Point::new(self.x.big(), self.y.big())
    }

    pub fn convert<U: Coord>(&self) -> Option<Point<U>> {
        Some(Point::new(
            U::from_bigint(&self.x.big())?,
            U::from_bigint(&self.y.big())?,
        ))
    }
}

impl<T: fmt::Display> fmt::Display for Point<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Clockwise,
    Collinear,
    CounterClockwise,
}

impl Orientation {
    pub fn as_i8(self) -> i8 {
        match self {
            Orientation::Clockwise => -1,
            Orientation::Collinear => 0,
            Orientation::CounterClockwise => 1,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Orientation::Clockwise => Orientation::CounterClockwise,
            Orientation::Collinear => Orientation::Collinear,
            Orientation::CounterClockwise => Orientation::Clockwise,
        }
    }

    fn from_ordering(o: Ordering) -> Self {
        match o {
            Ordering::Less => Orientation::Clockwise,
            Ordering::Equal => Orientation::Collinear,
            Ordering::Greater => Orientation::CounterClockwise,
        }
    }
}

/// Sign of `(b - a) x (c - a)`.
pub fn orient<T: Coord>(a: &Point<T>, b: &Point<T>, c: &Point<T>) -> Orientation {
    Orientation::from_ordering(T::det_sign(&a.x, &a.y, &b.x, &b.y, &c.x, &c.y))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Openness {
    Open,
    Closed,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Segment<T> {
    pub a: Point<T>,
    pub b: Point<T>,
    pub openness: Openness,
}

impl<T: Coord> Segment<T> {
    pub fn new(a: Point<T>, b: Point<T>, openness: Openness) -> Result<Self, GeomError> {
        if a == b {
            return Err(GeomError::DegenerateSegment);
        }
        Ok(Segment { a, b, openness })
    }

    pub fn open(a: Point<T>, b: Point<T>) -> Result<Self, GeomError> {
        Self::new(a, b, Openness::Open)
    }
}

/// `p` lies on the closed segment `ab` (assuming the three are collinear).
fn within_box<T: Coord>(p: &Point<T>, a: &Point<T>, b: &Point<T>) -> bool {
    let (lx, hx) = if a.x <= b.x {
        (&a.x, &b.x)
    } else {
        (&b.x, &a.x)
    };
    let (ly, hy) = if a.y <= b.y {
        (&a.y, &b.y)
    } else {
        (&b.y, &a.y)
    };
    lx <= &p.x && &p.x <= hx && ly <= &p.y && &p.y <= hy
}

pub fn on_closed_segment<T: Coord>(p: &Point<T>, a: &Point<T>, b: &Point<T>) -> bool {
    orient(a, b, p) == Orientation::Collinear && within_box(p, a, b)
}

/// Closed segments `ab` and `cd` share at least one point.
pub fn closed_segments_intersect<T: Coord>(
    a: &Point<T>,
    b: &Point<T>,
    c: &Point<T>,
    d: &Point<T>,
) -> bool {
    let o1 = orient(a, b, c).as_i8();
    let o2 = orient(a, b, d).as_i8();
    let o3 = orient(c, d, a).as_i8();
    let o4 = orient(c, d, b).as_i8();
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && within_box(c, a, b))
        || (o2 == 0 && within_box(d, a, b))
        || (o3 == 0 && within_box(a, c, d))
        || (o4 == 0 && within_box(b, c, d))
}

/// Open segments `ab` and `cd` cross at a single interior point of both.
pub fn segments_cross_properly<T: Coord>(
    a: &Point<T>,
    b: &Point<T>,
    c: &Point<T>,
    d: &Point<T>,
) -> bool {
    let o1 = orient(a, b, c).as_i8();
    let o2 = orient(a, b, d).as_i8();
    let o3 = orient(c, d, a).as_i8();
    let o4 = orient(c, d, b).as_i8();
    o1 * o2 < 0 && o3 * o4 < 0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

/// A simple polygon with counterclockwise vertex order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polygon<T> {
    vertices: Vec<Point<T>>,
}

impl<T: Coord> Polygon<T> {
    /// Strict constructor: vertices must already be counterclockwise.
    pub fn new(vertices: Vec<Point<T>>) -> Result<Self, GeomError> {
        let sign = signed_area2_sign(&vertices)?;
        if sign == Ordering::Less {
            return Err(GeomError::Clockwise);
        }
        let poly = Polygon { vertices };
        poly.check_simple()?;
        Ok(poly)
    }

    /// Accepts either orientation; clockwise input is reversed, keeping the
    /// first vertex in place.
    pub fn from_boundary(mut vertices: Vec<Point<T>>) -> Result<Self, GeomError> {
        if signed_area2_sign(&vertices)? == Ordering::Less {
            vertices[1..].reverse();
        }
        Self::new(vertices)
    }

    pub fn vertices(&self) -> &[Point<T>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1` (cyclically).
    pub fn edge(&self, i: usize) -> (&Point<T>, &Point<T>) {
        let n = self.vertices.len();
        (&self.vertices[i], &self.vertices[(i + 1) % n])
    }

    pub fn edges(&self) -> impl Iterator<Item = (&Point<T>, &Point<T>)> + '_ {
        (0..self.vertices.len()).map(move |i| self.edge(i))
    }

    pub fn is_convex(&self) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| {
            orient(
                &self.vertices[i],
                &self.vertices[(i + 1) % n],
                &self.vertices[(i + 2) % n],
            ) == Orientation::CounterClockwise
        })
    }

    pub fn locate(&self, p: &Point<T>) -> Location {
        let mut inside = false;
        for (a, b) in self.edges() {
            if on_closed_segment(p, a, b) {
                return Location::Boundary;
            }
            if (a.y > p.y) != (b.y > p.y) {
                let o = orient(a, b, p);
                let crosses_right = if b.y > a.y {
                    o == Orientation::CounterClockwise
                } else {
                    o == Orientation::Clockwise
                };
                if crosses_right {
                    inside = !inside;
                }
            }
        }
        if inside {
            Location::Inside
        } else {
            Location::Outside
        }
    }

    pub fn map<U: Coord>(&self, f: impl Fn(&Point<T>) -> Point<U>) -> Polygon<U> {
        Polygon {
            vertices: self.vertices.iter().map(f).collect(),
        }
    }

    /// Applies an orientation-preserving map; the result is re-validated.
    pub fn try_map<U: Coord>(
        &self,
        f: impl Fn(&Point<T>) -> Point<U>,
    ) -> Result<Polygon<U>, GeomError> {
        Polygon::new(self.vertices.iter().map(f).collect())
    }

    fn check_simple(&self) -> Result<(), GeomError> {
        let n = self.vertices.len();
        for i in 0..n {
            let (a, b) = self.edge(i);
            if a == b {
                return Err(GeomError::NotSimple(i, i));
            }
            // Adjacent edges: only a collinear fold-back can overlap.
            let c = &self.vertices[(i + 2) % n];
            if orient(a, b, c) == Orientation::Collinear && within_box(a, b, c) {
                return Err(GeomError::NotSimple(i, (i + 1) % n));
            }
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (c, d) = self.edge(j);
                if closed_segments_intersect(a, b, c, d) {
                    return Err(GeomError::NotSimple(i, j));
                }
            }
        }
        Ok(())
    }
}

fn signed_area2_sign<T: Coord>(vertices: &[Point<T>]) -> Result<Ordering, GeomError> {
    if vertices.len() < 3 {
        return Err(GeomError::TooFewVertices(vertices.len()));
    }
    let n = vertices.len();
    let mut sum = BigInt::zero();
    for i in 0..n {
        let a = &vertices[i];
        let b = &vertices[(i + 1) % n];
        sum += a.x.big() * b.y.big() - a.y.big() * b.x.big();
    }
    match sum.cmp(&BigInt::zero()) {
        Ordering::Equal => Err(GeomError::ZeroArea),
        o => Ok(o),
    }
}

/// Whether the open segment `s` meets the closed region of `p`.
///
/// Both endpoints must lie strictly outside `p`.
pub fn segment_intersects_polygon<T: Coord>(
    s: &Segment<T>,
    p: &Polygon<T>,
) -> Result<bool, GeomError> {
    for end in [&s.a, &s.b] {
        if p.locate(end) != Location::Outside {
            return Err(GeomError::EndpointInObstacle(end.to_string()));
        }
    }
    Ok(p.edges()
        .any(|(c, d)| closed_segments_intersect(&s.a, &s.b, c, d)))
}

/// Outcome of a general-position check; violations are data, not errors.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GeneralPosition {
    pub duplicates: Vec<(usize, usize)>,
    /// Collinear triples of pairwise distinct points, `i < j < k`.
    pub collinear: Vec<(usize, usize, usize)>,
}

impl GeneralPosition {
    pub fn is_ok(&self) -> bool {
        self.duplicates.is_empty() && self.collinear.is_empty()
    }
}

pub fn is_general_position<T: Coord>(points: &[Point<T>]) -> GeneralPosition {
    let n = points.len();
    let mut report = GeneralPosition::default();
    for i in 0..n {
        for j in i + 1..n {
            if points[i] == points[j] {
                report.duplicates.push((i, j));
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if points[i] == points[j] {
                continue;
            }
            for k in j + 1..n {
                if points[k] == points[i] || points[k] == points[j] {
                    continue;
                }
                if orient(&points[i], &points[j], &points[k]) == Orientation::Collinear {
                    report.collinear.push((i, j, k));
                }
            }
        }
    }
    report
}

/// True if `p` can be appended to `points` (already in general position)
/// without breaking general position.
pub fn extends_general_position<T: Coord>(points: &[Point<T>], p: &Point<T>) -> bool {
    for (i, a) in points.iter().enumerate() {
        if a == p {
            return false;
        }
        for b in &points[i + 1..] {
            if orient(a, b, p) == Orientation::Collinear {
                return false;
            }
        }
    }
    true
}

/// Strictly convex hull in counterclockwise order (monotone chain).
pub fn convex_hull<T: Coord>(points: &[Point<T>]) -> Vec<Point<T>> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Point<T>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && orient(&lower[lower.len() - 2], &lower[lower.len() - 1], p)
                != Orientation::CounterClockwise
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point<T>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && orient(&upper[upper.len() - 2], &upper[upper.len() - 1], p)
                != Orientation::CounterClockwise
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Whether `p` lies in the closed convex hull given in counterclockwise
/// order. Degenerate hulls (a point or a segment) are handled.
pub fn in_closed_hull<T: Coord>(hull: &[Point<T>], p: &Point<T>) -> bool {
    match hull.len() {
        0 => false,
        1 => &hull[0] == p,
        2 => on_closed_segment(p, &hull[0], &hull[1]),
        n => (0..n).all(|i| orient(&hull[i], &hull[(i + 1) % n], p) != Orientation::Clockwise),
    }
}
