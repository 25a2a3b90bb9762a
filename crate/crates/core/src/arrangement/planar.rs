//! Doubly connected edge list of a straight-line drawing, with crossings
//! as nodes, built over an exact ring `R`.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::rational::{
    add, cmp_frac, crossing_param, mid_frac, mul, orient_q, rational_of, sub, QPoint,
};
use crate::geom::{segments_cross_properly, Point};
use crate::scalar::Coord;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    Vertex(usize),
    /// Crossing of the listed drawn edges (indices into the edge list).
    Crossing(Vec<usize>),
}

#[derive(Debug, Clone)]
pub(crate) struct Node<R> {
    pub xy: QPoint<R>,
    pub kind: NodeKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct HalfEdge {
    pub from: usize,
    pub to: usize,
    pub edge: usize,
    /// Index of the piece along its edge, counted from the lower endpoint.
    pub piece: usize,
    pub forward: bool,
}

#[derive(Debug, Clone)]
pub(crate) struct Component {
    pub rep_vertex: usize,
    pub outer_cycle: Option<usize>,
    pub depth: usize,
    pub parent_face: usize,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct FaceTopo {
    /// Boundary cycle enclosing the face; `None` for the unbounded face.
    pub outer: Option<usize>,
    /// Components lying inside the face.
    pub holes: Vec<usize>,
}

#[derive(Debug, Clone)]
pub(crate) struct Planar<R> {
    pub pts: Vec<Point<R>>,
    pub edges: Vec<(usize, usize)>,
    pub nodes: Vec<Node<R>>,
    pub half_edges: Vec<HalfEdge>,
    pub cycles: Vec<Vec<usize>>,
    pub node_component: Vec<usize>,
    pub components: Vec<Component>,
    pub faces: Vec<FaceTopo>,
    pub cycle_face: Vec<usize>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

struct Crossing<R> {
    e: usize,
    f: usize,
    te: (R, R),
    tf: (R, R),
}

/// 0 for directions with angle in `[0, pi)`, 1 otherwise.
fn half<R: Coord>(d: &Point<R>) -> u8 {
    if d.y.is_positive() || (d.y.is_zero() && d.x.is_positive()) {
        0
    } else {
        1
    }
}

/// Counterclockwise angular order starting at the positive x axis.
fn cmp_angle<R: Coord>(a: &Point<R>, b: &Point<R>) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| {
        // Same half-plane: a before b iff b is counterclockwise of a.
        R::det_sign(&R::zero(), &R::zero(), &b.x, &b.y, &a.x, &a.y)
    })
}

impl<R: Coord> Planar<R> {
    /// Builds the arrangement. Points must be pairwise distinct with no
    /// three collinear; edges are `(i, j)` with `i < j`.
    pub fn build(pts: Vec<Point<R>>, edges: Vec<(usize, usize)>) -> Self {
        let n = pts.len();
        let m = edges.len();

        let mut recs: Vec<Crossing<R>> = Vec::new();
        let mut along: Vec<Vec<usize>> = vec![Vec::new(); m];
        for e in 0..m {
            let (a, b) = edges[e];
            for f in e + 1..m {
                let (c, d) = edges[f];
                if a == c || a == d || b == c || b == d {
                    continue;
                }
                if segments_cross_properly(&pts[a], &pts[b], &pts[c], &pts[d]) {
                    let id = recs.len();
                    recs.push(Crossing {
                        e,
                        f,
                        te: crossing_param(&pts[a], &pts[b], &pts[c], &pts[d]),
                        tf: crossing_param(&pts[c], &pts[d], &pts[a], &pts[b]),
                    });
                    along[e].push(id);
                    along[f].push(id);
                }
            }
        }
        let param = |r: usize, e: usize| -> &(R, R) {
            if recs[r].e == e {
                &recs[r].te
            } else {
                &recs[r].tf
            }
        };

        // Several edges through one point produce one record per pair;
        // records meeting an edge at the same parameter are one node.
        let mut uf = UnionFind::new(recs.len());
        for (e, list) in along.iter_mut().enumerate() {
            list.sort_by(|&r, &s| cmp_frac(param(r, e), param(s, e)));
            for w in list.windows(2) {
                if cmp_frac(param(w[0], e), param(w[1], e)) == Ordering::Equal {
                    uf.union(w[0], w[1]);
                }
            }
        }

        let mut nodes: Vec<Node<R>> = pts
            .iter()
            .enumerate()
            .map(|(i, p)| Node {
                xy: QPoint::from_int(p),
                kind: NodeKind::Vertex(i),
            })
            .collect();
        let mut class_node: HashMap<usize, usize> = HashMap::new();
        let mut rec_node = vec![0usize; recs.len()];
        for (r, rec) in recs.iter().enumerate() {
            let root = uf.find(r);
            let id = *class_node.entry(root).or_insert_with(|| {
                let (a, b) = edges[rec.e];
                nodes.push(Node {
                    xy: QPoint::along(&pts[a], &pts[b], &rec.te.0, &rec.te.1),
                    kind: NodeKind::Crossing(Vec::new()),
                });
                nodes.len() - 1
            });
            rec_node[r] = id;
            if let NodeKind::Crossing(list) = &mut nodes[id].kind {
                list.push(rec.e);
                list.push(rec.f);
            }
        }
        for node in &mut nodes {
            if let NodeKind::Crossing(list) = &mut node.kind {
                list.sort_unstable();
                list.dedup();
            }
        }

        let mut half_edges = Vec::new();
        for (e, &(a, b)) in edges.iter().enumerate() {
            let mut seq = vec![a];
            for &r in &along[e] {
                let id = rec_node[r];
                if *seq.last().expect("nonempty") != id {
                    seq.push(id);
                }
            }
            seq.push(b);
            for (piece, w) in seq.windows(2).enumerate() {
                half_edges.push(HalfEdge {
                    from: w[0],
                    to: w[1],
                    edge: e,
                    piece,
                    forward: true,
                });
                half_edges.push(HalfEdge {
                    from: w[1],
                    to: w[0],
                    edge: e,
                    piece,
                    forward: false,
                });
            }
        }

        let dirs: Vec<Point<R>> = half_edges
            .iter()
            .map(|h| {
                let (a, b) = edges[h.edge];
                let (s, t) = if h.forward { (a, b) } else { (b, a) };
                Point::new(sub(&pts[t].x, &pts[s].x), sub(&pts[t].y, &pts[s].y))
            })
            .collect();
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
        for (h, he) in half_edges.iter().enumerate() {
            out[he.from].push(h);
        }
        let mut pos = vec![0usize; half_edges.len()];
        for list in &mut out {
            list.sort_by(|&a, &b| cmp_angle(&dirs[a], &dirs[b]));
            for (k, &h) in list.iter().enumerate() {
                pos[h] = k;
            }
        }

        // Face on the left: after arriving at a node, leave along the
        // outgoing half-edge just clockwise of the way back.
        let next: Vec<usize> = (0..half_edges.len())
            .map(|h| {
                let twin = h ^ 1;
                let list = &out[half_edges[h].to];
                list[(pos[twin] + list.len() - 1) % list.len()]
            })
            .collect();

        let mut cycle_of = vec![usize::MAX; half_edges.len()];
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        for start in 0..half_edges.len() {
            if cycle_of[start] != usize::MAX {
                continue;
            }
            let id = cycles.len();
            let mut cyc = Vec::new();
            let mut h = start;
            loop {
                cycle_of[h] = id;
                cyc.push(h);
                h = next[h];
                if h == start {
                    break;
                }
            }
            cycles.push(cyc);
        }

        let mut cuf = UnionFind::new(nodes.len());
        for he in &half_edges {
            cuf.union(he.from, he.to);
        }
        let mut comp_index: HashMap<usize, usize> = HashMap::new();
        let mut node_component = vec![0usize; nodes.len()];
        let mut members: Vec<Vec<usize>> = Vec::new();
        for (v, slot) in node_component.iter_mut().enumerate() {
            let root = cuf.find(v);
            let c = *comp_index.entry(root).or_insert_with(|| {
                members.push(Vec::new());
                members.len() - 1
            });
            *slot = c;
            members[c].push(v);
        }

        let mut components: Vec<Component> = members
            .iter()
            .map(|ms| {
                // The leftmost-lowest node of a component is an original
                // vertex: a crossing lies strictly inside two segments.
                let rep = ms
                    .iter()
                    .copied()
                    .filter(|&v| v < n)
                    .min_by(|&a, &b| pts[a].cmp(&pts[b]))
                    .expect("component has a vertex");
                // The unbounded side is the wedge containing the negative
                // x direction: it follows the last outgoing half-edge
                // whose angle is below pi.
                let outer_cycle = if out[rep].is_empty() {
                    None
                } else {
                    let h = out[rep]
                        .iter()
                        .copied()
                        .rfind(|&h| half(&dirs[h]) == 0)
                        .unwrap_or(*out[rep].last().expect("nonempty"));
                    Some(cycle_of[h])
                };
                Component {
                    rep_vertex: rep,
                    outer_cycle,
                    depth: 0,
                    parent_face: 0,
                }
            })
            .collect();

        let mut planar = Planar {
            pts,
            edges,
            nodes,
            half_edges,
            cycles,
            node_component,
            components: Vec::new(),
            faces: Vec::new(),
            cycle_face: Vec::new(),
        };

        let is_outer: Vec<bool> = {
            let mut v = vec![false; planar.cycles.len()];
            for c in &components {
                if let Some(o) = c.outer_cycle {
                    v[o] = true;
                }
            }
            v
        };
        let bounded: Vec<usize> = (0..planar.cycles.len()).filter(|&c| !is_outer[c]).collect();

        let containing: Vec<Vec<usize>> = components
            .iter()
            .enumerate()
            .map(|(ci, comp)| {
                let q = QPoint::from_int(&planar.pts[comp.rep_vertex]);
                bounded
                    .iter()
                    .copied()
                    .filter(|&c| planar.cycle_component(c) != ci && planar.cycle_contains(c, &q))
                    .collect()
            })
            .collect();
        for (comp, cont) in components.iter_mut().zip(&containing) {
            comp.depth = cont.len();
        }

        // Faces: the unbounded face first, then bounded cycles in order of
        // their first half-edge.
        let mut cycle_face = vec![usize::MAX; planar.cycles.len()];
        let mut faces = vec![FaceTopo::default()];
        for &c in &bounded {
            cycle_face[c] = faces.len();
            faces.push(FaceTopo {
                outer: Some(c),
                holes: Vec::new(),
            });
        }
        for ci in 0..components.len() {
            let parent = containing[ci]
                .iter()
                .copied()
                .max_by_key(|&c| components[planar.cycle_component(c)].depth)
                .map(|c| cycle_face[c])
                .unwrap_or(0);
            components[ci].parent_face = parent;
            faces[parent].holes.push(ci);
            if let Some(o) = components[ci].outer_cycle {
                cycle_face[o] = parent;
            }
        }
        planar.components = components;
        planar.faces = faces;
        planar.cycle_face = cycle_face;
        planar
    }

    pub fn cycle_component(&self, c: usize) -> usize {
        self.node_component[self.half_edges[self.cycles[c][0]].from]
    }

    fn segment_of(&self, h: usize) -> (&Point<R>, &Point<R>) {
        let (a, b) = self.edges[self.half_edges[h].edge];
        if self.half_edges[h].forward {
            (&self.pts[a], &self.pts[b])
        } else {
            (&self.pts[b], &self.pts[a])
        }
    }

    /// Crossing-number test of `q` against the closed walk `c`. `q` must
    /// not lie on the walk.
    pub fn cycle_contains(&self, c: usize, q: &QPoint<R>) -> bool {
        let mut inside = false;
        for &h in &self.cycles[c] {
            let he = &self.half_edges[h];
            let a_above = self.nodes[he.from].xy.cmp_y(q) == Ordering::Greater;
            let b_above = self.nodes[he.to].xy.cmp_y(q) == Ordering::Greater;
            if a_above == b_above {
                continue;
            }
            let (s0, s1) = self.segment_of(h);
            let o = orient_q(s0, s1, q);
            // Upward piece with q on its left, or downward with q on its
            // right: the piece crosses the ray to the right of q.
            if (b_above && o == Ordering::Greater) || (a_above && o == Ordering::Less) {
                inside = !inside;
            }
        }
        inside
    }

    /// Face containing `q`, which must not lie on the drawing.
    pub fn locate(&self, q: &QPoint<R>) -> usize {
        let mut best: Option<(usize, usize)> = None;
        for (c, face) in self.cycle_face.iter().enumerate() {
            if self.faces[*face].outer != Some(c) {
                continue;
            }
            if self.cycle_contains(c, q) {
                let depth = self.components[self.cycle_component(c)].depth;
                if best.is_none_or(|(_, d)| depth > d) {
                    best = Some((c, depth));
                }
            }
        }
        best.map_or(0, |(c, _)| self.cycle_face[c])
    }

    #[cfg(test)]
    /// All half-edges bounding face `f`: its outer cycle, then the outer
    /// cycles of the components inside it.
    pub fn face_half_edges(&self, f: usize) -> Vec<usize> {
        let face = &self.faces[f];
        let mut hs: Vec<usize> = face
            .outer
            .map(|c| self.cycles[c].clone())
            .unwrap_or_default();
        for &ci in &face.holes {
            if let Some(o) = self.components[ci].outer_cycle {
                hs.extend(&self.cycles[o]);
            }
        }
        hs
    }

    pub fn isolated_vertices(&self, f: usize) -> Vec<usize> {
        self.faces[f]
            .holes
            .iter()
            .filter(|&&ci| self.components[ci].outer_cycle.is_none())
            .map(|&ci| self.components[ci].rep_vertex)
            .collect()
    }

    /// Faces met by the open segment `pq` between vertices `p` and `q` that
    /// is not itself drawn, in order from `p`, without repeats.
    pub fn faces_along(&self, p: usize, q: usize) -> Vec<usize> {
        let (a, b) = (&self.pts[p], &self.pts[q]);
        let mut ts: Vec<(R, R)> = self
            .edges
            .iter()
            .filter(|&&(c, d)| c != p && c != q && d != p && d != q)
            .filter(|&&(c, d)| segments_cross_properly(a, b, &self.pts[c], &self.pts[d]))
            .map(|&(c, d)| crossing_param(a, b, &self.pts[c], &self.pts[d]))
            .collect();
        ts.sort_by(cmp_frac);
        ts.dedup_by(|x, y| cmp_frac(x, y) == Ordering::Equal);
        let mut bounds = vec![(R::zero(), R::one())];
        bounds.extend(ts);
        bounds.push((R::one(), R::one()));
        let mut faces: Vec<usize> = Vec::new();
        for w in bounds.windows(2) {
            let (num, den) = mid_frac(&w[0], &w[1]);
            let f = self.locate(&QPoint::along(a, b, &num, &den));
            if !faces.contains(&f) {
                faces.push(f);
            }
        }
        faces
    }

    /// An exact point in the interior of face `f`.
    pub fn representative(&self, f: usize) -> Point<BigRational> {
        let Some(c) = self.faces[f].outer else {
            let min_x = self
                .pts
                .iter()
                .map(|p| p.x.big())
                .min()
                .unwrap_or_else(|| 0.into());
            return Point::new(rational_of(&(min_x - 1)), BigRational::zero());
        };
        let h = *self.cycles[c]
            .iter()
            .find(|&&h| {
                let (s0, s1) = self.segment_of(h);
                s0.x != s1.x
            })
            .expect("a bounded face has a non-vertical side");
        let (s0, s1) = self.segment_of(h);
        let up = s1.x > s0.x;
        let he = &self.half_edges[h];
        let (a, b) = (&self.nodes[he.from].xy, &self.nodes[he.to].xy);
        let m = QPoint {
            x: add(&mul(&a.x, &b.d), &mul(&b.x, &a.d)),
            y: add(&mul(&a.y, &b.d), &mul(&b.y, &a.d)),
            d: mul(&(R::one() + R::one()), &mul(&a.d, &b.d)),
        };

        // Nearest point of the drawing straight above (or below) the
        // midpoint, on the side where the face lies. Heights are kept as
        // unreduced fractions with positive denominators.
        let toward = if up {
            Ordering::Less
        } else {
            Ordering::Greater
        };
        let (mx, md) = (m.x.big(), m.d.big());
        let closer = |y: &(BigInt, BigInt), cur: &(BigInt, BigInt)| {
            (&y.0 * &cur.1).cmp(&(&cur.0 * &y.1)) == toward
        };
        let mut hit: Option<(BigInt, BigInt)> = None;
        let mut consider = |y: (BigInt, BigInt)| {
            if hit.as_ref().is_none_or(|cur| closer(&y, cur)) {
                hit = Some(y);
            }
        };
        for p in &self.pts {
            if mul(&p.x, &m.d) == m.x {
                let my_side = mul(&p.y, &m.d).cmp(&m.y).reverse();
                if my_side == toward {
                    consider((p.y.big(), BigInt::one()));
                }
            }
        }
        for (e, &(i, j)) in self.edges.iter().enumerate() {
            if e == he.edge {
                continue;
            }
            let (p, q) = if self.pts[i].x < self.pts[j].x {
                (&self.pts[i], &self.pts[j])
            } else {
                (&self.pts[j], &self.pts[i])
            };
            if p.x == q.x || mul(&p.x, &m.d) > m.x || mul(&q.x, &m.d) < m.x {
                continue;
            }
            // Left-to-right segment passing above m has m on its right.
            if orient_q(p, q, &m) != toward {
                continue;
            }
            let (px, py) = (p.x.big(), p.y.big());
            let dx = q.x.big() - &px;
            let num = &py * &dx * &md + (q.y.big() - &py) * (&mx - &px * &md);
            consider((num, dx * &md));
        }
        let (hn, hd) = hit.expect("a bounded face is closed off in every direction");
        let two = BigRational::from_integer(2.into());
        let my = BigRational::new(m.y.big(), md.clone());
        Point::new(
            BigRational::new(mx, md),
            (my + BigRational::new(hn, hd)) / two,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i128, y: i128) -> Point<i128> {
        Point::new(x, y)
    }

    fn counts(pl: &Planar<i128>) -> (usize, usize, usize, usize) {
        (
            pl.nodes.len(),
            pl.half_edges.len() / 2,
            pl.faces.len(),
            pl.components.len(),
        )
    }

    #[test]
    fn triangle() {
        let pl = Planar::build(
            vec![p(0, 0), p(4, 0), p(0, 4)],
            vec![(0, 1), (0, 2), (1, 2)],
        );
        assert_eq!(counts(&pl), (3, 3, 2, 1));
        assert_eq!(pl.face_half_edges(1).len(), 3);
        assert_eq!(pl.face_half_edges(0).len(), 3);
        let r = pl.representative(1);
        let inside = QPoint { x: 1, y: 1, d: 1 };
        assert_eq!(pl.locate(&inside), 1);
        assert!(r.x > BigRational::zero() && r.y > BigRational::zero());
    }

    #[test]
    fn crossing_square() {
        // K4 on a convex quadrilateral: diagonals cross at (2,2).
        let pts = vec![p(0, 0), p(4, 0), p(4, 4), p(0, 4)];
        let edges = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let pl = Planar::build(pts, edges);
        let (v, e, f, c) = counts(&pl);
        assert_eq!((v, e, f, c), (5, 8, 5, 1));
        let x = &pl.nodes[4].xy;
        assert_eq!((x.x, x.y), (x.d * 2, x.d * 2));
        for face in 1..5 {
            assert_eq!(pl.face_half_edges(face).len(), 3);
        }
    }

    #[test]
    fn nested_components_and_isolated_vertex() {
        // A big triangle containing a small one and a lone vertex.
        let pts = vec![
            p(0, 0),
            p(100, 0),
            p(0, 100),
            p(10, 10),
            p(30, 11),
            p(12, 30),
            p(50, 20),
        ];
        let edges = vec![(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)];
        let pl = Planar::build(pts, edges);
        let (v, e, f, c) = counts(&pl);
        assert_eq!((v, e, f, c), (7, 6, 3, 3));
        assert_eq!(v as i64 - e as i64 + f as i64, 1 + c as i64);
        let outer = pl.locate(&QPoint { x: 60, y: 10, d: 1 });
        let inner = pl.locate(&QPoint { x: 15, y: 15, d: 1 });
        assert_ne!(outer, inner);
        assert_ne!(outer, 0);
        assert_eq!(pl.isolated_vertices(outer), vec![6]);
        assert_eq!(pl.face_half_edges(outer).len(), 6);
        assert_eq!(pl.locate(&QPoint { x: -5, y: 0, d: 1 }), 0);
        let r = pl.representative(outer);
        let (num_x, num_y) = (r.x.numer().clone(), r.y.numer().clone());
        let (den_x, den_y) = (r.x.denom().clone(), r.y.denom().clone());
        // The representative lands back in the same face.
        let d = &den_x * &den_y;
        let q = QPoint {
            x: i128::from_bigint(&(num_x * &den_y)).unwrap(),
            y: i128::from_bigint(&(num_y * &den_x)).unwrap(),
            d: i128::from_bigint(&d).unwrap(),
        };
        assert_eq!(pl.locate(&q), outer);
    }

    #[test]
    fn concurrent_crossings_merge() {
        // Three segments through (0,0).
        let pts = vec![p(-5, -1), p(5, 1), p(-1, 5), p(1, -5), p(-4, 3), p(4, -3)];
        let pl = Planar::build(pts, vec![(0, 1), (2, 3), (4, 5)]);
        let (v, e, f, c) = counts(&pl);
        assert_eq!((v, e, f, c), (7, 6, 1, 1));
        assert_eq!(pl.nodes[6].kind, NodeKind::Crossing(vec![0, 1, 2]));
    }
}
