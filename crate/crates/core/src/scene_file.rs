//! JSON scene documents.
//!
//! ```json
//! {
//!   "points": [[-2, 0], [4, 6], [6, -5]],
//!   "obstacles": [[[0, 0], [2, 2], [5, 2], [7, 0], [5, -2], [2, -2]]],
//!   "graph": {"n": 3, "edges": [[1, 2], [1, 3]]}
//! }
//! ```
//!
//! Coordinates are integers of any size. Graph edges use labels starting
//! at 1. Every field is optional except that a document needs `points` or
//! `graph`.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::geom::{GeomError, Point, Polygon};
use crate::graph::{Graph, GraphError};
use crate::scalar::Coord;
use crate::visibility::{Scene, SceneError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SceneFileError {
    #[error("malformed document: {0}")]
    Json(String),
    #[error("{0}: {1}")]
    Shape(String, &'static str),
    #[error("{0}: coordinate out of range")]
    Range(String),
    #[error("obstacles[{index}]: {source}")]
    Polygon { index: usize, source: GeomError },
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error("graph: {0}")]
    Graph(#[from] GraphError),
    #[error("graph has {graph} vertices but the scene has {points} points")]
    GraphSize { graph: usize, points: usize },
    #[error("document has neither points nor graph")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SceneFile {
    pub points: Vec<Point<BigInt>>,
    /// Obstacle boundaries as written; either orientation is accepted.
    pub obstacles: Vec<Vec<Point<BigInt>>>,
    pub graph: Option<Graph>,
}

fn shape(path: &str, what: &'static str) -> SceneFileError {
    SceneFileError::Shape(path.to_string(), what)
}

fn integer(v: &Value, path: &str) -> Result<BigInt, SceneFileError> {
    match v {
        Value::Number(num) => {
            BigInt::from_str(&num.to_string()).map_err(|_| shape(path, "expected an integer"))
        }
        _ => Err(shape(path, "expected an integer")),
    }
}

fn point(v: &Value, path: &str) -> Result<Point<BigInt>, SceneFileError> {
    match v.as_array().map(Vec::as_slice) {
        Some([x, y]) => Ok(Point::new(
            integer(x, &format!("{path}[0]"))?,
            integer(y, &format!("{path}[1]"))?,
        )),
        _ => Err(shape(path, "expected [x, y]")),
    }
}

fn point_list(v: &Value, path: &str) -> Result<Vec<Point<BigInt>>, SceneFileError> {
    v.as_array()
        .ok_or_else(|| shape(path, "expected a list of points"))?
        .iter()
        .enumerate()
        .map(|(i, p)| point(p, &format!("{path}[{i}]")))
        .collect()
}

fn small(v: &Value, path: &str) -> Result<usize, SceneFileError> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| shape(path, "expected a non-negative integer"))
}

fn graph(v: &Value) -> Result<Graph, SceneFileError> {
    let obj = v
        .as_object()
        .ok_or_else(|| shape("graph", "expected an object"))?;
    let n = small(
        obj.get("n").ok_or_else(|| shape("graph.n", "missing"))?,
        "graph.n",
    )?;
    let mut edges = Vec::new();
    if let Some(list) = obj.get("edges") {
        let list = list
            .as_array()
            .ok_or_else(|| shape("graph.edges", "expected a list"))?;
        for (k, e) in list.iter().enumerate() {
            let path = format!("graph.edges[{k}]");
            match e.as_array().map(Vec::as_slice) {
                Some([a, b]) => {
                    let (a, b) = (small(a, &path)?, small(b, &path)?);
                    if a == 0 || b == 0 {
                        return Err(shape(&path, "labels start at 1"));
                    }
                    edges.push((a - 1, b - 1));
                }
                _ => return Err(shape(&path, "expected [u, v]")),
            }
        }
    }
    Ok(Graph::from_edges(n, edges)?)
}

impl SceneFile {
    pub fn parse(text: &str) -> Result<Self, SceneFileError> {
        let doc: Value =
            serde_json::from_str(text).map_err(|e| SceneFileError::Json(e.to_string()))?;
        let obj: &Map<String, Value> = doc
            .as_object()
            .ok_or_else(|| shape("document", "expected an object"))?;
        if let Some(key) = obj
            .keys()
            .find(|k| !matches!(k.as_str(), "points" | "obstacles" | "graph"))
        {
            return Err(SceneFileError::Shape(key.clone(), "unknown field"));
        }
        let points = match obj.get("points") {
            Some(v) => point_list(v, "points")?,
            None => Vec::new(),
        };
        let obstacles = match obj.get("obstacles") {
            Some(v) => v
                .as_array()
                .ok_or_else(|| shape("obstacles", "expected a list"))?
                .iter()
                .enumerate()
                .map(|(i, o)| point_list(o, &format!("obstacles[{i}]")))
                .collect::<Result<_, _>>()?,
            None => Vec::new(),
        };
        let graph = obj.get("graph").map(graph).transpose()?;
        if !obj.contains_key("points") && graph.is_none() {
            return Err(SceneFileError::Empty);
        }
        if let Some(g) = &graph {
            if obj.contains_key("points") && g.n() != points.len() {
                return Err(SceneFileError::GraphSize {
                    graph: g.n(),
                    points: points.len(),
                });
            }
        }
        Ok(SceneFile {
            points,
            obstacles,
            graph,
        })
    }

    pub fn from_scene<T: Coord>(scene: &Scene<T>, graph: Option<Graph>) -> Self {
        SceneFile {
            points: scene.points().iter().map(Point::to_big).collect(),
            obstacles: scene
                .obstacles()
                .iter()
                .map(|p| p.vertices().iter().map(Point::to_big).collect())
                .collect(),
            graph,
        }
    }

    fn convert_points<T: Coord>(
        pts: &[Point<BigInt>],
        path: &str,
    ) -> Result<Vec<Point<T>>, SceneFileError> {
        pts.iter()
            .enumerate()
            .map(|(i, p)| {
                p.convert()
                    .ok_or_else(|| SceneFileError::Range(format!("{path}[{i}]")))
            })
            .collect()
    }

    pub fn points_as<T: Coord>(&self) -> Result<Vec<Point<T>>, SceneFileError> {
        Self::convert_points(&self.points, "points")
    }

    pub fn polygons<T: Coord>(&self) -> Result<Vec<Polygon<T>>, SceneFileError> {
        self.obstacles
            .iter()
            .enumerate()
            .map(|(index, o)| {
                let pts = Self::convert_points(o, &format!("obstacles[{index}]"))?;
                Polygon::from_boundary(pts)
                    .map_err(|source| SceneFileError::Polygon { index, source })
            })
            .collect()
    }

    /// Scene allowing collinear triples; see [`Scene::lenient`].
    pub fn to_scene<T: Coord>(&self) -> Result<Scene<T>, SceneFileError> {
        Ok(Scene::lenient(self.points_as()?, self.polygons()?)?)
    }

    /// Scene in full general position; see [`Scene::new`].
    pub fn to_strict_scene<T: Coord>(&self) -> Result<Scene<T>, SceneFileError> {
        Ok(Scene::new(self.points_as()?, self.polygons()?)?)
    }

    pub fn to_json(&self) -> String {
        fn pts(list: &[Point<BigInt>]) -> String {
            let inner: Vec<String> = list.iter().map(|p| format!("[{}, {}]", p.x, p.y)).collect();
            format!("[{}]", inner.join(", "))
        }
        let mut out = String::from("{\n");
        let mut fields: Vec<String> = Vec::new();
        if !self.points.is_empty() || self.graph.is_none() {
            fields.push(format!("  \"points\": {}", pts(&self.points)));
        }
        if !self.obstacles.is_empty() {
            let mut s = String::from("  \"obstacles\": [\n");
            let polys: Vec<String> = self
                .obstacles
                .iter()
                .map(|o| format!("    {}", pts(o)))
                .collect();
            s.push_str(&polys.join(",\n"));
            s.push_str("\n  ]");
            fields.push(s);
        }
        if let Some(g) = &self.graph {
            let edges: Vec<String> = g
                .edges()
                .map(|(i, j)| format!("[{}, {}]", i + 1, j + 1))
                .collect();
            fields.push(format!(
                "  \"graph\": {{\"n\": {}, \"edges\": [{}]}}",
                g.n(),
                edges.join(", ")
            ));
        }
        out.push_str(&fields.join(",\n"));
        let _ = writeln!(out, "\n}}");
        out
    }
}
