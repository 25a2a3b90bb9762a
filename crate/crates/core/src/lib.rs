//! Obstacle representations of graphs.
//!
//! Visibility graphs among polygonal obstacles, the tangent-sequence codec
//! for a single convex obstacle, order types of scenes, faces of
//! straight-line drawings, and face-cover upper bounds on the obstacle
//! number. All geometry is exact: coordinates are integers of a [`Coord`]
//! type and derived points are rationals.

pub mod arrangement;
pub mod bounds;
pub mod cover;
pub mod geom;
pub mod graph;
pub mod order_type;
pub mod sampling;
pub mod scalar;
pub mod scene_file;
pub mod search;
pub mod tangent;
pub mod visibility;

use num_bigint::BigInt;

pub use graph::Graph;
pub use scalar::Coord;

/// Coordinates used by the samplers and the command line.
pub type Int = i64;
pub type GridPoint = geom::Point<Int>;
pub type GridPolygon = geom::Polygon<Int>;
pub type GridScene = visibility::Scene<Int>;
pub type GridDrawing = arrangement::Drawing<Int>;

/// Coordinates of unbounded size.
pub type BigPoint = geom::Point<BigInt>;
pub type BigPolygon = geom::Polygon<BigInt>;
pub type BigScene = visibility::Scene<BigInt>;
pub type BigDrawing = arrangement::Drawing<BigInt>;
