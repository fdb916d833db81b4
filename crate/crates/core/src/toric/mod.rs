//! Toric diagrams: validation, lattice counts, mirror polynomials and the
//! dual toric graph.

pub mod brane;
pub mod counts;
pub mod diagram;
pub mod graph;
pub mod mirror;

pub use brane::{brane_frame, default_brane_edge, BraneFrame};
pub use counts::{counts, ToricCounts};
pub use diagram::{validate_diagram, DiagramInput, ToricDiagram};
pub use graph::{emit_toric_graph, ToricGraph};
pub use mirror::{mirror_polynomial, MirrorPolynomial};

use thiserror::Error;

/// A point of the lattice `Z^2`.
pub type Point = (i64, i64);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToricError {
    #[error("NonConvexPolytope: {0}")]
    NonConvexPolytope(String),
    #[error("TriangulationGap: triangles cover area {covered}/2 of {total}/2")]
    TriangulationGap { covered: i64, total: i64 },
    #[error("TriangulationOverlap: triangles {0} and {1} overlap")]
    TriangulationOverlap(usize, usize),
    #[error("NonLatticeVertex: {0}")]
    NonLatticeVertex(String),
    #[error("DegenerateTriangle: triangle {0} has zero area")]
    DegenerateTriangle(usize),
    #[error("TriangleOutsidePolytope: triangle {0} has a vertex outside P")]
    TriangleOutsidePolytope(usize),
    #[error("IdentityViolation: {0}")]
    IdentityViolation(String),
    #[error("MissingCoefficient: no coefficient for lattice point {0:?}")]
    MissingCoefficient(Point),
    #[error("ZeroCoefficient: coefficient at {0:?} is zero")]
    ZeroCoefficient(Point),
    #[error("GaugeConflict: coefficient at gauge point {0:?} must be 1 or omitted")]
    GaugeConflict(Point),
    #[error("BadCoefficient: {0}")]
    BadCoefficient(String),
    #[error("BadGauge: triangle index {0} out of range")]
    BadGauge(usize),
    #[error("MalformedDiagram: {0}")]
    Malformed(String),
}

impl ToricError {
    pub fn kind(&self) -> &'static str {
        match self {
            ToricError::NonConvexPolytope(_) => "NonConvexPolytope",
            ToricError::TriangulationGap { .. } => "TriangulationGap",
            ToricError::TriangulationOverlap(..) => "TriangulationOverlap",
            ToricError::NonLatticeVertex(_) => "NonLatticeVertex",
            ToricError::DegenerateTriangle(_) => "DegenerateTriangle",
            ToricError::TriangleOutsidePolytope(_) => "TriangleOutsidePolytope",
            ToricError::IdentityViolation(_) => "IdentityViolation",
            ToricError::MissingCoefficient(_) => "MissingCoefficient",
            ToricError::ZeroCoefficient(_) => "ZeroCoefficient",
            ToricError::GaugeConflict(_) => "GaugeConflict",
            ToricError::BadCoefficient(_) => "BadCoefficient",
            ToricError::BadGauge(_) => "BadGauge",
            ToricError::Malformed(_) => "MalformedDiagram",
        }
    }
}

/// Twice the signed area of the triangle `abc`.
pub fn cross(a: Point, b: Point, c: Point) -> i64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
