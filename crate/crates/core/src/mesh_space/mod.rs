//! Partitions of an interval and spline finite element spaces on them.

pub mod bspline;
mod mesh;
mod space;

pub use mesh::Mesh;
pub use space::{CoefVec, Constraint, FemSpace};
