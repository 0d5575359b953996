//! Boundary flattening, pullback coefficients and boundary partitions of
//! unity.

pub mod graph;
pub mod jet;
pub mod partition;

pub use graph::{pullback_coefficients, BoundaryGraph, ChartDomain, Side};
pub use jet::Jet;
pub use partition::{build_partition, Boundary, PartitionConfig, PartitionOfUnity};
