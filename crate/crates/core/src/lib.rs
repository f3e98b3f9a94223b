//! Spatial partitioning with repulsive agents.

pub mod cli;
pub mod config;
pub mod cvt;
pub mod environment;
pub mod error;
pub mod evaluation;
pub mod geometry;
pub mod io;
pub mod partitioner;
pub mod pso;
pub mod rng;

pub use environment::{DomainBox, Environment, Shape, WeightedRegion};
pub use error::{Error, Result};
pub use geometry::PointSet;
pub use partitioner::{Algorithm, PartitionConfig, PartitionResult};
