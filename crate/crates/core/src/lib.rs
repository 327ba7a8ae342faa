//! Combinatorics of Gelfand-Tsetlin polytopes through ladder diagrams.

pub mod autgroup;
pub mod chains;
pub mod error;
pub mod grid;
pub mod ladder;
pub mod partition;
pub mod report;
pub mod render;
pub mod skeleton;

pub use error::{Error, ParseError, Result};
pub use grid::{EdgeSet, GammaGrid, GridEdge, GridPoint, Orientation, Planar, MAX_N};
pub use ladder::{FaceLattice, GtPoint, LadderDiagram};
pub use partition::{parse_partition, MultiplicityVector, Partition};
