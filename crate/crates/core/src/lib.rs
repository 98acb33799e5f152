//! Exact combinatorics of positroid cells: decorated permutations, Le-diagrams, plabic
//! graphs, the BCFW recursions for `m = 2` and `m = 4`, Catalan bijections, network
//! parameterizations, the amplituhedron map and sign-variation tools.

pub mod catalan;
pub mod diagrams;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod permutations;
pub mod plabic;
pub mod render;
pub mod signs;
pub mod util;

pub use catalan::{BinaryTree, DyckPath, PathPair, PlanePartition, Step};
pub use diagrams::OPlusDiagram;
pub use error::{Error, Result};
pub use experiments::{ExperimentReport, Verdict};
pub use linalg::{CellSample, GrassmannPoint, RationalMatrix, Q};
pub use permutations::{Color, DecoratedPermutation};
pub use plabic::{Network, PlabicGraph};
pub use signs::{Domino, Flavor, K2Classification, SignVector};
