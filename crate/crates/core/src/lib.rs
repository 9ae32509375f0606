//! Combinatorics of binomial edge ideals: cutsets, unmixedness,
//! accessibility, strong unmixedness, block reductions, star products and
//! r-cut-connectivity, with certificates and a verification harness.

pub mod bitset;
pub mod constructors;
pub mod cutsets;
pub mod error;
pub mod graph;
pub mod harness;
pub mod io;
pub mod iso;
pub mod properties;

pub use cutsets::{Budget, CutSet, CutSetFamily};
pub use error::{Error, Result};
pub use graph::{BlockDecomposition, Graph, PathSearch, Vertex};
