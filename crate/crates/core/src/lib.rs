//! Computational workbench for filters, invariant topologies and
//! neighbourhood filters of countable graphs.

pub mod actions;
pub mod error;
pub mod fraisse;
pub mod graph;
pub mod group;
pub mod oracle;
pub mod perm;
pub mod preorder;
pub mod rado;
pub mod report;
pub mod sets;
pub mod topology;

pub use error::{Error, Result};
pub use graph::SimpleGraph;
pub use group::PermGroup;
pub use oracle::GraphOracle;
pub use perm::Permutation;
pub use preorder::Preorder;
pub use sets::{FilterBase, OmegaSet, TriState, Universe};
pub use topology::FiniteTopology;
