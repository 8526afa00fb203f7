//! Total cut complexes of graphs, element matchings with certified
//! acyclicity, and exact integer reduced homology.
//!
//! The total `k`-cut complex of a graph `G` has as facets the complements of
//! the size-`k` independent sets of `G`. The crate builds these complexes
//! (and their Alexander duals directly), runs sequences of element matchings
//! over the face poset, and computes reduced homology over `Z` through Smith
//! normal form.

pub mod blocks;
pub mod budget;
pub mod complex;
pub mod error;
pub mod graph;
pub mod homology;
pub mod morse;
pub mod set;
pub mod verify;

pub use budget::Budget;
pub use complex::{Kind, SimplicialComplex};
pub use error::{Error, Result};
pub use graph::{Graph, GraphSpec};
pub use homology::{HomologyGroup, HomologyProfile, Method};
pub use set::VertexSet;
