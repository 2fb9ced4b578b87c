//! Hypergraphs with restricted pairwise intersections: membership in
//! `J(r,t)`, extremal constructions, sunflowers, divisible set systems, star
//! analysis, the structure decomposition and exhaustive extremal search.

pub mod clique;
pub mod constructions;
pub mod counting;
pub mod decomposition;
pub mod error;
pub mod hypergraph;
pub mod profiles;
pub mod search;
pub mod stars;
pub mod structure;
pub mod sunflowers;
pub mod vertex_set;

pub use error::{Error, Result};
pub use hypergraph::Hypergraph;
pub use profiles::{DivisiblePairParams, JrtParams};
pub use vertex_set::VertexSet;
