//! Dirichlet p-Laplacian eigenpairs, Cheeger constants and symmetry reductions
//! on weighted graphs, plus the one-dimensional reduction of spherically
//! symmetric model families.

pub mod cheeger;
pub mod checks;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod io;
pub mod linear;
pub mod rational;
pub mod spectral;
pub mod symmetry;

pub use error::{Error, Result};
pub use graph::{build_domain, Bipartition, DirichletDomain, VertexSet, WeightedGraph};
pub use rational::Rational;
