//! Structures for studying when a k-uniform hypergraph admits a perfect
//! matching: levelled set systems with their degree sequences, divisibility
//! lattices over index vectors, exact rational fractional relaxations, and a
//! calculus of transferrals between matched systems.
//!
//! All arithmetic that feeds a certificate is exact (`BigInt` / `BigRational`);
//! no floating point is used anywhere in the library.

pub mod allocation;
pub mod constructions;
pub mod degree;
pub mod density;
pub mod digraph;
pub mod geometry;
pub mod hull;
pub mod hypergraph;
pub mod instance;
pub mod lattice;
pub mod lp;
pub mod partition;
pub mod solver;
pub mod transferral;

use num_rational::BigRational;

pub use allocation::{build_allocation, Allocation, AllocationKind};
pub use constructions::{ConstructionSpec, Generated};
pub use degree::{degree_sequence, f_degree_sequence, partite_degree_sequence, Degree, DegreeSequence};
pub use density::{count_by_index, density_at_index};
pub use hypergraph::{clique_complex, downward_closure, Edge, KComplex, KGraph};
pub use instance::Instance;
pub use lattice::IntegerLattice;
pub use partition::{IndexVector, VertexPartition};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid construction parameters: {0}")]
    ConstructionInvalid(String),
    #[error("density undefined: index {0:?} exceeds the part sizes")]
    UndefinedDensity(Vec<usize>),
    #[error("lattice is already minimal")]
    AlreadyMinimal,
    #[error("point lies outside the hull of the given set")]
    OutsideHull {
        /// Functional a with a.x_j >= offset on the set but a.x < offset at the query point.
        separator: Vec<BigRational>,
        offset: BigRational,
    },
    #[error("target vector lies outside the lattice spanned by the point set")]
    OutsideLattice,
    #[error("search exhausted: {0}")]
    NotFound(String),
}

pub type Result<T> = std::result::Result<T, Error>;
