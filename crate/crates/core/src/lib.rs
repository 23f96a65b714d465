//! Positive maps on matrix algebras: Choi-matrix algebra, cone-membership
//! predicates with re-checkable witnesses, and constructive certificates for
//! cones generated by a single map.

pub mod catalog;
pub mod classify2;
pub mod cli;
pub mod cones;
pub mod error;
pub mod generate;
pub mod linops;
pub mod order;
pub mod posmaps;

pub use error::{ConeError, Result};
pub use linops::{BipartiteOperator, ComplexMatrix, HermitianOperator, Subsystem, Tolerances, C64};
pub use posmaps::LinearMap;
