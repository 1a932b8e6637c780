//! Many-sorted transition algebras: syntax, finite semantics, institution
//! operations, model classes, omitting types and forcing.

pub mod kernel;

pub use kernel::*;
pub mod finmod;
pub mod fixtures;
pub mod institution;
pub mod testgen;
pub mod classes;
pub mod forcing;
pub mod surface;
pub mod types;
