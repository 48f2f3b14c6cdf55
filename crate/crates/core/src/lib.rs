pub mod building;
pub mod dl;
pub mod error;
pub mod field;
pub mod lattice;
pub mod matrix;
pub mod report;
pub mod ring;
pub mod rz;
pub mod subspace;
pub mod suite;
pub mod weyl;

pub use error::{Result, StrataError};
