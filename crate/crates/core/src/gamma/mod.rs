//! Grid spaces, the complexes built on them, and the cochain maps between those complexes.

pub mod complex;
pub mod grid;
pub mod transforms;

pub use complex::{build_complex, Basis, Block, BlockEntry, CochainComplex, ComplexBuilder, ComplexError, ComplexKind, Factor};
pub use grid::{gamma_size, Grid, GridError};
pub use transforms::ChainMap;
