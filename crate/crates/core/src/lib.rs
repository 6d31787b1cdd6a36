//! Exact-arithmetic tools for the cohomology of matched pairs of finite groups.

pub mod cli;
pub mod cocycle;
pub mod fixtures;
pub mod gamma;
pub mod group;
pub mod homology;
pub mod io;
pub mod matched_pair;
pub mod sequence;
pub mod sparse;

pub use group::{FiniteGroup, GroupError, SubgroupSpec};
pub use homology::{cohomology, AbelianGroupInfo, Cochain, Coefficients, CohomologyGroup, HomologyError};
pub use matched_pair::{MatchedPair, MatchedPairError};
pub use sparse::SparseMatrix;
