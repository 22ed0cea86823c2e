//! Strict interleavings of persistent objects presented on finite grids.
//!
//! Persistent objects take values in finite sets, F2-vector spaces or finite
//! simplicial complexes. The crate provides the δ-morphism calculus and a
//! checker for interleaving certificates, pullbacks of interleavings, the
//! integer reindexing and zig-zag rectification constructions, filtered
//! complexes with a decision procedure for being filtered, persistent π₀ and
//! homology, and exact bottleneck distances.
//!
//! All arithmetic is exact: grades are arbitrary-precision rationals.

pub mod category;
pub mod distances;
pub mod error;
pub mod filtered;
pub mod grades;
pub mod invariants;
pub mod persist;
pub mod rectify;
pub mod sample;

pub use error::{Error, Result};
pub use grades::{Grade, Rational};
