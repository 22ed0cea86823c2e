//! Persistent objects on finite grids and the δ-morphism calculus.

mod grid;
mod interleaving;
mod morphism;
mod object;
mod pullback;
mod reindex;
pub mod search;

pub use grid::Grid;
pub use interleaving::{Condition, Interleaving, InterleavingReport, Violation, CERTIFICATE_FORMAT};
pub use morphism::{merged_grid, ComponentDoc, DeltaMorphism};
pub use object::{PersistentObject, OBJECT_FORMAT};
pub use search::{find_interleaving, find_partner, interleaving_distance, DistanceSearch};
pub use pullback::{pullback_interleaving, PulledBack};
pub use reindex::{
    covering_window, extend_floor, floor_roundtrip_certificate, rescale, rescale_interleaving, rescale_morphism, restrict_to_z,
};
