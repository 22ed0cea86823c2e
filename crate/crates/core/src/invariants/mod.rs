//! Invariants of persistent complexes: `π₀`, homology over F2 and barcodes.
//!
//! Higher homotopy groups are not computed; homology stands in for them.

mod barcode;
mod homology;
mod pi0;

pub use barcode::{barcode, Bar, Barcode, Death, BARCODE_FORMAT};
pub use homology::{homology, homology_interleaving, homology_morphism, restrict_to_line, HomologyBasis};
pub use pi0::{induces_interleaving_in_pi0, pi0, pi0_induced, Components};
