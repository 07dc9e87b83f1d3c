//! Vector bundles on cycles of projective lines over finite fields.
//!
//! Bundles are handled through gluing triples: a splitting type on each component of the
//! normalization and invertible gluing matrices at the node preimages. The crate builds
//! the canonical band triples `B(d, m, lambda)`, computes morphism spaces, decomposes
//! triples into bands, and applies the Frobenius pullback, which scales all degrees by
//! `p` and raises every gluing entry to the `p`-th power.

pub mod band;
pub mod birkhoff;
pub mod decompose;
pub mod error;
pub mod field;
pub mod format;
pub mod frobenius;
pub mod hom;
pub mod iso;
pub mod laurent;
pub mod matrix;
pub mod poly;
pub mod triple;

pub use band::{canonical_band, jordan_block, make_band_triple, BandData};
pub use birkhoff::{birkhoff_factor, birkhoff_split, SplittingType};
pub use decompose::{decompose, Decomposition};
pub use error::{Error, Result};
pub use field::{extend_field, Elem, Embedding, Field};
pub use frobenius::{iterate_pullback, pullback_triple, verify_theorem, PullbackReport};
pub use hom::{hom_triples, HomBasis};
pub use iso::is_isomorphic;
pub use laurent::{hom_sections, transition_of_line_bundle, Laurent, LaurentMatrix, SectionRep};
pub use matrix::Mat;
pub use poly::Poly;
pub use triple::{CycleGeometry, NodeGluing, Triple};
