//! Exact lattice arithmetic for Picard lattices of polarized K3 surfaces.
//!
//! [`lattice`] holds even integral lattices and their invariants,
//! [`enumerate`] finds every class with a prescribed square and pairings,
//! [`geometry`] decides ampleness and linear-system questions for a
//! polarized lattice, and [`verify`] replays the case analysis for the
//! families `Γ_{jkh}` as [`certificate::Certificate`] trees.

pub mod certificate;
pub mod enumerate;
pub mod family;
pub mod geometry;
pub mod io;
pub mod json_int;
pub mod lattice;
pub mod verify;
