//! Connections on free modules, Chern-Weil forms, vanishing certificates,
//! transgression and residues.

mod connection;
mod invariant;
mod residue;
mod tpoly;
mod vanishing;

pub use connection::{transgression, ChernForm, Connection};
pub use invariant::InvariantPolynomial;
pub use residue::{fiber_primitive, residue, ResidueClass};
pub use vanishing::{is_flat_along, verify_bott_vanishing, verify_theorem_t1, BottCertificate, Flatness, T1Certificate};
