//! Transversally smooth foliations given by integrable distributions, their
//! foliated complexes, Hodge filtration and Bott connection.

mod bott;
mod distribution;
mod filtration;

pub use bott::{curvature_of, BottConnection, LeibnizCheck, LeibnizReport};
pub use distribution::{check_integrability, Distribution, Integrability};
pub use filtration::{truncate, FiltrationLevel, FiltrationPiece};
