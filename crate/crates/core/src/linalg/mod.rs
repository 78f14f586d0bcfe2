//! Normal-form linear algebra over `Z/p^n`.

mod homology;
mod howell;
mod matrix;
mod smith;

pub use homology::{homology_at, kernel, solve, subquotient, ModuleDecomposition, NoSolution, Summand};
pub use howell::{howell_form, HowellForm};
pub use matrix::Matrix;
pub use smith::{smith_form, SmithForm};
