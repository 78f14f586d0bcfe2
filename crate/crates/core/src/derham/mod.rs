//! Differential forms on framed algebras and finite truncations of their
//! de Rham complexes.

mod complex;
mod form;
mod matrix;

pub use complex::{
    is_fiber_cocycle, unit_weight, BasisForm, Cohomology, ComplexShape, Primitive, Selection, SupportedComplex,
    TruncatedComplex,
};
pub use form::{Form, FormParser, FrameSet};
pub use matrix::FormMatrix;
