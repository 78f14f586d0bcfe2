pub mod chern_weil;
pub mod derham;
pub mod crystalline;
pub mod error;
pub mod foliation;
pub mod linalg;
pub mod poly;
pub mod zmod;

pub use error::{Error, Result};
