pub mod autos;
pub mod bitset;
pub mod coxeter;
pub mod error;
pub mod field;
pub mod geometry;
pub mod linalg;
pub mod oracle;
pub mod rootgeom;
pub mod spectra;

pub use error::{Error, Result};
