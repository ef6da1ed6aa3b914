//! Displacement spectra, diagrams and the classifiers built on them.

pub mod classify;
pub mod diagram;
pub mod relpos;
pub mod report;
pub mod substructure;

pub use diagram::{duality_row_matches, vertex_opposite, DiagramKind, DiagramSymbol};
pub use relpos::relative_position;
pub use report::{DisplacementReport, Spectrum, SpectrumContext, SpectrumMode, DEFAULT_SAMPLES};
pub use substructure::{check_int_k, detect_weyl_substructure, IdealReading, Substructure};
