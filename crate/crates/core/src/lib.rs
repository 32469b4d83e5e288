//! Situational method-chunk selection: a project-characteristics typology,
//! a method base, criteria weighting and multicriteria prioritization.

pub mod decision;
pub mod error;
pub mod example;
pub mod method_base;
pub mod prioritization;
pub mod selection;
pub mod typology;
pub mod value;
pub mod weighting;

pub use error::{Error, Result};
pub use method_base::{Candidate, MethodChunk, Repository};
pub use selection::{run_selection, SelectionRequest, Technique};
pub use typology::{Characteristic, Dimension, ProjectProfile, Typology};
pub use value::Value;
