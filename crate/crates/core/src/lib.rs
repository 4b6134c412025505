pub mod acceptance;
pub mod averaging;
pub mod error;
pub mod group_models;
pub mod lattice_alg;
pub mod reidemeister;
pub mod trace_geometry;

pub use error::{Error, Result};
