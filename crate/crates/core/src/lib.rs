//! Time-domain vibroacoustics on two superimposed finite cell grids.
//!
//! An elastic structure and an acoustic fluid (velocity potential) share an
//! extended rectangular domain. The geometry enters only through a level set
//! and the indicator function, and the two fields are coupled monolithically
//! along the zero level set.

pub mod basis;
pub mod geometry;
pub mod discretization;
pub mod assembly;
pub mod timeint;
pub mod config;
pub mod scenarios;
pub mod error;
pub mod model;
pub mod io;

pub use error::Error;
