//! Sparse mass, stiffness, coupling and load assembly.

mod coupling;
mod loads;
mod material;
mod matrices;
mod sparse;
mod system;

pub use coupling::assemble_coupling;
pub use loads::{assemble_body_load, assemble_boundary_load, BoundaryIndicator};
pub use material::{FluidMaterial, PlaneModel, StructureMaterial};
pub use matrices::{
    assemble_fluid, assemble_mass, assemble_stiffness_fluid, assemble_stiffness_structure, assemble_structure,
};
pub use sparse::{CsrMatrix, TripletBuilder};
pub use system::CoupledSystem;

use crate::geometry::GeometryError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AssemblyError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("segment outside extended domain at ({0}, {1})")]
    OutsideDomain(f64, f64),
    #[error("unsupported load region: {0}")]
    UnsupportedLoadRegion(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
