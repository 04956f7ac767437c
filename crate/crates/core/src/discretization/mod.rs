//! Cartesian grids, dof numbering, cut-cell quadrature and Dirichlet masks.

mod dirichlet;
mod grid;
mod quadrature;

pub use dirichlet::{dirichlet_mask, side_mask, GridSide};
pub use grid::{number_dofs, CellGrid};
pub use quadrature::{build_quadrature, CellQuadrature, QuadPoint, QuadratureOptions, QuadratureSet, Side};

use crate::geometry::GeometryError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DiscretizationError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid quadrature: {0}")]
    InvalidQuadrature(String),
    #[error("non-grid-aligned Dirichlet boundary")]
    NotGridAligned,
    #[error("component {0} does not exist on this grid")]
    InvalidComponent(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
