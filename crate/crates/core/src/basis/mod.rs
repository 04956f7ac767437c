//! Gauss–Legendre quadrature and hierarchical shape functions.

mod gauss;
mod shapes;

pub use gauss::{gauss_rule, legendre_with_derivative, Rule1D, MAX_GAUSS_POINTS};
pub use shapes::{
    interior_mode_count, mode_count, modes_per_cell, Edge, Mode, ModeKind, PolySpace, ShapeSet2D,
    ShapeValues,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BasisError {
    #[error("unsupported order: {0} Gauss points (supported 1..=64)")]
    UnsupportedOrder(usize),
}
