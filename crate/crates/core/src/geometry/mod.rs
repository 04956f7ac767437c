//! Level-set geometry, quadtree partitions and interface extraction.

mod csg_text;
mod levelset;
mod marching;
mod quadtree;

pub use csg_text::parse_csg;
pub use levelset::{CsgExpression, FnLevelSet, LevelSet, Point, Rect};
pub use marching::{extract_interface, InterfaceSegment, ZERO_PERTURBATION};
pub use quadtree::{
    build_quadtree, classify_cell, structure_area, CellClass, LeafTag, QuadLeaf, QuadTreePartition,
    SUBCELL_SAMPLES,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("invalid level set value at ({x}, {y})")]
    InvalidValue { x: f64, y: f64 },
    #[error("degenerate cell bounds")]
    DegenerateBounds,
}
