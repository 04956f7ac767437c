use crate::basis::{interior_mode_count, ModeKind, PolySpace, ShapeSet2D};
use crate::geometry::{Point, Rect};

use super::DiscretizationError;

/// Cartesian grid over a rectangle with hierarchical modes of one field.
#[derive(Debug, Clone, PartialEq)]
pub struct CellGrid {
    origin: Point,
    cell_size: [f64; 2],
    nx: usize,
    ny: usize,
    shapes: ShapeSet2D,
    n_components: usize,
}

impl CellGrid {
    pub fn new(
        origin: Point,
        cell_size: [f64; 2],
        cells: (usize, usize),
        degree: usize,
        space: PolySpace,
        n_components: usize,
    ) -> Result<Self, DiscretizationError> {
        let mut problems = Vec::new();
        if !(origin[0].is_finite() && origin[1].is_finite()) {
            problems.push("origin must be finite");
        }
        if !(cell_size[0] > 0.0 && cell_size[1] > 0.0 && cell_size[0].is_finite() && cell_size[1].is_finite()) {
            problems.push("cell size must be positive");
        }
        if cells.0 == 0 || cells.1 == 0 {
            problems.push("cell counts must be at least 1");
        }
        if degree == 0 || degree > 16 {
            problems.push("degree must be in 1..=16");
        }
        if n_components == 0 {
            problems.push("at least one component is required");
        }
        if let Some(p) = problems.first() {
            return Err(DiscretizationError::InvalidGrid(p.to_string()));
        }
        Ok(Self {
            origin,
            cell_size,
            nx: cells.0,
            ny: cells.1,
            shapes: ShapeSet2D::new(degree, space),
            n_components,
        })
    }

    /// Grid of `cells` covering `bounds` exactly.
    pub fn covering(
        bounds: &Rect,
        cells: (usize, usize),
        degree: usize,
        space: PolySpace,
        n_components: usize,
    ) -> Result<Self, DiscretizationError> {
        let hx = bounds.width() / cells.0.max(1) as f64;
        let hy = bounds.height() / cells.1.max(1) as f64;
        Self::new(bounds.min, [hx, hy], cells, degree, space, n_components)
    }

    pub fn origin(&self) -> Point {
        self.origin
    }

    pub fn cell_size(&self) -> [f64; 2] {
        self.cell_size
    }

    pub fn cells(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn n_cells(&self) -> usize {
        self.nx * self.ny
    }

    pub fn degree(&self) -> usize {
        self.shapes.degree()
    }

    pub fn space(&self) -> PolySpace {
        self.shapes.space()
    }

    pub fn shapes(&self) -> &ShapeSet2D {
        &self.shapes
    }

    pub fn n_components(&self) -> usize {
        self.n_components
    }

    pub fn bounds(&self) -> Rect {
        Rect::new(self.origin, self.vertex(self.nx, self.ny))
    }

    /// Grid vertex `(i, j)`, computed from the origin without accumulation.
    pub fn vertex(&self, i: usize, j: usize) -> Point {
        [self.origin[0] + self.cell_size[0] * i as f64, self.origin[1] + self.cell_size[1] * j as f64]
    }

    pub fn cell_index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn cell_ij(&self, cell: usize) -> (usize, usize) {
        (cell % self.nx, cell / self.nx)
    }

    pub fn cell_bounds(&self, cell: usize) -> Rect {
        let (i, j) = self.cell_ij(cell);
        Rect::new(self.vertex(i, j), self.vertex(i + 1, j + 1))
    }

    /// Cell containing `p` and the reference coordinates of `p` in it.
    /// Points on shared cell edges go to the cell with the larger index.
    pub fn locate(&self, p: Point) -> Option<(usize, [f64; 2])> {
        let b = self.bounds();
        let tol = 1e-12 * (b.width() + b.height());
        if !(p[0] >= b.min[0] - tol && p[0] <= b.max[0] + tol && p[1] >= b.min[1] - tol && p[1] <= b.max[1] + tol) {
            return None;
        }
        let fx = (p[0] - self.origin[0]) / self.cell_size[0];
        let fy = (p[1] - self.origin[1]) / self.cell_size[1];
        let i = (fx.floor().max(0.0) as usize).min(self.nx - 1);
        let j = (fy.floor().max(0.0) as usize).min(self.ny - 1);
        let cell = self.cell_index(i, j);
        let r = self.cell_bounds(cell);
        let xi = [
            (2.0 * (p[0] - r.min[0]) / r.width() - 1.0).clamp(-1.0, 1.0),
            (2.0 * (p[1] - r.min[1]) / r.height() - 1.0).clamp(-1.0, 1.0),
        ];
        Some((cell, xi))
    }

    /// Number of scalar (single-component) modes on the whole grid.
    pub fn scalar_dof_count(&self) -> usize {
        let (nx, ny, p) = (self.nx, self.ny, self.degree());
        (nx + 1) * (ny + 1) + (p - 1) * (nx * (ny + 1) + ny * (nx + 1)) + nx * ny * interior_mode_count(p, self.space())
    }

    pub fn dof_count(&self) -> usize {
        self.scalar_dof_count() * self.n_components
    }

    fn h_edge_base(&self) -> usize {
        (self.nx + 1) * (self.ny + 1)
    }

    fn v_edge_base(&self) -> usize {
        self.h_edge_base() + (self.degree() - 1) * self.nx * (self.ny + 1)
    }

    fn interior_base(&self) -> usize {
        self.v_edge_base() + (self.degree() - 1) * self.ny * (self.nx + 1)
    }

    pub fn vertex_dof(&self, i: usize, j: usize) -> usize {
        j * (self.nx + 1) + i
    }

    /// Scalar index of the degree-`k` mode on horizontal edge `(i, j)`
    /// (from vertex `(i, j)` to `(i + 1, j)`).
    pub fn h_edge_dof(&self, i: usize, j: usize, k: usize) -> usize {
        self.h_edge_base() + (j * self.nx + i) * (self.degree() - 1) + (k - 2)
    }

    /// Scalar index of the degree-`k` mode on vertical edge `(i, j)`
    /// (from vertex `(i, j)` to `(i, j + 1)`).
    pub fn v_edge_dof(&self, i: usize, j: usize, k: usize) -> usize {
        self.v_edge_base() + (j * (self.nx + 1) + i) * (self.degree() - 1) + (k - 2)
    }

    /// Global scalar indices of the local modes of `cell`, in local order.
    pub fn cell_scalar_dofs(&self, cell: usize) -> Vec<usize> {
        let (i, j) = self.cell_ij(cell);
        let n_int = interior_mode_count(self.degree(), self.space());
        let mut interior = 0;
        self.shapes
            .modes()
            .iter()
            .map(|m| match m.kind {
                ModeKind::Vertex(0) => self.vertex_dof(i, j),
                ModeKind::Vertex(1) => self.vertex_dof(i + 1, j),
                ModeKind::Vertex(2) => self.vertex_dof(i + 1, j + 1),
                ModeKind::Vertex(_) => self.vertex_dof(i, j + 1),
                ModeKind::Edge { edge, degree } => match edge {
                    crate::basis::Edge::Bottom => self.h_edge_dof(i, j, degree),
                    crate::basis::Edge::Top => self.h_edge_dof(i, j + 1, degree),
                    crate::basis::Edge::Left => self.v_edge_dof(i, j, degree),
                    crate::basis::Edge::Right => self.v_edge_dof(i + 1, j, degree),
                },
                ModeKind::Interior { .. } => {
                    let d = self.interior_base() + cell * n_int + interior;
                    interior += 1;
                    d
                }
            })
            .collect()
    }

    /// Global indices of all local dofs of `cell`; local dof `l * ncomp + c`
    /// maps to global `scalar * ncomp + c`.
    pub fn cell_dofs(&self, cell: usize) -> Vec<usize> {
        let nc = self.n_components;
        self.cell_scalar_dofs(cell)
            .into_iter()
            .flat_map(|s| (0..nc).map(move |c| s * nc + c))
            .collect()
    }
}

/// Total dof count and the per-cell global index lists.
pub fn number_dofs(grid: &CellGrid) -> (usize, Vec<Vec<usize>>) {
    let maps = (0..grid.n_cells()).map(|c| grid.cell_dofs(c)).collect();
    (grid.dof_count(), maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::{BTreeMap, BTreeSet};

    fn grid(nx: usize, ny: usize, p: usize, space: PolySpace, nc: usize) -> CellGrid {
        CellGrid::new([0.0, 0.0], [1.0, 1.0], (nx, ny), p, space, nc).unwrap()
    }

    #[test]
    fn reference_dof_counts() {
        assert_eq!(grid(180, 60, 3, PolySpace::Trunk, 1).dof_count(), 54721);
        assert_eq!(grid(180, 60, 3, PolySpace::Trunk, 2).dof_count(), 109442);
        assert_eq!(grid(420, 60, 2, PolySpace::Trunk, 1).dof_count(), 76561);
        assert_eq!(grid(60, 60, 2, PolySpace::Trunk, 2).dof_count(), 22082);
    }

    #[test]
    fn locate_points() {
        let g = CellGrid::new([1.0, 2.0], [0.5, 0.25], (4, 4), 1, PolySpace::Trunk, 1).unwrap();
        let (c, xi) = g.locate([1.25, 2.125]).unwrap();
        assert_eq!(c, 0);
        assert!((xi[0]).abs() < 1e-14 && xi[1].abs() < 1e-14);
        assert_eq!(g.locate([3.0, 3.0]).unwrap().0, 15);
        assert!(g.locate([0.9, 2.5]).is_none());
    }

    #[test]
    fn invalid_grids_rejected() {
        assert!(CellGrid::new([0.0, 0.0], [0.0, 1.0], (1, 1), 1, PolySpace::Trunk, 1).is_err());
        assert!(CellGrid::new([0.0, 0.0], [1.0, 1.0], (0, 1), 1, PolySpace::Trunk, 1).is_err());
    }

    #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
    enum Entity {
        Vertex(usize, usize),
        HEdge(usize, usize, usize),
        VEdge(usize, usize, usize),
        Interior(usize, usize),
    }

    proptest! {
        // Brute force: name every mode by the geometric entity it lives on,
        // check the numbering is a bijection that shares entities between cells.
        #[test]
        fn numbering_matches_entity_enumeration(
            nx in 1usize..=4, ny in 1usize..=4, p in 1usize..=4, tensor in any::<bool>(), nc in 1usize..=2
        ) {
            let space = if tensor { PolySpace::Tensor } else { PolySpace::Trunk };
            let g = grid(nx, ny, p, space, nc);
            let mut by_entity: BTreeMap<Entity, usize> = BTreeMap::new();
            for cell in 0..g.n_cells() {
                let (i, j) = g.cell_ij(cell);
                let dofs = g.cell_scalar_dofs(cell);
                let mut interior = 0;
                for (m, &d) in g.shapes().modes().iter().zip(&dofs) {
                    let e = match m.kind {
                        ModeKind::Vertex(0) => Entity::Vertex(i, j),
                        ModeKind::Vertex(1) => Entity::Vertex(i + 1, j),
                        ModeKind::Vertex(2) => Entity::Vertex(i + 1, j + 1),
                        ModeKind::Vertex(_) => Entity::Vertex(i, j + 1),
                        ModeKind::Edge { edge, degree } => match edge {
                            crate::basis::Edge::Bottom => Entity::HEdge(i, j, degree),
                            crate::basis::Edge::Top => Entity::HEdge(i, j + 1, degree),
                            crate::basis::Edge::Left => Entity::VEdge(i, j, degree),
                            crate::basis::Edge::Right => Entity::VEdge(i + 1, j, degree),
                        },
                        ModeKind::Interior { .. } => { interior += 1; Entity::Interior(cell, interior) }
                    };
                    if let Some(&prev) = by_entity.get(&e) {
                        prop_assert_eq!(prev, d);
                    }
                    by_entity.insert(e, d);
                }
            }
            let all: BTreeSet<usize> = by_entity.values().copied().collect();
            prop_assert_eq!(all.len(), by_entity.len());
            prop_assert_eq!(by_entity.len(), g.scalar_dof_count());
            prop_assert_eq!(*all.iter().next_back().unwrap(), g.scalar_dof_count() - 1);
            let (total, maps) = number_dofs(&g);
            prop_assert_eq!(total, g.scalar_dof_count() * nc);
            prop_assert!(maps.iter().flatten().all(|&d| d < total));
        }
    }
}
