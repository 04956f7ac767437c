use std::collections::BTreeSet;

use crate::geometry::Point;

use super::{CellGrid, DiscretizationError};

/// One of the four outer sides of a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GridSide {
    Bottom,
    Right,
    Top,
    Left,
}

impl GridSide {
    pub const ALL: [GridSide; 4] = [GridSide::Bottom, GridSide::Right, GridSide::Top, GridSide::Left];

    pub fn name(self) -> &'static str {
        match self {
            GridSide::Bottom => "bottom",
            GridSide::Right => "right",
            GridSide::Top => "top",
            GridSide::Left => "left",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|side| side.name() == s)
    }

    pub fn outward_normal(self) -> [f64; 2] {
        match self {
            GridSide::Bottom => [0.0, -1.0],
            GridSide::Right => [1.0, 0.0],
            GridSide::Top => [0.0, 1.0],
            GridSide::Left => [-1.0, 0.0],
        }
    }

    /// Whether the grid edge from `a` to `b` lies on this side of `grid`.
    pub fn contains(self, grid: &CellGrid, a: Point, b: Point) -> bool {
        let r = grid.bounds();
        match self {
            GridSide::Bottom => a[1] == r.min[1] && b[1] == r.min[1],
            GridSide::Top => a[1] == r.max[1] && b[1] == r.max[1],
            GridSide::Left => a[0] == r.min[0] && b[0] == r.min[0],
            GridSide::Right => a[0] == r.max[0] && b[0] == r.max[0],
        }
    }
}

/// Global dofs of `components` on every grid edge selected by `predicate`,
/// including the edge end vertices. The predicate sees the edge end points.
///
/// Only outer grid edges may be selected.
pub fn dirichlet_mask(
    grid: &CellGrid,
    predicate: &dyn Fn(Point, Point) -> bool,
    components: &[usize],
) -> Result<Vec<usize>, DiscretizationError> {
    let (nx, ny) = grid.cells();
    let p = grid.degree();
    let nc = grid.n_components();
    if let Some(&c) = components.iter().find(|&&c| c >= nc) {
        return Err(DiscretizationError::InvalidComponent(c));
    }
    let mut scalars = BTreeSet::new();
    for j in 0..=ny {
        for i in 0..nx {
            let (a, b) = (grid.vertex(i, j), grid.vertex(i + 1, j));
            if predicate(a, b) {
                if j != 0 && j != ny {
                    return Err(DiscretizationError::NotGridAligned);
                }
                scalars.insert(grid.vertex_dof(i, j));
                scalars.insert(grid.vertex_dof(i + 1, j));
                scalars.extend((2..=p).map(|k| grid.h_edge_dof(i, j, k)));
            }
        }
    }
    for j in 0..ny {
        for i in 0..=nx {
            let (a, b) = (grid.vertex(i, j), grid.vertex(i, j + 1));
            if predicate(a, b) {
                if i != 0 && i != nx {
                    return Err(DiscretizationError::NotGridAligned);
                }
                scalars.insert(grid.vertex_dof(i, j));
                scalars.insert(grid.vertex_dof(i, j + 1));
                scalars.extend((2..=p).map(|k| grid.v_edge_dof(i, j, k)));
            }
        }
    }
    let mut out: Vec<usize> = scalars
        .into_iter()
        .flat_map(|s| components.iter().map(move |&c| s * nc + c))
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// [`dirichlet_mask`] for whole grid sides.
pub fn side_mask(grid: &CellGrid, sides: &[GridSide], components: &[usize]) -> Result<Vec<usize>, DiscretizationError> {
    dirichlet_mask(grid, &|a, b| sides.iter().any(|s| s.contains(grid, a, b)), components)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::PolySpace;

    fn grid(nx: usize, ny: usize, p: usize, nc: usize) -> CellGrid {
        CellGrid::new([0.0, 0.0], [0.1 / 60.0, 0.1 / 60.0], (nx, ny), p, PolySpace::Trunk, nc).unwrap()
    }

    #[test]
    fn clamped_horizontal_boundaries() {
        let g = grid(180, 60, 3, 2);
        let m = side_mask(&g, &[GridSide::Bottom], &[0, 1]).unwrap();
        assert_eq!(m.len(), (181 + 180 * 2) * 2);
        let both = side_mask(&g, &[GridSide::Bottom, GridSide::Top], &[0, 1]).unwrap();
        assert_eq!(both.len(), 2 * (181 + 180 * 2) * 2);
    }

    #[test]
    fn empty_predicate() {
        let g = grid(3, 3, 2, 1);
        assert!(dirichlet_mask(&g, &|_, _| false, &[0]).unwrap().is_empty());
    }

    #[test]
    fn all_sides_allowed() {
        let g = grid(3, 2, 2, 1);
        let m = side_mask(&g, &GridSide::ALL, &[0]).unwrap();
        // 10 boundary vertices + 10 boundary edges with one mode each
        assert_eq!(m.len(), 20);
    }

    #[test]
    fn interior_edges_rejected() {
        let g = grid(3, 3, 2, 1);
        let r = dirichlet_mask(&g, &|a, b| a[0] == b[0] && a[0] > 0.0 && a[0] < g.bounds().max[0], &[0]);
        assert_eq!(r, Err(DiscretizationError::NotGridAligned));
    }

    #[test]
    fn single_component() {
        let g = grid(2, 2, 1, 2);
        let m = side_mask(&g, &[GridSide::Right], &[0]).unwrap();
        assert_eq!(m, vec![2 * 2, 5 * 2, 8 * 2]);
    }
}
