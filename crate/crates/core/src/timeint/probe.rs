use crate::discretization::CellGrid;
use crate::geometry::Point;

/// Evaluates one field component at a fixed point as a weighted sum of dofs.
#[derive(Debug, Clone, PartialEq)]
pub struct PointProbe {
    pub point: Point,
    pub dofs: Vec<usize>,
    pub weights: Vec<f64>,
}

impl PointProbe {
    /// Probe for component `component` of the field on `grid`, whose dofs
    /// start at `offset` in the global vector. `None` if `p` is off the grid.
    pub fn new(grid: &CellGrid, p: Point, component: usize, offset: usize) -> Option<Self> {
        let (cell, xi) = grid.locate(p)?;
        let mut values = Vec::new();
        grid.shapes().values_into(xi, &mut values);
        let nc = grid.n_components();
        let (dofs, weights) = grid
            .cell_scalar_dofs(cell)
            .into_iter()
            .zip(values)
            .filter(|&(_, w)| w != 0.0)
            .map(|(s, w)| (offset + s * nc + component, w))
            .unzip();
        Some(Self { point: p, dofs, weights })
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.dofs.iter().zip(&self.weights).map(|(&d, w)| w * x[d]).sum()
    }
}

/// Acoustic pressure `p = ρ_f ψ̇` from the potential rate.
pub fn recover_pressure(fluid_density: f64, potential_rate: f64) -> f64 {
    fluid_density * potential_rate
}
