//! Turns a validated scenario into grids, quadrature and the coupled system.

use crate::assembly::{
    assemble_boundary_load, assemble_coupling, assemble_fluid, assemble_structure, BoundaryIndicator, CoupledSystem,
};
use crate::config::{ConfigError, LoadKind, ObserverField, ScenarioConfig};
use crate::discretization::{build_quadrature, side_mask, CellGrid, Side};
use crate::error::Error;
use crate::geometry::CsgExpression;
use crate::scenarios::RickerSignal;
use crate::timeint::PointProbe;

/// One recorded quantity at a fixed point.
#[derive(Debug, Clone)]
pub struct Observer {
    pub name: String,
    pub kind: ObserverField,
    probes: Vec<PointProbe>,
    scale: f64,
}

impl Observer {
    /// Pressure from the potential rate, or the displacement magnitude.
    pub fn sample(&self, u: &[f64], v: &[f64]) -> f64 {
        match self.kind {
            ObserverField::FluidPressure => self.scale * self.probes[0].value(v),
            ObserverField::StructureDisplacement => self.probes.iter().map(|p| p.value(u).powi(2)).sum::<f64>().sqrt(),
        }
    }
}

/// Setup statistics reported in the run manifest.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ModelStats {
    pub structure_dofs: usize,
    pub fluid_dofs: usize,
    pub structure_cut_cells: usize,
    pub fluid_cut_cells: usize,
    pub interface_segments: usize,
    pub constrained_dofs: usize,
}

pub struct Model {
    pub config: ScenarioConfig,
    pub geometry: CsgExpression,
    pub structure_grid: CellGrid,
    pub fluid_grid: CellGrid,
    pub system: CoupledSystem,
    pub signal: RickerSignal,
    pub observers: Vec<Observer>,
    pub stats: ModelStats,
}

impl Model {
    pub fn build(config: &ScenarioConfig) -> Result<Self, Error> {
        let problems = config.validate();
        if !problems.is_empty() {
            return Err(ConfigError::Validation(problems).into());
        }
        let geometry = config.structure_csg().map_err(|m| ConfigError::Validation(vec![m]))?;
        let sg = &config.structure.grid;
        let fg = &config.fluid.grid;
        let grid_s = CellGrid::covering(&sg.bounds(), sg.cell_counts(), sg.degree, sg.poly_space(), 2)?;
        let grid_f = CellGrid::covering(&fg.bounds(), fg.cell_counts(), fg.degree, fg.poly_space(), 1)?;
        let opts = config.quadrature.options();
        let quad_s = build_quadrature(&grid_s, &geometry, Side::Structure, &opts)?;
        let quad_f = build_quadrature(&grid_f, &geometry, Side::Fluid, &opts)?;

        let smat = config.structure.material.material();
        let fmat = config.fluid.material.material();
        let c = fmat.sound_speed();
        let (ms, ks) = assemble_structure(&grid_s, &quad_s, &smat)?;
        let (mf, kf) = assemble_fluid(&grid_f, &quad_f, c)?;
        let n_gp_line = sg.degree.max(fg.degree) + 1;
        let coupling = assemble_coupling(&grid_s, &grid_f, &quad_s.segments, n_gp_line)?;

        let ns = grid_s.dof_count();
        let nf = grid_f.dof_count();
        let alpha_min = config.quadrature.alpha_min;
        let side = config.excitation.grid_side();
        let n_gp = config.quadrature.gauss_points;
        let mut load = vec![0.0; ns + nf];
        match config.excitation.load_kind() {
            LoadKind::StructureTraction => {
                let ind = BoundaryIndicator { level_set: &geometry, side: Side::Structure, alpha_min };
                let g = assemble_boundary_load(&grid_s, side, &side.outward_normal(), Some(ind), n_gp)?;
                load[..ns].copy_from_slice(&g);
            }
            LoadKind::FluidVelocity => {
                let ind = BoundaryIndicator { level_set: &geometry, side: Side::Fluid, alpha_min };
                let g = assemble_boundary_load(&grid_f, side, &[c * c], Some(ind), n_gp)?;
                load[ns..].copy_from_slice(&g);
            }
        }

        let sd = &config.structure.dirichlet;
        let fd = &config.fluid.dirichlet;
        let mut constrained = side_mask(&grid_s, &sd.grid_sides(), &sd.components)?;
        constrained.extend(side_mask(&grid_f, &fd.grid_sides(), &fd.components)?.into_iter().map(|d| d + ns));

        let stats = ModelStats {
            structure_dofs: ns,
            fluid_dofs: nf,
            structure_cut_cells: quad_s.n_cut(),
            fluid_cut_cells: quad_f.n_cut(),
            interface_segments: quad_s.segments.len(),
            constrained_dofs: constrained.len(),
        };
        let system = CoupledSystem::new(ms, ks, mf, kf, coupling, fmat.density, c * c, load, &constrained)?;

        let mut observers = Vec::new();
        for o in &config.observers.points {
            let p = [o.x, o.y];
            let outside = || -> Error { ConfigError::Validation(vec![format!("validation: observer {} lies outside its grid", o.name)]).into() };
            let (probes, scale) = match o.kind() {
                ObserverField::FluidPressure => {
                    (vec![PointProbe::new(&grid_f, p, 0, ns).ok_or_else(outside)?], fmat.density)
                }
                ObserverField::StructureDisplacement => (
                    vec![
                        PointProbe::new(&grid_s, p, 0, 0).ok_or_else(outside)?,
                        PointProbe::new(&grid_s, p, 1, 0).ok_or_else(outside)?,
                    ],
                    1.0,
                ),
            };
            observers.push(Observer { name: o.name.clone(), kind: o.kind(), probes, scale });
        }
        let x = &config.excitation;
        Ok(Self {
            config: config.clone(),
            geometry,
            structure_grid: grid_s,
            fluid_grid: grid_f,
            system,
            signal: RickerSignal::new(x.t0, x.amplitude),
            observers,
            stats,
        })
    }

    /// Indices of the sender and receiver observers, if measures are set.
    pub fn measure_groups(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let m = self.config.measures.as_ref()?;
        let find = |names: &[String]| -> Vec<usize> {
            names.iter().filter_map(|n| self.observers.iter().position(|o| &o.name == n)).collect()
        };
        Some((find(&m.sender), find(&m.receiver)))
    }
}
