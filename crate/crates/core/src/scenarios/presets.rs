use crate::config::{
    DirichletSection, ExcitationSection, FluidMaterialSection, FluidSection, GeometrySection, GridSection,
    MeasuresSection, ObserverPoint, ObserverSection, OutputSection, QuadratureSection, ScenarioConfig,
    ScenarioSection, StructureMaterialSection, StructureSection, TimeSection,
};
use crate::geometry::{structure_area, CsgExpression, Rect};

use super::ScenarioError;

pub const PRESET_NAMES: [&str; 4] = ["benchmark", "tube-v1", "tube-v2", "tube-v3"];

/// Porosity shared by all foam variants.
pub const TUBE_POROSITY: f64 = 0.3;

const BENCHMARK_L: f64 = 0.1;
/// Tube length scale L.
pub const TUBE_L: f64 = 0.05;
/// Cells across the tube height.
const TUBE_CELLS: usize = 60;

pub fn preset(name: &str) -> Result<ScenarioConfig, ScenarioError> {
    match name {
        "benchmark" => Ok(build_benchmark()),
        "tube-v1" => build_impedance_tube(1),
        "tube-v2" => build_impedance_tube(2),
        "tube-v3" => build_impedance_tube(3),
        _ => Err(ScenarioError::UnknownPreset(name.to_string())),
    }
}

fn structure_material(model: &str) -> StructureMaterialSection {
    StructureMaterialSection { density: 50.0, youngs_modulus: 1e6, poisson_ratio: 0.3, model: model.into() }
}

fn air() -> FluidMaterialSection {
    FluidMaterialSection { density: 1.225, bulk_modulus: 0.101e6 }
}

fn grid(origin: [f64; 2], extent: [f64; 2], cells: [usize; 2], degree: usize) -> GridSection {
    GridSection { origin, extent, cells, degree, space: "trunk".into() }
}

fn clamped_walls() -> DirichletSection {
    DirichletSection { sides: vec!["bottom".into(), "top".into()], components: vec![0, 1] }
}

fn pressure_observer(name: String, x: f64, y: f64) -> ObserverPoint {
    ObserverPoint { name, x, y, field: "fluid-pressure".into() }
}

/// Benchmark structure: a slab on the loaded left side carrying a half-disc
/// of radius L/5 at mid-height, and a second slab at `x ∈ [2L, 2.5L]`. The
/// fluid fills the gap between the slabs and the strip behind the second one.
pub fn benchmark_geometry(l: f64) -> CsgExpression {
    let r = l / 5.0;
    CsgExpression::union(vec![
        CsgExpression::rect([-l, -l], [0.5 * l, 2.0 * l]),
        CsgExpression::disc([0.5 * l, 0.5 * l], r),
        CsgExpression::rect([2.0 * l, -l], [2.5 * l, 2.0 * l]),
    ])
}

pub fn build_benchmark() -> ScenarioConfig {
    let l = BENCHMARK_L;
    let extent = [3.0 * l, l];
    let cells = [180, 60];
    let observers = [(0.85, 0.5), (0.75, 0.2), (0.75, 0.8), (1.0, 0.5)]
        .iter()
        .enumerate()
        .map(|(i, &(x, y))| pressure_observer(format!("o{}", i + 1), x * l, y * l))
        .collect();
    ScenarioConfig {
        scenario: ScenarioSection { name: "benchmark".into(), length_scale: l },
        geometry: GeometrySection { structure: benchmark_geometry(l).to_string() },
        structure: StructureSection {
            grid: grid([0.0, 0.0], extent, cells, 3),
            material: structure_material("plane-stress"),
            dirichlet: clamped_walls(),
        },
        fluid: FluidSection { grid: grid([0.0, 0.0], extent, cells, 3), material: air(), dirichlet: Default::default() },
        quadrature: QuadratureSection { depth: 7, gauss_points: 4, alpha_min: 1e-8, interface_resolution: 10 },
        time: TimeSection { dt: 1e-8, duration: 2e-3, scheme: "central".into() },
        excitation: ExcitationSection {
            signal: "ricker".into(),
            t0: 1e-4,
            amplitude: 1.0,
            load: "structure-traction".into(),
            boundary: "left".into(),
        },
        observers: ObserverSection { stride: 1, points: observers },
        measures: None,
        output: OutputSection::default(),
    }
}

/// Foam block of the tube: `x ∈ [3L + δ, 4L - δ]` with `δ` half a cell, so
/// that its faces are immersed in the structure grid, and reaching past the
/// walls in `y`.
fn foam_block(l: f64) -> CsgExpression {
    let delta = 0.5 * l / TUBE_CELLS as f64;
    CsgExpression::rect([3.0 * l + delta, -l], [4.0 * l - delta, 2.0 * l])
}

fn block_bounds(l: f64) -> Rect {
    let delta = 0.5 * l / TUBE_CELLS as f64;
    Rect::new([3.0 * l + delta, 0.0], [4.0 * l - delta, l])
}

/// Foam variant `variant` with pore size `size`: slot height (variant 1) or
/// pore radius (variants 2 and 3).
///
/// 1. four horizontal slots through the block,
/// 2. a regular 4 × 4 lattice of circular pores,
/// 3. five staggered columns holding 4, 3, 4, 3, 4 circular pores.
pub fn foam_geometry(variant: u32, size: f64) -> Result<CsgExpression, ScenarioError> {
    let l = TUBE_L;
    let b = block_bounds(l);
    let pores: Vec<CsgExpression> = match variant {
        1 => {
            let bar = (l - 4.0 * size) / 5.0;
            (0..4)
                .map(|k| {
                    let y0 = (k + 1) as f64 * bar + k as f64 * size;
                    CsgExpression::rect([2.0 * l, y0], [5.0 * l, y0 + size])
                })
                .collect()
        }
        2 => {
            let (dx, dy) = (b.width() / 4.0, l / 4.0);
            (0..4)
                .flat_map(|i| (0..4).map(move |j| (i, j)))
                .map(|(i, j)| CsgExpression::disc([b.min[0] + (i as f64 + 0.5) * dx, (j as f64 + 0.5) * dy], size))
                .collect()
        }
        3 => {
            let dx = b.width() / 5.0;
            let mut v = Vec::new();
            for i in 0..5 {
                let x = b.min[0] + (i as f64 + 0.5) * dx;
                if i % 2 == 0 {
                    v.extend((0..4).map(|j| CsgExpression::disc([x, (j as f64 + 0.5) * l / 4.0], size)));
                } else {
                    v.extend((1..4).map(|j| CsgExpression::disc([x, j as f64 * l / 4.0], size)));
                }
            }
            v
        }
        _ => return Err(ScenarioError::UnknownVariant(variant)),
    };
    Ok(CsgExpression::intersection(vec![foam_block(l), CsgExpression::complement(CsgExpression::union(pores))]))
}

/// Largest admissible pore size of a variant.
fn max_pore_size(variant: u32) -> f64 {
    let l = TUBE_L;
    match variant {
        1 => 0.2 * l,
        2 => 0.45 * (block_bounds(l).width() / 4.0).min(l / 4.0),
        _ => 0.45 * (block_bounds(l).width() / 5.0).min(l / 4.0),
    }
}

/// Void fraction of the foam block, measured with the tube's cut-cell
/// quadrature (60 × 60 cells, depth 6, 3 points per direction).
pub fn foam_porosity(csg: &CsgExpression) -> Result<f64, ScenarioError> {
    foam_porosity_with(csg, 6, 3)
}

pub fn foam_porosity_with(csg: &CsgExpression, depth: usize, n_gp: usize) -> Result<f64, ScenarioError> {
    let l = TUBE_L;
    let region = Rect::new([3.0 * l, 0.0], [4.0 * l, l]);
    let solid = structure_area(csg, &region, (TUBE_CELLS, TUBE_CELLS), depth, n_gp)?;
    Ok(1.0 - solid / block_bounds(l).area())
}

/// Pore size giving [`TUBE_POROSITY`], by bisection on the measured porosity.
pub fn calibrate_foam(variant: u32) -> Result<(f64, CsgExpression), ScenarioError> {
    let (mut lo, mut hi) = (0.0, max_pore_size(variant));
    if !(1..=3).contains(&variant) {
        return Err(ScenarioError::UnknownVariant(variant));
    }
    for _ in 0..24 {
        let mid = 0.5 * (lo + hi);
        if foam_porosity(&foam_geometry(variant, mid)?)? < TUBE_POROSITY {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let size = 0.5 * (lo + hi);
    Ok((size, foam_geometry(variant, size)?))
}

pub fn build_impedance_tube(variant: u32) -> Result<ScenarioConfig, ScenarioError> {
    let (_, foam) = calibrate_foam(variant)?;
    let l = TUBE_L;
    let n = TUBE_CELLS;
    let mut points = Vec::new();
    for (prefix, x) in [("s", 2.5 * l), ("r", 4.5 * l)] {
        for k in 1..=5 {
            points.push(pressure_observer(format!("{prefix}{k}"), x, k as f64 * l / 6.0));
        }
    }
    Ok(ScenarioConfig {
        scenario: ScenarioSection { name: format!("tube-v{variant}"), length_scale: l },
        geometry: GeometrySection { structure: foam.to_string() },
        structure: StructureSection {
            grid: grid([3.0 * l, 0.0], [l, l], [n, n], 2),
            material: structure_material("plane-stress"),
            dirichlet: clamped_walls(),
        },
        fluid: FluidSection { grid: grid([0.0, 0.0], [7.0 * l, l], [7 * n, n], 2), material: air(), dirichlet: Default::default() },
        quadrature: QuadratureSection { depth: 6, gauss_points: 3, alpha_min: 1e-8, interface_resolution: 10 },
        time: TimeSection { dt: 1e-8, duration: 2e-3, scheme: "central".into() },
        excitation: ExcitationSection {
            signal: "ricker".into(),
            t0: 1e-4,
            amplitude: 1.0,
            load: "fluid-velocity".into(),
            boundary: "left".into(),
        },
        observers: ObserverSection { stride: 10, points },
        measures: Some(MeasuresSection {
            sender: (1..=5).map(|k| format!("s{k}")).collect(),
            receiver: (1..=5).map(|k| format!("r{k}")).collect(),
        }),
        output: OutputSection::default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;
    use crate::geometry::LevelSet;

    #[test]
    fn benchmark_is_valid_and_round_trips() {
        let cfg = build_benchmark();
        assert_eq!(cfg.validate(), Vec::<String>::new());
        assert_eq!(parse_config(&cfg.to_toml()).unwrap(), cfg);
        assert_eq!(build_benchmark(), cfg);
        assert_eq!(cfg.observers.points.len(), 4);
    }

    #[test]
    fn benchmark_geometry_parts() {
        let g = benchmark_geometry(0.1);
        assert!(g.value([0.01, 0.05]) > 0.0);
        assert!(g.value([0.065, 0.05]) > 0.0);
        assert!(g.value([0.065, 0.01]) < 0.0);
        assert!(g.value([0.22, 0.05]) > 0.0);
        assert!(g.value([0.28, 0.05]) < 0.0);
    }

    #[test]
    fn unknown_names() {
        assert!(matches!(preset("tube-v4"), Err(ScenarioError::UnknownPreset(_))));
        assert_eq!(build_impedance_tube(4).unwrap_err().to_string(), "unknown variant 4");
    }

    #[test]
    fn foam_variants_match_porosity() {
        for v in 1..=3 {
            let cfg = build_impedance_tube(v).unwrap();
            assert_eq!(cfg.validate(), Vec::<String>::new());
            let csg = cfg.structure_csg().unwrap();
            // the measured area jumps where quadtree leaves change class
            let phi = foam_porosity(&csg).unwrap();
            assert!((phi - TUBE_POROSITY).abs() < 1e-4, "variant {v}: {phi}");
            assert_eq!(cfg.observers.points.len(), 10);
            // walls are solid, the block faces are immersed
            assert!(csg.value([3.5 * TUBE_L, 1e-5]) > 0.0 || v == 1);
            assert!(csg.value([3.0 * TUBE_L + 1e-5, 0.5 * TUBE_L]) < 0.0);
        }
    }
}
