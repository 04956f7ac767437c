//! Scenario configuration: a TOML document with one table per concern.
//!
//! ```toml
//! [scenario]
//! name = "benchmark"
//! length_scale = 0.1
//!
//! [geometry]
//! structure = "union(rect(-0.1, -0.1, 0.05, 0.2), disc(0.05, 0.05, 0.02))"
//!
//! [structure.grid]
//! origin = [0.0, 0.0]
//! extent = [0.3, 0.1]
//! cells = [180, 60]
//! degree = 3
//! space = "trunk"
//! ```
//!
//! The fluid occupies the complement of `geometry.structure`. See the README
//! for the full grammar.

use serde::{Deserialize, Serialize};

use crate::assembly::{FluidMaterial, PlaneModel, StructureMaterial};
use crate::basis::PolySpace;
use crate::discretization::{GridSide, QuadratureOptions};
use crate::geometry::{parse_csg, CsgExpression, LevelSet, Rect};
use crate::timeint::Scheme;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{}", .0.join("\n"))]
    Validation(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioSection,
    pub geometry: GeometrySection,
    pub structure: StructureSection,
    pub fluid: FluidSection,
    pub quadrature: QuadratureSection,
    pub time: TimeSection,
    pub excitation: ExcitationSection,
    pub observers: ObserverSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measures: Option<MeasuresSection>,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub name: String,
    /// Reference length `L` of the setup (m); event times are multiples of `L/c`.
    pub length_scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    /// CSG expression of the structure (φ ≥ 0); the fluid is its complement.
    pub structure: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub origin: [f64; 2],
    pub extent: [f64; 2],
    pub cells: [usize; 2],
    pub degree: usize,
    pub space: String,
}

impl GridSection {
    pub fn bounds(&self) -> Rect {
        Rect::new(self.origin, [self.origin[0] + self.extent[0], self.origin[1] + self.extent[1]])
    }

    pub fn cell_counts(&self) -> (usize, usize) {
        (self.cells[0], self.cells[1])
    }

    pub fn poly_space(&self) -> PolySpace {
        PolySpace::parse(&self.space).unwrap_or(PolySpace::Trunk)
    }

    fn validate(&self, at: &str, out: &mut Vec<String>) {
        if !(self.origin.iter().all(|v| v.is_finite())) {
            out.push(format!("{at}.origin must be finite"));
        }
        if !(self.extent.iter().all(|&v| v > 0.0 && v.is_finite())) {
            out.push(format!("{at}.extent must be positive"));
        }
        if self.cells.contains(&0) {
            out.push(format!("{at}.cells must be at least 1"));
        }
        if self.cells.iter().any(|&c| c > 100_000) {
            out.push(format!("{at}.cells must not exceed 100000"));
        }
        if !(1..=16).contains(&self.degree) {
            out.push(format!("{at}.degree must lie in 1..=16"));
        }
        if PolySpace::parse(&self.space).is_none() {
            out.push(format!("{at}.space must be \"trunk\" or \"tensor\""));
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureMaterialSection {
    pub density: f64,
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
    pub model: String,
}

impl StructureMaterialSection {
    pub fn material(&self) -> StructureMaterial {
        StructureMaterial {
            density: self.density,
            youngs_modulus: self.youngs_modulus,
            poisson_ratio: self.poisson_ratio,
            model: PlaneModel::parse(&self.model).unwrap_or(PlaneModel::PlaneStress),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FluidMaterialSection {
    pub density: f64,
    pub bulk_modulus: f64,
}

impl FluidMaterialSection {
    pub fn material(&self) -> FluidMaterial {
        FluidMaterial { density: self.density, bulk_modulus: self.bulk_modulus }
    }
}

/// Homogeneous Dirichlet conditions on whole sides of a grid.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DirichletSection {
    #[serde(default)]
    pub sides: Vec<String>,
    #[serde(default)]
    pub components: Vec<usize>,
}

impl DirichletSection {
    pub fn grid_sides(&self) -> Vec<GridSide> {
        self.sides.iter().filter_map(|s| GridSide::parse(s)).collect()
    }

    fn validate(&self, at: &str, n_components: usize, out: &mut Vec<String>) {
        for s in &self.sides {
            if GridSide::parse(s).is_none() {
                out.push(format!("{at}.sides has unknown side \"{s}\""));
            }
        }
        if !self.sides.is_empty() && self.components.is_empty() {
            out.push(format!("{at}.components must not be empty when sides are given"));
        }
        for &c in &self.components {
            if c >= n_components {
                out.push(format!("{at}.components entry {c} must be below {n_components}"));
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureSection {
    pub grid: GridSection,
    pub material: StructureMaterialSection,
    #[serde(default)]
    pub dirichlet: DirichletSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FluidSection {
    pub grid: GridSection,
    pub material: FluidMaterialSection,
    #[serde(default)]
    pub dirichlet: DirichletSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSection {
    /// Quadtree depth on cut cells.
    pub depth: usize,
    /// Gauss points per direction on each cell or subcell.
    pub gauss_points: usize,
    pub alpha_min: f64,
    /// Marching-squares samples per cell edge.
    pub interface_resolution: usize,
}

impl QuadratureSection {
    pub fn options(&self) -> QuadratureOptions {
        QuadratureOptions {
            depth: self.depth,
            n_gp: self.gauss_points,
            alpha_min: self.alpha_min,
            resolution: self.interface_resolution,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    pub dt: f64,
    pub duration: f64,
    pub scheme: String,
}

impl TimeSection {
    pub fn scheme(&self) -> Scheme {
        Scheme::parse(&self.scheme).unwrap_or(Scheme::CentralDifference)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoadKind {
    /// Traction `p̄(t) n` on a structure grid side.
    StructureTraction,
    /// Normal inflow velocity `v̄(t)` on a fluid grid side.
    FluidVelocity,
}

impl LoadKind {
    pub fn name(self) -> &'static str {
        match self {
            LoadKind::StructureTraction => "structure-traction",
            LoadKind::FluidVelocity => "fluid-velocity",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "structure-traction" => Some(LoadKind::StructureTraction),
            "fluid-velocity" => Some(LoadKind::FluidVelocity),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExcitationSection {
    /// Only "ricker" is available.
    pub signal: String,
    /// Center time of the wavelet (s).
    pub t0: f64,
    pub amplitude: f64,
    pub load: String,
    pub boundary: String,
}

impl ExcitationSection {
    pub fn load_kind(&self) -> LoadKind {
        LoadKind::parse(&self.load).unwrap_or(LoadKind::StructureTraction)
    }

    pub fn grid_side(&self) -> GridSide {
        GridSide::parse(&self.boundary).unwrap_or(GridSide::Left)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObserverField {
    FluidPressure,
    /// Magnitude of the displacement vector.
    StructureDisplacement,
}

impl ObserverField {
    pub fn name(self) -> &'static str {
        match self {
            ObserverField::FluidPressure => "fluid-pressure",
            ObserverField::StructureDisplacement => "structure-displacement",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "fluid-pressure" => Some(ObserverField::FluidPressure),
            "structure-displacement" => Some(ObserverField::StructureDisplacement),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObserverPoint {
    pub name: String,
    pub x: f64,
    pub y: f64,
    pub field: String,
}

impl ObserverPoint {
    pub fn kind(&self) -> ObserverField {
        ObserverField::parse(&self.field).unwrap_or(ObserverField::FluidPressure)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObserverSection {
    /// Record every `stride`-th step.
    pub stride: usize,
    #[serde(default)]
    pub points: Vec<ObserverPoint>,
}

/// Observer groups entering the reflectance and transmittance measures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasuresSection {
    pub sender: Vec<String>,
    pub receiver: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// Write a field snapshot every this many steps; 0 disables snapshots.
    #[serde(default)]
    pub snapshot_stride: usize,
}

fn positive(v: f64) -> bool {
    v > 0.0 && v.is_finite()
}

impl ScenarioConfig {
    pub fn structure_csg(&self) -> Result<CsgExpression, String> {
        parse_csg(&self.geometry.structure)
    }

    /// All constraint violations, each as "validation: <field> <constraint>".
    pub fn validate(&self) -> Vec<String> {
        let mut e = Vec::new();
        if self.scenario.name.trim().is_empty() {
            e.push("scenario.name must not be empty".to_string());
        }
        if !positive(self.scenario.length_scale) {
            e.push("scenario.length_scale must be positive".into());
        }
        let csg = match self.structure_csg() {
            Ok(c) => {
                for p in c.validate() {
                    e.push(format!("geometry.structure {p}"));
                }
                Some(c)
            }
            Err(m) => {
                e.push(format!("geometry.structure must be a valid CSG expression ({m})"));
                None
            }
        };

        self.structure.grid.validate("structure.grid", &mut e);
        self.fluid.grid.validate("fluid.grid", &mut e);
        for m in self.structure.material.material().validate() {
            e.push(format!("structure.material.{m}"));
        }
        if PlaneModel::parse(&self.structure.material.model).is_none() {
            e.push("structure.material.model must be \"plane-stress\" or \"plane-strain\"".into());
        }
        for m in self.fluid.material.material().validate() {
            e.push(format!("fluid.material.{m}"));
        }
        self.structure.dirichlet.validate("structure.dirichlet", 2, &mut e);
        self.fluid.dirichlet.validate("fluid.dirichlet", 1, &mut e);

        let q = &self.quadrature;
        if q.depth > 16 {
            e.push("quadrature.depth must not exceed 16".into());
        }
        let p = self.structure.grid.degree.max(self.fluid.grid.degree);
        if q.gauss_points < p + 1 || q.gauss_points > crate::basis::MAX_GAUSS_POINTS {
            e.push(format!(
                "quadrature.gauss_points must lie in {}..={}",
                p + 1,
                crate::basis::MAX_GAUSS_POINTS
            ));
        }
        if !(q.alpha_min >= 0.0 && q.alpha_min <= 1.0) {
            e.push("quadrature.alpha_min must lie in [0, 1]".into());
        }
        if q.interface_resolution == 0 || q.interface_resolution > 1000 {
            e.push("quadrature.interface_resolution must lie in 1..=1000".into());
        }

        let t = &self.time;
        if !positive(t.dt) {
            e.push("time.dt must be positive".into());
        }
        if !(t.duration >= 0.0 && t.duration.is_finite()) {
            e.push("time.duration must be non-negative".into());
        } else if positive(t.dt) && t.duration / t.dt > 1e9 {
            e.push("time.duration must not exceed 1e9 steps".into());
        }
        if Scheme::parse(&t.scheme).is_none() {
            e.push("time.scheme must be \"central\" or \"trapezoidal\"".into());
        }

        let x = &self.excitation;
        if x.signal != "ricker" {
            e.push("excitation.signal must be \"ricker\"".into());
        }
        if !positive(x.t0) {
            e.push("excitation.t0 must be positive".into());
        }
        if !x.amplitude.is_finite() {
            e.push("excitation.amplitude must be finite".into());
        }
        if LoadKind::parse(&x.load).is_none() {
            e.push("excitation.load must be \"structure-traction\" or \"fluid-velocity\"".into());
        }
        if GridSide::parse(&x.boundary).is_none() {
            e.push("excitation.boundary must be one of bottom, right, top, left".into());
        }

        let o = &self.observers;
        if o.stride == 0 {
            e.push("observers.stride must be at least 1".into());
        }
        let mut names = std::collections::BTreeSet::new();
        for (i, pt) in o.points.iter().enumerate() {
            let at = format!("observers.points[{i}]");
            if pt.name.is_empty() || pt.name.contains([',', '"', '\n', '\r']) {
                e.push(format!("{at}.name must be non-empty without commas, quotes or line breaks"));
            } else if !names.insert(pt.name.as_str()) {
                e.push(format!("{at}.name must be unique"));
            }
            if !(pt.x.is_finite() && pt.y.is_finite()) {
                e.push(format!("{at} coordinates must be finite"));
                continue;
            }
            let inside = |b: Rect| pt.x >= b.min[0] && pt.x <= b.max[0] && pt.y >= b.min[1] && pt.y <= b.max[1];
            match ObserverField::parse(&pt.field) {
                None => e.push(format!("{at}.field must be \"fluid-pressure\" or \"structure-displacement\"")),
                Some(ObserverField::FluidPressure) => {
                    if !inside(self.fluid.grid.bounds()) {
                        e.push(format!("{at} must lie inside the fluid grid"));
                    } else if let Some(c) = &csg {
                        if c.value([pt.x, pt.y]) >= 0.0 {
                            e.push(format!("{at} must lie in the fluid domain"));
                        }
                    }
                }
                Some(ObserverField::StructureDisplacement) => {
                    if !inside(self.structure.grid.bounds()) {
                        e.push(format!("{at} must lie inside the structure grid"));
                    }
                }
            }
        }
        if let Some(m) = &self.measures {
            for (group, list) in [("sender", &m.sender), ("receiver", &m.receiver)] {
                if list.is_empty() {
                    e.push(format!("measures.{group} must not be empty"));
                }
                for n in list.iter() {
                    match o.points.iter().find(|p| &p.name == n) {
                        None => e.push(format!("measures.{group} refers to unknown observer \"{n}\"")),
                        Some(p) if p.kind() != ObserverField::FluidPressure => {
                            e.push(format!("measures.{group} observer \"{n}\" must record fluid-pressure"))
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        e.into_iter().map(|m| format!("validation: {m}")).collect()
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario configs always serialize")
    }
}

/// Parses and validates a scenario document.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let cfg: ScenarioConfig = toml::from_str(text).map_err(|err| {
        let line = err.span().map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1).unwrap_or(1);
        ConfigError::Parse { line, message: err.message().trim().to_string() }
    })?;
    let problems = cfg.validate();
    if problems.is_empty() {
        Ok(cfg)
    } else {
        Err(ConfigError::Validation(problems))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[scenario]
name = "strip"
length_scale = 0.1

[geometry]
structure = "rect(0.5, -1, 2, 2)"

[structure.grid]
origin = [0.0, 0.0]
extent = [1.0, 0.1]
cells = [10, 1]
degree = 2
space = "trunk"

[structure.material]
density = 50.0
youngs_modulus = 1e6
poisson_ratio = 0.3
model = "plane-stress"

[fluid.grid]
origin = [0.0, 0.0]
extent = [1.0, 0.1]
cells = [10, 1]
degree = 2
space = "trunk"

[fluid.material]
density = 1.225
bulk_modulus = 101000.0

[quadrature]
depth = 4
gauss_points = 3
alpha_min = 1e-8
interface_resolution = 10

[time]
dt = 1e-7
duration = 1e-5
scheme = "central"

[excitation]
signal = "ricker"
t0 = 1e-4
amplitude = 1.0
load = "fluid-velocity"
boundary = "left"

[observers]
stride = 1

[[observers.points]]
name = "a"
x = 0.25
y = 0.05
field = "fluid-pressure"
"#;

    #[test]
    fn minimal_parses_and_round_trips() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.observers.points.len(), 1);
        assert_eq!(cfg.output.snapshot_stride, 0);
        assert_eq!(parse_config(&cfg.to_toml()).unwrap(), cfg);
    }

    #[test]
    fn zero_dt_names_field() {
        let text = MINIMAL.replace("dt = 1e-7", "dt = 0.0");
        let ConfigError::Validation(v) = parse_config(&text).unwrap_err() else { panic!() };
        assert!(v.iter().any(|m| m.starts_with("validation: time.dt")), "{v:?}");
    }

    #[test]
    fn unknown_key_reports_line() {
        let text = MINIMAL.replace("scheme = \"central\"", "scheme = \"central\"\nbogus = 3");
        let line = text.lines().position(|l| l.starts_with("bogus")).unwrap() + 1;
        match parse_config(&text).unwrap_err() {
            ConfigError::Parse { line: l, .. } => assert_eq!(l, line),
            e => panic!("{e}"),
        }
        assert!(parse_config(&text).unwrap_err().to_string().starts_with(&format!("parse error at line {line}")));
    }

    #[test]
    fn collects_every_error() {
        let text = MINIMAL
            .replace("dt = 1e-7", "dt = -1.0")
            .replace("density = 1.225", "density = 0.0")
            .replace("x = 0.25", "x = 0.75");
        let ConfigError::Validation(v) = parse_config(&text).unwrap_err() else { panic!() };
        assert_eq!(v.len(), 3, "{v:?}");
        assert!(v.iter().all(|m| m.starts_with("validation: ")));
        assert!(v.iter().any(|m| m.contains("fluid.material.density")));
        assert!(v.iter().any(|m| m.contains("observers.points[0] must lie in the fluid domain")));
    }

    #[test]
    fn bad_csg_is_a_validation_error() {
        let text = MINIMAL.replace("rect(0.5, -1, 2, 2)", "rect(0.5, -1, 2)");
        let ConfigError::Validation(v) = parse_config(&text).unwrap_err() else { panic!() };
        assert!(v[0].starts_with("validation: geometry.structure"));
    }
}
