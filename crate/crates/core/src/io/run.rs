use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use crate::config::ScenarioConfig;
use crate::error::Error;
use crate::model::{Model, ModelStats};
use crate::scenarios::RtAccumulator;
use crate::timeint::{central_difference_run, trapezoidal_run, PointProbe, Scheme, StepView, TimeGrid};

use super::vtk::{structured_points, LatticeFields};
use super::{fmt_value, write_atomic, AtomicFile};

pub const OBSERVERS_FILE: &str = "observers.csv";
pub const MEASURES_FILE: &str = "rt_measures.csv";
pub const MANIFEST_FILE: &str = "run_manifest.toml";

/// Command-line adjustments applied on top of a scenario before validation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub scheme: Option<Scheme>,
    pub dt: Option<f64>,
    pub duration: Option<f64>,
    pub snapshot_stride: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut ScenarioConfig) {
        if let Some(s) = self.scheme {
            cfg.time.scheme = s.name().to_string();
        }
        if let Some(dt) = self.dt {
            cfg.time.dt = dt;
        }
        if let Some(t) = self.duration {
            cfg.time.duration = t;
        }
        if let Some(n) = self.snapshot_stride {
            cfg.output.snapshot_stride = n;
        }
    }
}

pub fn time_grid(cfg: &ScenarioConfig) -> Result<TimeGrid, Error> {
    Ok(TimeGrid::new(cfg.time.dt, cfg.time.duration)?)
}

/// Integrates the model with its configured scheme from rest.
pub fn simulate(model: &Model, observe: impl FnMut(StepView<'_>)) -> Result<(), Error> {
    let tg = time_grid(&model.config)?;
    let signal = |t: f64| model.signal.value(t);
    let init = Default::default();
    match model.config.time.scheme() {
        Scheme::CentralDifference => central_difference_run(&model.system, &tg, &signal, &init, observe)?,
        Scheme::Trapezoidal => trapezoidal_run(&model.system, &tg, &signal, &init, observe)?,
    }
    Ok(())
}

/// Observer time series kept in memory.
#[derive(Debug, Clone, PartialEq)]
pub struct ObserverRecords {
    pub names: Vec<String>,
    /// Recorded times, every `stride`-th step.
    pub times: Vec<f64>,
    /// One series per observer.
    pub samples: Vec<Vec<f64>>,
    /// Cumulative `(P_ref, P_tra)` at the recorded times, summed over every step.
    pub measures: Option<Vec<(f64, f64)>>,
}

impl ObserverRecords {
    pub fn series(&self, name: &str) -> Option<&[f64]> {
        self.names.iter().position(|n| n == name).map(|k| self.samples[k].as_slice())
    }
}

/// Streams observer samples (all observers, every step) and the running
/// measures to `sink(step, t, samples, measures)`.
fn drive(
    model: &Model,
    mut sink: impl FnMut(&StepView<'_>, &[f64], Option<(f64, f64)>),
) -> Result<(), Error> {
    let groups = model.measure_groups();
    let mut acc = RtAccumulator::default();
    let mut samples = vec![0.0; model.observers.len()];
    simulate(model, |s| {
        for (v, o) in samples.iter_mut().zip(&model.observers) {
            *v = o.sample(s.u, s.v);
        }
        let m = groups.as_ref().map(|(snd, rcv)| {
            acc.push(snd.iter().map(|&k| samples[k]), rcv.iter().map(|&k| samples[k]));
            acc.measures()
        });
        sink(&s, &samples, m);
    })
}

pub fn record(model: &Model) -> Result<ObserverRecords, Error> {
    let stride = model.config.observers.stride;
    let mut rec = ObserverRecords {
        names: model.observers.iter().map(|o| o.name.clone()).collect(),
        times: Vec::new(),
        samples: vec![Vec::new(); model.observers.len()],
        measures: model.measure_groups().map(|_| Vec::new()),
    };
    drive(model, |s, samples, m| {
        if s.step % stride == 0 {
            rec.times.push(s.t);
            for (series, &v) in rec.samples.iter_mut().zip(samples) {
                series.push(v);
            }
            if let (Some(all), Some(m)) = (rec.measures.as_mut(), m) {
                all.push(m);
            }
        }
    })?;
    Ok(rec)
}

/// Samples of the fields on the fluid grid's vertex lattice.
struct Snapshotter {
    dims: (usize, usize),
    origin: [f64; 2],
    spacing: [f64; 2],
    fluid_vertex_dofs: Vec<usize>,
    displacement: Vec<Option<[PointProbe; 2]>>,
    density: f64,
}

impl Snapshotter {
    fn new(model: &Model) -> Self {
        let g = &model.fluid_grid;
        let (nx, ny) = g.cells();
        let ns = model.system.n_structure();
        let mut fluid_vertex_dofs = Vec::new();
        let mut displacement = Vec::new();
        for j in 0..=ny {
            for i in 0..=nx {
                fluid_vertex_dofs.push(ns + g.vertex_dof(i, j));
                let p = g.vertex(i, j);
                let gs = &model.structure_grid;
                displacement.push(PointProbe::new(gs, p, 0, 0).zip(PointProbe::new(gs, p, 1, 0)).map(|(a, b)| [a, b]));
            }
        }
        Self {
            dims: (nx + 1, ny + 1),
            origin: g.origin(),
            spacing: g.cell_size(),
            fluid_vertex_dofs,
            displacement,
            density: model.config.fluid.material.density,
        }
    }

    fn render(&self, title: String, u: &[f64], v: &[f64]) -> String {
        let pressure = self.fluid_vertex_dofs.iter().map(|&d| self.density * v[d]).collect();
        let potential = self.fluid_vertex_dofs.iter().map(|&d| u[d]).collect();
        let disp = self
            .displacement
            .iter()
            .map(|p| p.as_ref().map_or(0.0, |[a, b]| a.value(u).hypot(b.value(u))))
            .collect();
        structured_points(&LatticeFields {
            title,
            dims: self.dims,
            origin: self.origin,
            spacing: self.spacing,
            fields: vec![("pressure", pressure), ("displacement_magnitude", disp), ("velocity_potential", potential)],
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSummary {
    pub n_steps: usize,
    pub records: usize,
    pub snapshots: usize,
    pub stats: ModelStats,
    pub setup_seconds: f64,
    pub solve_seconds: f64,
}

fn is_output_file(name: &str) -> bool {
    name == OBSERVERS_FILE
        || name == MEASURES_FILE
        || name == MANIFEST_FILE
        || (name.starts_with("snapshot_") && name.ends_with(".vtk"))
}

fn prepare_dir(dir: &Path, force: bool) -> Result<(), Error> {
    fs::create_dir_all(dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
    let entries: Vec<_> = fs::read_dir(dir)
        .map_err(|e| Error::io(format!("reading {}", dir.display()), e))?
        .filter_map(|e| e.ok())
        .collect();
    if entries.is_empty() {
        return Ok(());
    }
    if !force {
        return Err(Error::OutputExists(dir.display().to_string()));
    }
    for e in entries {
        let name = e.file_name().to_string_lossy().into_owned();
        if is_output_file(&name) {
            fs::remove_file(e.path()).map_err(|err| Error::io(format!("removing {}", e.path().display()), err))?;
        }
    }
    Ok(())
}

fn csv_row(out: &mut impl Write, t: f64, values: impl Iterator<Item = f64>) -> std::io::Result<()> {
    out.write_all(fmt_value(t).as_bytes())?;
    for v in values {
        out.write_all(b",")?;
        out.write_all(fmt_value(v).as_bytes())?;
    }
    out.write_all(b"\n")
}

/// Runs `config` and writes every output into `dir`.
pub fn run_to_dir(config: &ScenarioConfig, dir: &Path, force: bool) -> Result<RunSummary, Error> {
    let problems = config.validate();
    if !problems.is_empty() {
        return Err(crate::config::ConfigError::Validation(problems).into());
    }
    prepare_dir(dir, force)?;
    let started = Instant::now();
    let model = Model::build(config)?;
    let setup_seconds = started.elapsed().as_secs_f64();

    let stride = config.observers.stride;
    let snap_stride = config.output.snapshot_stride;
    let mut obs = AtomicFile::create(&dir.join(OBSERVERS_FILE))?;
    let mut rt = match model.measure_groups() {
        Some(_) => Some(AtomicFile::create(&dir.join(MEASURES_FILE))?),
        None => None,
    };
    let mut failure: Option<Error> = None;
    let header = std::iter::once("t").chain(model.observers.iter().map(|o| o.name.as_str())).collect::<Vec<_>>().join(",");
    if let Err(e) = writeln!(obs, "{header}") {
        failure = Some(Error::io("writing observers", e));
    }
    if let Some(f) = rt.as_mut() {
        if let Err(e) = writeln!(f, "t,P_ref,P_tra") {
            failure = Some(Error::io("writing measures", e));
        }
    }
    let snapshotter = (snap_stride > 0).then(|| Snapshotter::new(&model));
    let mut records = 0;
    let mut snapshots = 0;
    let mut n_steps = 0;
    let solve_start = Instant::now();
    let result = drive(&model, |s, samples, m| {
        n_steps = s.step;
        if failure.is_some() {
            return;
        }
        if s.step % stride == 0 {
            records += 1;
            if let Err(e) = csv_row(&mut obs, s.t, samples.iter().copied()) {
                failure = Some(Error::io("writing observers", e));
            }
            if let (Some(f), Some((a, b))) = (rt.as_mut(), m) {
                if let Err(e) = csv_row(f, s.t, [a, b].into_iter()) {
                    failure = Some(Error::io("writing measures", e));
                }
            }
        }
        if let Some(snap) = &snapshotter {
            if s.step % snap_stride == 0 {
                let title = format!("{} step {} t={}", config.scenario.name, s.step, fmt_value(s.t));
                let path = dir.join(format!("snapshot_{:08}.vtk", s.step));
                if let Err(e) = write_atomic(&path, snap.render(title, s.u, s.v).as_bytes()) {
                    failure = Some(e);
                }
                snapshots += 1;
            }
        }
    });
    result?;
    if let Some(e) = failure {
        return Err(e);
    }
    obs.commit()?;
    if let Some(f) = rt {
        f.commit()?;
    }
    let solve_seconds = solve_start.elapsed().as_secs_f64();
    let summary = RunSummary { n_steps, records, snapshots, stats: model.stats, setup_seconds, solve_seconds };
    write_atomic(&dir.join(MANIFEST_FILE), manifest(config, &summary).as_bytes())?;
    Ok(summary)
}

/// Config echo, problem size and timings. The timings are the only part of
/// a run's output that changes between identical runs.
fn manifest(config: &ScenarioConfig, s: &RunSummary) -> String {
    let st = &s.stats;
    let mut out = String::new();
    out.push_str("[run]\n");
    out.push_str(&format!("scenario = {:?}\n", config.scenario.name));
    out.push_str(&format!("scheme = {:?}\n", config.time.scheme));
    out.push_str(&format!("steps = {}\n", s.n_steps));
    out.push_str(&format!("records = {}\n", s.records));
    out.push_str(&format!("snapshots = {}\n", s.snapshots));
    out.push_str(&format!("structure_dofs = {}\n", st.structure_dofs));
    out.push_str(&format!("fluid_dofs = {}\n", st.fluid_dofs));
    out.push_str(&format!("constrained_dofs = {}\n", st.constrained_dofs));
    out.push_str(&format!("structure_cut_cells = {}\n", st.structure_cut_cells));
    out.push_str(&format!("fluid_cut_cells = {}\n", st.fluid_cut_cells));
    out.push_str(&format!("interface_segments = {}\n", st.interface_segments));
    out.push_str("\n[timings]\n");
    out.push_str(&format!("setup_seconds = {:.3}\n", s.setup_seconds));
    out.push_str(&format!("solve_seconds = {:.3}\n", s.solve_seconds));
    out.push_str("\n# scenario as run\n");
    let echo = toml::to_string(&ManifestEcho { config }).expect("scenario configs always serialize");
    out.push_str(&echo);
    out
}

#[derive(serde::Serialize)]
struct ManifestEcho<'a> {
    config: &'a ScenarioConfig,
}

/// Reads the scenario echoed into a run manifest.
pub fn read_manifest_config(path: &Path) -> Result<ScenarioConfig, Error> {
    #[derive(serde::Deserialize)]
    struct Echo {
        config: ScenarioConfig,
    }
    let text = fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    let echo: Echo = toml::from_str(&text).map_err(|e| Error::Report(format!("{}: {}", path.display(), e.message())))?;
    Ok(echo.config)
}
