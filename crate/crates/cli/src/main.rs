use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fcm_vibro::config::{parse_config, ScenarioConfig};
use fcm_vibro::io::{self, format_csv, format_table, read_manifest_config, run_to_dir, write_atomic, Overrides, MANIFEST_FILE};
use fcm_vibro::scenarios::{preset, EventTimeline, PRESET_NAMES, TUBE_L};
use fcm_vibro::timeint::Scheme;
use fcm_vibro::Error;

/// Time-domain vibroacoustic finite cell solver.
#[derive(Parser)]
#[command(name = "solver", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Central,
    Trapezoidal,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario given as a config file or a preset name.
    Run {
        /// Path to a scenario file, or one of the names listed by `solver presets`.
        scenario: String,
        /// Output directory.
        #[arg(short, long)]
        output: PathBuf,
        /// Replace earlier outputs in the directory.
        #[arg(long)]
        force: bool,
        #[arg(long, value_enum)]
        scheme: Option<SchemeArg>,
        /// Time step in seconds.
        #[arg(long)]
        dt: Option<f64>,
        /// Simulated time in seconds.
        #[arg(long)]
        duration: Option<f64>,
        /// Write a VTK snapshot every N steps (0 disables snapshots).
        #[arg(long)]
        snapshot_stride: Option<usize>,
    },
    /// Tabulate windowed reflectance and transmittance of rt_measures.csv files.
    Report {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Also write the table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Tube length scale L in metres. Defaults to the value in the run manifest.
        #[arg(long)]
        length_scale: Option<f64>,
        /// Fluid sound speed in m/s. Defaults to the value in the run manifest.
        #[arg(long)]
        sound_speed: Option<f64>,
    },
    /// List the built-in scenarios.
    Presets,
}

fn load_scenario(source: &str) -> Result<ScenarioConfig, Error> {
    let path = Path::new(source);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        Ok(parse_config(&text)?)
    } else {
        Ok(preset(source)?)
    }
}

/// Event windows from the manifest beside the first input, falling back to
/// the tube preset for anything neither the manifest nor the flags give.
fn timeline(files: &[PathBuf], length_scale: Option<f64>, sound_speed: Option<f64>) -> Result<EventTimeline, Error> {
    let manifest = files[0].parent().map(|d| d.join(MANIFEST_FILE)).filter(|p| p.is_file());
    let (base, default_l) = match manifest {
        Some(p) => {
            let cfg = read_manifest_config(&p)?;
            let l = cfg.scenario.length_scale;
            (cfg, l)
        }
        // every preset uses the same air
        None => (preset("benchmark")?, TUBE_L),
    };
    let l = length_scale.unwrap_or(default_l);
    let c = sound_speed.unwrap_or_else(|| base.fluid.material.material().sound_speed());
    Ok(EventTimeline::new(l, c))
}

fn describe(name: &str) -> &'static str {
    match name {
        "benchmark" => "coupled verification benchmark, 4 pressure observers",
        "tube-v1" => "impedance tube, foam with through-slots",
        "tube-v2" => "impedance tube, foam with a regular pore lattice",
        "tube-v3" => "impedance tube, foam with staggered pores",
        _ => "",
    }
}

fn execute(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run { scenario, output, force, scheme, dt, duration, snapshot_stride } => {
            let mut cfg = load_scenario(&scenario)?;
            let scheme = scheme.map(|s| match s {
                SchemeArg::Central => Scheme::CentralDifference,
                SchemeArg::Trapezoidal => Scheme::Trapezoidal,
            });
            Overrides { scheme, dt, duration, snapshot_stride }.apply(&mut cfg);
            let s = run_to_dir(&cfg, &output, force)?;
            println!(
                "{}: {} steps, {} records, {} snapshots, {} + {} dofs ({:.1} s setup, {:.1} s solve) -> {}",
                cfg.scenario.name,
                s.n_steps,
                s.records,
                s.snapshots,
                s.stats.structure_dofs,
                s.stats.fluid_dofs,
                s.setup_seconds,
                s.solve_seconds,
                output.display()
            );
        }
        Command::Report { files, csv, length_scale, sound_speed } => {
            let windows = timeline(&files, length_scale, sound_speed)?.windows();
            let rows = io::report(&files, &windows)?;
            print!("{}", format_table(&rows));
            if let Some(path) = csv {
                write_atomic(&path, format_csv(&rows).as_bytes())?;
            }
        }
        Command::Presets => {
            for name in PRESET_NAMES {
                println!("{name:<10} {}", describe(name));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
