//! The verification benchmark and the impedance tube: excitation, presets,
//! wave-front events and the reflectance/transmittance measures.

mod events;
mod measures;
mod presets;
mod signal;

pub use events::{event_window_attribution, Event, EventTimeline, RtWindows};
pub use measures::{compute_rt_measures, cumulative_rt_measures, window_increment, RtAccumulator};
pub use presets::{
    benchmark_geometry, build_benchmark, build_impedance_tube, calibrate_foam, foam_geometry, foam_porosity,
    foam_porosity_with, preset, PRESET_NAMES, TUBE_L, TUBE_POROSITY,
};
pub use signal::{ricker, RickerSignal};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScenarioError {
    #[error("unknown variant {0}")]
    UnknownVariant(u32),
    #[error("unknown preset \"{0}\"")]
    UnknownPreset(String),
    #[error(transparent)]
    Geometry(#[from] crate::geometry::GeometryError),
}
