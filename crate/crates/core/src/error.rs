use crate::assembly::AssemblyError;
use crate::config::ConfigError;
use crate::discretization::DiscretizationError;
use crate::geometry::GeometryError;
use crate::scenarios::ScenarioError;
use crate::timeint::TimeError;

/// Any failure of a run, grouped by the process exit code it maps to.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Discretization(#[from] DiscretizationError),
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
    #[error(transparent)]
    Time(#[from] TimeError),
    #[error("{0}")]
    Report(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error("output directory {0} is not empty (use --force to overwrite)")]
    OutputExists(String),
}

impl Error {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io { context: context.into(), source }
    }

    /// 1 for invalid input, 2 for failures while computing, 3 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Scenario(ScenarioError::UnknownPreset(_) | ScenarioError::UnknownVariant(_)) => 1,
            Error::Io { .. } | Error::OutputExists(_) => 3,
            _ => 2,
        }
    }
}
