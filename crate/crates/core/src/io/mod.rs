//! Output files and the batch operations behind the command line.

mod format;
mod report;
mod run;
mod vtk;

pub use format::{fmt_value, read_numeric_csv, write_atomic, AtomicFile, NumericCsv};
pub use report::{format_csv, format_table, report, ReportRow};
pub use run::{
    read_manifest_config, record, run_to_dir, simulate, time_grid, ObserverRecords, Overrides, RunSummary,
    MANIFEST_FILE, MEASURES_FILE, OBSERVERS_FILE,
};
pub use vtk::{structured_points, LatticeFields};
