use std::path::{Path, PathBuf};

use crate::error::Error;
use crate::scenarios::{window_increment, RtWindows};

use super::{fmt_value, read_numeric_csv};

/// Windowed increments of one run's measures.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub label: String,
    pub reflectance: f64,
    pub transmittance: f64,
}

/// Reads `rt_measures.csv` files and evaluates the reflectance increment over
/// `windows.reflectance` and the transmittance increment over
/// `windows.transmittance`. All inputs must share one time axis.
pub fn report(paths: &[PathBuf], windows: &RtWindows) -> Result<Vec<ReportRow>, Error> {
    if paths.is_empty() {
        return Err(Error::Report("no input files".into()));
    }
    let mut axis: Option<Vec<f64>> = None;
    let mut rows = Vec::new();
    for path in paths {
        let csv = read_numeric_csv(path)?;
        if csv.header != ["t", "P_ref", "P_tra"] {
            return Err(Error::Report(format!("{}: expected header t,P_ref,P_tra", path.display())));
        }
        let t: Vec<f64> = csv.rows.iter().map(|r| r[0]).collect();
        match &axis {
            None => axis = Some(t.clone()),
            Some(a) if *a != t => return Err(Error::Report("incompatible time axes".into())),
            Some(_) => {}
        }
        let p_ref: Vec<f64> = csv.rows.iter().map(|r| r[1]).collect();
        let p_tra: Vec<f64> = csv.rows.iter().map(|r| r[2]).collect();
        rows.push(ReportRow {
            label: label(path),
            reflectance: window_increment(&t, &p_ref, windows.reflectance),
            transmittance: window_increment(&t, &p_tra, windows.transmittance),
        });
    }
    Ok(rows)
}

/// The run directory name, or the file path when it has none.
fn label(path: &Path) -> String {
    path.parent()
        .and_then(|p| p.file_name())
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub fn format_table(rows: &[ReportRow]) -> String {
    let head = ["run", "reflectance (B-D)", "transmittance (C-F)"];
    let cells: Vec<[String; 3]> = rows
        .iter()
        .map(|r| [r.label.clone(), format!("{:.6e}", r.reflectance), format!("{:.6e}", r.transmittance)])
        .collect();
    let mut width = head.map(str::len);
    for c in &cells {
        for k in 0..3 {
            width[k] = width[k].max(c[k].len());
        }
    }
    let line = |c: [&str; 3]| format!("{:<w0$}  {:>w1$}  {:>w2$}\n", c[0], c[1], c[2], w0 = width[0], w1 = width[1], w2 = width[2]);
    let mut out = line(head);
    for c in &cells {
        out.push_str(&line([&c[0], &c[1], &c[2]]));
    }
    out
}

pub fn format_csv(rows: &[ReportRow]) -> String {
    let mut out = String::from("run,reflectance,transmittance\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.label, fmt_value(r.reflectance), fmt_value(r.transmittance)));
    }
    out
}
