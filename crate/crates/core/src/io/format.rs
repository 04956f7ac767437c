use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::Error;

/// 17 significant digits; exact zeros (either sign) print as `0`.
pub fn fmt_value(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v:.16e}")
    }
}

/// Writes `contents` to `path` through a temporary sibling and a rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), Error> {
    let mut w = AtomicFile::create(path)?;
    w.write_all(contents).map_err(|e| Error::io(format!("writing {}", path.display()), e))?;
    w.commit()
}

/// Buffered file that only appears under its final name on `commit`.
pub struct AtomicFile {
    target: PathBuf,
    temp: PathBuf,
    writer: Option<BufWriter<File>>,
}

impl AtomicFile {
    pub fn create(target: &Path) -> Result<Self, Error> {
        let name = target.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        let temp = target.with_file_name(format!(".{name}.tmp"));
        let file = File::create(&temp).map_err(|e| Error::io(format!("creating {}", temp.display()), e))?;
        Ok(Self { target: target.to_path_buf(), temp, writer: Some(BufWriter::new(file)) })
    }

    pub fn commit(mut self) -> Result<(), Error> {
        let ctx = || format!("writing {}", self.target.display());
        let w = self.writer.take().expect("writer present until commit");
        let file = w.into_inner().map_err(|e| Error::io(ctx(), e.into_error()))?;
        file.sync_all().map_err(|e| Error::io(ctx(), e))?;
        fs::rename(&self.temp, &self.target).map_err(|e| Error::io(ctx(), e))
    }
}

impl Write for AtomicFile {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        self.writer.as_mut().expect("writer present until commit").write(buf)
    }

    fn flush(&mut self) -> std::io::Result<()> {
        self.writer.as_mut().expect("writer present until commit").flush()
    }
}

impl Drop for AtomicFile {
    fn drop(&mut self) {
        if self.writer.take().is_some() {
            let _ = fs::remove_file(&self.temp);
        }
    }
}

/// Header and rows of a numeric CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericCsv {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn read_numeric_csv(path: &Path) -> Result<NumericCsv, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap_or("").split(',').map(|s| s.trim().to_string()).collect();
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| Error::Report(format!("{}: line {} is not numeric", path.display(), k + 2)))?;
        if row.len() != header.len() {
            return Err(Error::Report(format!("{}: line {} has {} fields, expected {}", path.display(), k + 2, row.len(), header.len())));
        }
        rows.push(row);
    }
    Ok(NumericCsv { header, rows })
}
