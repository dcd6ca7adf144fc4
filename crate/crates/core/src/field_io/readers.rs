use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::meta::{read_metadata, sidecar_path};
use super::{GridSpec, TimeVaryingField};
use crate::error::{Error, Result};

/// Input layouts accepted by [`load_field`].
///
/// For `RawF32` and `CsvStack` the path is a stem: step `t` is read from
/// `<stem>_<t>.raw` / `<stem>_<t>.csv`. For `StackedRaw` the path is the data
/// file itself. The metadata sidecar is always `<path>.meta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldFormat {
    RawF32,
    CsvStack,
    StackedRaw,
}

impl FromStr for FieldFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw-f32" => Ok(FieldFormat::RawF32),
            "csv-stack" => Ok(FieldFormat::CsvStack),
            "stacked-raw" => Ok(FieldFormat::StackedRaw),
            other => Err(Error::Config(format!(
                "unknown format `{other}` (expected raw-f32, csv-stack or stacked-raw)"
            ))),
        }
    }
}

pub(crate) fn step_path(stem: &Path, t: usize, ext: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(format!("_{t}.{ext}"));
    PathBuf::from(s)
}

pub fn load_field(path: &Path, format: FieldFormat) -> Result<TimeVaryingField> {
    let spec = read_metadata(&sidecar_path(path))?;
    let n = spec.vertex_count();
    let mut values = Vec::with_capacity(spec.value_count());
    match format {
        FieldFormat::StackedRaw => {
            read_raw(path, spec.value_count(), &mut values)?;
        }
        FieldFormat::RawF32 => {
            for t in 0..spec.timesteps {
                read_raw(&step_path(path, t, "raw"), n, &mut values)?;
            }
        }
        FieldFormat::CsvStack => {
            for t in 0..spec.timesteps {
                read_csv_grid(&step_path(path, t, "csv"), &spec, &mut values)?;
            }
        }
    }
    TimeVaryingField::new(spec, values)
}

fn read_raw(path: &Path, count: usize, out: &mut Vec<f64>) -> Result<()> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let expected = count as u64 * 4;
    if bytes.len() as u64 != expected {
        return Err(Error::SizeMismatch {
            path: path.to_owned(),
            expected,
            found: bytes.len() as u64,
        });
    }
    for (k, chunk) in bytes.chunks_exact(4).enumerate() {
        let x = f32::from_le_bytes([chunk[0], chunk[1], chunk[2], chunk[3]]);
        if !x.is_finite() {
            return Err(Error::NonFinite {
                path: path.to_owned(),
                location: format!("byte {}", k * 4),
                value: x as f64,
            });
        }
        out.push(x as f64);
    }
    Ok(())
}

fn read_csv_grid(path: &Path, spec: &GridSpec, out: &mut Vec<f64>) -> Result<()> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let mut rows = 0;
    for (r, record) in reader.records().enumerate() {
        let row = r + 1;
        let record = record.map_err(|e| csv_error(path, e))?;
        if record.len() != spec.width {
            return Err(Error::Malformed {
                path: path.to_owned(),
                location: format!("row {row}"),
                msg: format!("expected {} columns, found {}", spec.width, record.len()),
            });
        }
        for (c, cell) in record.iter().enumerate() {
            let location = || format!("row {row}, column {}", c + 1);
            let x: f64 = cell.parse().map_err(|_| Error::Malformed {
                path: path.to_owned(),
                location: location(),
                msg: format!("cannot parse `{cell}` as a number"),
            })?;
            if !x.is_finite() {
                return Err(Error::NonFinite {
                    path: path.to_owned(),
                    location: location(),
                    value: x,
                });
            }
            out.push(x);
        }
        rows += 1;
        if rows > spec.height {
            break;
        }
    }
    if rows != spec.height {
        return Err(Error::Malformed {
            path: path.to_owned(),
            location: format!("row {rows}"),
            msg: format!("expected {} rows, found {}", spec.height, rows),
        });
    }
    Ok(())
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let location = e
        .position()
        .map(|p| format!("row {}, byte {}", p.line(), p.byte()))
        .unwrap_or_else(|| "start".into());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        kind => Error::Malformed {
            path: path.to_owned(),
            location,
            msg: format!("{kind:?}"),
        },
    }
}
