//! Flat `key: value` metadata sidecar.
//!
//! ```text
//! width: 64
//! height: 64
//! timesteps: 300
//! dx: 1
//! dy: 1
//! ox: 0
//! oy: 0
//! dt: 1
//! ```
//!
//! `width`, `height` and `timesteps` are required; spacing defaults to 1 and the
//! origin to 0. Lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::GridSpec;
use crate::error::{Error, Result};

/// Sidecar location for a data path: `<path>.meta`.
pub(crate) fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

pub fn read_metadata(path: &Path) -> Result<GridSpec> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_metadata(&text, path)
}

fn parse_metadata(text: &str, path: &Path) -> Result<GridSpec> {
    let err = |line: usize, msg: String| Error::Metadata {
        path: path.to_owned(),
        line,
        msg,
    };
    let mut width = None;
    let mut height = None;
    let mut timesteps = None;
    let mut spec = GridSpec {
        width: 0,
        height: 0,
        timesteps: 0,
        spacing: (1.0, 1.0),
        origin: (0.0, 0.0),
        time_spacing: 1.0,
    };
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| err(line_no, format!("expected `key: value`, got `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        let int = || {
            value.parse::<usize>().map_err(|_| {
                err(
                    line_no,
                    format!("`{key}` must be a non-negative integer, got `{value}`"),
                )
            })
        };
        let real = || {
            value
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| err(line_no, format!("`{key}` must be a finite number, got `{value}`")))
        };
        match key {
            "width" => width = Some(int()?),
            "height" => height = Some(int()?),
            "timesteps" => timesteps = Some(int()?),
            "dx" => spec.spacing.0 = real()?,
            "dy" => spec.spacing.1 = real()?,
            "ox" => spec.origin.0 = real()?,
            "oy" => spec.origin.1 = real()?,
            "dt" => spec.time_spacing = real()?,
            other => return Err(err(line_no, format!("unknown key `{other}`"))),
        }
    }
    let last = text.lines().count();
    spec.width = width.ok_or_else(|| err(last, "missing `width`".into()))?;
    spec.height = height.ok_or_else(|| err(last, "missing `height`".into()))?;
    spec.timesteps = timesteps.ok_or_else(|| err(last, "missing `timesteps`".into()))?;
    spec.validate().map_err(|e| err(last, e.to_string()))?;
    Ok(spec)
}

pub fn write_metadata(path: &Path, spec: &GridSpec) -> Result<()> {
    let mut s = String::new();
    let _ = writeln!(s, "width: {}", spec.width);
    let _ = writeln!(s, "height: {}", spec.height);
    let _ = writeln!(s, "timesteps: {}", spec.timesteps);
    let _ = writeln!(s, "dx: {}", spec.spacing.0);
    let _ = writeln!(s, "dy: {}", spec.spacing.1);
    let _ = writeln!(s, "ox: {}", spec.origin.0);
    let _ = writeln!(s, "oy: {}", spec.origin.1);
    let _ = writeln!(s, "dt: {}", spec.time_spacing);
    fs::write(path, s).map_err(|e| Error::io(path, e))
}
