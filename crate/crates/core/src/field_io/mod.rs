//! Grid data model and on-disk formats.
//!
//! Fields are stored time-major, row-major within each slice: the value of
//! vertex `(i, j)` at step `t` lives at `t * width * height + j * width + i`.
//! On disk values are little-endian `f32`; in memory they are `f64`.

mod meta;
mod readers;
mod writers;

pub use meta::{read_metadata, write_metadata};
pub use readers::{load_field, FieldFormat};
pub use writers::{
    write_critical_points, write_field, write_graph, write_ground_truth, write_i32_raw, write_jacobi,
    write_magnitude_raw, write_robustness, write_stats, write_tracks, TrackFormat,
};

use crate::error::{Error, Result};
use crate::mesh::Triangulation2D;

/// Geometry shared by every slice of a field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SliceSpec {
    pub width: usize,
    pub height: usize,
    pub spacing: (f64, f64),
    pub origin: (f64, f64),
}

impl SliceSpec {
    pub fn vertex_count(&self) -> usize {
        self.width * self.height
    }

    pub fn triangulation(&self) -> Triangulation2D {
        Triangulation2D::new(self.width, self.height)
    }

    /// World position of vertex `v`.
    pub fn vertex_position(&self, v: usize) -> (f64, f64) {
        let (i, j) = (v % self.width, v / self.width);
        (
            self.origin.0 + i as f64 * self.spacing.0,
            self.origin.1 + j as f64 * self.spacing.1,
        )
    }

    /// World position of the center of quad cell `c`.
    pub fn cell_center(&self, c: usize) -> (f64, f64) {
        let cx = self.width - 1;
        let (ci, cj) = (c % cx, c / cx);
        (
            self.origin.0 + (ci as f64 + 0.5) * self.spacing.0,
            self.origin.1 + (cj as f64 + 0.5) * self.spacing.1,
        )
    }

    /// World position of the grid center.
    pub fn center(&self) -> (f64, f64) {
        (
            self.origin.0 + 0.5 * (self.width - 1) as f64 * self.spacing.0,
            self.origin.1 + 0.5 * (self.height - 1) as f64 * self.spacing.1,
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub width: usize,
    pub height: usize,
    pub timesteps: usize,
    pub spacing: (f64, f64),
    pub origin: (f64, f64),
    pub time_spacing: f64,
}

impl GridSpec {
    /// Unit spacing, zero origin.
    pub fn new(width: usize, height: usize, timesteps: usize) -> Result<Self> {
        let spec = GridSpec {
            width,
            height,
            timesteps,
            spacing: (1.0, 1.0),
            origin: (0.0, 0.0),
            time_spacing: 1.0,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.width < 3 || self.height < 3 {
            return Err(Error::InvalidGrid(format!(
                "grid must be at least 3x3, got {}x{}",
                self.width, self.height
            )));
        }
        if self.timesteps < 2 {
            return Err(Error::InvalidGrid(format!(
                "at least 2 timesteps required, got {}",
                self.timesteps
            )));
        }
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.spacing.0) || !positive(self.spacing.1) || !positive(self.time_spacing) {
            return Err(Error::InvalidGrid("spacings must be positive".into()));
        }
        if !self.origin.0.is_finite() || !self.origin.1.is_finite() {
            return Err(Error::InvalidGrid("origin must be finite".into()));
        }
        Ok(())
    }

    pub fn slice_spec(&self) -> SliceSpec {
        SliceSpec {
            width: self.width,
            height: self.height,
            spacing: self.spacing,
            origin: self.origin,
        }
    }

    /// Vertices per slice (`n`).
    pub fn vertex_count(&self) -> usize {
        self.width * self.height
    }

    pub fn value_count(&self) -> usize {
        self.vertex_count() * self.timesteps
    }
}

/// One time step of a field.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarGrid {
    pub spec: SliceSpec,
    pub values: Vec<f64>,
}

impl ScalarGrid {
    pub fn new(spec: SliceSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != spec.vertex_count() {
            return Err(Error::InvalidGrid(format!(
                "expected {} values, got {}",
                spec.vertex_count(),
                values.len()
            )));
        }
        if let Some(k) = values.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidGrid(format!("non-finite value at vertex {k}")));
        }
        Ok(Self { spec, values })
    }

    /// Grid with unit spacing and zero origin, sampling `f(i, j)`.
    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let spec = SliceSpec {
            width,
            height,
            spacing: (1.0, 1.0),
            origin: (0.0, 0.0),
        };
        let values = (0..width * height).map(|v| f(v % width, v / width)).collect();
        Self { spec, values }
    }

    pub fn triangulation(&self) -> Triangulation2D {
        self.spec.triangulation()
    }

    pub fn range(&self) -> (f64, f64) {
        value_range(&self.values)
    }
}

pub(crate) fn value_range(values: &[f64]) -> (f64, f64) {
    values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
        (lo.min(x), hi.max(x))
    })
}

/// A stack of scalar grids over uniformly spaced time steps. Immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeVaryingField {
    spec: GridSpec,
    values: Vec<f64>,
}

impl TimeVaryingField {
    pub fn new(spec: GridSpec, values: Vec<f64>) -> Result<Self> {
        spec.validate()?;
        if values.len() != spec.value_count() {
            return Err(Error::InvalidGrid(format!(
                "expected {} values for {}x{}x{}, got {}",
                spec.value_count(),
                spec.width,
                spec.height,
                spec.timesteps,
                values.len()
            )));
        }
        if let Some(k) = values.iter().position(|x| !x.is_finite()) {
            let n = spec.vertex_count();
            return Err(Error::InvalidGrid(format!(
                "non-finite value at timestep {}, vertex {}",
                k / n,
                k % n
            )));
        }
        Ok(Self { spec, values })
    }

    /// Build from per-step grids sharing one geometry.
    pub fn from_slices(spec: GridSpec, slices: Vec<ScalarGrid>) -> Result<Self> {
        if slices.len() != spec.timesteps {
            return Err(Error::InvalidGrid(format!(
                "expected {} slices, got {}",
                spec.timesteps,
                slices.len()
            )));
        }
        let mut values = Vec::with_capacity(spec.value_count());
        for s in slices {
            values.extend(s.values);
        }
        Self::new(spec, values)
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn timesteps(&self) -> usize {
        self.spec.timesteps
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Borrowed values of step `t`.
    pub fn slice_values(&self, t: usize) -> Result<&[f64]> {
        if t >= self.spec.timesteps {
            return Err(Error::TimestepOutOfRange {
                t,
                timesteps: self.spec.timesteps,
            });
        }
        let n = self.spec.vertex_count();
        Ok(&self.values[t * n..(t + 1) * n])
    }

    pub fn slice(&self, t: usize) -> Result<ScalarGrid> {
        Ok(ScalarGrid {
            spec: self.spec.slice_spec(),
            values: self.slice_values(t)?.to_vec(),
        })
    }

    pub fn range(&self) -> (f64, f64) {
        value_range(&self.values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp_field() -> TimeVaryingField {
        let spec = GridSpec::new(3, 3, 2).unwrap();
        TimeVaryingField::new(spec, (0..18).map(f64::from).collect()).unwrap()
    }

    #[test]
    fn slices_cover_all_steps() {
        let f = ramp_field();
        assert_eq!(f.slice(0).unwrap().values, (0..9).map(f64::from).collect::<Vec<_>>());
        assert_eq!(f.slice(1).unwrap().values[0], 9.0);
        assert!(matches!(
            f.slice(2),
            Err(Error::TimestepOutOfRange { t: 2, timesteps: 2 })
        ));
    }

    #[test]
    fn rejects_small_or_bad_specs() {
        assert!(GridSpec::new(2, 5, 4).is_err());
        assert!(GridSpec::new(5, 5, 1).is_err());
        let mut spec = GridSpec::new(3, 3, 2).unwrap();
        spec.spacing.0 = 0.0;
        assert!(spec.validate().is_err());
    }

    #[test]
    fn rejects_non_finite_values() {
        let spec = GridSpec::new(3, 3, 2).unwrap();
        let mut values = vec![0.0; 18];
        values[10] = f64::NAN;
        let err = TimeVaryingField::new(spec, values).unwrap_err();
        assert!(err.to_string().contains("timestep 1, vertex 1"), "{err}");
    }

    #[test]
    fn cell_centers_use_spacing() {
        let spec = SliceSpec {
            width: 4,
            height: 3,
            spacing: (2.0, 0.5),
            origin: (1.0, -1.0),
        };
        assert_eq!(spec.cell_center(0), (2.0, -0.75));
        assert_eq!(spec.cell_center(4), (4.0, -0.25));
        assert_eq!(spec.vertex_position(5), (3.0, -0.5));
    }
}
