//! Browser bindings: generate a rotating-Gaussians field, inspect one step's
//! critical points and δ-sublevel components, and compute tracks.
//!
//! Arrays cross the boundary flat; the layouts are documented per method.

use wasm_bindgen::prelude::*;

use jacobi_track::gradient::{gradient_field, magnitude_field};
use jacobi_track::pipeline::{run_pipeline, PipelineParams};
use jacobi_track::pl_critical::{critical_points, simplify_field, CriticalKind, ThresholdMode};
use jacobi_track::postprocess::PostprocessParams;
use jacobi_track::robustness::{merge_tree, static_robustness, RobustnessReport};
use jacobi_track::sublevel::{components, sublevel_cells};
use jacobi_track::synth::SynthPreset;
use jacobi_track::{ScalarGrid, TimeVaryingField};

/// Cells outside every component in [`Demo::components`].
pub const OUTSIDE: i32 = i32::MIN;

const PERSISTENCE: f64 = 0.0012;

fn js_err(e: jacobi_track::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub struct Demo {
    field: TimeVaryingField,
    eps_p: f64,
}

impl Demo {
    fn step(&self, t: usize) -> Result<ScalarGrid, JsError> {
        let grid = self.field.slice(t).map_err(js_err)?;
        simplify_field(&grid, self.eps_p, ThresholdMode::Absolute).map_err(js_err)
    }

    fn params(&self, delta: f64) -> PipelineParams {
        PipelineParams {
            delta,
            eps_p: self.eps_p,
            eps_p_mode: ThresholdMode::Absolute,
            ..Default::default()
        }
    }
}

#[wasm_bindgen]
impl Demo {
    /// The rotating-Gaussians preset resampled at `width x height x steps`.
    #[wasm_bindgen(constructor)]
    pub fn new(width: usize, height: usize, steps: usize, noise: f64, seed: u32) -> Result<Demo, JsError> {
        let mut preset = SynthPreset::by_name("rotating-gaussians")
            .and_then(|p| p.resized(width, height, steps))
            .map_err(js_err)?;
        preset.noise_amp = noise;
        let field = preset.generate(seed as u64).map_err(js_err)?;
        let (lo, hi) = field.range();
        // above the noise when there is any, otherwise the default fraction
        let eps_p = (2.0 * noise).max(PERSISTENCE * (hi - lo));
        Ok(Demo { field, eps_p })
    }

    pub fn width(&self) -> usize {
        self.field.spec().width
    }

    pub fn height(&self) -> usize {
        self.field.spec().height
    }

    pub fn steps(&self) -> usize {
        self.field.timesteps()
    }

    /// World size of the domain, `[x extent, y extent]`.
    pub fn extent(&self) -> Vec<f64> {
        let s = self.field.spec();
        vec![s.spacing.0 * (s.width - 1) as f64, s.spacing.1 * (s.height - 1) as f64]
    }

    /// Raw values of step `t`, row-major.
    pub fn values(&self, t: usize) -> Result<Vec<f64>, JsError> {
        self.field.slice_values(t).map(<[f64]>::to_vec).map_err(js_err)
    }

    /// Critical points of the simplified step: `[i, j, kind, ...]` with kind
    /// 0 = minimum, 1 = saddle, 2 = maximum.
    pub fn criticals(&self, t: usize) -> Result<Vec<f64>, JsError> {
        let grid = self.step(t)?;
        let w = grid.spec.width;
        Ok(critical_points(&grid, t)
            .iter()
            .flat_map(|c| {
                let kind = match c.kind {
                    CriticalKind::Minimum => 0.0,
                    CriticalKind::Saddle => 1.0,
                    CriticalKind::Maximum => 2.0,
                };
                [(c.vertex % w) as f64, (c.vertex / w) as f64, kind]
            })
            .collect())
    }

    /// Per cell of step `t`: the degree of its δ-sublevel component, or
    /// [`OUTSIDE`]. Row-major over `(width - 1) x (height - 1)` cells.
    pub fn components(&self, t: usize, delta: f64) -> Result<Vec<i32>, JsError> {
        let grid = self.step(t)?;
        let crits = critical_points(&grid, t);
        let mag = magnitude_field(&gradient_field(&grid), &crits);
        let cs = components(&sublevel_cells(&mag, delta), &mag, &crits, delta, t);
        let mut out = vec![OUTSIDE; (grid.spec.width - 1) * (grid.spec.height - 1)];
        for c in &cs.components {
            for &cell in &c.cells {
                out[cell as usize] = c.degree;
            }
        }
        Ok(out)
    }

    /// A δ suggested by the robustness of the criticals of the first steps, or
    /// `NaN` when there is no clear gap.
    pub fn suggest_delta(&self) -> Result<f64, JsError> {
        let mut entries = Vec::new();
        for t in 0..self.steps().min(8) {
            let grid = self.step(t)?;
            let crits = critical_points(&grid, t);
            let mag = magnitude_field(&gradient_field(&grid), &crits);
            let report = static_robustness(&merge_tree(&mag, &crits), &crits).map_err(js_err)?;
            entries.extend(report.entries);
        }
        Ok(RobustnessReport { entries }.suggest_delta().unwrap_or(f64::NAN))
    }

    /// Tracks for the whole run: `[id, n, x0, y0, t0, ..., x(n-1), y(n-1), t(n-1), id, n, ...]`.
    pub fn tracks(&self, delta: f64, eps_t: usize, eps_s: f64, min_length: usize) -> Result<Vec<f64>, JsError> {
        let params = PipelineParams {
            post: PostprocessParams {
                eps_t,
                eps_s,
                eps_l: min_length,
            },
            ..self.params(delta)
        };
        let out = run_pipeline(&self.field, &params).map_err(js_err)?;
        let mut flat = Vec::new();
        for track in &out.tracks {
            flat.push(track.id as f64);
            flat.push(track.points.len() as f64);
            for p in &track.points {
                flat.extend([p.x, p.y, p.t as f64]);
            }
        }
        Ok(flat)
    }
}
