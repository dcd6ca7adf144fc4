//! End-to-end driver: per-step topology, tracking, post-processing.
//!
//! Time steps are processed in batches. Within a batch every stage runs over
//! all steps (in parallel with the `parallel` feature) before the next one
//! starts, which keeps per-stage timings meaningful while only a batch of
//! grids is alive at once.

use std::time::Duration;
#[cfg(not(target_arch = "wasm32"))]
use std::time::Instant;
#[cfg(target_arch = "wasm32")]
use web_time::Instant;

use crate::error::{Error, Result};
use crate::field_io::{ScalarGrid, TimeVaryingField};
use crate::gradient::{gradient_field, magnitude_field, MagnitudeGrid};
use crate::jacobi_pl::{jacobi_set, JacobiEdgeSet};
use crate::pl_critical::{critical_points, simplify_field, CriticalPoint, ThresholdMode};
use crate::postprocess::{postprocess, PostprocessParams};
use crate::robustness::{merge_tree, static_robustness, RobustnessEntry};
use crate::sublevel::{components, drop_degree_zero, sublevel_cells, ComponentSet};
use crate::tracking::{extract_tracks, track_graph, Track, TrackGraph};

const BATCH: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PipelineParams {
    /// Absolute threshold on the gradient magnitude.
    pub delta: f64,
    pub eps_p: f64,
    /// Fraction mode is relative to the value range of the whole field.
    pub eps_p_mode: ThresholdMode,
    pub post: PostprocessParams,
    pub original_jacobi: bool,
    pub robustness: bool,
    /// Keep magnitudes, labels and criticals of every step.
    pub keep_steps: bool,
}

impl Default for PipelineParams {
    fn default() -> Self {
        Self {
            delta: 0.05,
            eps_p: 0.0012,
            eps_p_mode: ThresholdMode::FractionOfRange,
            post: PostprocessParams::default(),
            original_jacobi: false,
            robustness: false,
            keep_steps: false,
        }
    }
}

impl PipelineParams {
    pub fn validate(&self) -> Result<()> {
        for (name, x) in [("delta", self.delta), ("persistence", self.eps_p)] {
            if !x.is_finite() || x < 0.0 {
                return Err(Error::Config(format!("{name} must be a finite value >= 0, got {x}")));
            }
        }
        self.post.validate()
    }
}

/// Intermediate results of one step, kept on request.
#[derive(Clone, Debug, PartialEq)]
pub struct StepDump {
    pub t: usize,
    pub criticals: Vec<CriticalPoint>,
    pub magnitude: MagnitudeGrid,
    pub labels: Vec<i32>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct StageTimes {
    pub simplify: Duration,
    pub criticals: Duration,
    pub gradient: Duration,
    pub sublevel: Duration,
    pub robustness: Duration,
    pub tracking: Duration,
    pub postprocess: Duration,
    pub jacobi: Duration,
    pub total: Duration,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PipelineStats {
    pub timesteps: usize,
    pub vertices: usize,
    pub eps_p_absolute: f64,
    pub critical_points: usize,
    pub components: usize,
    pub components_nonzero: usize,
    pub graph_nodes: usize,
    pub graph_edges: usize,
    pub tracks_before_postprocess: usize,
    pub tracks_after_postprocess: usize,
    /// Consecutive-node pairs over the final tracks.
    pub simplified_edges: usize,
    pub original_jacobi_edges: Option<usize>,
    pub times: StageTimes,
}

impl PipelineStats {
    /// `key: value` pairs for the stats file.
    pub fn entries(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = vec![
            ("timesteps".into(), self.timesteps.to_string()),
            ("vertices_per_step".into(), self.vertices.to_string()),
            ("persistence_threshold".into(), self.eps_p_absolute.to_string()),
            ("critical_points".into(), self.critical_points.to_string()),
            ("components".into(), self.components.to_string()),
            ("components_nonzero_degree".into(), self.components_nonzero.to_string()),
            ("graph_nodes".into(), self.graph_nodes.to_string()),
            ("graph_edges".into(), self.graph_edges.to_string()),
            (
                "tracks_before_postprocess".into(),
                self.tracks_before_postprocess.to_string(),
            ),
            (
                "tracks_after_postprocess".into(),
                self.tracks_after_postprocess.to_string(),
            ),
            ("simplified_edges".into(), self.simplified_edges.to_string()),
        ];
        if let Some(n) = self.original_jacobi_edges {
            out.push(("original_jacobi_edges".into(), n.to_string()));
            if self.simplified_edges > 0 {
                out.push((
                    "reduction_factor".into(),
                    format!("{:.2}", n as f64 / self.simplified_edges as f64),
                ));
            }
        }
        let t = &self.times;
        for (name, d) in [
            ("simplify", t.simplify),
            ("critical_points", t.criticals),
            ("gradient", t.gradient),
            ("sublevel", t.sublevel),
            ("robustness", t.robustness),
            ("tracking", t.tracking),
            ("postprocess", t.postprocess),
            ("original_jacobi", t.jacobi),
            ("total", t.total),
        ] {
            out.push((format!("time_{name}_s"), format!("{:.6}", d.as_secs_f64())));
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub graph: TrackGraph,
    pub raw_tracks: Vec<Track>,
    pub tracks: Vec<Track>,
    pub jacobi: Option<JacobiEdgeSet>,
    pub robustness: Vec<RobustnessEntry>,
    pub steps: Vec<StepDump>,
    pub stats: PipelineStats,
}

fn timed<T>(acc: &mut Duration, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    *acc += start.elapsed();
    out
}

/// Absolute persistence threshold for the field.
pub fn absolute_persistence(field: &TimeVaryingField, eps_p: f64, mode: ThresholdMode) -> f64 {
    match mode {
        ThresholdMode::Absolute => eps_p,
        ThresholdMode::FractionOfRange => {
            let (lo, hi) = field.range();
            eps_p * (hi - lo)
        }
    }
}

pub fn run_pipeline(field: &TimeVaryingField, params: &PipelineParams) -> Result<PipelineOutput> {
    params.validate()?;
    let start = Instant::now();
    let spec = *field.spec();
    let steps = field.timesteps();
    let eps = absolute_persistence(field, params.eps_p, params.eps_p_mode);
    let mut times = StageTimes::default();
    let mut stats = PipelineStats {
        timesteps: steps,
        vertices: spec.vertex_count(),
        eps_p_absolute: eps,
        ..Default::default()
    };
    let mut sets: Vec<ComponentSet> = Vec::with_capacity(steps);
    let mut robustness = Vec::new();
    let mut dumps = Vec::new();

    for first in (0..steps).step_by(BATCH) {
        let batch: Vec<usize> = (first..(first + BATCH).min(steps)).collect();
        let map = |f: &(dyn Fn(usize) -> Result<ScalarGrid> + Sync)| -> Result<Vec<ScalarGrid>> {
            crate::par_map(batch.len(), |k| f(batch[k])).into_iter().collect()
        };
        let grids = timed(&mut times.simplify, || {
            map(&|t| simplify_field(&field.slice(t)?, eps, ThresholdMode::Absolute))
        })?;
        let crits = timed(&mut times.criticals, || {
            crate::par_map(batch.len(), |k| critical_points(&grids[k], batch[k]))
        });
        let mags = timed(&mut times.gradient, || {
            crate::par_map(batch.len(), |k| magnitude_field(&gradient_field(&grids[k]), &crits[k]))
        });
        let comp_sets = timed(&mut times.sublevel, || {
            crate::par_map(batch.len(), |k| {
                let cells = sublevel_cells(&mags[k], params.delta);
                components(&cells, &mags[k], &crits[k], params.delta, batch[k])
            })
        });
        if params.robustness {
            let reports = timed(&mut times.robustness, || {
                crate::par_map(batch.len(), |k| {
                    static_robustness(&merge_tree(&mags[k], &crits[k]), &crits[k])
                })
            });
            for r in reports {
                robustness.extend(r?.entries);
            }
        }
        for (k, (cs, cps)) in comp_sets.into_iter().zip(&crits).enumerate() {
            let t = batch[k];
            let index_sum: i32 = cps.iter().map(|c| c.index).sum();
            if cs.total_degree() != index_sum {
                return Err(Error::Invariant(format!(
                    "step {t}: component degrees sum to {} but critical indices to {index_sum}",
                    cs.total_degree()
                )));
            }
            if index_sum != 1 {
                return Err(Error::Invariant(format!(
                    "step {t}: critical indices sum to {index_sum}, expected 1"
                )));
            }
            stats.critical_points += cps.len();
            stats.components += cs.components.len();
            if params.keep_steps {
                dumps.push(StepDump {
                    t,
                    criticals: cps.clone(),
                    magnitude: mags[k].clone(),
                    labels: cs.label_grid(),
                });
            }
            let kept = drop_degree_zero(cs);
            stats.components_nonzero += kept.components.len();
            sets.push(kept);
        }
    }

    let (graph, raw_tracks) = timed(&mut times.tracking, || {
        let graph = track_graph(&sets);
        let tracks = extract_tracks(&graph);
        (graph, tracks)
    });
    let tracks = timed(&mut times.postprocess, || postprocess(raw_tracks.clone(), &params.post));
    let jacobi = params
        .original_jacobi
        .then(|| timed(&mut times.jacobi, || jacobi_set(field)));

    stats.graph_nodes = graph.nodes.len();
    stats.graph_edges = graph.edges.len();
    stats.tracks_before_postprocess = raw_tracks.len();
    stats.tracks_after_postprocess = tracks.len();
    stats.simplified_edges = tracks.iter().map(|t| t.points.len() - 1).sum();
    stats.original_jacobi_edges = jacobi.as_ref().map(JacobiEdgeSet::len);
    if stats.tracks_after_postprocess > stats.tracks_before_postprocess
        || stats.tracks_before_postprocess > stats.graph_nodes
    {
        return Err(Error::Invariant(format!(
            "track counts inconsistent: {} after, {} before, {} nodes",
            stats.tracks_after_postprocess, stats.tracks_before_postprocess, stats.graph_nodes
        )));
    }
    times.total = start.elapsed();
    stats.times = times;

    Ok(PipelineOutput {
        graph,
        raw_tracks,
        tracks,
        jacobi,
        robustness,
        steps: dumps,
        stats,
    })
}

/// Run `f` on a pool with the given number of worker threads.
#[cfg(feature = "parallel")]
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    match threads {
        None => Ok(f()),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| Error::Config(format!("cannot start {n} worker threads: {e}"))),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_threads<R: Send>(_threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    Ok(f())
}
