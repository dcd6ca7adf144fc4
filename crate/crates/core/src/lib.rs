//! Simplified Jacobi sets for 2D time-varying scalar fields.
//!
//! Critical points of every time step are clustered inside the δ-sublevel set
//! of the gradient magnitude; clusters with nonzero total Poincare index are
//! tracked across steps by spatial overlap. The unsimplified PL Jacobi set of
//! `(f, time)` is available as a baseline.
//!
//! ```
//! use jacobi_track::pipeline::{run_pipeline, PipelineParams};
//! use jacobi_track::synth::SynthPreset;
//!
//! let field = SynthPreset::by_name("rotating-gaussians-small")?.generate(0)?;
//! let out = run_pipeline(&field, &PipelineParams::default())?;
//! assert!(out.stats.tracks_after_postprocess <= out.stats.tracks_before_postprocess);
//! # Ok::<(), jacobi_track::Error>(())
//! ```

pub mod error;
pub mod field_io;
pub mod gradient;
pub mod jacobi_pl;
pub mod mesh;
pub mod pipeline;
pub mod pl_critical;
pub mod postprocess;
pub mod robustness;
pub mod sublevel;
pub mod synth;
pub mod tracking;

pub use error::{Error, Result};
pub use field_io::{GridSpec, ScalarGrid, SliceSpec, TimeVaryingField};

/// `(0..n).map(f)`, in parallel when the `parallel` feature is on. Order is kept.
#[cfg(feature = "parallel")]
pub(crate) fn par_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}
