//! `jacobi-track`: ingest or synthesize a field, run the pipeline, write artifacts.
//!
//! Exit codes: 0 ok, 1 configuration error, 2 data error, 3 invariant violation.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use jacobi_track::field_io::{
    load_field, write_critical_points, write_field, write_graph, write_ground_truth, write_i32_raw, write_jacobi,
    write_magnitude_raw, write_robustness, write_stats, write_tracks, FieldFormat, TrackFormat,
};
use jacobi_track::pipeline::{run_pipeline, with_threads, PipelineOutput, PipelineParams};
use jacobi_track::pl_critical::ThresholdMode;
use jacobi_track::postprocess::PostprocessParams;
use jacobi_track::robustness::RobustnessReport;
use jacobi_track::synth::{ground_truth_tracks, SynthPreset, PRESET_NAMES};
use jacobi_track::{Error, TimeVaryingField};

#[derive(Parser, Debug)]
#[command(
    name = "jacobi-track",
    version,
    about = "Track critical points of 2D time-varying scalar fields"
)]
struct Cli {
    /// Input field path (a stem for raw-f32 and csv-stack); metadata in `<path>.meta`.
    #[arg(long, conflicts_with = "synth")]
    input: Option<PathBuf>,

    /// raw-f32, csv-stack or stacked-raw.
    #[arg(long, default_value = "raw-f32")]
    format: FieldFormat,

    /// Built-in generator preset instead of an input file.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(PRESET_NAMES))]
    synth: Option<String>,

    /// Resample the preset at `WxHxT`, keeping its world geometry.
    #[arg(long, value_name = "WxHxT", requires = "synth")]
    size: Option<String>,

    /// Noise seed for synthetic fields.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Gradient magnitude threshold (absolute). Omit to use the value
    /// suggested by the robustness report.
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,

    /// Persistence simplification threshold.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0012)]
    persistence: f64,

    /// `fraction` (of the data range) or `absolute`.
    #[arg(long, default_value = "fraction")]
    persistence_mode: ThresholdMode,

    /// Time window for track repair, in steps.
    #[arg(long, default_value_t = 0)]
    eps_t: usize,

    /// Spatial radius for track repair, in world units.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    eps_s: f64,

    /// Drop tracks shorter than this many steps.
    #[arg(long, default_value_t = 0)]
    min_track_length: usize,

    /// Also compute the unsimplified Jacobi set of the input.
    #[arg(long)]
    emit_original_jacobi: bool,

    /// Write per-critical robustness and a histogram.
    #[arg(long)]
    robustness_report: bool,

    /// Per-step critical points, magnitudes, labels, and the tracking graph.
    #[arg(long)]
    dump_intermediate: bool,

    /// Also write the (loaded or generated) field in the given format.
    #[arg(long, value_name = "FORMAT")]
    export_field: Option<FieldFormat>,

    /// Time the pipeline at the given size and with doubled T and n (synth only).
    #[arg(long, requires = "synth")]
    scaling_probe: bool,

    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,

    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) => 1,
        Error::Invariant(_) | Error::NotInTree(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.threads == Some(0) {
        eprintln!("error: invalid parameter: --threads must be at least 1");
        return ExitCode::from(1);
    }
    match with_threads(cli.threads, || run(&cli)).and_then(|r| r) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn parse_size(s: &str) -> Result<(usize, usize, usize), Error> {
    let parts: Vec<&str> = s.split('x').collect();
    let bad = || Error::Config(format!("--size expects WxHxT, got `{s}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let num = |p: &str| p.parse::<usize>().map_err(|_| bad());
    Ok((num(parts[0])?, num(parts[1])?, num(parts[2])?))
}

fn preset(cli: &Cli) -> Result<Option<SynthPreset>, Error> {
    let Some(name) = &cli.synth else { return Ok(None) };
    let p = SynthPreset::by_name(name)?;
    match &cli.size {
        None => Ok(Some(p)),
        Some(s) => {
            let (w, h, t) = parse_size(s)?;
            p.resized(w, h, t).map(Some)
        }
    }
}

fn base_params(cli: &Cli) -> PipelineParams {
    PipelineParams {
        delta: cli.delta.unwrap_or(0.0),
        eps_p: cli.persistence,
        eps_p_mode: cli.persistence_mode,
        post: PostprocessParams {
            eps_t: cli.eps_t,
            eps_s: cli.eps_s,
            eps_l: cli.min_track_length,
        },
        ..Default::default()
    }
}

fn run(cli: &Cli) -> Result<(), Error> {
    let preset = preset(cli)?;
    let mut params = base_params(cli);
    params.validate()?;
    fs::create_dir_all(&cli.out).map_err(|e| io(&cli.out, e))?;

    if cli.scaling_probe {
        let p = preset.as_ref().expect("clap enforces --synth");
        return scaling_probe(p, cli.seed, &params, &cli.out);
    }

    let field = match (&preset, &cli.input) {
        (Some(p), _) => p.generate(cli.seed)?,
        (None, Some(path)) => load_field(path, cli.format)?,
        (None, None) => return Err(Error::Config("one of --input or --synth is required".into())),
    };
    if let Some(format) = cli.export_field {
        write_field(&cli.out.join("field"), &field, format)?;
    }
    if let Some(p) = &preset {
        write_ground_truth(
            &cli.out.join("ground_truth.csv"),
            &ground_truth_tracks(&p.gaussians, &p.spec),
        )?;
    }

    params.original_jacobi = cli.emit_original_jacobi;
    params.robustness = cli.robustness_report || cli.delta.is_none();
    params.keep_steps = cli.dump_intermediate;
    let mut suggested = None;
    if cli.delta.is_none() {
        // robustness does not depend on delta; one cheap pass picks it
        let probe = run_pipeline(
            &field,
            &PipelineParams {
                original_jacobi: false,
                keep_steps: false,
                ..params
            },
        )?;
        let report = RobustnessReport {
            entries: probe.robustness,
        };
        let delta = report
            .suggest_delta()
            .ok_or_else(|| Error::Config("no robustness gap found; pass --delta explicitly".into()))?;
        eprintln!("suggested delta: {delta}");
        suggested = Some(delta);
        params.delta = delta;
    }
    let out = run_pipeline(&field, &params)?;
    write_outputs(cli, &field, &params, &out, suggested)?;
    eprintln!(
        "{} tracks ({} before post-processing) over {} steps",
        out.stats.tracks_after_postprocess, out.stats.tracks_before_postprocess, out.stats.timesteps
    );
    Ok(())
}

fn io(path: &Path, e: std::io::Error) -> Error {
    Error::Io {
        path: path.to_owned(),
        source: e,
    }
}

fn write_outputs(
    cli: &Cli,
    field: &TimeVaryingField,
    params: &PipelineParams,
    out: &PipelineOutput,
    suggested: Option<f64>,
) -> Result<(), Error> {
    let dir = &cli.out;
    let spec = field.spec();
    write_tracks(
        &out.tracks,
        &dir.join("tracks.csv"),
        TrackFormat::Csv,
        spec.time_spacing,
    )?;
    write_tracks(
        &out.tracks,
        &dir.join("tracks.vtk"),
        TrackFormat::VtkLegacyPolydata,
        spec.time_spacing,
    )?;

    let mut stats = vec![("delta".to_string(), params.delta.to_string())];
    stats.extend(out.stats.entries());
    let report = RobustnessReport {
        entries: out.robustness.clone(),
    };
    if cli.robustness_report {
        write_robustness(&dir.join("robustness.csv"), &report.entries)?;
        let summary = report.summary(20);
        let mut lines = vec![
            ("finite".to_string(), summary.finite.to_string()),
            ("infinite".to_string(), summary.infinite.to_string()),
        ];
        for (q, v) in &summary.quantiles {
            lines.push((format!("quantile_{q}"), v.to_string()));
        }
        for (edge, count) in &summary.bins {
            lines.push((format!("bin_le_{edge:.6}"), count.to_string()));
        }
        if let Some(d) = report.suggest_delta() {
            lines.push(("suggested_delta".to_string(), d.to_string()));
        }
        write_stats(&dir.join("robustness_summary.txt"), &lines)?;
    }
    if let Some(d) = suggested {
        stats.push(("suggested_delta".to_string(), d.to_string()));
    }
    write_stats(&dir.join("stats.txt"), &stats)?;

    if let Some(jacobi) = &out.jacobi {
        write_jacobi(&dir.join("jacobi.csv"), jacobi, spec, TrackFormat::Csv)?;
        write_jacobi(&dir.join("jacobi.vtk"), jacobi, spec, TrackFormat::VtkLegacyPolydata)?;
    }
    if cli.dump_intermediate {
        let steps = dir.join("steps");
        fs::create_dir_all(&steps).map_err(|e| io(&steps, e))?;
        let slice = spec.slice_spec();
        let all: Vec<_> = out.steps.iter().flat_map(|s| s.criticals.iter().copied()).collect();
        write_critical_points(&dir.join("critical_points.csv"), &slice, &all)?;
        for s in &out.steps {
            write_magnitude_raw(&steps.join(format!("magnitude_{}.raw", s.t)), &s.magnitude.magnitudes)?;
            write_i32_raw(&steps.join(format!("labels_{}.raw", s.t)), &s.labels)?;
        }
        write_graph(&dir.join("nodes.csv"), &dir.join("edges.csv"), &out.graph)?;
    }
    Ok(())
}

fn median_time(field: &TimeVaryingField, params: &PipelineParams, runs: usize) -> Result<f64, Error> {
    let mut times = Vec::with_capacity(runs);
    for _ in 0..runs {
        let start = Instant::now();
        run_pipeline(field, params)?;
        times.push(start.elapsed().as_secs_f64());
    }
    times.sort_by(f64::total_cmp);
    Ok(times[runs / 2])
}

fn scaling_probe(p: &SynthPreset, seed: u64, params: &PipelineParams, dir: &Path) -> Result<(), Error> {
    let mut params = *params;
    if params.delta == 0.0 {
        params.delta = 0.1;
    }
    let (w, h, t) = (p.spec.width, p.spec.height, p.spec.timesteps);
    let sizes = [
        ("base", w, h, t),
        ("repeat", w, h, t),
        ("2T", w, h, 2 * t),
        ("2n", w, 2 * h, t),
    ];
    let mut rows = Vec::new();
    let mut base = None;
    println!(
        "{:<8} {:>6} {:>6} {:>6} {:>10} {:>7}",
        "case", "width", "height", "steps", "seconds", "ratio"
    );
    for (name, w, h, t) in sizes {
        let field = p.resized(w, h, t)?.generate(seed)?;
        let secs = median_time(&field, &params, 3)?;
        let reference = *base.get_or_insert(secs);
        let ratio = secs / reference;
        println!("{name:<8} {w:>6} {h:>6} {t:>6} {secs:>10.4} {ratio:>7.2}");
        rows.push((name.to_string(), format!("{w}x{h}x{t} {secs:.6}s ratio {ratio:.3}")));
    }
    write_stats(&dir.join("scaling.txt"), &rows)
}
