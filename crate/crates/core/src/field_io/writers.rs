use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use super::meta::{sidecar_path, write_metadata};
use super::readers::step_path;
use super::{FieldFormat, GridSpec, SliceSpec, TimeVaryingField};
use crate::error::{Error, Result};
use crate::jacobi_pl::{JacobiEdgeSet, StVertex};
use crate::pl_critical::CriticalPoint;
use crate::robustness::RobustnessEntry;
use crate::tracking::{Track, TrackGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrackFormat {
    Csv,
    VtkLegacyPolydata,
}

impl FromStr for TrackFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(TrackFormat::Csv),
            "vtk" | "vtk-legacy-polydata" => Ok(TrackFormat::VtkLegacyPolydata),
            other => Err(Error::Config(format!("unknown track format `{other}`"))),
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn f32_bytes(values: &[f64]) -> Vec<u8> {
    values.iter().flat_map(|&x| (x as f32).to_le_bytes()).collect()
}

/// Write `field` plus its metadata sidecar in the layout [`super::load_field`] reads.
pub fn write_field(path: &Path, field: &TimeVaryingField, format: FieldFormat) -> Result<()> {
    let spec = field.spec();
    write_metadata(&sidecar_path(path), spec)?;
    match format {
        FieldFormat::StackedRaw => fs::write(path, f32_bytes(field.values())).map_err(|e| Error::io(path, e)),
        FieldFormat::RawF32 => {
            for t in 0..spec.timesteps {
                let p = step_path(path, t, "raw");
                fs::write(&p, f32_bytes(field.slice_values(t)?)).map_err(|e| Error::io(&p, e))?;
            }
            Ok(())
        }
        FieldFormat::CsvStack => {
            for t in 0..spec.timesteps {
                let p = step_path(path, t, "csv");
                let mut w = create(&p)?;
                let values = field.slice_values(t)?;
                for row in values.chunks(spec.width) {
                    let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                    writeln!(w, "{}", line.join(",")).map_err(|e| Error::io(&p, e))?;
                }
                w.flush().map_err(|e| Error::io(&p, e))?;
            }
            Ok(())
        }
    }
}

/// Write tracks as `track_id,timestep,x,y,degree,component_cells` rows or as a
/// VTK legacy ASCII polydata with time mapped onto the z axis.
pub fn write_tracks(tracks: &[Track], path: &Path, format: TrackFormat, time_spacing: f64) -> Result<()> {
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    match format {
        TrackFormat::Csv => {
            writeln!(w, "track_id,timestep,x,y,degree,component_cells").map_err(io)?;
            for track in tracks {
                for p in &track.points {
                    writeln!(w, "{},{},{},{},{},{}", track.id, p.t, p.x, p.y, p.degree, p.cells).map_err(io)?;
                }
            }
        }
        TrackFormat::VtkLegacyPolydata => {
            let total: usize = tracks.iter().map(|t| t.points.len()).sum();
            writeln!(w, "# vtk DataFile Version 3.0").map_err(io)?;
            writeln!(w, "simplified jacobi set tracks").map_err(io)?;
            writeln!(w, "ASCII").map_err(io)?;
            writeln!(w, "DATASET POLYDATA").map_err(io)?;
            writeln!(w, "POINTS {total} double").map_err(io)?;
            for track in tracks {
                for p in &track.points {
                    writeln!(w, "{} {} {}", p.x, p.y, p.t as f64 * time_spacing).map_err(io)?;
                }
            }
            let mut offset = 0;
            let mut lines = Vec::new();
            let mut verts = Vec::new();
            for track in tracks {
                let ids: Vec<String> = (offset..offset + track.points.len()).map(|k| k.to_string()).collect();
                offset += track.points.len();
                if ids.len() >= 2 {
                    lines.push(ids);
                } else if !ids.is_empty() {
                    verts.push(ids);
                }
            }
            for (name, cells) in [("VERTICES", &verts), ("LINES", &lines)] {
                if cells.is_empty() {
                    continue;
                }
                let size: usize = cells.iter().map(|c| c.len() + 1).sum();
                writeln!(w, "{name} {} {size}", cells.len()).map_err(io)?;
                for c in cells.iter() {
                    writeln!(w, "{} {}", c.len(), c.join(" ")).map_err(io)?;
                }
            }
            if total > 0 {
                writeln!(w, "POINT_DATA {total}").map_err(io)?;
                writeln!(w, "SCALARS track_id int 1").map_err(io)?;
                writeln!(w, "LOOKUP_TABLE default").map_err(io)?;
                for track in tracks {
                    for _ in &track.points {
                        writeln!(w, "{}", track.id).map_err(io)?;
                    }
                }
                writeln!(w, "SCALARS degree int 1").map_err(io)?;
                writeln!(w, "LOOKUP_TABLE default").map_err(io)?;
                for track in tracks {
                    for p in &track.points {
                        writeln!(w, "{}", p.degree).map_err(io)?;
                    }
                }
            }
        }
    }
    w.flush().map_err(io)
}

/// Plain `key: value` lines.
pub fn write_stats<K: AsRef<str>, V: std::fmt::Display>(path: &Path, entries: &[(K, V)]) -> Result<()> {
    let mut w = create(path)?;
    for (k, v) in entries {
        writeln!(w, "{}: {}", k.as_ref(), v).map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Per-step critical point dump: `t,vertex,x,y,kind,index,persistence`.
pub fn write_critical_points(path: &Path, spec: &SliceSpec, points: &[CriticalPoint]) -> Result<()> {
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    writeln!(w, "t,vertex,x,y,kind,index,persistence").map_err(io)?;
    for c in points {
        let (x, y) = spec.vertex_position(c.vertex);
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            c.t, c.vertex, x, y, c.kind, c.index, c.persistence
        )
        .map_err(io)?;
    }
    w.flush().map_err(io)
}

pub fn write_magnitude_raw(path: &Path, magnitudes: &[f64]) -> Result<()> {
    fs::write(path, f32_bytes(magnitudes)).map_err(|e| Error::io(path, e))
}

pub fn write_i32_raw(path: &Path, labels: &[i32]) -> Result<()> {
    let bytes: Vec<u8> = labels.iter().flat_map(|x| x.to_le_bytes()).collect();
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Robustness report: `t,vertex,kind,index,robustness` (`inf` when never cancelled).
pub fn write_robustness(path: &Path, entries: &[RobustnessEntry]) -> Result<()> {
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    writeln!(w, "t,vertex,kind,index,robustness").map_err(io)?;
    for e in entries {
        writeln!(w, "{},{},{},{},{}", e.t, e.vertex, e.kind, e.index, e.robustness).map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Tracking graph as `nodes.csv` (`t,id,degree,cx,cy,cells`) and
/// `edges.csv` (`t,id_from,id_to,overlap`, `t` of the source node).
pub fn write_graph(nodes_path: &Path, edges_path: &Path, graph: &TrackGraph) -> Result<()> {
    let mut w = create(nodes_path)?;
    let io = |e| Error::io(nodes_path, e);
    writeln!(w, "t,id,degree,cx,cy,cells").map_err(io)?;
    for c in &graph.nodes {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            c.t,
            c.id,
            c.degree,
            c.centroid.0,
            c.centroid.1,
            c.cells.len()
        )
        .map_err(io)?;
    }
    w.flush().map_err(io)?;

    let mut w = create(edges_path)?;
    let io = |e| Error::io(edges_path, e);
    writeln!(w, "t,id_from,id_to,overlap").map_err(io)?;
    for e in &graph.edges {
        let (a, b) = (&graph.nodes[e.from], &graph.nodes[e.to]);
        writeln!(w, "{},{},{},{}", a.t, a.id, b.id, e.overlap).map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Baseline Jacobi edges in world coordinates, as CSV
/// (`ax,ay,at,bx,by,bt,lambda,kind,multiplicity`) or as VTK line segments.
pub fn write_jacobi(path: &Path, set: &JacobiEdgeSet, spec: &GridSpec, format: TrackFormat) -> Result<()> {
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    let slice = spec.slice_spec();
    let pos = |(v, t): StVertex| {
        let (x, y) = slice.vertex_position(v);
        (x, y, t as f64 * spec.time_spacing)
    };
    match format {
        TrackFormat::Csv => {
            writeln!(w, "ax,ay,at,bx,by,bt,lambda,kind,multiplicity").map_err(io)?;
            for e in &set.edges {
                let (a, b) = (pos(e.a), pos(e.b));
                writeln!(
                    w,
                    "{},{},{},{},{},{},{},{},{}",
                    a.0, a.1, a.2, b.0, b.1, b.2, e.lambda, e.kind, e.multiplicity
                )
                .map_err(io)?;
            }
        }
        TrackFormat::VtkLegacyPolydata => {
            let n = set.edges.len();
            writeln!(w, "# vtk DataFile Version 3.0").map_err(io)?;
            writeln!(w, "baseline jacobi set").map_err(io)?;
            writeln!(w, "ASCII").map_err(io)?;
            writeln!(w, "DATASET POLYDATA").map_err(io)?;
            writeln!(w, "POINTS {} double", 2 * n).map_err(io)?;
            for e in &set.edges {
                for p in [pos(e.a), pos(e.b)] {
                    writeln!(w, "{} {} {}", p.0, p.1, p.2).map_err(io)?;
                }
            }
            if n > 0 {
                writeln!(w, "LINES {n} {}", 3 * n).map_err(io)?;
                for k in 0..n {
                    writeln!(w, "2 {} {}", 2 * k, 2 * k + 1).map_err(io)?;
                }
                writeln!(w, "CELL_DATA {n}").map_err(io)?;
                writeln!(w, "SCALARS lambda double 1").map_err(io)?;
                writeln!(w, "LOOKUP_TABLE default").map_err(io)?;
                for e in &set.edges {
                    writeln!(w, "{}", e.lambda).map_err(io)?;
                }
            }
        }
    }
    w.flush().map_err(io)
}

/// Analytic ground truth: `gaussian,t,x,y`.
pub fn write_ground_truth(path: &Path, tracks: &[Vec<(f64, f64, f64)>]) -> Result<()> {
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    writeln!(w, "gaussian,t,x,y").map_err(io)?;
    for (k, line) in tracks.iter().enumerate() {
        for &(x, y, t) in line {
            writeln!(w, "{k},{t},{x},{y}").map_err(io)?;
        }
    }
    w.flush().map_err(io)
}
