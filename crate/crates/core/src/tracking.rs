//! Tracking graph over δ-sublevel components and its decomposition into tracks.

use crate::sublevel::{ComponentSet, SublevelComponent};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphEdge {
    /// Node indices into [`TrackGraph::nodes`]; `to` lives one step after `from`.
    pub from: usize,
    pub to: usize,
    pub overlap: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrackGraph {
    /// Components of all steps in `(t, id)` order.
    pub nodes: Vec<SublevelComponent>,
    /// `nodes[step_start[t]..step_start[t + 1]]` are the components of step `t`.
    pub step_start: Vec<usize>,
    pub edges: Vec<GraphEdge>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrackPoint {
    pub t: usize,
    /// Component id within step `t`.
    pub component: usize,
    pub x: f64,
    pub y: f64,
    pub degree: i32,
    pub cells: usize,
}

impl TrackPoint {
    pub fn of(c: &SublevelComponent) -> Self {
        Self {
            t: c.t,
            component: c.id,
            x: c.centroid.0,
            y: c.centroid.1,
            degree: c.degree,
            cells: c.cells.len(),
        }
    }

    pub fn distance(&self, other: &TrackPoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Track {
    pub id: usize,
    /// Strictly increasing in `t`.
    pub points: Vec<TrackPoint>,
}

impl Track {
    pub fn birth(&self) -> usize {
        self.points[0].t
    }

    pub fn death(&self) -> usize {
        self.points[self.points.len() - 1].t
    }

    pub fn length(&self) -> usize {
        self.death() - self.birth()
    }

    pub fn first(&self) -> &TrackPoint {
        &self.points[0]
    }

    pub fn last(&self) -> &TrackPoint {
        &self.points[self.points.len() - 1]
    }
}

/// Shared cell count of two components; both cell lists are sorted.
pub fn overlap(c1: &SublevelComponent, c2: &SublevelComponent) -> usize {
    let (a, b) = (&c1.cells, &c2.cells);
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Forward edges from step `t` to `t + 1`: each component links to the successor
/// with the largest overlap, ties broken by the smaller id.
fn step_edges(cur: &[SublevelComponent], next: &[SublevelComponent], cell_count: usize) -> Vec<(usize, usize, usize)> {
    const NONE: u32 = u32::MAX;
    let mut label = vec![NONE; cell_count];
    for (k, c) in next.iter().enumerate() {
        for &cell in &c.cells {
            label[cell as usize] = k as u32;
        }
    }
    let mut counts = vec![0usize; next.len()];
    let mut out = Vec::new();
    for (k, c) in cur.iter().enumerate() {
        counts.iter_mut().for_each(|x| *x = 0);
        for &cell in &c.cells {
            let l = label[cell as usize];
            if l != NONE {
                counts[l as usize] += 1;
            }
        }
        let best = (0..next.len())
            .filter(|&m| counts[m] > 0)
            .max_by(|&x, &y| counts[x].cmp(&counts[y]).then(next[y].id.cmp(&next[x].id)));
        if let Some(m) = best {
            out.push((k, m, counts[m]));
        }
    }
    out
}

/// Overlap graph over per-step component sets (degree-0 components already dropped).
pub fn track_graph(cs: &[ComponentSet]) -> TrackGraph {
    let mut step_start = Vec::with_capacity(cs.len() + 1);
    let mut nodes = Vec::new();
    for set in cs {
        step_start.push(nodes.len());
        let mut comps = set.components.clone();
        comps.sort_by_key(|c| c.id);
        nodes.extend(comps);
    }
    step_start.push(nodes.len());
    let cell_count = cs.first().map_or(0, |s| (s.spec.width - 1) * (s.spec.height - 1));
    let steps = cs.len().saturating_sub(1);
    let per_step = crate::par_map(steps, |t| {
        let cur = &nodes[step_start[t]..step_start[t + 1]];
        let next = &nodes[step_start[t + 1]..step_start[t + 2]];
        step_edges(cur, next, cell_count)
    });
    let edges = per_step
        .into_iter()
        .enumerate()
        .flat_map(|(t, e)| {
            let (s0, s1) = (step_start[t], step_start[t + 1]);
            e.into_iter().map(move |(k, m, overlap)| GraphEdge {
                from: s0 + k,
                to: s1 + m,
                overlap,
            })
        })
        .collect();
    TrackGraph {
        nodes,
        step_start,
        edges,
    }
}

impl TrackGraph {
    pub fn step_nodes(&self, t: usize) -> &[SublevelComponent] {
        &self.nodes[self.step_start[t]..self.step_start[t + 1]]
    }
}

/// Decompose the graph into tracks.
///
/// A node with several predecessors continues the track of the predecessor
/// with the largest overlap (ties: smaller node); the other predecessor tracks
/// end at the merge node. Ids follow `(birth, first node)`.
pub fn extract_tracks(g: &TrackGraph) -> Vec<Track> {
    let mut preds: Vec<Vec<(usize, usize)>> = vec![Vec::new(); g.nodes.len()];
    for e in &g.edges {
        preds[e.to].push((e.from, e.overlap));
    }
    let mut track_of = vec![usize::MAX; g.nodes.len()];
    let mut tracks: Vec<Track> = Vec::new();
    // node order is (t, id), so tracks are created in (birth, first node) order
    for (n, node) in g.nodes.iter().enumerate() {
        let point = TrackPoint::of(node);
        let main = preds[n]
            .iter()
            .max_by(|x, y| x.1.cmp(&y.1).then(y.0.cmp(&x.0)))
            .map(|&(p, _)| p);
        match main {
            None => {
                track_of[n] = tracks.len();
                tracks.push(Track {
                    id: tracks.len(),
                    points: vec![point],
                });
            }
            Some(p) => {
                track_of[n] = track_of[p];
                tracks[track_of[p]].points.push(point);
                for &(q, _) in &preds[n] {
                    if q != p {
                        tracks[track_of[q]].points.push(point);
                    }
                }
            }
        }
    }
    tracks
}
