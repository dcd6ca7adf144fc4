//! Baseline PL Jacobi set of `(f_t, time)` on the space-time Kuhn mesh.
//!
//! An edge `ab` is critical with respect to `h = f + lambda * t` at the value
//! `lambda_e` that makes `h(a) = h(b)`. Its link is then split into vertices
//! below and above `h(a)`; the lower part decides the edge type exactly like a
//! vertex link in 2D.
//!
//! Comparisons are symbolic: a link vertex in the earlier slice is compared to
//! `a`, one in the later slice to `b`, each by the shared `(value, index)`
//! order. That is the perturbation `f + eps * index`, which never produces a
//! flat spatial edge, so spatial edges are never critical.

use crate::field_io::{GridSpec, TimeVaryingField};
use crate::mesh::{classify_link, kuhn_edge_link, LinkClass, LinkSign, KUHN_POSITIVE};

/// Flattening value of `h_lambda` along an edge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Lambda {
    Finite(f64),
    Vertical,
}

pub fn lambda_e(f_a: f64, f_b: f64, g_a: f64, g_b: f64) -> Lambda {
    if g_a == g_b {
        Lambda::Vertical
    } else {
        Lambda::Finite((f_b - f_a) / (g_a - g_b))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum JacobiKind {
    Minimum,
    Maximum,
    Saddle,
}

impl std::fmt::Display for JacobiKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            JacobiKind::Minimum => "minimum-edge",
            JacobiKind::Maximum => "maximum-edge",
            JacobiKind::Saddle => "saddle-edge",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeClass {
    Regular,
    /// Kind and multiplicity: 1 for extremum edges, `k - 1` for a saddle
    /// edge whose lower link has `k` arcs.
    Critical(JacobiKind, u32),
}

/// A space-time vertex: spatial grid index and time step.
pub type StVertex = (usize, usize);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JacobiEdge {
    pub a: StVertex,
    pub b: StVertex,
    pub lambda: f64,
    pub kind: JacobiKind,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct JacobiEdgeSet {
    pub edges: Vec<JacobiEdge>,
}

/// Implicit Kuhn triangulation of the `width x height x timesteps` box.
#[derive(Clone, Debug)]
pub struct SpaceTimeMesh {
    pub spec: GridSpec,
    /// Cyclic edge links for the positive offsets, indexed like [`KUHN_POSITIVE`].
    links: Vec<Vec<(i32, i32, i32)>>,
}

impl SpaceTimeMesh {
    pub fn new(spec: GridSpec) -> Self {
        Self {
            spec,
            links: KUHN_POSITIVE.iter().map(|&d| kuhn_edge_link(d)).collect(),
        }
    }

    fn shift(&self, (v, t): StVertex, (di, dj, dt): (i32, i32, i32)) -> Option<StVertex> {
        let w = self.spec.width as i64;
        let (i, j) = (
            (v % self.spec.width) as i64 + di as i64,
            (v / self.spec.width) as i64 + dj as i64,
        );
        let s = t as i64 + dt as i64;
        (i >= 0 && j >= 0 && i < w && j < self.spec.height as i64 && s >= 0 && s < self.spec.timesteps as i64)
            .then(|| ((j * w + i) as usize, s as usize))
    }

    /// Edges leaving `a` in positive direction, as `(offset index, b)`.
    pub fn edges_from(&self, a: StVertex) -> impl Iterator<Item = (usize, StVertex)> + '_ {
        KUHN_POSITIVE
            .iter()
            .enumerate()
            .filter_map(move |(k, &d)| self.shift(a, d).map(|b| (k, b)))
    }

    /// Link vertices of the edge from `a` along offset `k`, `None` outside the box.
    pub fn edge_link(&self, a: StVertex, k: usize) -> impl Iterator<Item = Option<StVertex>> + '_ {
        self.links[k].iter().map(move |&o| self.shift(a, o))
    }
}

/// Classify the edge from `a` along the positive offset `k`.
pub fn classify_edge(mesh: &SpaceTimeMesh, a: StVertex, k: usize, field: &TimeVaryingField) -> EdgeClass {
    let d = KUHN_POSITIVE[k];
    if d.2 == 0 {
        return EdgeClass::Regular;
    }
    let Some(b) = mesh.shift(a, d) else {
        return EdgeClass::Regular;
    };
    let values = field.values();
    let n = mesh.spec.width * mesh.spec.height;
    let f = |(v, t): StVertex| values[t * n + v];
    // (value, spatial index) relative to the endpoint in the same slice
    let below = |w: StVertex, r: StVertex| f(w).total_cmp(&f(r)).then(w.0.cmp(&r.0)).is_lt();
    let mut signs = [LinkSign::Absent; 8];
    let mut len = 0;
    for w in mesh.edge_link(a, k) {
        signs[len] = match w {
            None => LinkSign::Absent,
            Some(w) => {
                let r = if w.1 == a.1 { a } else { b };
                if below(w, r) {
                    LinkSign::Lower
                } else {
                    LinkSign::Upper
                }
            }
        };
        len += 1;
    }
    match classify_link(&signs[..len]) {
        LinkClass::Regular => EdgeClass::Regular,
        LinkClass::Minimum => EdgeClass::Critical(JacobiKind::Minimum, 1),
        LinkClass::Maximum => EdgeClass::Critical(JacobiKind::Maximum, 1),
        LinkClass::Saddle(k) => EdgeClass::Critical(JacobiKind::Saddle, k - 1),
    }
}

fn step_edges(mesh: &SpaceTimeMesh, field: &TimeVaryingField, t: usize) -> Vec<JacobiEdge> {
    let n = mesh.spec.width * mesh.spec.height;
    let values = field.values();
    let mut out = Vec::new();
    for v in 0..n {
        let a = (v, t);
        for (k, b) in mesh.edges_from(a) {
            if KUHN_POSITIVE[k].2 == 0 {
                continue;
            }
            if let EdgeClass::Critical(kind, multiplicity) = classify_edge(mesh, a, k, field) {
                let (fa, fb) = (values[t * n + v], values[b.1 * n + b.0]);
                let lambda = match lambda_e(fa, fb, t as f64, b.1 as f64) {
                    Lambda::Finite(l) => l,
                    Lambda::Vertical => unreachable!("temporal edges span two slices"),
                };
                out.push(JacobiEdge {
                    a,
                    b,
                    lambda,
                    kind,
                    multiplicity,
                });
            }
        }
    }
    out
}

/// All critical edges of the space-time mesh, ordered by `(t, a, offset)`.
pub fn jacobi_set(field: &TimeVaryingField) -> JacobiEdgeSet {
    let mesh = SpaceTimeMesh::new(*field.spec());
    let steps = field.timesteps() - 1;
    let per_step = crate::par_map(steps, |t| step_edges(&mesh, field, t));
    JacobiEdgeSet {
        edges: per_step.into_iter().flatten().collect(),
    }
}

impl JacobiEdgeSet {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Incident edges per space-time vertex (time-major), counted with multiplicity.
    pub fn vertex_degrees(&self, spec: &GridSpec) -> Vec<u32> {
        let n = spec.width * spec.height;
        let mut deg = vec![0u32; n * spec.timesteps];
        for e in &self.edges {
            deg[e.a.1 * n + e.a.0] += e.multiplicity;
            deg[e.b.1 * n + e.b.0] += e.multiplicity;
        }
        deg
    }

    /// Interior space-time vertices whose Jacobi degree is odd.
    pub fn odd_interior_vertices(&self, spec: &GridSpec) -> Vec<StVertex> {
        let n = spec.width * spec.height;
        let deg = self.vertex_degrees(spec);
        let tri = spec.slice_spec().triangulation();
        (1..spec.timesteps.saturating_sub(1))
            .flat_map(|t| (0..n).map(move |v| (v, t)))
            .filter(|&(v, t)| !tri.is_boundary(v) && deg[t * n + v] % 2 == 1)
            .collect()
    }

    /// Edges from vertex set `from` at `t` to vertex set `to` at `t + 1`.
    pub fn count_between(&self, t: usize, from: &[bool], to: &[bool]) -> usize {
        self.edges
            .iter()
            .filter(|e| e.a.1 == t && from[e.a.0] && to[e.b.0])
            .count()
    }
}
