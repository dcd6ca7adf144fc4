//! Critical vertices of PL scalar grids and persistence-driven removal of
//! low-persistence extrema.
//!
//! Interior vertices are classified from their 6-cycle link; boundary vertices
//! from their partial link by the Euler characteristic of the lower link, so
//! the indices of all criticals of a grid always sum to 1.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field_io::ScalarGrid;
use crate::mesh::{classify_link, sorted_vertices, sos_cmp, sos_less, DisjointSets, LinkClass, LinkSign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CriticalKind {
    Minimum,
    Saddle,
    Maximum,
}

impl fmt::Display for CriticalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CriticalKind::Minimum => "minimum",
            CriticalKind::Saddle => "saddle",
            CriticalKind::Maximum => "maximum",
        })
    }
}

/// Vertex classification. A saddle carries its number of lower-link components.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexClass {
    Regular,
    Minimum,
    Saddle(u32),
    Maximum,
}

impl VertexClass {
    /// Poincare index of the corresponding gradient zero (`1 - k` for a `k`-fold saddle).
    pub fn index(self) -> i32 {
        match self {
            VertexClass::Regular => 0,
            VertexClass::Minimum | VertexClass::Maximum => 1,
            VertexClass::Saddle(k) => 1 - k as i32,
        }
    }

    pub fn kind(self) -> Option<CriticalKind> {
        match self {
            VertexClass::Regular => None,
            VertexClass::Minimum => Some(CriticalKind::Minimum),
            VertexClass::Saddle(_) => Some(CriticalKind::Saddle),
            VertexClass::Maximum => Some(CriticalKind::Maximum),
        }
    }
}

impl From<LinkClass> for VertexClass {
    fn from(c: LinkClass) -> Self {
        match c {
            LinkClass::Regular => VertexClass::Regular,
            LinkClass::Minimum => VertexClass::Minimum,
            LinkClass::Maximum => VertexClass::Maximum,
            LinkClass::Saddle(k) => VertexClass::Saddle(k),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalPoint {
    pub vertex: usize,
    pub t: usize,
    pub kind: CriticalKind,
    /// +1 for extrema, `1 - k` for a saddle with `k` lower-link components.
    pub index: i32,
    pub value: f64,
    /// `f64::INFINITY` when the point is not paired.
    pub persistence: f64,
}

/// Classify vertex `v` under the shared `(value, index)` order.
pub fn classify_vertex(grid: &ScalarGrid, v: usize) -> VertexClass {
    let tri = grid.triangulation();
    let values = &grid.values;
    let signs = tri.link(v).map(|u| match u {
        None => LinkSign::Absent,
        Some(u) if sos_less(values, u, v) => LinkSign::Lower,
        Some(_) => LinkSign::Upper,
    });
    classify_link(&signs).into()
}

/// Every non-regular vertex of `grid`, in vertex order, with persistence attached.
pub fn critical_points(grid: &ScalarGrid, t: usize) -> Vec<CriticalPoint> {
    let n = grid.values.len();
    let mut persistence = vec![f64::INFINITY; n];
    for pair in persistence_pairs(grid) {
        persistence[pair.extremum] = pair.persistence;
        persistence[pair.saddle] = persistence[pair.saddle].min(pair.persistence);
    }
    (0..n)
        .filter_map(|v| {
            let class = classify_vertex(grid, v);
            class.kind().map(|kind| CriticalPoint {
                vertex: v,
                t,
                kind,
                index: class.index(),
                value: grid.values[v],
                persistence: persistence[v],
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairSide {
    /// Minimum–saddle pair of the sublevel filtration.
    Minimum,
    /// Maximum–saddle pair of the superlevel filtration.
    Maximum,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PersistencePair {
    pub extremum: usize,
    pub saddle: usize,
    pub persistence: f64,
    pub side: PairSide,
}

/// Extremum–saddle pairs from the join tree (minima) and split tree (maxima)
/// of the grid; the global minimum and maximum stay unpaired.
pub fn persistence_pairs(grid: &ScalarGrid) -> Vec<PersistencePair> {
    let order = sorted_vertices(&grid.values);
    let mut pairs = sweep_pairs(grid, order.iter().copied(), PairSide::Minimum);
    pairs.extend(sweep_pairs(grid, order.iter().rev().copied(), PairSide::Maximum));
    pairs
}

/// Elder-rule union-find sweep over vertices in the given order.
fn sweep_pairs(grid: &ScalarGrid, order: impl Iterator<Item = usize>, side: PairSide) -> Vec<PersistencePair> {
    let tri = grid.triangulation();
    let values = &grid.values;
    let n = values.len();
    let mut sets = DisjointSets::new(n);
    let mut seen = vec![false; n];
    // birth vertex of the component rooted at each representative
    let mut birth = vec![usize::MAX; n];
    let mut pairs = Vec::new();
    let mut roots: Vec<usize> = Vec::with_capacity(6);
    // in sweep order, earlier == older
    let older = |a: usize, b: usize| match side {
        PairSide::Minimum => sos_less(values, a, b),
        PairSide::Maximum => sos_less(values, b, a),
    };
    for v in order {
        seen[v] = true;
        roots.clear();
        for u in tri.neighbors(v) {
            if seen[u] {
                let r = sets.find(u);
                if !roots.contains(&r) {
                    roots.push(r);
                }
            }
        }
        if roots.is_empty() {
            birth[v] = v;
            continue;
        }
        let eldest = *roots
            .iter()
            .min_by(|&&a, &&b| {
                if older(birth[a], birth[b]) {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            })
            .unwrap();
        let eldest_birth = birth[eldest];
        for &r in &roots {
            if r != eldest {
                let e = birth[r];
                pairs.push(PersistencePair {
                    extremum: e,
                    saddle: v,
                    persistence: (values[v] - values[e]).abs(),
                    side,
                });
            }
        }
        let mut root = sets.union(v, eldest);
        for &r in &roots {
            root = sets.union(root, r);
        }
        birth[root] = eldest_birth;
    }
    pairs
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ThresholdMode {
    Absolute,
    /// Fraction of the value range of the data.
    #[default]
    FractionOfRange,
}

impl std::str::FromStr for ThresholdMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "absolute" => Ok(ThresholdMode::Absolute),
            "fraction" | "fraction-of-range" => Ok(ThresholdMode::FractionOfRange),
            other => Err(Error::Config(format!("unknown threshold mode `{other}`"))),
        }
    }
}

const MAX_SIMPLIFICATION_ROUNDS: usize = 64;

/// Remove every extremum–saddle pair with persistence below `eps_p`.
///
/// Minima and maxima are removed by flooding the field from the extrema that
/// are kept, which raises (lowers) every cancelled basin to the level of its
/// saddle. The two sides alternate until no pair below the threshold remains.
pub fn simplify_field(grid: &ScalarGrid, eps_p: f64, mode: ThresholdMode) -> Result<ScalarGrid> {
    if eps_p.is_nan() || eps_p < 0.0 {
        return Err(Error::Config(format!(
            "persistence threshold must be >= 0, got {eps_p}"
        )));
    }
    let eps = match mode {
        ThresholdMode::Absolute => eps_p,
        ThresholdMode::FractionOfRange => {
            let (lo, hi) = grid.range();
            eps_p * (hi - lo)
        }
    };
    Ok(simplify_absolute(grid, eps))
}

fn simplify_absolute(grid: &ScalarGrid, eps: f64) -> ScalarGrid {
    let mut out = grid.clone();
    if eps <= 0.0 {
        return out;
    }
    for _ in 0..MAX_SIMPLIFICATION_ROUNDS {
        let mut changed = false;
        for side in [PairSide::Minimum, PairSide::Maximum] {
            let order = sorted_vertices(&out.values);
            let pairs = match side {
                PairSide::Minimum => sweep_pairs(&out, order.iter().copied(), side),
                PairSide::Maximum => sweep_pairs(&out, order.iter().rev().copied(), side),
            };
            if pairs.iter().all(|p| p.persistence >= eps) {
                continue;
            }
            let removed: Vec<usize> = pairs
                .iter()
                .filter(|p| p.persistence < eps)
                .map(|p| p.extremum)
                .collect();
            // every extremum is either paired or the global one
            let global = match side {
                PairSide::Minimum => order[0],
                PairSide::Maximum => order[order.len() - 1],
            };
            let mut seeds: Vec<usize> = pairs
                .iter()
                .filter(|p| p.persistence >= eps)
                .map(|p| p.extremum)
                .collect();
            seeds.push(global);
            debug_assert!(!removed.contains(&global));
            out.values = flood(&out, &seeds, side);
            changed = true;
        }
        if !changed {
            break;
        }
    }
    out
}

#[derive(PartialEq)]
struct Key {
    value: f64,
    vertex: usize,
}

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value.total_cmp(&other.value).then(self.vertex.cmp(&other.vertex))
    }
}

/// Rebuild the field so that `seeds` are its only minima (or maxima).
///
/// Vertices are popped from a priority queue grown from the seeds. A popped
/// vertex keeps its value when that value already follows the previously
/// popped one in the total order, otherwise it is placed one ulp past it. The
/// popped sequence is therefore strictly monotone and every non-seed vertex has
/// an earlier-popped neighbor.
fn flood(grid: &ScalarGrid, seeds: &[usize], side: PairSide) -> Vec<f64> {
    let tri = grid.triangulation();
    let f = &grid.values;
    let mut out = f.clone();
    let mut done = vec![false; f.len()];
    let sign = match side {
        PairSide::Minimum => 1.0,
        PairSide::Maximum => -1.0,
    };
    // BinaryHeap is a max-heap; order keys so that the next vertex of the sweep is on top.
    let key = |v: usize| match side {
        PairSide::Minimum => std::cmp::Reverse(Key { value: f[v], vertex: v }),
        PairSide::Maximum => std::cmp::Reverse(Key {
            value: -f[v],
            vertex: usize::MAX - v,
        }),
    };
    let mut heap: BinaryHeap<_> = seeds.iter().map(|&v| key(v)).collect();
    let mut prev: Option<usize> = None;
    while let Some(std::cmp::Reverse(k)) = heap.pop() {
        let v = match side {
            PairSide::Minimum => k.vertex,
            PairSide::Maximum => usize::MAX - k.vertex,
        };
        if done[v] {
            continue;
        }
        done[v] = true;
        if let Some(p) = prev {
            let follows = match side {
                PairSide::Minimum => sos_cmp(&out, p, v) == Ordering::Less,
                PairSide::Maximum => sos_cmp(&out, v, p) == Ordering::Less,
            };
            if !follows {
                out[v] = if sign > 0.0 {
                    out[p].next_up()
                } else {
                    out[p].next_down()
                };
            }
        }
        prev = Some(v);
        for u in tri.neighbors(v) {
            if !done[u] {
                heap.push(key(u));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_with_center(center: f64, ring: [f64; 6]) -> (ScalarGrid, usize) {
        let mut g = ScalarGrid::from_fn(3, 3, |_, _| 50.0);
        let tri = g.triangulation();
        let v = tri.index(1, 1);
        g.values[v] = center;
        for (k, u) in tri.link(v).into_iter().enumerate() {
            g.values[u.unwrap()] = ring[k];
        }
        (g, v)
    }

    /// Count lower-link arcs of the explicit 6-cycle by brute force.
    fn brute_force_arcs(center: f64, ring: [f64; 6]) -> usize {
        let lower: Vec<bool> = ring.iter().map(|&x| x < center).collect();
        (0..6).filter(|&k| lower[k] && !lower[(k + 5) % 6]).count()
    }

    #[test]
    fn classify_min_max_saddle() {
        let (g, v) = grid_with_center(0.0, [1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(classify_vertex(&g, v), VertexClass::Minimum);
        let (g, v) = grid_with_center(9.0, [1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(classify_vertex(&g, v), VertexClass::Maximum);
        let ring = [1.0, 8.0, 2.0, 9.0, 10.0, 11.0];
        assert_eq!(brute_force_arcs(5.0, ring), 2);
        let (g, v) = grid_with_center(5.0, ring);
        assert_eq!(classify_vertex(&g, v), VertexClass::Saddle(2));
        assert_eq!(classify_vertex(&g, v).index(), -1);
        let ring = [1.0, 8.0, 2.0, 9.0, 3.0, 11.0];
        assert_eq!(brute_force_arcs(5.0, ring), 3);
        let (g, v) = grid_with_center(5.0, ring);
        assert_eq!(classify_vertex(&g, v), VertexClass::Saddle(3));
        assert_eq!(classify_vertex(&g, v).index(), -2);
    }

    #[test]
    fn constant_grid_breaks_ties_by_index() {
        let g = ScalarGrid::from_fn(3, 3, |_, _| 1.0);
        let cps = critical_points(&g, 0);
        // index order behaves like the linear function j*w + i: only the first
        // vertex is critical (a boundary minimum), the last vertex sits on the
        // boundary with a full lower path and is regular
        assert_eq!(cps.len(), 1);
        assert_eq!(cps[0].vertex, 0);
        assert_eq!(cps[0].kind, CriticalKind::Minimum);
        assert_eq!(cps[0].persistence, f64::INFINITY);
    }

    fn gaussian(x: f64, y: f64, cx: f64, cy: f64, s: f64) -> f64 {
        (-((x - cx).powi(2) + (y - cy).powi(2)) / (2.0 * s * s)).exp()
    }

    /// Bowl-shaped background so that the boundary carries no critical points.
    fn bowl(x: f64, y: f64, c: f64) -> f64 {
        0.001 * ((x - c).powi(2) + (y - c).powi(2))
    }

    #[test]
    fn single_bump_has_one_interior_maximum() {
        let g = ScalarGrid::from_fn(21, 21, |i, j| {
            let (x, y) = (i as f64, j as f64);
            gaussian(x, y, 10.3, 9.8, 3.0) + bowl(x, y, 10.0)
        });
        let cps = critical_points(&g, 0);
        let maxima: Vec<_> = cps.iter().filter(|c| c.kind == CriticalKind::Maximum).collect();
        assert_eq!(maxima.len(), 1);
        assert!(!g.triangulation().is_boundary(maxima[0].vertex));
    }

    #[test]
    fn two_bumps_have_two_maxima_and_a_saddle() {
        let g = ScalarGrid::from_fn(31, 21, |i, j| {
            let (x, y) = (i as f64, j as f64);
            gaussian(x, y, 9.0, 10.0, 2.5) + 0.8 * gaussian(x, y, 21.0, 10.0, 2.5)
        });
        let cps = critical_points(&g, 0);
        let interior = |k: CriticalKind| {
            cps.iter()
                .filter(|c| c.kind == k && !g.triangulation().is_boundary(c.vertex))
                .count()
        };
        assert_eq!(interior(CriticalKind::Maximum), 2);
        assert_eq!(interior(CriticalKind::Saddle), 1);
        // Euler characteristic of the disk
        let total: i32 = cps.iter().map(|c| c.index).sum();
        assert_eq!(total, 1);
    }

    /// 1D-like profile along x: bumps of heights 1.0 and 0.4 joined at 0.1.
    fn two_bump_profile() -> ScalarGrid {
        let profile = [0.0, 0.5, 1.0, 0.5, 0.1, 0.25, 0.4, 0.2, 0.0];
        // gentle decrease away from the middle row keeps the profile's structure
        ScalarGrid::from_fn(9, 5, |i, j| profile[i] - 0.001 * (j as f64 - 2.0).abs())
    }

    #[test]
    fn two_bump_persistence_pair() {
        let g = two_bump_profile();
        let pairs = persistence_pairs(&g);
        let max_pairs: Vec<_> = pairs
            .iter()
            .filter(|p| p.side == PairSide::Maximum && p.persistence > 1e-6)
            .collect();
        assert_eq!(max_pairs.len(), 1, "{max_pairs:?}");
        let p = max_pairs[0];
        let tri = g.triangulation();
        assert_eq!(p.extremum, tri.index(6, 2));
        assert_eq!(p.saddle, tri.index(4, 2));
        assert!((p.persistence - 0.3).abs() < 1e-12);
    }

    #[test]
    fn two_bump_simplification_keeps_one_maximum() {
        let g = two_bump_profile();
        let s = simplify_field(&g, 0.5, ThresholdMode::Absolute).unwrap();
        let maxima = critical_points(&s, 0)
            .into_iter()
            .filter(|c| c.kind == CriticalKind::Maximum)
            .count();
        assert_eq!(maxima, 1);
        assert!(persistence_pairs(&s).iter().all(|p| p.persistence >= 0.5));
        let change = g
            .values
            .iter()
            .zip(&s.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(change <= 0.5);
        // the tall bump is untouched
        assert_eq!(s.values[g.triangulation().index(2, 2)], 1.0);
    }

    #[test]
    fn ramp_and_bump_have_no_finite_pairs() {
        let ramp = ScalarGrid::from_fn(8, 6, |i, j| i as f64 + 0.1 * j as f64);
        assert!(persistence_pairs(&ramp).is_empty());
        // a tilted bump: one maximum, and the tilt leaves a single boundary minimum
        let bump = ScalarGrid::from_fn(15, 15, |i, j| {
            let (x, y) = (i as f64, j as f64);
            gaussian(x, y, 4.0, 4.0, 4.0) - 0.1 * (x + 0.8 * y)
        });
        let maxima = critical_points(&bump, 0)
            .iter()
            .filter(|c| c.kind == CriticalKind::Maximum)
            .count();
        assert_eq!(maxima, 1);
        assert!(persistence_pairs(&bump).is_empty());
    }

    #[test]
    fn zero_threshold_is_identity() {
        let g = two_bump_profile();
        assert_eq!(simplify_field(&g, 0.0, ThresholdMode::Absolute).unwrap(), g);
        assert!(simplify_field(&g, -1.0, ThresholdMode::Absolute).is_err());
    }

    #[test]
    fn flat_plateau_criticals_are_removed() {
        // descending ramp with a flat plateau in the middle; the index order on
        // the plateau runs against the slope and creates spurious extrema
        let g = ScalarGrid::from_fn(16, 16, |i, j| {
            if (4..12).contains(&i) && (4..12).contains(&j) {
                -16.0
            } else {
                -((i + j) as f64)
            }
        });
        assert!(persistence_pairs(&g).iter().any(|p| p.persistence < 1e-9));
        let s = simplify_field(&g, 1e-6, ThresholdMode::Absolute).unwrap();
        assert!(persistence_pairs(&s).iter().all(|p| p.persistence >= 1e-6));
        let interior_plateau_criticals = critical_points(&s, 0)
            .into_iter()
            .filter(|c| {
                let (i, j) = s.triangulation().coords(c.vertex);
                (5..11).contains(&i) && (5..11).contains(&j)
            })
            .count();
        assert_eq!(interior_plateau_criticals, 0);
    }

    #[test]
    fn fraction_mode_scales_by_range() {
        let g = two_bump_profile();
        // range is ~1.002, so 0.2 of it is below the 0.3 pair
        let s = simplify_field(&g, 0.2, ThresholdMode::FractionOfRange).unwrap();
        assert!(persistence_pairs(&s).iter().any(|p| (p.persistence - 0.3).abs() < 1e-9));
        let s = simplify_field(&g, 0.4, ThresholdMode::FractionOfRange).unwrap();
        assert!(persistence_pairs(&s).iter().all(|p| p.persistence >= 0.4));
    }
}
