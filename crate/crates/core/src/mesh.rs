//! Implicit simplicial meshes over the regular grid.
//!
//! The spatial grid is triangulated by splitting every unit quad along the
//! diagonal from `(i, j)` to `(i + 1, j + 1)`. Stacking consecutive time
//! steps and splitting every prism into three tetrahedra with the
//! lowest-index-vertex rule yields the Kuhn (Freudenthal) triangulation of the
//! space-time box, whose edges have offsets in `{0, 1}^3 \ {0}`.
//!
//! All comparisons between vertex values go through [`sos_less`]: values are
//! compared first and ties are broken by vertex index, which turns every grid
//! into one with pairwise distinct values.

use std::cmp::Ordering;

/// Neighbor offsets of a vertex, in counter-clockwise order around it.
///
/// Consecutive entries (cyclically) span a triangle with the center vertex.
pub const LINK_2D: [(i32, i32); 6] = [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)];

/// Lexicographic `(value, index)` comparison shared by every module.
#[inline]
pub fn sos_cmp(values: &[f64], a: usize, b: usize) -> Ordering {
    values[a].total_cmp(&values[b]).then(a.cmp(&b))
}

#[inline]
pub fn sos_less(values: &[f64], a: usize, b: usize) -> bool {
    sos_cmp(values, a, b) == Ordering::Less
}

/// Vertex permutation sorted ascending by the shared total order.
pub fn sorted_vertices(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_unstable_by(|&a, &b| sos_cmp(values, a, b));
    order
}

/// The Freudenthal triangulation of a `width x height` vertex grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Triangulation2D {
    pub width: usize,
    pub height: usize,
}

impl Triangulation2D {
    pub fn new(width: usize, height: usize) -> Self {
        Self { width, height }
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.width * self.height
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.width + i
    }

    #[inline]
    pub fn coords(&self, v: usize) -> (usize, usize) {
        (v % self.width, v / self.width)
    }

    #[inline]
    pub fn offset(&self, v: usize, di: i32, dj: i32) -> Option<usize> {
        let (i, j) = self.coords(v);
        let ni = i as i64 + di as i64;
        let nj = j as i64 + dj as i64;
        if ni < 0 || nj < 0 || ni >= self.width as i64 || nj >= self.height as i64 {
            None
        } else {
            Some(nj as usize * self.width + ni as usize)
        }
    }

    /// The six link positions of `v` in cyclic order; `None` outside the grid.
    pub fn link(&self, v: usize) -> [Option<usize>; 6] {
        LINK_2D.map(|(di, dj)| self.offset(v, di, dj))
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        LINK_2D.iter().filter_map(move |&(di, dj)| self.offset(v, di, dj))
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        let (i, j) = self.coords(v);
        i == 0 || j == 0 || i + 1 == self.width || j + 1 == self.height
    }

    #[inline]
    pub fn cells_x(&self) -> usize {
        self.width - 1
    }

    #[inline]
    pub fn cells_y(&self) -> usize {
        self.height - 1
    }

    #[inline]
    pub fn cell_count(&self) -> usize {
        self.cells_x() * self.cells_y()
    }

    /// Quad cells having `v` as a corner (one to four of them).
    pub fn incident_cells(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let (i, j) = self.coords(v);
        let cx = self.cells_x();
        let cy = self.cells_y();
        [(0i64, 0i64), (-1, 0), (0, -1), (-1, -1)]
            .into_iter()
            .filter_map(move |(di, dj)| {
                let ci = i as i64 + di;
                let cj = j as i64 + dj;
                (ci >= 0 && cj >= 0 && (ci as usize) < cx && (cj as usize) < cy).then(|| cj as usize * cx + ci as usize)
            })
    }

    /// Corner vertices of cell `c`.
    pub fn cell_corners(&self, c: usize) -> [usize; 4] {
        let cx = self.cells_x();
        let (ci, cj) = (c % cx, c / cx);
        let v = self.index(ci, cj);
        [v, v + 1, v + self.width, v + self.width + 1]
    }
}

/// Position of a link vertex relative to the reference value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinkSign {
    Lower,
    Upper,
    /// Outside the domain; breaks the link cycle into a path.
    Absent,
}

/// Classification of a simplex from its (possibly partial) link.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinkClass {
    Regular,
    Minimum,
    Maximum,
    /// Lower link with the given number (>= 2) of components.
    Saddle(u32),
}

impl LinkClass {
    /// Contribution to the Euler characteristic, `1 - chi(lower link)`.
    pub fn index(self) -> i32 {
        match self {
            LinkClass::Regular => 0,
            LinkClass::Minimum | LinkClass::Maximum => 1,
            LinkClass::Saddle(k) => 1 - k as i32,
        }
    }
}

/// Classify a simplex from the signs of its link vertices, given in cyclic order.
///
/// A closed link (no absent entries) is a cycle: empty lower link is a minimum,
/// full lower link a maximum, one arc regular and `k >= 2` arcs a saddle. A
/// partial link is a set of paths; it is classified by the Euler characteristic
/// of its lower part, so a full lower path is regular.
pub fn classify_link(signs: &[LinkSign]) -> LinkClass {
    let lower = signs.iter().filter(|&&s| s == LinkSign::Lower).count();
    let closed = !signs.contains(&LinkSign::Absent);
    if lower == 0 {
        return LinkClass::Minimum;
    }
    if closed && lower == signs.len() {
        return LinkClass::Maximum;
    }
    // Count maximal cyclic runs of Lower; at least one non-Lower entry exists.
    let n = signs.len();
    let runs = (0..n)
        .filter(|&k| signs[k] == LinkSign::Lower && signs[(k + n - 1) % n] != LinkSign::Lower)
        .count() as u32;
    match runs {
        1 => LinkClass::Regular,
        k => LinkClass::Saddle(k),
    }
}

/// Union-find with path compression and union by size.
#[derive(Clone, Debug)]
pub struct DisjointSets {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] as usize != root {
            root = self.parent[root] as usize;
        }
        while self.parent[x] as usize != root {
            let next = self.parent[x] as usize;
            self.parent[x] = root as u32;
            x = next;
        }
        root
    }

    /// Merge the sets of `a` and `b`; returns the new root.
    pub fn union(&mut self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return a;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a as u32;
        self.size[a] += self.size[b];
        a
    }
}

/// Offsets of the Kuhn triangulation of the integer lattice in 3D.
pub const KUHN_POSITIVE: [(i32, i32, i32); 7] = [
    (1, 0, 0),
    (0, 1, 0),
    (1, 1, 0),
    (0, 0, 1),
    (1, 0, 1),
    (0, 1, 1),
    (1, 1, 1),
];

fn is_kuhn_offset(o: (i32, i32, i32)) -> bool {
    let neg = (-o.0, -o.1, -o.2);
    KUHN_POSITIVE.contains(&o) || KUHN_POSITIVE.contains(&neg)
}

/// Link of the edge from `a` to `a + d` in the Kuhn triangulation, as offsets
/// relative to `a` listed in cyclic order.
pub fn kuhn_edge_link(d: (i32, i32, i32)) -> Vec<(i32, i32, i32)> {
    let mut candidates = Vec::new();
    for &p in &KUHN_POSITIVE {
        for o in [p, (-p.0, -p.1, -p.2)] {
            if is_kuhn_offset((o.0 - d.0, o.1 - d.1, o.2 - d.2)) {
                candidates.push(o);
            }
        }
    }
    let adjacent = |x: (i32, i32, i32), y: (i32, i32, i32)| is_kuhn_offset((x.0 - y.0, x.1 - y.1, x.2 - y.2));
    // Walk the cycle starting from the first candidate.
    let mut cycle = vec![candidates[0]];
    let mut used = vec![false; candidates.len()];
    used[0] = true;
    while cycle.len() < candidates.len() {
        let last = *cycle.last().unwrap();
        let next = (0..candidates.len())
            .find(|&k| !used[k] && adjacent(last, candidates[k]))
            .expect("edge link of the Kuhn triangulation is a cycle");
        used[next] = true;
        cycle.push(candidates[next]);
    }
    cycle
}

#[cfg(test)]
mod tests {
    use super::*;
    use LinkSign::{Absent as A, Lower as L, Upper as U};

    #[test]
    fn interior_link_is_six_cycle_of_triangles() {
        let tri = Triangulation2D::new(5, 5);
        let v = tri.index(2, 2);
        let link = tri.link(v);
        assert!(link.iter().all(Option::is_some));
        // consecutive link vertices are adjacent to each other
        for k in 0..6 {
            let a = link[k].unwrap();
            let b = link[(k + 1) % 6].unwrap();
            assert!(tri.neighbors(a).any(|x| x == b));
        }
    }

    #[test]
    fn boundary_links_are_paths() {
        let tri = Triangulation2D::new(4, 3);
        for v in 0..tri.vertex_count() {
            let link = tri.link(v);
            let absent = link.iter().filter(|x| x.is_none()).count();
            assert_eq!(absent > 0, tri.is_boundary(v));
            // present entries form one cyclic run
            let runs = (0..6)
                .filter(|&k| link[k].is_some() && link[(k + 5) % 6].is_none())
                .count();
            if absent > 0 {
                assert_eq!(runs, 1, "vertex {v}");
            }
        }
    }

    #[test]
    fn incident_cells_and_corners_agree() {
        let tri = Triangulation2D::new(4, 3);
        for c in 0..tri.cell_count() {
            for v in tri.cell_corners(c) {
                assert!(tri.incident_cells(v).any(|x| x == c));
            }
        }
        assert_eq!(tri.incident_cells(0).count(), 1);
        assert_eq!(tri.incident_cells(tri.index(1, 1)).count(), 4);
    }

    #[test]
    fn link_classification_cases() {
        assert_eq!(classify_link(&[U; 6]), LinkClass::Minimum);
        assert_eq!(classify_link(&[L; 6]), LinkClass::Maximum);
        assert_eq!(classify_link(&[L, L, U, U, U, L]), LinkClass::Regular);
        assert_eq!(classify_link(&[L, U, L, U, U, U]), LinkClass::Saddle(2));
        assert_eq!(classify_link(&[L, U, L, U, L, U]), LinkClass::Saddle(3));
        // partial links
        assert_eq!(classify_link(&[L, L, L, L, A, A]), LinkClass::Regular);
        assert_eq!(classify_link(&[L, U, U, L, A, A]), LinkClass::Saddle(2));
        assert_eq!(classify_link(&[U, U, U, U, A, A]), LinkClass::Minimum);
        assert_eq!(classify_link(&[L, A, L, U, U, U]), LinkClass::Saddle(2));
    }

    #[test]
    fn kuhn_edge_links_are_cycles() {
        for d in KUHN_POSITIVE {
            let link = kuhn_edge_link(d);
            let n = link.len();
            assert!(n >= 4, "{d:?}");
            for k in 0..n {
                let (x, y) = (link[k], link[(k + 1) % n]);
                assert!(is_kuhn_offset((x.0 - y.0, x.1 - y.1, x.2 - y.2)));
            }
        }
        // temporal edge link mirrors the spatial vertex link
        let link = kuhn_edge_link((0, 0, 1));
        assert_eq!(link.len(), 6);
        for o in &link {
            assert!(o.2 == 0 || o.2 == 1);
        }
    }

    #[test]
    fn union_find_merges() {
        let mut ds = DisjointSets::new(5);
        ds.union(0, 1);
        ds.union(3, 4);
        assert_eq!(ds.find(0), ds.find(1));
        assert_ne!(ds.find(1), ds.find(3));
        ds.union(1, 4);
        assert_eq!(ds.find(0), ds.find(3));
    }
}
