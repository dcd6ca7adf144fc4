//! Conservative δ-sublevel sets of the gradient magnitude and their components.
//!
//! A quad cell belongs to the sublevel set when any of its corners has
//! magnitude `<= delta`. Components are labeled by flood fill over shared cell
//! edges (4-connectivity).

use std::collections::VecDeque;

use crate::field_io::SliceSpec;
use crate::gradient::MagnitudeGrid;
use crate::pl_critical::CriticalPoint;

const UNLABELED: u32 = u32::MAX;

/// Cells of the conservative sublevel set, as a mask over the cell grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellSet {
    pub cells_x: usize,
    pub cells_y: usize,
    pub mask: Vec<bool>,
}

impl CellSet {
    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.contains(&true)
    }

    pub fn contains(&self, c: usize) -> bool {
        self.mask[c]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SublevelComponent {
    pub id: usize,
    pub t: usize,
    /// Sorted cell indices.
    pub cells: Vec<u32>,
    pub degree: i32,
    /// Mean of the cell centers, in world units.
    pub centroid: (f64, f64),
    pub criticals: Vec<CriticalPoint>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComponentSet {
    pub t: usize,
    pub delta: f64,
    pub spec: SliceSpec,
    pub components: Vec<SublevelComponent>,
}

impl ComponentSet {
    /// Per-cell component id (`-1` outside every component).
    pub fn label_grid(&self) -> Vec<i32> {
        let mut labels = vec![-1; (self.spec.width - 1) * (self.spec.height - 1)];
        for c in &self.components {
            for &cell in &c.cells {
                labels[cell as usize] = c.id as i32;
            }
        }
        labels
    }

    pub fn total_degree(&self) -> i32 {
        self.components.iter().map(|c| c.degree).sum()
    }
}

pub fn sublevel_cells(mag: &MagnitudeGrid, delta: f64) -> CellSet {
    let tri = mag.spec.triangulation();
    let mut mask = vec![false; tri.cell_count()];
    for (v, &m) in mag.magnitudes.iter().enumerate() {
        if m <= delta {
            for c in tri.incident_cells(v) {
                mask[c] = true;
            }
        }
    }
    CellSet {
        cells_x: tri.cells_x(),
        cells_y: tri.cells_y(),
        mask,
    }
}

/// Label the 4-connected components of `cells` and attach critical points.
///
/// Component ids increase with the smallest cell index of the component.
pub fn components(
    cells: &CellSet,
    mag: &MagnitudeGrid,
    criticals: &[CriticalPoint],
    delta: f64,
    t: usize,
) -> ComponentSet {
    let (cx, cy) = (cells.cells_x, cells.cells_y);
    let mut labels = vec![UNLABELED; cx * cy];
    let mut comps: Vec<Vec<u32>> = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..cx * cy {
        if !cells.mask[start] || labels[start] != UNLABELED {
            continue;
        }
        let id = comps.len() as u32;
        let mut members = Vec::new();
        labels[start] = id;
        queue.push_back(start);
        while let Some(c) = queue.pop_front() {
            members.push(c as u32);
            let (ci, cj) = (c % cx, c / cx);
            let mut visit = |n: usize| {
                if cells.mask[n] && labels[n] == UNLABELED {
                    labels[n] = id;
                    queue.push_back(n);
                }
            };
            if ci > 0 {
                visit(c - 1);
            }
            if ci + 1 < cx {
                visit(c + 1);
            }
            if cj > 0 {
                visit(c - cx);
            }
            if cj + 1 < cy {
                visit(c + cx);
            }
        }
        members.sort_unstable();
        comps.push(members);
    }

    let spec = mag.spec;
    let tri = spec.triangulation();
    let mut attached: Vec<Vec<CriticalPoint>> = vec![Vec::new(); comps.len()];
    for c in criticals {
        let label = tri
            .incident_cells(c.vertex)
            .map(|cell| labels[cell])
            .find(|&l| l != UNLABELED);
        if let Some(l) = label {
            attached[l as usize].push(*c);
        }
    }

    let components = comps
        .into_iter()
        .zip(attached)
        .enumerate()
        .map(|(id, (cells, criticals))| {
            let (sx, sy) = cells.iter().fold((0.0, 0.0), |(sx, sy), &c| {
                let (x, y) = spec.cell_center(c as usize);
                (sx + x, sy + y)
            });
            let k = cells.len() as f64;
            SublevelComponent {
                id,
                t,
                degree: criticals.iter().map(|c| c.index).sum(),
                centroid: (sx / k, sy / k),
                cells,
                criticals,
            }
        })
        .collect();

    ComponentSet {
        t,
        delta,
        spec,
        components,
    }
}

/// Remove components whose enclosed indices cancel.
pub fn drop_degree_zero(cs: ComponentSet) -> ComponentSet {
    ComponentSet {
        components: cs.components.into_iter().filter(|c| c.degree != 0).collect(),
        ..cs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pl_critical::CriticalKind;

    fn mag_grid(w: usize, h: usize, f: impl Fn(usize, usize) -> f64) -> MagnitudeGrid {
        let spec = SliceSpec {
            width: w,
            height: h,
            spacing: (1.0, 1.0),
            origin: (0.0, 0.0),
        };
        MagnitudeGrid {
            spec,
            magnitudes: (0..w * h).map(|v| f(v % w, v / w)).collect(),
        }
    }

    fn critical(vertex: usize, kind: CriticalKind) -> CriticalPoint {
        CriticalPoint {
            vertex,
            t: 0,
            kind,
            index: if kind == CriticalKind::Saddle { -1 } else { 1 },
            value: 0.0,
            persistence: f64::INFINITY,
        }
    }

    #[test]
    fn delta_zero_selects_cells_around_zeros() {
        let mut m = mag_grid(6, 6, |_, _| 1.0);
        m.magnitudes[2 * 6 + 2] = 0.0;
        let cells = sublevel_cells(&m, 0.0);
        assert_eq!(cells.len(), 4);
        assert_eq!(sublevel_cells(&m, 1.0).len(), 25);
    }

    #[test]
    fn isolated_low_vertex_gives_its_four_cells() {
        let mut m = mag_grid(5, 5, |_, _| 1.0);
        m.magnitudes[2 * 5 + 2] = 0.3;
        let cells = sublevel_cells(&m, 0.5);
        let expected: Vec<usize> = vec![5, 6, 9, 10];
        let got: Vec<usize> = (0..16).filter(|&c| cells.contains(c)).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn far_apart_criticals_form_separate_components() {
        let mut m = mag_grid(10, 10, |_, _| 1.0);
        let (a, b) = (2 * 10 + 2, 7 * 10 + 7);
        m.magnitudes[a] = 0.0;
        m.magnitudes[b] = 0.0;
        let crit = [critical(a, CriticalKind::Maximum), critical(b, CriticalKind::Saddle)];
        let cs = components(&sublevel_cells(&m, 0.1), &m, &crit, 0.1, 0);
        assert_eq!(cs.components.len(), 2);
        assert_eq!(cs.components[0].degree, 1);
        assert_eq!(cs.components[1].degree, -1);
        assert_eq!(cs.components[0].centroid, (2.0, 2.0));
    }

    #[test]
    fn max_and_saddle_cancel() {
        let mut m = mag_grid(8, 8, |_, _| 1.0);
        let (a, b) = (3 * 8 + 3, 3 * 8 + 4);
        m.magnitudes[a] = 0.0;
        m.magnitudes[b] = 0.0;
        let crit = [critical(a, CriticalKind::Maximum), critical(b, CriticalKind::Saddle)];
        let cs = components(&sublevel_cells(&m, 0.0), &m, &crit, 0.0, 0);
        assert_eq!(cs.components.len(), 1);
        assert_eq!(cs.components[0].degree, 0);
        assert!(drop_degree_zero(cs).components.is_empty());
    }

    #[test]
    fn blob_with_three_criticals_plus_separate_blob() {
        // a low valley containing a, b, c and a second isolated low vertex
        let mut m = mag_grid(12, 8, |i, j| {
            if (2..7).contains(&i) && (2..5).contains(&j) {
                0.05
            } else {
                1.0
            }
        });
        let (a, b, c, d) = (3 * 12 + 2, 3 * 12 + 4, 3 * 12 + 6, 5 * 12 + 10);
        for v in [a, b, c] {
            m.magnitudes[v] = 0.0;
        }
        m.magnitudes[d] = 0.02;
        let crit = [
            critical(a, CriticalKind::Maximum),
            critical(b, CriticalKind::Saddle),
            critical(c, CriticalKind::Maximum),
        ];
        let cs = components(&sublevel_cells(&m, 0.1), &m, &crit, 0.1, 0);
        assert_eq!(cs.components.len(), 2);
        assert_eq!(cs.components[0].criticals.len(), 3);
        assert_eq!(cs.components[0].degree, 1);
        assert_eq!(cs.components[1].degree, 0);
    }

    #[test]
    fn diagonal_touching_cells_stay_separate() {
        let mut m = mag_grid(6, 6, |_, _| 1.0);
        // cells (1,1) and (2,2) only share a corner when selected via
        // vertices (1,1) and (3,3) with incident cells clipped by value
        m.magnitudes[6 + 1] = 0.0;
        m.magnitudes[3 * 6 + 3] = 0.0;
        let cs = components(&sublevel_cells(&m, 0.0), &m, &[], 0.0, 0);
        // the two 2x2 blocks touch at corner (2,2) only
        assert_eq!(cs.components.len(), 2);
        assert_eq!(cs.label_grid().iter().filter(|&&l| l >= 0).count(), 8);
    }

    #[test]
    fn drop_degree_zero_keeps_others() {
        let spec = mag_grid(3, 3, |_, _| 0.0).spec;
        let comp = |id, degree| SublevelComponent {
            id,
            t: 0,
            cells: vec![id as u32],
            degree,
            centroid: (0.0, 0.0),
            criticals: vec![],
        };
        let cs = ComponentSet {
            t: 0,
            delta: 0.0,
            spec,
            components: vec![comp(0, 1), comp(1, 0), comp(2, -1)],
        };
        let kept: Vec<i32> = drop_degree_zero(cs.clone())
            .components
            .iter()
            .map(|c| c.degree)
            .collect();
        assert_eq!(kept, vec![1, -1]);
        let empty = ComponentSet {
            components: vec![],
            ..cs
        };
        assert!(drop_degree_zero(empty).components.is_empty());
    }
}
