//! Central-difference gradients and the pinned gradient magnitude field.

use crate::field_io::{ScalarGrid, SliceSpec};
use crate::pl_critical::CriticalPoint;

#[derive(Clone, Debug, PartialEq)]
pub struct VectorGrid {
    pub spec: SliceSpec,
    pub vectors: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MagnitudeGrid {
    pub spec: SliceSpec,
    pub magnitudes: Vec<f64>,
}

/// Central differences in the interior, one-sided differences on the boundary.
pub fn gradient_field(grid: &ScalarGrid) -> VectorGrid {
    let SliceSpec {
        width: w,
        height: h,
        spacing: (dx, dy),
        ..
    } = grid.spec;
    let f = &grid.values;
    let at = |i: usize, j: usize| f[j * w + i];
    let mut vectors = Vec::with_capacity(w * h);
    for j in 0..h {
        for i in 0..w {
            let gx = if i == 0 {
                (at(1, j) - at(0, j)) / dx
            } else if i + 1 == w {
                (at(i, j) - at(i - 1, j)) / dx
            } else {
                (at(i + 1, j) - at(i - 1, j)) / (2.0 * dx)
            };
            let gy = if j == 0 {
                (at(i, 1) - at(i, 0)) / dy
            } else if j + 1 == h {
                (at(i, j) - at(i, j - 1)) / dy
            } else {
                (at(i, j + 1) - at(i, j - 1)) / (2.0 * dy)
            };
            vectors.push((gx, gy));
        }
    }
    VectorGrid {
        spec: grid.spec,
        vectors,
    }
}

/// `|grad f|` per vertex, forced to zero at the given critical vertices.
pub fn magnitude_field(vec: &VectorGrid, criticals: &[CriticalPoint]) -> MagnitudeGrid {
    let mut magnitudes: Vec<f64> = vec.vectors.iter().map(|&(gx, gy)| gx.hypot(gy)).collect();
    for c in criticals {
        magnitudes[c.vertex] = 0.0;
    }
    MagnitudeGrid {
        spec: vec.spec,
        magnitudes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pl_critical::{critical_points, CriticalKind};

    #[test]
    fn constant_grid_has_zero_gradient() {
        let g = ScalarGrid::from_fn(5, 4, |_, _| 3.0);
        assert!(gradient_field(&g).vectors.iter().all(|&v| v == (0.0, 0.0)));
    }

    #[test]
    fn linear_field_is_exact_everywhere() {
        let mut g = ScalarGrid::from_fn(6, 5, |i, j| 2.0 * i as f64 - 0.5 * j as f64);
        g.spec.spacing = (0.5, 2.0);
        // f = 2 i - 0.5 j with x = 0.5 i, y = 2 j  =>  df/dx = 4, df/dy = -0.25
        for &(gx, gy) in &gradient_field(&g).vectors {
            assert!((gx - 4.0).abs() < 1e-12 && (gy + 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn quadratic_is_exact_in_the_interior() {
        let g = ScalarGrid::from_fn(7, 4, |i, _| (i as f64).powi(2));
        let v = gradient_field(&g);
        for j in 1..3 {
            for i in 1..6 {
                assert_eq!(v.vectors[j * 7 + i], (2.0 * i as f64, 0.0));
            }
        }
        // forward difference at the left edge: 1 - 0
        assert_eq!(v.vectors[0].0, 1.0);
    }

    #[test]
    fn magnitude_pins_criticals() {
        let spec = ScalarGrid::from_fn(3, 3, |_, _| 0.0).spec;
        let vec = VectorGrid {
            spec,
            vectors: vec![(3.0, 4.0); 9],
        };
        assert!(magnitude_field(&vec, &[]).magnitudes.iter().all(|&m| m == 5.0));
        let zero = VectorGrid {
            spec,
            vectors: vec![(0.0, 0.0); 9],
        };
        assert!(magnitude_field(&zero, &[]).magnitudes.iter().all(|&m| m == 0.0));
    }

    #[test]
    fn pinned_at_pl_maximum_with_nonzero_difference() {
        // asymmetric peak: the central difference at the maximum is not zero
        let g = ScalarGrid::from_fn(5, 5, |i, j| {
            let (x, y) = (i as f64 - 2.0, j as f64 - 2.0);
            -(x * x + y * y) + if i == 3 { 0.5 } else { 0.0 }
        });
        let cps = critical_points(&g, 0);
        let max = cps.iter().find(|c| c.kind == CriticalKind::Maximum).unwrap();
        let vec = gradient_field(&g);
        assert_ne!(vec.vectors[max.vertex], (0.0, 0.0));
        assert_eq!(magnitude_field(&vec, &cps).magnitudes[max.vertex], 0.0);
    }
}
