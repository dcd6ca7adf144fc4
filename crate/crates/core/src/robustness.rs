//! Merge tree of the gradient magnitude and static robustness of critical points.
//!
//! The tree is built by a union-find sweep over the vertices in ascending
//! `(magnitude, index)` order using the triangulation edges. Besides leaves
//! (local minima), joins and the root, it keeps an augmented node for every
//! critical vertex that enters an existing component, so that each change of
//! a component's degree happens at a node.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::gradient::MagnitudeGrid;
use crate::mesh::{sorted_vertices, DisjointSets};
use crate::pl_critical::{CriticalKind, CriticalPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Leaf,
    /// Two or more sublevel components merge here.
    Saddle,
    /// A critical vertex joining an existing component.
    Augmented,
    Root,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MergeNode {
    pub vertex: usize,
    pub value: f64,
    pub kind: NodeKind,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// Sum of Poincare indices over the subtree.
    pub degree: i32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MergeTree {
    pub nodes: Vec<MergeNode>,
    node_of_vertex: HashMap<usize, usize>,
}

impl MergeTree {
    pub fn node_of(&self, vertex: usize) -> Option<usize> {
        self.node_of_vertex.get(&vertex).copied()
    }

    pub fn count(&self, kind: NodeKind) -> usize {
        self.nodes.iter().filter(|n| n.kind == kind).count()
    }

    pub fn root(&self) -> usize {
        self.nodes
            .iter()
            .position(|n| n.parent.is_none())
            .expect("merge tree has a root")
    }
}

/// Merge tree of `mag`; leaf and augmented degrees are the indices of `criticals`.
pub fn merge_tree(mag: &MagnitudeGrid, criticals: &[CriticalPoint]) -> MergeTree {
    let values = &mag.magnitudes;
    let n = values.len();
    let tri = mag.spec.triangulation();
    let mut index = vec![0i32; n];
    for c in criticals {
        index[c.vertex] = c.index;
    }
    let order = sorted_vertices(values);
    let mut sets = DisjointSets::new(n);
    let mut seen = vec![false; n];
    let mut top = vec![usize::MAX; n];
    let mut nodes: Vec<MergeNode> = Vec::new();
    let mut node_of_vertex = HashMap::new();
    let mut roots = Vec::with_capacity(6);

    let mut add_node = |nodes: &mut Vec<MergeNode>, v: usize, kind: NodeKind, children: Vec<usize>| {
        let id = nodes.len();
        let degree = index[v] + children.iter().map(|&c| nodes[c].degree).sum::<i32>();
        for &c in &children {
            nodes[c].parent = Some(id);
        }
        nodes.push(MergeNode {
            vertex: v,
            value: values[v],
            kind,
            parent: None,
            children,
            degree,
        });
        node_of_vertex.insert(v, id);
        id
    };

    let last = *order.last().expect("non-empty grid");
    for &v in &order {
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
        let node = match roots.len() {
            0 => Some(add_node(&mut nodes, v, NodeKind::Leaf, vec![])),
            1 if index[v] != 0 || v == last => {
                let kind = if v == last { NodeKind::Root } else { NodeKind::Augmented };
                Some(add_node(&mut nodes, v, kind, vec![top[roots[0]]]))
            }
            1 => None,
            _ => {
                let children = roots.iter().map(|&r| top[r]).collect();
                let kind = if v == last { NodeKind::Root } else { NodeKind::Saddle };
                Some(add_node(&mut nodes, v, kind, children))
            }
        };
        let mut root = v;
        for &r in &roots {
            let keep = top[r];
            root = sets.union(root, r);
            top[root] = keep;
        }
        if let Some(id) = node {
            top[root] = id;
        }
    }
    MergeTree { nodes, node_of_vertex }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RobustnessEntry {
    pub t: usize,
    pub vertex: usize,
    pub kind: CriticalKind,
    pub index: i32,
    /// `f64::INFINITY` when no ancestor has degree 0.
    pub robustness: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RobustnessReport {
    pub entries: Vec<RobustnessEntry>,
}

/// Magnitude of the lowest ancestor with degree 0, for every critical point.
pub fn static_robustness(tree: &MergeTree, criticals: &[CriticalPoint]) -> Result<RobustnessReport> {
    let entries = criticals
        .iter()
        .map(|c| {
            let mut node = tree.node_of(c.vertex).ok_or(Error::NotInTree(c.vertex))?;
            let robustness = loop {
                let n = &tree.nodes[node];
                if n.degree == 0 {
                    break n.value;
                }
                match n.parent {
                    Some(p) => node = p,
                    None => break f64::INFINITY,
                }
            };
            Ok(RobustnessEntry {
                t: c.t,
                vertex: c.vertex,
                kind: c.kind,
                index: c.index,
                robustness,
            })
        })
        .collect::<Result<_>>()?;
    Ok(RobustnessReport { entries })
}

/// Histogram of finite robustness values.
#[derive(Clone, Debug, PartialEq)]
pub struct RobustnessSummary {
    pub finite: usize,
    pub infinite: usize,
    /// `(upper edge, count)` for equal-width bins over `[0, max]`.
    pub bins: Vec<(f64, usize)>,
    pub quantiles: Vec<(f64, f64)>,
}

impl RobustnessReport {
    /// A threshold separating clustered criticals from stable ones.
    ///
    /// Finite positive robustness values usually form a low band (criticals
    /// that cancel nearby) and a high band (the features worth tracking). This
    /// finds the widest gap on a log scale with at least 5% of the values on
    /// each side and returns half the value just above it; the margin accounts
    /// for the cells around every vertex at or below the threshold.
    pub fn suggest_delta(&self) -> Option<f64> {
        let mut r: Vec<f64> = self
            .entries
            .iter()
            .map(|e| e.robustness)
            .filter(|x| x.is_finite() && *x > 0.0)
            .collect();
        r.sort_by(f64::total_cmp);
        let n = r.len();
        let min_side = (n / 20).max(1);
        (min_side..=n.saturating_sub(min_side))
            .filter(|&k| k > 0 && k < n)
            .max_by(|&a, &b| (r[a] / r[a - 1]).total_cmp(&(r[b] / r[b - 1])).then(b.cmp(&a)))
            .filter(|&k| r[k] > r[k - 1])
            .map(|k| 0.5 * r[k])
    }

    pub fn summary(&self, bins: usize) -> RobustnessSummary {
        let mut finite: Vec<f64> = self
            .entries
            .iter()
            .map(|e| e.robustness)
            .filter(|r| r.is_finite())
            .collect();
        finite.sort_by(f64::total_cmp);
        let infinite = self.entries.len() - finite.len();
        let max = finite.last().copied().unwrap_or(0.0);
        let bins = bins.max(1);
        let mut counts = vec![0usize; bins];
        for &r in &finite {
            let k = if max > 0.0 {
                ((r / max) * bins as f64) as usize
            } else {
                0
            };
            counts[k.min(bins - 1)] += 1;
        }
        let edges = (1..=bins).map(|k| max * k as f64 / bins as f64);
        let quantiles = [0.5, 0.9, 0.99]
            .into_iter()
            .filter(|_| !finite.is_empty())
            .map(|q| {
                let k = ((finite.len() - 1) as f64 * q).round() as usize;
                (q, finite[k])
            })
            .collect();
        RobustnessSummary {
            finite: finite.len(),
            infinite,
            bins: edges.zip(counts).collect(),
            quantiles,
        }
    }
}
