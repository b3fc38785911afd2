//! Splitting trees `T(w)` and their norm-9 cores `T₉(w)`.

use crate::quotient::extend_reduced;
use crate::words::{split_children, NormWeights, ReducedWord};

/// Threshold above which splitting strictly contracts the norm.
pub const CORE_NORM: f64 = 9.0;

#[derive(Clone, Debug)]
pub struct SplitNode {
    pub label: ReducedWord,
    pub label_norm: f64,
    pub children: Vec<usize>,
    pub parent: Option<usize>,
    pub depth: usize,
}

/// A splitting tree stored as an arena; node 0 is the root when present.
#[derive(Clone, Debug, Default)]
pub struct SplitTree {
    pub nodes: Vec<SplitNode>,
    pub total_norm: f64,
    /// Σ |μ(v)| over all vertices.
    pub total_length: usize,
    pub height: usize,
}

impl SplitTree {
    pub fn vertex_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> Option<&SplitNode> {
        self.nodes.first()
    }

    fn finish(nodes: Vec<SplitNode>) -> SplitTree {
        let total_norm = nodes.iter().map(|n| n.label_norm).sum();
        let total_length = nodes.iter().map(|n| n.label.len()).sum();
        let height = nodes.iter().map(|n| n.depth).max().unwrap_or(0);
        SplitTree {
            nodes,
            total_norm,
            total_length,
            height,
        }
    }

    /// Labels of all vertices in arena order.
    pub fn labels(&self) -> impl Iterator<Item = &ReducedWord> {
        self.nodes.iter().map(|n| &n.label)
    }
}

pub fn build_tree(w: &ReducedWord) -> SplitTree {
    build_tree_with(w, &NormWeights::exact())
}

pub fn build_tree_with(w: &ReducedWord, weights: &NormWeights) -> SplitTree {
    let mut nodes = vec![SplitNode {
        label: w.clone(),
        label_norm: weights.norm(w),
        children: Vec::new(),
        parent: None,
        depth: 0,
    }];
    let mut stack = vec![0usize];
    while let Some(v) = stack.pop() {
        let kids = split_children(&nodes[v].label);
        let depth = nodes[v].depth + 1;
        for label in kids {
            let id = nodes.len();
            nodes.push(SplitNode {
                label_norm: weights.norm(&label),
                label,
                children: Vec::new(),
                parent: Some(v),
                depth,
            });
            nodes[v].children.push(id);
            stack.push(id);
        }
    }
    SplitTree::finish(nodes)
}

/// The subtree of `T(w)` induced by vertices of norm at least 9.
pub fn build_tree9(w: &ReducedWord) -> SplitTree {
    core_of(&build_tree(w))
}

/// Restricts a splitting tree to its vertices of norm at least 9.
pub fn core_of(tree: &SplitTree) -> SplitTree {
    let mut remap = vec![usize::MAX; tree.nodes.len()];
    let mut nodes: Vec<SplitNode> = Vec::new();
    for (i, n) in tree.nodes.iter().enumerate() {
        if n.label_norm < CORE_NORM {
            continue;
        }
        let parent = n.parent.map(|p| {
            assert!(
                remap[p] != usize::MAX,
                "norm-9 core is disconnected below {}",
                tree.nodes[p].label
            );
            remap[p]
        });
        remap[i] = nodes.len();
        if let Some(p) = parent {
            let id = nodes.len();
            nodes[p].children.push(id);
        }
        nodes.push(SplitNode {
            label: n.label.clone(),
            label_norm: n.label_norm,
            children: Vec::new(),
            parent,
            depth: n.depth,
        });
    }
    // arena order is parent-before-child, so parents were remapped first
    SplitTree::finish(nodes)
}

/// Longest reduced word of norm below 9: every letter weighs more than 0.7.
pub const SMALL_NORM_MAX_LEN: usize = 13;

/// All reduced words of norm below 9, in shortlex order.
pub fn small_norm_words(weights: &NormWeights) -> Vec<ReducedWord> {
    let mut out = Vec::new();
    let mut layer = vec![ReducedWord::identity()];
    for _ in 0..=SMALL_NORM_MAX_LEN {
        out.extend(layer.iter().cloned());
        layer = extend_reduced(&layer)
            .into_iter()
            .filter(|w| weights.norm(w) < CORE_NORM)
            .collect();
    }
    debug_assert!(layer.is_empty());
    out
}

pub fn tree_height(u: &ReducedWord, v: &ReducedWord) -> usize {
    build_tree(u).height.max(build_tree(v).height)
}

/// Summary used by the CLI and the invariant checks.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeStats {
    pub word_len: usize,
    pub word_norm: f64,
    pub vertex_count: usize,
    pub total_norm: f64,
    pub total_length: usize,
    pub height: usize,
    pub core_vertex_count: usize,
    pub core_total_norm: f64,
}

impl TreeStats {
    pub fn of(w: &ReducedWord) -> TreeStats {
        let tree = build_tree(w);
        let core = core_of(&tree);
        TreeStats {
            word_len: w.len(),
            word_norm: tree.nodes[0].label_norm,
            vertex_count: tree.vertex_count(),
            total_norm: tree.total_norm,
            total_length: tree.total_length,
            height: tree.height,
            core_vertex_count: core.vertex_count(),
            core_total_norm: core.total_norm,
        }
    }

    /// `‖T(w)‖ / ‖w‖`, bounded by 275.
    pub fn norm_ratio(&self) -> f64 {
        self.total_norm / self.word_norm
    }

    /// `Σ|μ| / |w|`, bounded by 800.
    pub fn length_ratio(&self) -> f64 {
        self.total_length as f64 / self.word_len as f64
    }

    /// `‖T₉(w)‖ / ‖w‖`, bounded by 35 when `‖w‖ ≥ 9`.
    pub fn core_norm_ratio(&self) -> f64 {
        self.core_total_norm / self.word_norm
    }

    /// `|V(T₉(w))| / ‖w‖`, bounded by 4 when `‖w‖ ≥ 9`.
    pub fn core_vertex_ratio(&self) -> f64 {
        self.core_vertex_count as f64 / self.word_norm
    }
}
