//! k-th nearest-neighbor distances.
//!
//! Two interchangeable paths: an exhaustive all-pairs reference and a kd-tree
//! accelerator. They share the distance primitives and the (distance, row)
//! tie ordering, so their outputs are bit-identical; `kth_neighbor_distances`
//! picks one by sample count.

use ndarray::ArrayView2;

use crate::error::{Error, Result};

/// Distance norm for the neighbor search. `MaxNorm` is the default used by
/// `EstimatorConfig`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    MaxNorm,
    Euclidean,
}

impl Norm {
    /// Comparable pre-distance between two rows: max coordinate gap for the
    /// max norm, sum of squared gaps for Euclidean. Monotone in the true
    /// distance, so ordering decisions can use it directly.
    ///
    /// `bound` short-circuits: once the running value exceeds it the row pair
    /// can no longer be among the k best and `None` is returned. Pass
    /// `f64::INFINITY` to always get the full value. The early exit never
    /// changes a returned value — partial sums only ever grow.
    #[inline]
    fn pre_distance(self, a: &[f64], b: &[f64], bound: f64) -> Option<f64> {
        let mut acc = 0.0f64;
        match self {
            Norm::MaxNorm => {
                for (x, y) in a.iter().zip(b) {
                    let gap = (x - y).abs();
                    if gap > acc {
                        acc = gap;
                        if acc > bound {
                            return None;
                        }
                    }
                }
            }
            Norm::Euclidean => {
                for (x, y) in a.iter().zip(b) {
                    let gap = x - y;
                    acc += gap * gap;
                    if acc > bound {
                        return None;
                    }
                }
            }
        }
        Some(acc)
    }

    /// Pre-distance to actual distance.
    #[inline]
    fn finish(self, pre: f64) -> f64 {
        match self {
            Norm::MaxNorm => pre,
            Norm::Euclidean => pre.sqrt(),
        }
    }
}

impl std::fmt::Display for Norm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Norm::MaxNorm => "max",
            Norm::Euclidean => "euclidean",
        })
    }
}

/// Candidate neighbor ordered by (pre-distance, row index); the index
/// tiebreak makes every search deterministic under distance ties.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Cand {
    pre: f64,
    idx: usize,
}

impl Eq for Cand {}

impl Ord for Cand {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.pre.total_cmp(&other.pre).then(self.idx.cmp(&other.idx))
    }
}

impl PartialOrd for Cand {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Bounded worst-first set of the k best candidates seen so far.
struct KBest {
    k: usize,
    heap: std::collections::BinaryHeap<Cand>,
}

impl KBest {
    fn new(k: usize) -> Self {
        KBest { k, heap: std::collections::BinaryHeap::with_capacity(k + 1) }
    }

    /// Current pruning bound: pre-distances strictly above this are hopeless.
    #[inline]
    fn bound(&self) -> f64 {
        if self.heap.len() < self.k {
            f64::INFINITY
        } else {
            self.heap.peek().unwrap().pre
        }
    }

    #[inline]
    fn offer(&mut self, cand: Cand) {
        if self.heap.len() < self.k {
            self.heap.push(cand);
        } else if cand < *self.heap.peek().unwrap() {
            self.heap.pop();
            self.heap.push(cand);
        }
    }

    /// The k-th best pre-distance (the worst retained one).
    fn kth_pre(&self) -> f64 {
        debug_assert_eq!(self.heap.len(), self.k);
        self.heap.peek().unwrap().pre
    }
}

fn validate(t: usize, d: usize, k: usize) -> Result<()> {
    if t == 0 || d == 0 {
        return Err(Error::EmptyMatrix);
    }
    if k < 1 || k > t.saturating_sub(1) {
        return Err(Error::InvalidK { k, t });
    }
    Ok(())
}

/// Row-major copy; ndarray iteration order is logical row-major regardless of
/// the view's memory layout.
fn to_rows(u: ArrayView2<'_, f64>) -> Vec<f64> {
    u.iter().copied().collect()
}

/// Sample count below which the exhaustive path wins; the kd-tree's setup
/// costs only pay off beyond this.
const TREE_THRESHOLD: usize = 256;

/// Distance from each row to its k-th nearest other row (self excluded).
/// Dispatches between the exhaustive reference path and the kd-tree by
/// sample count; both produce identical output.
pub fn kth_neighbor_distances(u: ArrayView2<'_, f64>, k: usize, norm: Norm) -> Result<Vec<f64>> {
    if u.nrows() < TREE_THRESHOLD {
        kth_neighbor_distances_brute(u, k, norm)
    } else {
        kth_neighbor_distances_tree(u, k, norm)
    }
}

/// Exhaustive O(T²·d) reference path.
pub fn kth_neighbor_distances_brute(
    u: ArrayView2<'_, f64>,
    k: usize,
    norm: Norm,
) -> Result<Vec<f64>> {
    let (t, d) = (u.nrows(), u.ncols());
    validate(t, d, k)?;
    let rows = to_rows(u);
    let mut out = Vec::with_capacity(t);
    for i in 0..t {
        let a = &rows[i * d..(i + 1) * d];
        let mut best = KBest::new(k);
        for j in 0..t {
            if j == i {
                continue;
            }
            let b = &rows[j * d..(j + 1) * d];
            if let Some(pre) = norm.pre_distance(a, b, best.bound()) {
                best.offer(Cand { pre, idx: j });
            }
        }
        out.push(norm.finish(best.kth_pre()));
    }
    Ok(out)
}

enum Node {
    Leaf { start: usize, end: usize },
    Split { axis: usize, value: f64, left: usize, right: usize },
}

struct KdTree<'a> {
    rows: &'a [f64],
    d: usize,
    /// Row ids, permuted so each leaf owns a contiguous range.
    ids: Vec<usize>,
    nodes: Vec<Node>,
    root: usize,
}

const LEAF_SIZE: usize = 16;

impl<'a> KdTree<'a> {
    fn build(rows: &'a [f64], t: usize, d: usize) -> Self {
        let mut tree =
            KdTree { rows, d, ids: (0..t).collect(), nodes: Vec::with_capacity(2 * t / LEAF_SIZE + 1), root: 0 };
        tree.root = tree.build_range(0, t, 0);
        tree
    }

    fn coord(&self, row: usize, axis: usize) -> f64 {
        self.rows[row * self.d + axis]
    }

    fn build_range(&mut self, start: usize, end: usize, depth: usize) -> usize {
        if end - start <= LEAF_SIZE {
            self.nodes.push(Node::Leaf { start, end });
            return self.nodes.len() - 1;
        }
        let axis = depth % self.d;
        let mid = (start + end) / 2;
        // Deterministic median partition: order by (axis value, row id).
        let rows = self.rows;
        let d = self.d;
        self.ids[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
            rows[a * d + axis].total_cmp(&rows[b * d + axis]).then(a.cmp(&b))
        });
        let value = self.coord(self.ids[mid], axis);
        let left = self.build_range(start, mid, depth + 1);
        let right = self.build_range(mid, end, depth + 1);
        self.nodes.push(Node::Split { axis, value, left, right });
        self.nodes.len() - 1
    }

    fn search(&self, node: usize, query_row: usize, q: &[f64], norm: Norm, best: &mut KBest) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &id in &self.ids[start..end] {
                    if id == query_row {
                        continue;
                    }
                    let b = &self.rows[id * self.d..id * self.d + self.d];
                    if let Some(pre) = norm.pre_distance(q, b, best.bound()) {
                        best.offer(Cand { pre, idx: id });
                    }
                }
            }
            Node::Split { axis, value, left, right } => {
                let qv = q[axis];
                let (near, far) = if qv < value { (left, right) } else { (right, left) };
                self.search(near, query_row, q, norm, best);
                // One-axis gap lower-bounds the pre-distance to anything in
                // the far half-space. Prune only on strict excess: a far
                // candidate at exactly the bound can still win its index tie.
                let gap = qv - value;
                let gap_pre = match norm {
                    Norm::MaxNorm => gap.abs(),
                    Norm::Euclidean => gap * gap,
                };
                if gap_pre <= best.bound() {
                    self.search(far, query_row, q, norm, best);
                }
            }
        }
    }
}

/// kd-tree accelerator; exact, bit-identical to the exhaustive path.
pub fn kth_neighbor_distances_tree(
    u: ArrayView2<'_, f64>,
    k: usize,
    norm: Norm,
) -> Result<Vec<f64>> {
    let (t, d) = (u.nrows(), u.ncols());
    validate(t, d, k)?;
    let rows = to_rows(u);
    let tree = KdTree::build(&rows, t, d);
    let mut out = Vec::with_capacity(t);
    for i in 0..t {
        let q = &rows[i * d..(i + 1) * d];
        let mut best = KBest::new(k);
        tree.search(tree.root, i, q, norm, &mut best);
        out.push(norm.finish(best.kth_pre()));
    }
    Ok(out)
}

/// Pairs of identical rows (each reported once, first few only); used to name
/// offenders in the degenerate-ties error.
pub(crate) fn duplicate_row_pairs(u: ArrayView2<'_, f64>, limit: usize) -> Vec<(usize, usize)> {
    let (t, d) = (u.nrows(), u.ncols());
    let rows = to_rows(u);
    let row = |i: usize| &rows[i * d..(i + 1) * d];
    let mut ids: Vec<usize> = (0..t).collect();
    ids.sort_unstable_by(|&a, &b| {
        for ax in 0..d {
            let c = rows[a * d + ax].total_cmp(&rows[b * d + ax]);
            if c != std::cmp::Ordering::Equal {
                return c;
            }
        }
        a.cmp(&b)
    });
    let mut pairs = Vec::new();
    for w in ids.windows(2) {
        if row(w[0]) == row(w[1]) {
            let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
            pairs.push((a, b));
            if pairs.len() >= limit {
                break;
            }
        }
    }
    pairs
}
