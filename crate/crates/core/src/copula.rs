//! Rank transform to empirical-copula pseudo-observations.

use ndarray::{Array2, ArrayView2};

use crate::matrix::SampleMatrix;

/// T×N matrix of pseudo-observations. Entry (t,i) is |{s : x[s,i] <= x[t,i]}| / T,
/// so every entry lies in (0, 1] and is an integer multiple of 1/T; ties within
/// a column share the same entry (the maximum rank of the tied group).
#[derive(Debug, Clone, PartialEq)]
pub struct CopulaMatrix {
    values: Array2<f64>,
}

impl CopulaMatrix {
    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn view(&self) -> ArrayView2<'_, f64> {
        self.values.view()
    }

    pub fn nrows(&self) -> usize {
        self.values.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.values.ncols()
    }
}

/// Column-wise ≤-count rank transform. Infallible: `SampleMatrix` already
/// guarantees a non-empty, finite matrix.
pub fn empirical_copula(x: &SampleMatrix) -> CopulaMatrix {
    let t = x.nrows();
    let n = x.ncols();
    let tf = t as f64;
    let mut values = Array2::zeros((t, n));
    let mut order: Vec<usize> = Vec::with_capacity(t);
    for j in 0..n {
        let col = x.column(j);
        order.clear();
        order.extend(0..t);
        // total_cmp is fine: construction rejected NaN.
        order.sort_unstable_by(|&a, &b| col[a].total_cmp(&col[b]));
        // Walk tied groups; everything in a group gets the group's last
        // position + 1 as its <=-count.
        let mut start = 0;
        while start < t {
            let v = col[order[start]];
            let mut end = start;
            while end + 1 < t && col[order[end + 1]] == v {
                end += 1;
            }
            let rank = (end + 1) as f64 / tf;
            for &row in &order[start..=end] {
                values[[row, j]] = rank;
            }
            start = end + 1;
        }
    }
    CopulaMatrix { values }
}
