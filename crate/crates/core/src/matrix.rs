use ndarray::{Array2, ArrayView1, ArrayView2};

use crate::error::{Error, Result};

/// T×N observation matrix: rows are samples, columns are variables.
/// Construction rejects empty shapes and non-finite entries, so downstream
/// code can assume both.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix {
    values: Array2<f64>,
    column_names: Option<Vec<String>>,
}

impl SampleMatrix {
    pub fn new(values: Array2<f64>) -> Result<Self> {
        if values.nrows() == 0 || values.ncols() == 0 {
            return Err(Error::EmptyMatrix);
        }
        for ((row, col), v) in values.indexed_iter() {
            if !v.is_finite() {
                return Err(Error::NonFinite { row, col });
            }
        }
        Ok(SampleMatrix { values, column_names: None })
    }

    pub fn with_names(values: Array2<f64>, names: Vec<String>) -> Result<Self> {
        if names.len() != values.ncols() {
            return Err(Error::LengthMismatch { left: names.len(), right: values.ncols() });
        }
        let mut m = SampleMatrix::new(values)?;
        m.column_names = Some(names);
        Ok(m)
    }

    /// Builds a T×d matrix from column slices of equal length.
    pub fn from_columns(cols: &[&[f64]]) -> Result<Self> {
        if cols.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        let t = cols[0].len();
        for c in cols {
            if c.len() != t {
                return Err(Error::LengthMismatch { left: t, right: c.len() });
            }
        }
        let mut values = Array2::zeros((t, cols.len()));
        for (j, c) in cols.iter().enumerate() {
            for (i, &v) in c.iter().enumerate() {
                values[[i, j]] = v;
            }
        }
        SampleMatrix::new(values)
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn view(&self) -> ArrayView2<'_, f64> {
        self.values.view()
    }

    pub fn column(&self, i: usize) -> ArrayView1<'_, f64> {
        self.values.column(i)
    }

    pub fn column_names(&self) -> Option<&[String]> {
        self.column_names.as_deref()
    }

    pub fn nrows(&self) -> usize {
        self.values.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.values.ncols()
    }
}
