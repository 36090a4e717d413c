//! CSV ingestion with a missing-value policy, and column selection.

use std::path::Path;
use std::str::FromStr;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::matrix::SampleMatrix;

/// One entry of a column selection: a 1-based index or a header name.
/// This is the user-facing addressing boundary — everything behind it is
/// 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSelector {
    Index(usize),
    Name(String),
}

impl FromStr for ColumnSelector {
    type Err = std::convert::Infallible;

    /// All-digit tokens are 1-based indices, anything else is a name.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let t = s.trim();
        if !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit()) {
            Ok(ColumnSelector::Index(t.parse().expect("all-digit token")))
        } else {
            Ok(ColumnSelector::Name(t.to_string()))
        }
    }
}

impl std::fmt::Display for ColumnSelector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ColumnSelector::Index(i) => write!(f, "{i}"),
            ColumnSelector::Name(n) => write!(f, "{n}"),
        }
    }
}

/// Resolves selectors against a header to 0-based indices; rejects unknown
/// names, out-of-range indices and duplicates.
fn resolve(
    selectors: &[ColumnSelector],
    names: Option<&[String]>,
    ncols: usize,
) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(selectors.len());
    for sel in selectors {
        let idx = match sel {
            ColumnSelector::Index(i) => {
                if *i < 1 || *i > ncols {
                    return Err(Error::ColumnIndexOutOfRange { index: *i, ncols });
                }
                *i - 1
            }
            ColumnSelector::Name(name) => names
                .and_then(|ns| ns.iter().position(|n| n == name))
                .ok_or_else(|| Error::ColumnNotFound { name: name.clone() })?,
        };
        if out.contains(&idx) {
            return Err(Error::DuplicateColumn { which: sel.to_string() });
        }
        out.push(idx);
    }
    if out.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    Ok(out)
}

/// What to do when a selected cell matches an na_token.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NaPolicy {
    /// Drop the whole row (surviving rows keep their order); the count of
    /// dropped rows is reported.
    DropRows,
    /// Treat the token as a parse error.
    Fail,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IngestOptions {
    pub delimiter: u8,
    pub has_header: bool,
    pub na_tokens: Vec<String>,
    pub na_policy: NaPolicy,
    /// Columns to load, in order; `None` loads every column. Non-selected
    /// columns are never parsed, so text columns in the file are fine as
    /// long as they are not selected.
    pub columns: Option<Vec<ColumnSelector>>,
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions {
            delimiter: b',',
            has_header: true,
            na_tokens: vec!["NA".to_string(), String::new()],
            na_policy: NaPolicy::DropRows,
            columns: None,
        }
    }
}

/// A loaded matrix plus how many rows the missing-value policy removed.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedCsv {
    pub matrix: SampleMatrix,
    pub dropped_rows: usize,
}

pub fn load_csv(path: &Path, options: &IngestOptions) -> Result<LoadedCsv> {
    if options.na_policy == NaPolicy::DropRows && options.na_tokens.is_empty() {
        return Err(Error::MissingNaTokens);
    }

    let mut reader = csv::ReaderBuilder::new()
        .delimiter(options.delimiter)
        .has_headers(false)
        .flexible(false)
        .from_path(path)?;

    let mut records = reader.records();
    let header: Option<Vec<String>> = if options.has_header {
        match records.next() {
            Some(rec) => Some(rec?.iter().map(|s| s.trim().to_string()).collect()),
            None => return Err(Error::EmptyMatrix),
        }
    } else {
        None
    };

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut picked: Option<Vec<usize>> = None;
    let mut names: Option<Vec<String>> = None;
    let mut dropped = 0usize;

    for (row_idx, rec) in records.enumerate() {
        let rec = rec?;
        if picked.is_none() {
            let ncols = header.as_ref().map_or(rec.len(), |h| h.len());
            let idxs = match &options.columns {
                Some(sel) => resolve(sel, header.as_deref(), ncols)?,
                None => (0..ncols).collect(),
            };
            names = Some(match &header {
                Some(h) => idxs.iter().map(|&i| h[i].clone()).collect(),
                None => idxs.iter().map(|&i| format!("c{}", i + 1)).collect(),
            });
            picked = Some(idxs);
        }
        let idxs = picked.as_ref().unwrap();

        let mut parsed = Vec::with_capacity(idxs.len());
        let mut drop_row = false;
        for (sel_pos, &col) in idxs.iter().enumerate() {
            let raw = rec.get(col).unwrap_or("").trim();
            if options.na_tokens.iter().any(|t| t == raw) {
                match options.na_policy {
                    NaPolicy::DropRows => {
                        drop_row = true;
                        break;
                    }
                    NaPolicy::Fail => {
                        return Err(Error::ParseCell {
                            row: row_idx + 1,
                            col: column_label(&names, sel_pos),
                            token: raw.to_string(),
                        });
                    }
                }
            }
            match raw.parse::<f64>() {
                Ok(v) if v.is_finite() => parsed.push(v),
                _ => {
                    return Err(Error::ParseCell {
                        row: row_idx + 1,
                        col: column_label(&names, sel_pos),
                        token: raw.to_string(),
                    })
                }
            }
        }
        if drop_row {
            dropped += 1;
        } else {
            rows.push(parsed);
        }
    }

    let ncols = match (&picked, rows.first()) {
        (Some(idxs), _) => idxs.len(),
        (None, _) => return Err(Error::EmptyMatrix),
    };
    let mut values = Array2::zeros((rows.len(), ncols));
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            values[[i, j]] = v;
        }
    }
    let matrix = match names {
        Some(n) => SampleMatrix::with_names(values, n)?,
        None => SampleMatrix::new(values)?,
    };
    Ok(LoadedCsv { matrix, dropped_rows: dropped })
}

fn column_label(names: &Option<Vec<String>>, sel_pos: usize) -> String {
    names
        .as_ref()
        .and_then(|n| n.get(sel_pos).cloned())
        .unwrap_or_else(|| format!("#{}", sel_pos + 1))
}

/// Projects a loaded matrix onto the requested columns, in order, names
/// preserved. Same addressing rules as `IngestOptions::columns`.
pub fn select_columns(x: &SampleMatrix, selectors: &[ColumnSelector]) -> Result<SampleMatrix> {
    let idxs = resolve(selectors, x.column_names(), x.ncols())?;
    let cols: Vec<Vec<f64>> = idxs.iter().map(|&i| x.column(i).to_vec()).collect();
    let col_refs: Vec<&[f64]> = cols.iter().map(|c| c.as_slice()).collect();
    let values = SampleMatrix::from_columns(&col_refs)?;
    match x.column_names() {
        Some(names) => SampleMatrix::with_names(
            values.values().clone(),
            idxs.iter().map(|&i| names[i].clone()).collect(),
        ),
        None => Ok(values),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn drop_rows_removes_na_and_counts() {
        let f = write_temp("a,b\n1,2\nNA,4\n5,6\n");
        let got = load_csv(f.path(), &IngestOptions::default()).unwrap();
        assert_eq!(got.dropped_rows, 1);
        assert_eq!(got.matrix.nrows(), 2);
        assert_eq!(got.matrix.values()[[1, 0]], 5.0);
        assert_eq!(got.matrix.column_names().unwrap(), &["a", "b"]);
    }

    #[test]
    fn fail_policy_names_row_and_column() {
        let f = write_temp("a,b\n1,2\nNA,4\n");
        let opts = IngestOptions { na_policy: NaPolicy::Fail, ..Default::default() };
        let err = load_csv(f.path(), &opts).unwrap_err();
        match err {
            Error::ParseCell { row, col, token } => {
                assert_eq!(row, 2);
                assert_eq!(col, "a");
                assert_eq!(token, "NA");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn selection_skips_text_columns() {
        let f = write_temp("n,dir,v\n1,NW,0.5\n2,SE,0.75\n");
        let opts = IngestOptions {
            columns: Some(vec!["v".parse().unwrap(), "n".parse().unwrap()]),
            ..Default::default()
        };
        let got = load_csv(f.path(), &opts).unwrap();
        assert_eq!(got.matrix.ncols(), 2);
        assert_eq!(got.matrix.column_names().unwrap(), &["v", "n"]);
        assert_eq!(got.matrix.values()[[1, 0]], 0.75);
    }

    #[test]
    fn ragged_rows_rejected() {
        let f = write_temp("a,b\n1,2\n3\n");
        assert!(matches!(load_csv(f.path(), &IngestOptions::default()), Err(Error::Csv(_))));
    }

    #[test]
    fn one_based_index_selection() {
        let f = write_temp("a,b,c\n1,2,3\n4,5,6\n");
        let opts = IngestOptions {
            columns: Some(vec![ColumnSelector::Index(3), ColumnSelector::Index(1)]),
            ..Default::default()
        };
        let got = load_csv(f.path(), &opts).unwrap();
        assert_eq!(got.matrix.values()[[0, 0]], 3.0);
        assert_eq!(got.matrix.values()[[0, 1]], 1.0);

        let bad = IngestOptions {
            columns: Some(vec![ColumnSelector::Index(0)]),
            ..Default::default()
        };
        assert!(matches!(
            load_csv(f.path(), &bad),
            Err(Error::ColumnIndexOutOfRange { index: 0, .. })
        ));
    }

    #[test]
    fn select_columns_projects_and_validates() {
        let f = write_temp("a,b,c\n1,2,3\n4,5,6\n7,8,9\n");
        let loaded = load_csv(f.path(), &IngestOptions::default()).unwrap();
        let sel = select_columns(
            &loaded.matrix,
            &[ColumnSelector::Name("c".into()), ColumnSelector::Name("a".into())],
        )
        .unwrap();
        assert_eq!(sel.column_names().unwrap(), &["c", "a"]);
        assert_eq!(sel.values()[[2, 0]], 9.0);

        assert!(matches!(
            select_columns(&loaded.matrix, &[ColumnSelector::Name("zz".into())]),
            Err(Error::ColumnNotFound { .. })
        ));
        assert!(matches!(
            select_columns(
                &loaded.matrix,
                &[ColumnSelector::Name("a".into()), ColumnSelector::Index(1)]
            ),
            Err(Error::DuplicateColumn { .. })
        ));
    }

    #[test]
    fn selector_parsing() {
        assert_eq!("12".parse::<ColumnSelector>().unwrap(), ColumnSelector::Index(12));
        assert_eq!(
            "pm2.5".parse::<ColumnSelector>().unwrap(),
            ColumnSelector::Name("pm2.5".into())
        );
        assert_eq!(
            " PRES ".parse::<ColumnSelector>().unwrap(),
            ColumnSelector::Name("PRES".into())
        );
    }
}
