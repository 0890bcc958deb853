//! Plain numeric CSV tables.
//!
//! Every emitted table carries a header row and `# key=value` comment lines
//! (always including `# seed=`). Floats are written with Rust's shortest
//! round-trip formatting, so a rerun with the same seed produces bit-identical
//! files and every file parses back exactly.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use ndarray::Array2;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TableError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
}

/// A column-named numeric table plus comment metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// `key=value` comment lines, emitted in order before the header.
    pub comments: Vec<(String, String)>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            comments: Vec::new(),
        }
    }

    pub fn with_seed(columns: &[&str], seed: u64) -> Self {
        let mut t = Self::new(columns);
        t.comments.push(("seed".to_string(), seed.to_string()));
        t
    }

    pub fn comment(&mut self, key: &str, value: impl ToString) {
        self.comments.push((key.to_string(), value.to_string()));
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn comment_value(&self, key: &str) -> Option<&str> {
        self.comments
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.comments {
            let _ = writeln!(out, "# {k}={v}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|v| fmt_f64(*v)).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<(), TableError> {
        fs::write(path, self.to_csv_string()).map_err(|source| TableError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn read(path: &Path) -> Result<Table, TableError> {
        let text = fs::read_to_string(path).map_err(|source| TableError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text).map_err(|message| TableError::Parse {
            path: path.display().to_string(),
            message,
        })
    }

    pub fn parse(text: &str) -> Result<Table, String> {
        let mut comments = Vec::new();
        let mut columns: Option<Vec<String>> = None;
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim_end();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let rest = rest.trim();
                if let Some((k, v)) = rest.split_once('=') {
                    comments.push((k.trim().to_string(), v.trim().to_string()));
                }
                continue;
            }
            match &columns {
                None => {
                    columns = Some(line.split(',').map(|c| c.trim().to_string()).collect());
                }
                Some(cols) => {
                    let row: Result<Vec<f64>, _> =
                        line.split(',').map(|c| c.trim().parse::<f64>()).collect();
                    let row = row.map_err(|e| format!("line {}: {e}", lineno + 1))?;
                    if row.len() != cols.len() {
                        return Err(format!(
                            "line {}: expected {} fields, got {}",
                            lineno + 1,
                            cols.len(),
                            row.len()
                        ));
                    }
                    rows.push(row);
                }
            }
        }
        let columns = columns.ok_or_else(|| "missing header row".to_string())?;
        Ok(Table {
            columns,
            rows,
            comments,
        })
    }

    /// Drops the named leading column (usually `row`) and returns the rest as
    /// a dense matrix.
    pub fn to_matrix_dropping(&self, drop: &str) -> Array2<f64> {
        let keep: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .filter(|(_, c)| c != &drop)
            .map(|(i, _)| i)
            .collect();
        let mut m = Array2::zeros((self.rows.len(), keep.len()));
        for (r, row) in self.rows.iter().enumerate() {
            for (k, &c) in keep.iter().enumerate() {
                m[[r, k]] = row[c];
            }
        }
        m
    }
}

/// Writes a sample matrix as `row,c0..c{D-1}`.
pub fn matrix_table(m: &Array2<f64>, seed: u64) -> Table {
    let mut columns = vec!["row".to_string()];
    for d in 0..m.ncols() {
        columns.push(format!("c{d}"));
    }
    let mut t = Table {
        columns,
        rows: Vec::new(),
        comments: vec![("seed".to_string(), seed.to_string())],
    };
    for (r, row) in m.outer_iter().enumerate() {
        let mut fields = Vec::with_capacity(m.ncols() + 1);
        fields.push(r as f64);
        fields.extend(row.iter().copied());
        t.rows.push(fields);
    }
    t
}

/// Shortest decimal text that parses back to exactly the same f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn round_trips_with_comments() {
        let mut t = Table::with_seed(&["step", "loss"], 42);
        t.comment("stage", "train");
        t.push(vec![0.0, 0.6931471805599453]);
        t.push(vec![1.0, 0.1]);
        let text = t.to_csv_string();
        assert!(text.starts_with("# seed=42\n"));
        let back = Table::parse(&text).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn matrix_round_trip_preserves_values() {
        let m = Array2::from_shape_vec((3, 2), vec![1.5, -0.25, 3.0, 0.1, -7.0, 2.0]).unwrap();
        let t = matrix_table(&m, 9);
        let back = Table::parse(&t.to_csv_string()).unwrap();
        let m2 = back.to_matrix_dropping("row");
        assert_eq!(m, m2);
        assert_eq!(back.comment_value("seed"), Some("9"));
    }

    proptest! {
        #[test]
        fn float_text_round_trips(bits in any::<u64>()) {
            let v = f64::from_bits(bits);
            prop_assume!(v.is_finite());
            let s = fmt_f64(v);
            let back: f64 = s.parse().unwrap();
            prop_assert_eq!(v.to_bits(), back.to_bits());
        }
    }
}
