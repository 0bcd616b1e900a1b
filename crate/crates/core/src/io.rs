//! CSV ingestion and label output.
//!
//! - points: comma-separated feature rows, optional header, optional class
//!   label column;
//! - matrix: square dissimilarity matrix, no header;
//! - series: one series per row, rows may differ in length.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::dissim::{PointDataset, SeriesDataset};
use crate::error::{Error, Result};
use crate::model::DissimilarityMatrix;

fn reader(path: &Path) -> Result<csv::Reader<File>> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| ingest(path, 0, 0, e.to_string()))
}

fn ingest(path: &Path, line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Ingestion {
        path: path.to_path_buf(),
        line,
        column,
        message: message.into(),
    }
}

/// (1-based line number, values) per row.
type NumberedRows = Vec<(usize, Vec<f64>)>;

/// Parsed numeric rows and skipped-column labels; blank lines are skipped.
fn numeric_rows(path: &Path, skip_col: Option<usize>, allow_header: bool) -> Result<(NumberedRows, Vec<String>)> {
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (idx, rec) in reader(path)?.records().enumerate() {
        let line = idx + 1;
        let rec = rec.map_err(|e| ingest(path, line, 0, e.to_string()))?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let mut values = Vec::with_capacity(rec.len());
        let mut bad = None;
        for (col, cell) in rec.iter().enumerate() {
            if Some(col) == skip_col {
                continue;
            }
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => values.push(v),
                Ok(_) => {
                    bad.get_or_insert((col, format!("non-finite value {cell:?}")));
                }
                Err(_) => {
                    bad.get_or_insert((col, format!("non-numeric cell {cell:?}")));
                }
            }
        }
        if let Some((col, msg)) = bad {
            if allow_header && rows.is_empty() && labels.is_empty() {
                // first non-blank row is a header
                continue;
            }
            return Err(ingest(path, line, col + 1, msg));
        }
        if let Some(c) = skip_col {
            let label = rec
                .get(c)
                .ok_or_else(|| ingest(path, line, c + 1, "missing label column"))?;
            labels.push(label.to_string());
        }
        rows.push((line, values));
    }
    Ok((rows, labels))
}

/// Feature rows; `label_col` (0-based) names a column of class labels that
/// is kept for reporting and excluded from the features.
pub fn load_points_csv(path: &Path, label_col: Option<usize>) -> Result<PointDataset> {
    let (rows, labels) = numeric_rows(path, label_col, true)?;
    let Some((_, first)) = rows.first() else {
        return Err(ingest(path, 0, 0, "no data rows"));
    };
    let dim = first.len();
    if dim == 0 {
        return Err(ingest(path, rows[0].0, 0, "row has no features"));
    }
    if let Some((line, r)) = rows.iter().find(|(_, r)| r.len() != dim) {
        return Err(ingest(
            path,
            *line,
            r.len().min(dim) + 1,
            format!("expected {dim} features, found {}", r.len()),
        ));
    }
    let labels = label_col.map(|_| labels);
    PointDataset::new(rows.into_iter().map(|(_, r)| r).collect(), labels)
}

/// Square matrix; symmetry is checked with exact equality.
pub fn load_matrix_csv(path: &Path) -> Result<DissimilarityMatrix> {
    let (rows, _) = numeric_rows(path, None, false)?;
    let n = rows.len();
    if n == 0 {
        return Err(ingest(path, 0, 0, "no data rows"));
    }
    for (line, r) in &rows {
        if r.len() != n {
            return Err(ingest(
                path,
                *line,
                r.len().min(n) + 1,
                format!("expected {n} columns, found {}", r.len()),
            ));
        }
    }
    for (i, (line, r)) in rows.iter().enumerate() {
        for (j, &v) in r.iter().enumerate() {
            if v < 0.0 {
                return Err(ingest(path, *line, j + 1, format!("negative dissimilarity {v}")));
            }
            if i == j && v != 0.0 {
                return Err(ingest(path, *line, j + 1, format!("nonzero diagonal entry {v}")));
            }
            if v != rows[j].1[i] {
                return Err(ingest(
                    path,
                    *line,
                    j + 1,
                    format!(
                        "asymmetric entry: {v} versus {} at line {}, column {}",
                        rows[j].1[i],
                        rows[j].0,
                        i + 1
                    ),
                ));
            }
        }
    }
    DissimilarityMatrix::new(n, rows.into_iter().flat_map(|(_, r)| r).collect())
}

/// One series per row.
pub fn load_series_csv(path: &Path, window: usize) -> Result<SeriesDataset> {
    let (rows, _) = numeric_rows(path, None, false)?;
    if rows.is_empty() {
        return Err(ingest(path, 0, 0, "no data rows"));
    }
    SeriesDataset::new(rows.into_iter().map(|(_, r)| r).collect(), window)
}

/// Writes `element,cluster` rows.
pub fn write_labels_csv(path: &Path, labels: &[usize]) -> Result<()> {
    let mut f = std::io::BufWriter::new(File::create(path)?);
    writeln!(f, "element,cluster")?;
    for (i, l) in labels.iter().enumerate() {
        writeln!(f, "{i},{l}")?;
    }
    f.flush()?;
    Ok(())
}
