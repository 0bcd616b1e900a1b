//! Dissimilarity matrices from raw data: Euclidean distance over feature
//! vectors and banded dynamic time warping over time series.

use crate::error::{Error, Result};
use crate::model::DissimilarityMatrix;

/// Feature vectors, one row per element. Class labels are carried along for
/// reporting only.
#[derive(Clone, Debug, PartialEq)]
pub struct PointDataset {
    rows: Vec<Vec<f64>>,
    labels: Option<Vec<String>>,
}

impl PointDataset {
    pub fn new(rows: Vec<Vec<f64>>, labels: Option<Vec<String>>) -> Result<Self> {
        let dim = match rows.first() {
            Some(r) => r.len(),
            None => return Err(Error::Domain("point dataset is empty".into())),
        };
        for (i, r) in rows.iter().enumerate() {
            if r.len() != dim {
                return Err(Error::Domain(format!(
                    "row {i} has {} features, expected {dim}",
                    r.len()
                )));
            }
            if let Some(j) = r.iter().position(|v| !v.is_finite()) {
                return Err(Error::Domain(format!("row {i}, feature {j} is not finite")));
            }
        }
        if labels.as_ref().is_some_and(|l| l.len() != rows.len()) {
            return Err(Error::Domain("label count differs from row count".into()));
        }
        Ok(PointDataset { rows, labels })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }
}

/// Time series of possibly unequal lengths compared under a Sakoe-Chiba band.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesDataset {
    series: Vec<Vec<f64>>,
    window: usize,
}

impl SeriesDataset {
    pub fn new(series: Vec<Vec<f64>>, window: usize) -> Result<Self> {
        if series.is_empty() {
            return Err(Error::Domain("series dataset is empty".into()));
        }
        if let Some(i) = series.iter().position(|s| s.is_empty()) {
            return Err(Error::Domain(format!("series {i} is empty")));
        }
        if let Some(i) = series.iter().position(|s| s.iter().any(|v| !v.is_finite())) {
            return Err(Error::Domain(format!("series {i} has a non-finite value")));
        }
        Ok(SeriesDataset { series, window })
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn series(&self) -> &[Vec<f64>] {
        &self.series
    }
}

/// Pairwise L2 distances between rows.
pub fn euclidean_matrix(ds: &PointDataset) -> Result<DissimilarityMatrix> {
    let rows = ds.rows();
    DissimilarityMatrix::from_fn(rows.len(), |i, j| {
        rows[i]
            .iter()
            .zip(&rows[j])
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    })
}

/// DTW cost with absolute-difference local cost and the band `|i - j| <= window`.
/// Endpoints are aligned; the cost is not normalized by path length.
pub fn dtw(a: &[f64], b: &[f64], window: usize) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Domain("DTW of an empty series is undefined".into()));
    }
    let (la, lb) = (a.len(), b.len());
    if la.abs_diff(lb) > window {
        return Err(Error::InfeasibleBand {
            window,
            len_a: la,
            len_b: lb,
        });
    }
    // prev[j] / cur[j] hold the cost of aligning a[..=i] with b[..j] (j = 0 is the border)
    let mut prev = vec![f64::INFINITY; lb + 1];
    let mut cur = vec![f64::INFINITY; lb + 1];
    prev[0] = 0.0;
    for i in 1..=la {
        cur.fill(f64::INFINITY);
        let lo = i.saturating_sub(window).max(1);
        let hi = (i + window).min(lb);
        for j in lo..=hi {
            let best = prev[j - 1].min(prev[j]).min(cur[j - 1]);
            cur[j] = (a[i - 1] - b[j - 1]).abs() + best;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Ok(prev[lb])
}

/// Pairwise DTW matrix. Each pair is truncated to the shorter length first.
pub fn dtw_matrix(ds: &SeriesDataset) -> Result<DissimilarityMatrix> {
    let s = ds.series();
    let n = s.len();
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let len = s[i].len().min(s[j].len());
            let v = dtw(&s[i][..len], &s[j][..len], ds.window())?;
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
    }
    DissimilarityMatrix::new(n, values)
}
