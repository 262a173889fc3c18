//! Tabular dataset loading, stratified splitting and normalization.

use crate::error::{Error, Result};
use crate::rng::{substream, Phase};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

/// A numeric feature matrix with integer class labels.
#[derive(Debug, Clone)]
pub struct Dataset {
    /// Row-major matrix, `instances() * feature_count()` long.
    features: Vec<f64>,
    labels: Vec<u32>,
    feature_count: usize,
    pub feature_names: Option<Vec<String>>,
    pub name: String,
}

impl Dataset {
    pub fn new(
        name: impl Into<String>,
        rows: Vec<Vec<f64>>,
        labels: Vec<u32>,
        feature_names: Option<Vec<String>>,
    ) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::data(format!(
                "row count {} != label count {}",
                rows.len(),
                labels.len()
            )));
        }
        if rows.is_empty() {
            return Err(Error::data("dataset has no instances"));
        }
        let feature_count = rows[0].len();
        if feature_count == 0 {
            return Err(Error::data("dataset has no feature columns"));
        }
        let mut features = Vec::with_capacity(rows.len() * feature_count);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != feature_count {
                return Err(Error::data(format!(
                    "row {} has {} features, expected {}",
                    i + 1,
                    row.len(),
                    feature_count
                )));
            }
            for &v in row {
                if !v.is_finite() {
                    return Err(Error::data(format!("row {}: non-finite feature value", i + 1)));
                }
                features.push(v);
            }
        }
        Ok(Dataset {
            features,
            labels,
            feature_count,
            feature_names,
            name: name.into(),
        })
    }

    pub fn instances(&self) -> usize {
        self.labels.len()
    }

    pub fn feature_count(&self) -> usize {
        self.feature_count
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.feature_count..(i + 1) * self.feature_count]
    }

    pub fn label(&self, i: usize) -> u32 {
        self.labels[i]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn class_count(&self) -> usize {
        let mut seen: Vec<u32> = self.labels.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    /// New dataset from a subset of row indices.
    fn subset(&self, indices: &[usize], suffix: &str) -> Dataset {
        let mut features = Vec::with_capacity(indices.len() * self.feature_count);
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            features.extend_from_slice(self.row(i));
            labels.push(self.labels[i]);
        }
        Dataset {
            features,
            labels,
            feature_count: self.feature_count,
            feature_names: self.feature_names.clone(),
            name: format!("{}{}", self.name, suffix),
        }
    }
}

/// Which CSV column holds the class label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    /// Zero-based column index.
    Index(usize),
    /// Header name (requires a header row).
    Name(String),
    /// The last column (default).
    Last,
}

impl LabelColumn {
    /// Parse a CLI-style `<name|index>` value; digits win over names.
    pub fn parse(s: &str) -> LabelColumn {
        match s.parse::<usize>() {
            Ok(i) => LabelColumn::Index(i),
            Err(_) => LabelColumn::Name(s.to_string()),
        }
    }
}

/// Load a comma-separated dataset. The header row is optional and
/// auto-detected: a first row where any feature cell fails to parse as a
/// number is treated as a header. Class labels may be arbitrary strings
/// and are mapped to ids in order of first appearance. Missing values are
/// not supported; any empty or non-numeric feature cell aborts the load
/// with its row number.
pub fn load_csv(path: impl AsRef<Path>, label: &LabelColumn) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::data(format!("{}: {}", path.display(), e)))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_string());
    parse_csv(&text, label, &name).map_err(|e| match e {
        Error::Data(msg) => Error::data(format!("{}: {}", path.display(), msg)),
        other => other,
    })
}

/// `load_csv` on in-memory text; `name` becomes the dataset name.
pub fn parse_csv(text: &str, label: &LabelColumn, name: &str) -> Result<Dataset> {
    let rows: Vec<(usize, Vec<&str>)> = text
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.trim_end_matches('\r')))
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(n, line)| (n, line.split(',').map(str::trim).collect()))
        .collect();
    if rows.is_empty() {
        return Err(Error::data("empty file"));
    }

    let width = rows[0].1.len();
    for (line_no, cells) in &rows {
        if cells.len() != width {
            return Err(Error::data(format!(
                "row {}: {} columns, expected {}",
                line_no,
                cells.len(),
                width
            )));
        }
    }
    if width < 2 {
        return Err(Error::data("need at least one feature column and a label column"));
    }

    // Resolve the label column. A name forces the first row to be a header.
    let (label_idx, header): (usize, Option<Vec<String>>) = match label {
        LabelColumn::Index(i) => {
            if *i >= width {
                return Err(Error::data(format!(
                    "label column {} out of range for {} columns",
                    i, width
                )));
            }
            (*i, None)
        }
        LabelColumn::Last => (width - 1, None),
        LabelColumn::Name(name) => {
            let header: Vec<String> = rows[0].1.iter().map(|s| s.to_string()).collect();
            let idx = header
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::data(format!("label column {:?} not in header", name)))?;
            (idx, Some(header))
        }
    };

    // Header auto-detection when the label was not given by name: the first
    // row is a header iff any of its feature cells is non-numeric.
    let (data_start, header) = match header {
        Some(h) => (1, Some(h)),
        None => {
            let first = &rows[0].1;
            let looks_like_header = first
                .iter()
                .enumerate()
                .any(|(i, cell)| i != label_idx && cell.parse::<f64>().is_err());
            if looks_like_header {
                (1, Some(first.iter().map(|s| s.to_string()).collect()))
            } else {
                (0, None)
            }
        }
    };
    if rows.len() <= data_start {
        return Err(Error::data("no data rows"));
    }

    let feature_names = header.map(|h| {
        h.iter()
            .enumerate()
            .filter(|(i, _)| *i != label_idx)
            .map(|(_, s)| s.clone())
            .collect()
    });

    let mut label_ids: Vec<String> = Vec::new();
    let mut features: Vec<Vec<f64>> = Vec::with_capacity(rows.len() - data_start);
    let mut labels: Vec<u32> = Vec::with_capacity(rows.len() - data_start);
    for (line_no, cells) in &rows[data_start..] {
        let mut row = Vec::with_capacity(width - 1);
        for (i, cell) in cells.iter().enumerate() {
            if cell.is_empty() {
                return Err(Error::data(format!("row {}: missing value", line_no)));
            }
            if i == label_idx {
                continue;
            }
            let v: f64 = cell.parse().map_err(|_| {
                Error::data(format!("row {}: non-numeric feature cell {:?}", line_no, cell))
            })?;
            if !v.is_finite() {
                return Err(Error::data(format!("row {}: non-finite feature value", line_no)));
            }
            row.push(v);
        }
        let raw_label = cells[label_idx];
        let id = match label_ids.iter().position(|l| l == raw_label) {
            Some(i) => i as u32,
            None => {
                label_ids.push(raw_label.to_string());
                (label_ids.len() - 1) as u32
            }
        };
        features.push(row);
        labels.push(id);
    }
    Dataset::new(name, features, labels, feature_names)
}

/// Train/test split parameters.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub stratified: bool,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train_fraction: 0.8,
            stratified: true,
            seed: 0,
        }
    }
}

impl SplitSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::config(format!(
                "train fraction must be in (0, 1), got {}",
                self.train_fraction
            )));
        }
        Ok(())
    }
}

/// Seeded train/test split. Stratified mode keeps per-class proportions:
/// each class contributes `floor(train_fraction * count)` training
/// instances (at least one) and the remainder goes to the test side.
/// Row order inside each partition follows the original dataset.
pub fn split(dataset: &Dataset, spec: &SplitSpec) -> Result<(Dataset, Dataset)> {
    spec.validate()?;
    let mut rng = substream(spec.seed, Phase::Split, 0, 0);
    let mut train_idx: Vec<usize> = Vec::new();
    let mut test_idx: Vec<usize> = Vec::new();

    if spec.stratified {
        let mut by_class: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (i, &label) in dataset.labels().iter().enumerate() {
            by_class.entry(label).or_default().push(i);
        }
        for (label, mut indices) in by_class {
            if indices.len() < 2 {
                return Err(Error::data(format!(
                    "class {} has {} instance(s); stratified split needs at least 2",
                    label,
                    indices.len()
                )));
            }
            indices.shuffle(&mut rng);
            let take = ((spec.train_fraction * indices.len() as f64).floor() as usize).max(1);
            train_idx.extend_from_slice(&indices[..take]);
            test_idx.extend_from_slice(&indices[take..]);
        }
    } else {
        let mut indices: Vec<usize> = (0..dataset.instances()).collect();
        indices.shuffle(&mut rng);
        let take = ((spec.train_fraction * indices.len() as f64).floor() as usize).max(1);
        train_idx.extend_from_slice(&indices[..take]);
        test_idx.extend_from_slice(&indices[take..]);
    }
    if test_idx.is_empty() {
        return Err(Error::data("split left the test partition empty"));
    }
    train_idx.sort_unstable();
    test_idx.sort_unstable();
    Ok((
        dataset.subset(&train_idx, "[train]"),
        dataset.subset(&test_idx, "[test]"),
    ))
}

/// Min-max normalization using training-partition statistics, applied to
/// both partitions. Constant training features map to zero everywhere;
/// test values outside the training range are left unclipped.
pub fn normalize(train: &Dataset, test: &Dataset) -> (Dataset, Dataset) {
    debug_assert_eq!(train.feature_count(), test.feature_count());
    let d = train.feature_count();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for i in 0..train.instances() {
        for (f, &v) in train.row(i).iter().enumerate() {
            lo[f] = lo[f].min(v);
            hi[f] = hi[f].max(v);
        }
    }
    let scale_one = |ds: &Dataset| -> Dataset {
        let mut out = ds.clone();
        for i in 0..out.instances() {
            for f in 0..d {
                let idx = i * d + f;
                let v = out.features[idx];
                out.features[idx] = if hi[f] > lo[f] {
                    (v - lo[f]) / (hi[f] - lo[f])
                } else {
                    0.0
                };
            }
        }
        out
    };
    (scale_one(train), scale_one(test))
}
