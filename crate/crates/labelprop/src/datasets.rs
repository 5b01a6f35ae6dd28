//! Synthetic point-cloud generators, CSV ingestion and labeled-subset
//! sampling for repeated trials.
//!
//! Everything here is a pure function of its parameters and a seed.

use std::path::Path;

use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::PointCloud;
use crate::labels::LabelSet;

/// A point cloud with ground-truth class labels.
#[derive(Debug, Clone)]
pub struct LabeledDataset {
    pub cloud: PointCloud,
    /// Ground-truth class per node, dense `0..k` indices.
    pub truth: Vec<usize>,
    /// Display names in first-appearance order.
    pub class_names: Vec<String>,
    /// Whether per-column standardization was applied at ingestion.
    pub standardized: bool,
}

impl LabeledDataset {
    pub fn n(&self) -> usize {
        self.truth.len()
    }

    pub fn num_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.num_classes()];
        for &c in &self.truth {
            counts[c] += 1;
        }
        counts
    }

    /// Majority count divided by minority count.
    pub fn imbalance_ratio(&self) -> f64 {
        let counts = self.class_counts();
        let max = *counts.iter().max().unwrap() as f64;
        let min = *counts.iter().min().unwrap() as f64;
        max / min
    }

    /// Class with the smallest count; ties broken by first appearance.
    pub fn minority_class(&self) -> usize {
        let counts = self.class_counts();
        let mut best = 0;
        for (j, &c) in counts.iter().enumerate().skip(1) {
            if c < counts[best] {
                best = j;
            }
        }
        best
    }

    pub fn majority_class(&self) -> usize {
        let counts = self.class_counts();
        let mut best = 0;
        for (j, &c) in counts.iter().enumerate().skip(1) {
            if c > counts[best] {
                best = j;
            }
        }
        best
    }

    pub fn manifest(&self) -> DatasetManifest {
        DatasetManifest {
            n: self.n(),
            p: self.cloud.dim(),
            k: self.num_classes(),
            ir: self.imbalance_ratio(),
            class_counts: self.class_counts(),
            standardized: self.standardized,
        }
    }
}

/// Summary record for reports and the CLI.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DatasetManifest {
    pub n: usize,
    pub p: usize,
    pub k: usize,
    pub ir: f64,
    pub class_counts: Vec<usize>,
    pub standardized: bool,
}

fn gaussian_noise(rng: &mut ChaCha8Rng, sigma: f64, coords: &mut Array2<f64>) {
    if sigma == 0.0 {
        return;
    }
    for x in coords.iter_mut() {
        let z: f64 = StandardNormal.sample(rng);
        *x += sigma * z;
    }
}

fn check_counts(n_major: usize, n_minor: usize, noise: f64) -> Result<()> {
    if n_major < 1 || n_minor < 1 {
        return Err(Error::InvalidParameter(
            "each class needs at least one sample".into(),
        ));
    }
    if noise < 0.0 || !noise.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "noise must be nonnegative, got {noise}"
        )));
    }
    Ok(())
}

/// Two interleaving half-circle arcs with isotropic Gaussian noise.
///
/// The majority arc (class 0) is the upper unit half circle centered at
/// the origin; the minority arc (class 1) is the lower half circle with
/// its center offset to `(1, 0.5)`. Deterministic per seed.
pub fn two_moons(n_major: usize, n_minor: usize, noise: f64, seed: u64) -> Result<LabeledDataset> {
    check_counts(n_major, n_minor, noise)?;
    let n = n_major + n_minor;
    let mut coords = Array2::<f64>::zeros((n, 2));
    for i in 0..n_major {
        let t = std::f64::consts::PI * i as f64 / (n_major.max(2) - 1) as f64;
        coords[[i, 0]] = t.cos();
        coords[[i, 1]] = t.sin();
    }
    for i in 0..n_minor {
        let t = std::f64::consts::PI * i as f64 / (n_minor.max(2) - 1) as f64;
        coords[[n_major + i, 0]] = 1.0 - t.cos();
        coords[[n_major + i, 1]] = 0.5 - t.sin();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gaussian_noise(&mut rng, noise, &mut coords);

    let truth: Vec<usize> = (0..n).map(|i| usize::from(i >= n_major)).collect();
    Ok(LabeledDataset {
        cloud: PointCloud::new(coords)?,
        truth,
        class_names: vec!["1".into(), "2".into()],
        standardized: false,
    })
}

/// Two concentric circles: the outer unit circle is the majority class,
/// the inner circle scaled by `radius_ratio` the minority class.
pub fn two_circles(
    n_major: usize,
    n_minor: usize,
    noise: f64,
    radius_ratio: f64,
    seed: u64,
) -> Result<LabeledDataset> {
    check_counts(n_major, n_minor, noise)?;
    if !(radius_ratio > 0.0 && radius_ratio < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "radius_ratio must lie in (0, 1), got {radius_ratio}"
        )));
    }
    let n = n_major + n_minor;
    let mut coords = Array2::<f64>::zeros((n, 2));
    let tau = 2.0 * std::f64::consts::PI;
    for i in 0..n_major {
        let t = tau * i as f64 / n_major as f64;
        coords[[i, 0]] = t.cos();
        coords[[i, 1]] = t.sin();
    }
    for i in 0..n_minor {
        let t = tau * i as f64 / n_minor as f64;
        coords[[n_major + i, 0]] = radius_ratio * t.cos();
        coords[[n_major + i, 1]] = radius_ratio * t.sin();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gaussian_noise(&mut rng, noise, &mut coords);

    let truth: Vec<usize> = (0..n).map(|i| usize::from(i >= n_major)).collect();
    Ok(LabeledDataset {
        cloud: PointCloud::new(coords)?,
        truth,
        class_names: vec!["1".into(), "2".into()],
        standardized: false,
    })
}

/// How many labels each class contributes to a trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingPlan {
    /// The same number of labels for every class.
    PerClass(usize),
    /// Explicit per-class counts, indexed by class.
    PerClassCounts(Vec<usize>),
    /// `round(fraction · class_size)` per class with a floor of one when
    /// `ir_proportional`; otherwise `round(fraction · n / k)` per class.
    Fraction { fraction: f64, ir_proportional: bool },
}

/// A labeled subset drawn from the ground truth for one trial.
#[derive(Debug, Clone)]
pub struct TrialSplit {
    pub labels: LabelSet,
    pub seed: u64,
}

/// Sample labeled nodes uniformly without replacement within each class.
pub fn sample_labels(
    dataset: &LabeledDataset,
    plan: &SamplingPlan,
    seed: u64,
) -> Result<TrialSplit> {
    let k = dataset.num_classes();
    let sizes = dataset.class_counts();
    let n = dataset.n();

    let counts: Vec<usize> = match plan {
        SamplingPlan::PerClass(c) => vec![*c; k],
        SamplingPlan::PerClassCounts(v) => {
            if v.len() != k {
                return Err(Error::InvalidLabels(format!(
                    "sampling plan lists {} classes, dataset has {k}",
                    v.len()
                )));
            }
            v.clone()
        }
        SamplingPlan::Fraction {
            fraction,
            ir_proportional,
        } => {
            if !(*fraction > 0.0 && *fraction <= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "label fraction must lie in (0, 1], got {fraction}"
                )));
            }
            if *ir_proportional {
                sizes
                    .iter()
                    .map(|&s| ((fraction * s as f64).round() as usize).max(1))
                    .collect()
            } else {
                let per = ((fraction * n as f64 / k as f64).round() as usize).max(1);
                vec![per; k]
            }
        }
    };

    for (j, (&count, &size)) in counts.iter().zip(&sizes).enumerate() {
        if count < 1 || count > size {
            return Err(Error::InvalidLabels(format!(
                "class {} has {size} samples, cannot label {count}",
                dataset.class_names[j]
            )));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for (j, &count) in counts.iter().enumerate() {
        let members: Vec<usize> = (0..n).filter(|&i| dataset.truth[i] == j).collect();
        let chosen = rand::seq::index::sample(&mut rng, members.len(), count);
        let mut picked: Vec<usize> = chosen.into_iter().map(|idx| members[idx]).collect();
        picked.sort_unstable();
        pairs.extend(picked.into_iter().map(|i| (i, j)));
    }
    Ok(TrialSplit {
        labels: LabelSet::new(pairs, k)?,
        seed,
    })
}

/// Which CSV column carries the class token.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LabelColumn {
    /// Header name; the file must have a header row.
    Name(String),
    /// Zero-based column index.
    Index(usize),
}

/// Parsing options for feature/label CSV files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvFormat {
    pub delimiter: u8,
    /// Per-column standardization of features (KEEL-style files have
    /// heterogeneous scales that distort Euclidean KNN).
    pub standardize: bool,
}

impl Default for CsvFormat {
    fn default() -> Self {
        Self {
            delimiter: b',',
            standardize: true,
        }
    }
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

/// Load a feature/label CSV. Features are parsed as reals in column
/// order with the label column excluded; class tokens map to indices by
/// first appearance. A header row is auto-detected when the first line
/// has a non-numeric entry in a feature column.
pub fn load_csv(
    path: impl AsRef<Path>,
    label_column: &LabelColumn,
    fmt: &CsvFormat,
) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .delimiter(fmt.delimiter)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| parse_err(path, 0, e.to_string()))?;

    let mut rows: Vec<(usize, Vec<String>)> = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| parse_err(path, idx + 1, e.to_string()))?;
        let line = record
            .position()
            .map_or(idx + 1, |p| p.line() as usize);
        let fields: Vec<String> = record.iter().map(str::to_owned).collect();
        if !fields.is_empty() && !(fields.len() == 1 && fields[0].is_empty()) {
            rows.push((line, fields));
        }
    }
    if rows.is_empty() {
        return Err(parse_err(path, 0, "empty file"));
    }

    let arity = rows[0].1.len();
    let (label_idx, data_start) = match label_column {
        LabelColumn::Name(name) => {
            let header = &rows[0].1;
            let idx = header
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| parse_err(path, rows[0].0, format!("no column named '{name}'")))?;
            (idx, 1)
        }
        LabelColumn::Index(idx) => {
            if *idx >= arity {
                return Err(parse_err(
                    path,
                    rows[0].0,
                    format!("label column {idx} out of range for {arity} columns"),
                ));
            }
            // header iff any feature field of the first line is non-numeric
            let has_header = rows[0]
                .1
                .iter()
                .enumerate()
                .any(|(j, f)| j != *idx && f.parse::<f64>().is_err());
            (*idx, usize::from(has_header))
        }
    };
    if data_start >= rows.len() {
        return Err(parse_err(path, 0, "no data rows"));
    }

    let p = arity - 1;
    let mut features: Vec<f64> = Vec::with_capacity((rows.len() - data_start) * p);
    let mut truth = Vec::new();
    let mut class_names: Vec<String> = Vec::new();
    for (line, fields) in &rows[data_start..] {
        if fields.len() != arity {
            return Err(parse_err(
                path,
                *line,
                format!("expected {arity} columns, found {}", fields.len()),
            ));
        }
        for (j, field) in fields.iter().enumerate() {
            if j == label_idx {
                let class = match class_names.iter().position(|c| c == field) {
                    Some(c) => c,
                    None => {
                        class_names.push(field.clone());
                        class_names.len() - 1
                    }
                };
                truth.push(class);
            } else {
                let v: f64 = field.parse().map_err(|_| {
                    parse_err(
                        path,
                        *line,
                        format!("non-numeric feature '{field}' in column {j}"),
                    )
                })?;
                features.push(v);
            }
        }
    }

    let n = truth.len();
    let mut coords = Array2::from_shape_vec((n, p), features)
        .map_err(|e| parse_err(path, 0, e.to_string()))?;
    if fmt.standardize {
        standardize_columns(&mut coords);
    }
    Ok(LabeledDataset {
        cloud: PointCloud::new(coords)?,
        truth,
        class_names,
        standardized: fmt.standardize,
    })
}

/// Ingest a CSV of precomputed embedding vectors.
///
/// Convention: comma-delimited, class token in the last column, no
/// standardization (the features are already an embedding).
pub fn features_from_csv_embedding(path: impl AsRef<Path>) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let arity = first_row_arity(path)?;
    load_csv(
        path,
        &LabelColumn::Index(arity - 1),
        &CsvFormat {
            delimiter: b',',
            standardize: false,
        },
    )
}

fn first_row_arity(path: &Path) -> Result<usize> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_path(path)
        .map_err(|e| parse_err(path, 0, e.to_string()))?;
    match reader.records().next() {
        Some(Ok(rec)) => Ok(rec.len()),
        Some(Err(e)) => Err(parse_err(path, 1, e.to_string())),
        None => Err(parse_err(path, 0, "empty file")),
    }
}

fn standardize_columns(coords: &mut Array2<f64>) {
    let n = coords.nrows() as f64;
    for mut col in coords.columns_mut() {
        let mean = col.sum() / n;
        let var = col.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
        let std = var.sqrt();
        let scale = if std > 0.0 { 1.0 / std } else { 1.0 };
        col.mapv_inplace(|x| (x - mean) * scale);
    }
}
