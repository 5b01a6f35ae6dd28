//! Labeled subsets and the zero-sum source vectors driving propagation.

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Indices of labeled nodes with their class assignments.
///
/// Classes are dense `0..k` indices. In binary mode class 0 plays the
/// paper's `+1` role and class 1 the `−1` role.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LabelSet {
    entries: Vec<(usize, usize)>,
    num_classes: usize,
    class_counts: Vec<usize>,
}

impl LabelSet {
    /// Build from `(node, class)` pairs. Node indices must be distinct and
    /// every class in `0..num_classes` must appear at least once.
    pub fn new(mut entries: Vec<(usize, usize)>, num_classes: usize) -> Result<Self> {
        if num_classes < 2 {
            return Err(Error::InvalidLabels(format!(
                "need at least 2 classes, got {num_classes}"
            )));
        }
        entries.sort_unstable();
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidLabels("duplicate labeled node index".into()));
        }
        let mut class_counts = vec![0usize; num_classes];
        for &(_, c) in &entries {
            if c >= num_classes {
                return Err(Error::InvalidLabels(format!(
                    "class index {c} out of range for k={num_classes}"
                )));
            }
            class_counts[c] += 1;
        }
        if let Some(c) = class_counts.iter().position(|&n| n == 0) {
            return Err(Error::InvalidLabels(format!(
                "class {c} has no labeled node"
            )));
        }
        Ok(Self {
            entries,
            num_classes,
            class_counts,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn class_counts(&self) -> &[usize] {
        &self.class_counts
    }

    pub fn entries(&self) -> &[(usize, usize)] {
        &self.entries
    }

    pub fn labeled_indices(&self) -> Vec<usize> {
        self.entries.iter().map(|&(i, _)| i).collect()
    }

    /// Ensure all node indices fit a graph of `n` nodes.
    pub fn check_bounds(&self, n: usize) -> Result<()> {
        match self.entries.last() {
            Some(&(i, _)) if i >= n => Err(Error::InvalidLabels(format!(
                "labeled node {i} out of range for n={n}"
            ))),
            _ => Ok(()),
        }
    }

    /// Fraction of labeled nodes per class (the mean label vector ȳ).
    pub fn mean_label(&self) -> Array1<f64> {
        let l = self.len() as f64;
        Array1::from_iter(self.class_counts.iter().map(|&c| c as f64 / l))
    }

    /// `n×k` one-hot matrix, zero rows for unlabeled nodes.
    pub fn one_hot(&self, n: usize) -> Result<Array2<f64>> {
        self.check_bounds(n)?;
        let mut y = Array2::<f64>::zeros((n, self.num_classes));
        for &(i, c) in &self.entries {
            y[[i, c]] = 1.0;
        }
        Ok(y)
    }

    /// `n×1` signed label vector: +1 for class 0, −1 for class 1, 0 for
    /// unlabeled. Errors unless `k = 2`.
    pub fn signed(&self, n: usize) -> Result<Array2<f64>> {
        if self.num_classes != 2 {
            return Err(Error::InvalidLabels(format!(
                "binary mode requires k=2, got k={}",
                self.num_classes
            )));
        }
        self.check_bounds(n)?;
        let mut y = Array2::<f64>::zeros((n, 1));
        for &(i, c) in &self.entries {
            y[[i, 0]] = if c == 0 { 1.0 } else { -1.0 };
        }
        Ok(y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceMode {
    Binary,
    Multiclass,
}

/// Zero-sum source placed at labeled nodes.
///
/// Binary: `+ℓ₂/ℓ` at positive-labeled nodes, `−ℓ₁/ℓ` at negative-labeled
/// nodes, shape `n×1`. Multiclass: row `yᵢ − ȳ` for labeled `i`, shape
/// `n×k`. Every class column sums to zero.
#[derive(Debug, Clone)]
pub struct SourceVector {
    pub values: Array2<f64>,
    pub mode: SourceMode,
}

pub fn build_source_vector(labels: &LabelSet, n: usize, mode: SourceMode) -> Result<SourceVector> {
    labels.check_bounds(n)?;
    if labels.len() > n {
        return Err(Error::InvalidLabels(format!(
            "{} labels exceed n={n}",
            labels.len()
        )));
    }
    let values = match mode {
        SourceMode::Binary => {
            if labels.num_classes() != 2 {
                return Err(Error::InvalidLabels(format!(
                    "binary source requires k=2, got k={}",
                    labels.num_classes()
                )));
            }
            let l = labels.len() as f64;
            let l1 = labels.class_counts()[0] as f64;
            let l2 = labels.class_counts()[1] as f64;
            let mut b = Array2::<f64>::zeros((n, 1));
            for &(i, c) in labels.entries() {
                b[[i, 0]] = if c == 0 { l2 / l } else { -l1 / l };
            }
            b
        }
        SourceMode::Multiclass => {
            let ybar = labels.mean_label();
            let mut b = Array2::<f64>::zeros((n, labels.num_classes()));
            for &(i, c) in labels.entries() {
                let mut row = b.row_mut(i);
                row.assign(&(-&ybar));
                row[c] += 1.0;
            }
            b
        }
    };
    Ok(SourceVector { values, mode })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_missing_classes() {
        assert!(LabelSet::new(vec![(0, 0), (0, 1)], 2).is_err());
        assert!(LabelSet::new(vec![(0, 0), (1, 0)], 2).is_err());
        assert!(LabelSet::new(vec![(0, 0), (1, 2)], 2).is_err());
        assert!(LabelSet::new(vec![(0, 0), (1, 1)], 2).is_ok());
    }

    #[test]
    fn binary_source_example() {
        let labels = LabelSet::new(vec![(0, 0), (1, 1)], 2).unwrap();
        let b = build_source_vector(&labels, 4, SourceMode::Binary).unwrap();
        let want = [0.5, -0.5, 0.0, 0.0];
        for (got, want) in b.values.column(0).iter().zip(want) {
            assert_eq!(*got, want);
        }
        assert_eq!(b.values.sum(), 0.0);
    }

    #[test]
    fn binary_source_sums_to_zero_when_imbalanced() {
        let labels = LabelSet::new(vec![(0, 0), (1, 0), (2, 0), (5, 1)], 2).unwrap();
        let b = build_source_vector(&labels, 8, SourceMode::Binary).unwrap();
        assert!(b.values.sum().abs() <= 1e-14);
        // entries: l2/l = 1/4 at class-0 nodes, -l1/l = -3/4 at the class-1 node
        assert_eq!(b.values[[0, 0]], 0.25);
        assert_eq!(b.values[[5, 0]], -0.75);
    }

    #[test]
    fn multiclass_source_example() {
        let labels = LabelSet::new(vec![(0, 0), (1, 1)], 2).unwrap();
        let b = build_source_vector(&labels, 3, SourceMode::Multiclass).unwrap();
        assert_eq!(b.values[[0, 0]], 0.5);
        assert_eq!(b.values[[0, 1]], -0.5);
        assert_eq!(b.values[[1, 0]], -0.5);
        assert_eq!(b.values[[1, 1]], 0.5);
        assert_eq!(b.values.row(2).sum(), 0.0);
        for c in 0..2 {
            assert!(b.values.column(c).sum().abs() <= 1e-14);
        }
    }

    #[test]
    fn binary_source_rejects_multiclass_labels() {
        let labels = LabelSet::new(vec![(0, 0), (1, 1), (2, 2)], 3).unwrap();
        assert!(build_source_vector(&labels, 4, SourceMode::Binary).is_err());
    }

    #[test]
    fn multiclass_columns_sum_to_zero() {
        let labels =
            LabelSet::new(vec![(0, 0), (3, 1), (4, 1), (7, 2), (9, 2), (10, 2)], 3).unwrap();
        let b = build_source_vector(&labels, 12, SourceMode::Multiclass).unwrap();
        for c in 0..3 {
            assert!(b.values.column(c).sum().abs() <= 1e-14);
        }
    }
}
