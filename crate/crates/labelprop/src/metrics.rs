//! Confusion matrices, imbalance-robust per-class metrics, and
//! aggregation across repeated trials.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which nodes count toward the metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalScope {
    AllNodes,
    UnlabeledOnly,
}

/// `k×k` confusion counts; rows are truth, columns are predictions.
///
/// Per-trial matrices hold nonnegative integers (stored as `f64` so that
/// trial averages share the type).
#[derive(Debug, Clone, PartialEq)]
pub struct ConfusionMatrix {
    counts: Array2<f64>,
    scope: EvalScope,
}

impl ConfusionMatrix {
    pub fn from_counts(counts: Array2<f64>, scope: EvalScope) -> Result<Self> {
        if counts.nrows() != counts.ncols() || counts.nrows() == 0 {
            return Err(Error::Metrics(format!(
                "confusion matrix must be square and nonempty, got {}x{}",
                counts.nrows(),
                counts.ncols()
            )));
        }
        if counts.iter().any(|&c| c < 0.0 || !c.is_finite()) {
            return Err(Error::Metrics("negative confusion count".into()));
        }
        Ok(Self { counts, scope })
    }

    pub fn counts(&self) -> &Array2<f64> {
        &self.counts
    }

    pub fn scope(&self) -> EvalScope {
        self.scope
    }

    pub fn num_classes(&self) -> usize {
        self.counts.nrows()
    }

    pub fn total(&self) -> f64 {
        self.counts.sum()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.counts
            .rows()
            .into_iter()
            .map(|r| r.to_vec())
            .collect()
    }
}

/// Tally `counts[truth][prediction]` over the evaluation scope;
/// `labeled` lists the node indices excluded under
/// [`EvalScope::UnlabeledOnly`].
pub fn confusion(
    truth: &[usize],
    predictions: &[usize],
    num_classes: usize,
    scope: EvalScope,
    labeled: &[usize],
) -> Result<ConfusionMatrix> {
    if truth.len() != predictions.len() {
        return Err(Error::Metrics(format!(
            "length mismatch: {} truth labels vs {} predictions",
            truth.len(),
            predictions.len()
        )));
    }
    let mut excluded = vec![false; truth.len()];
    if scope == EvalScope::UnlabeledOnly {
        for &i in labeled {
            if i < excluded.len() {
                excluded[i] = true;
            }
        }
    }
    let mut counts = Array2::<f64>::zeros((num_classes, num_classes));
    for (i, (&t, &p)) in truth.iter().zip(predictions).enumerate() {
        if excluded[i] {
            continue;
        }
        if t >= num_classes || p >= num_classes {
            return Err(Error::Metrics(format!(
                "class index out of range at node {i}: truth {t}, prediction {p}"
            )));
        }
        counts[[t, p]] += 1.0;
    }
    ConfusionMatrix::from_counts(counts, scope)
}

/// Per-class precision/recall/F1 plus overall accuracy. Any `0/0` ratio
/// is defined as 0 and raises the `zero_division` warning flag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub accuracy: f64,
    pub precision: Vec<f64>,
    pub recall: Vec<f64>,
    pub f1: Vec<f64>,
    pub zero_division: bool,
}

pub fn class_metrics(cm: &ConfusionMatrix) -> Result<ClassMetrics> {
    let total = cm.total();
    if total <= 0.0 {
        return Err(Error::Metrics("empty confusion matrix".into()));
    }
    let k = cm.num_classes();
    let counts = cm.counts();
    let mut precision = Vec::with_capacity(k);
    let mut recall = Vec::with_capacity(k);
    let mut f1 = Vec::with_capacity(k);
    let mut zero_division = false;
    let mut ratio = |num: f64, den: f64| {
        if den > 0.0 {
            num / den
        } else {
            zero_division = true;
            0.0
        }
    };
    for j in 0..k {
        let tp = counts[[j, j]];
        let col_sum = counts.column(j).sum();
        let row_sum = counts.row(j).sum();
        let p = ratio(tp, col_sum);
        let r = ratio(tp, row_sum);
        precision.push(p);
        recall.push(r);
        f1.push(ratio(2.0 * r * p, r + p));
    }
    let accuracy = counts.diag().sum() / total;
    Ok(ClassMetrics {
        accuracy,
        precision,
        recall,
        f1,
        zero_division,
    })
}

/// Mean and sample standard deviation of each metric plus the mean
/// confusion matrix over a set of trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub accuracy: f64,
    pub precision: Vec<f64>,
    pub recall: Vec<f64>,
    pub f1: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateSummary {
    pub mean: MetricsRecord,
    pub sd: MetricsRecord,
    pub mean_confusion: Array2<f64>,
    pub trials: usize,
}

/// One-pass mean/variance accumulator (Welford).
#[derive(Debug, Clone, Default)]
struct Running {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Running {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn sd(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.m2 / (self.n - 1) as f64).sqrt()
        }
    }
}

/// Elementwise mean confusion matrix and mean/sd of every metric.
pub fn aggregate(reports: &[(ConfusionMatrix, ClassMetrics)]) -> Result<AggregateSummary> {
    let Some((first_cm, _)) = reports.first() else {
        return Err(Error::Metrics("cannot aggregate zero trials".into()));
    };
    let k = first_cm.num_classes();
    if reports.iter().any(|(cm, m)| {
        cm.num_classes() != k
            || m.precision.len() != k
            || m.recall.len() != k
            || m.f1.len() != k
    }) {
        return Err(Error::Metrics("mixed class counts across trials".into()));
    }

    let mut acc = Running::default();
    let mut per_class: Vec<[Running; 3]> = (0..k).map(|_| Default::default()).collect();
    let mut mean_confusion = Array2::<f64>::zeros((k, k));
    for (cm, m) in reports {
        acc.push(m.accuracy);
        for j in 0..k {
            per_class[j][0].push(m.precision[j]);
            per_class[j][1].push(m.recall[j]);
            per_class[j][2].push(m.f1[j]);
        }
        mean_confusion += cm.counts();
    }
    mean_confusion /= reports.len() as f64;

    let collect = |f: &dyn Fn(&Running) -> f64| MetricsRecord {
        accuracy: f(&acc),
        precision: per_class.iter().map(|r| f(&r[0])).collect(),
        recall: per_class.iter().map(|r| f(&r[1])).collect(),
        f1: per_class.iter().map(|r| f(&r[2])).collect(),
    };
    Ok(AggregateSummary {
        mean: collect(&|r| r.mean),
        sd: collect(&Running::sd),
        mean_confusion,
        trials: reports.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn perfect_prediction_is_diagonal() {
        let truth = vec![0, 0, 0, 1, 1, 0, 1, 0, 1, 0];
        let cm = confusion(&truth, &truth, 2, EvalScope::AllNodes, &[]).unwrap();
        assert_eq!(cm.counts()[[0, 0]], 6.0);
        assert_eq!(cm.counts()[[1, 1]], 4.0);
        assert_eq!(cm.total(), 10.0);
        let m = class_metrics(&cm).unwrap();
        assert_eq!(m.accuracy, 1.0);
        assert_eq!(m.f1, vec![1.0, 1.0]);
        assert!(!m.zero_division);
    }

    #[test]
    fn hand_counted_fixture() {
        let cm = confusion(&[0, 0, 1], &[0, 1, 1], 2, EvalScope::AllNodes, &[]).unwrap();
        assert_eq!(cm.to_rows(), vec![vec![1.0, 1.0], vec![0.0, 1.0]]);
    }

    #[test]
    fn unlabeled_scope_excludes_labeled_nodes() {
        let truth = vec![0, 0, 1, 1, 0];
        let pred = vec![0, 1, 1, 0, 0];
        let cm = confusion(&truth, &pred, 2, EvalScope::UnlabeledOnly, &[0, 2]).unwrap();
        assert_eq!(cm.total(), 3.0);
        assert_eq!(cm.scope(), EvalScope::UnlabeledOnly);
    }

    #[test]
    fn length_mismatch_is_error() {
        assert!(confusion(&[0, 1], &[0], 2, EvalScope::AllNodes, &[]).is_err());
    }

    #[test]
    fn example_average_matrix_metrics() {
        // real-valued average confusion matrix; minority class in row 0
        let cm = ConfusionMatrix::from_counts(
            array![[30.27, 19.73], [11.62, 938.38]],
            EvalScope::AllNodes,
        )
        .unwrap();
        let m = class_metrics(&cm).unwrap();
        assert!((m.accuracy - 0.96865).abs() < 1e-10);
        assert!((m.recall[0] - 0.6054).abs() < 1e-10);
        assert!((m.precision[0] - 30.27 / 41.89).abs() < 1e-10);
        assert!((m.precision[0] - 0.7226).abs() < 1e-4);
        // within half a point of the reported 96.765 overall accuracy
        assert!((m.accuracy * 100.0 - 96.765).abs() < 0.5);
    }

    #[test]
    fn zero_division_convention() {
        // class 1 never predicted
        let cm = ConfusionMatrix::from_counts(
            array![[5.0, 0.0], [3.0, 0.0]],
            EvalScope::AllNodes,
        )
        .unwrap();
        let m = class_metrics(&cm).unwrap();
        assert_eq!(m.precision[1], 0.0);
        assert_eq!(m.recall[1], 0.0);
        assert_eq!(m.f1[1], 0.0);
        assert!(m.zero_division);
    }

    #[test]
    fn empty_matrix_is_error() {
        let cm =
            ConfusionMatrix::from_counts(Array2::zeros((2, 2)), EvalScope::AllNodes).unwrap();
        assert!(class_metrics(&cm).is_err());
    }

    #[test]
    fn f1_between_min_and_max_of_precision_recall() {
        for tp in 1..6i32 {
            for fp in 0..6 {
                for fn_ in 0..6 {
                    let tn = 4.0;
                    let cm = ConfusionMatrix::from_counts(
                        array![[tp as f64, fn_ as f64], [fp as f64, tn]],
                        EvalScope::AllNodes,
                    )
                    .unwrap();
                    let m = class_metrics(&cm).unwrap();
                    let (p, r) = (m.precision[0], m.recall[0]);
                    if p > 0.0 && r > 0.0 {
                        assert!(m.f1[0] >= p.min(r) - 1e-12);
                        assert!(m.f1[0] <= p.max(r) + 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn aggregate_single_trial_equals_trial_and_sd_zero() {
        let cm = confusion(&[0, 1, 1], &[0, 1, 0], 2, EvalScope::AllNodes, &[]).unwrap();
        let m = class_metrics(&cm).unwrap();
        let agg = aggregate(&[(cm.clone(), m.clone())]).unwrap();
        assert_eq!(agg.mean.accuracy, m.accuracy);
        assert_eq!(agg.sd.accuracy, 0.0);
        assert_eq!(agg.mean_confusion, *cm.counts());
    }

    #[test]
    fn aggregate_mean_and_sample_sd() {
        // accuracies 0.9 and 1.0 -> mean 0.95, sd ~ 0.0707
        let cm1 = confusion(
            &[0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
            &[0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
            2,
            EvalScope::AllNodes,
            &[],
        )
        .unwrap();
        let cm2 = confusion(
            &[0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
            &[0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
            2,
            EvalScope::AllNodes,
            &[],
        )
        .unwrap();
        let m1 = class_metrics(&cm1).unwrap();
        let m2 = class_metrics(&cm2).unwrap();
        assert_eq!(m1.accuracy, 0.9);
        assert_eq!(m2.accuracy, 1.0);
        let agg = aggregate(&[(cm1, m1), (cm2, m2)]).unwrap();
        assert!((agg.mean.accuracy - 0.95).abs() < 1e-12);
        assert!((agg.sd.accuracy - 0.0707).abs() < 1e-3);
    }

    #[test]
    fn aggregate_identical_trials_zero_sd() {
        let cm = confusion(&[0, 1], &[0, 1], 2, EvalScope::AllNodes, &[]).unwrap();
        let m = class_metrics(&cm).unwrap();
        let reports: Vec<_> = (0..100).map(|_| (cm.clone(), m.clone())).collect();
        let agg = aggregate(&reports).unwrap();
        assert_eq!(agg.sd.accuracy, 0.0);
        assert_eq!(agg.trials, 100);
    }

    #[test]
    fn aggregate_rejects_mixed_k() {
        let cm2 = confusion(&[0, 1], &[0, 1], 2, EvalScope::AllNodes, &[]).unwrap();
        let cm3 = confusion(&[0, 1, 2], &[0, 1, 2], 3, EvalScope::AllNodes, &[]).unwrap();
        let m2 = class_metrics(&cm2).unwrap();
        let m3 = class_metrics(&cm3).unwrap();
        assert!(aggregate(&[(cm2, m2), (cm3, m3)]).is_err());
    }

    #[test]
    fn micro_consistency_binary_accuracy() {
        let truth = vec![0, 1, 0, 1, 1, 0, 0, 1, 1, 1, 0];
        let pred = vec![0, 0, 1, 1, 1, 0, 1, 1, 0, 1, 0];
        let cm = confusion(&truth, &pred, 2, EvalScope::AllNodes, &[]).unwrap();
        let m = class_metrics(&cm).unwrap();
        let direct = truth
            .iter()
            .zip(&pred)
            .filter(|(t, p)| t == p)
            .count() as f64
            / truth.len() as f64;
        assert_eq!(m.accuracy, direct);
    }

    #[test]
    fn permutation_symmetry_on_small_matrices() {
        // swapping the two classes permutes the per-class metrics and
        // leaves accuracy unchanged, exhaustively for entries <= 5
        for a in 0..=5i32 {
            for b in 0..=5i32 {
                for c in 0..=5i32 {
                    for d in 0..=5i32 {
                        if a + b + c + d == 0 {
                            continue;
                        }
                        let cm = ConfusionMatrix::from_counts(
                            array![[a as f64, b as f64], [c as f64, d as f64]],
                            EvalScope::AllNodes,
                        )
                        .unwrap();
                        let swapped = ConfusionMatrix::from_counts(
                            array![[d as f64, c as f64], [b as f64, a as f64]],
                            EvalScope::AllNodes,
                        )
                        .unwrap();
                        let m = class_metrics(&cm).unwrap();
                        let s = class_metrics(&swapped).unwrap();
                        assert_eq!(m.accuracy, s.accuracy);
                        assert_eq!(m.precision[0], s.precision[1]);
                        assert_eq!(m.recall[0], s.recall[1]);
                        assert_eq!(m.f1[0], s.f1[1]);
                    }
                }
            }
        }
    }
}
