//! Repeated-trial experiments: dataset → graph → split → solver → metrics,
//! with parameter sweeps and report/plot emission.
//!
//! Every run is a pure function of its [`ExperimentConfig`]: trial `t`
//! derives its seed from `base_seed + t`, synthetic clouds are regenerated
//! per trial while file datasets keep one shared graph, and reports are
//! byte-identical across runs and parallelism settings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::datasets::{
    features_from_csv_embedding, load_csv, sample_labels, two_circles, two_moons, CsvFormat,
    LabelColumn, LabeledDataset, SamplingPlan,
};
use crate::error::{Error, Result};
use crate::graph::{
    build_full_graph_with_floor, build_knn_graph, operators, Bandwidth, GraphOperators,
};
use crate::metrics::{
    aggregate, class_metrics, confusion, ClassMetrics, ConfusionMatrix, EvalScope, MetricsRecord,
};
use crate::propagation::{
    grf_closed_form, igrf_with_center, ipl, mgrf, poisson_learning, PiKind, SolverConfig,
};

/// Salt separating the label-sampling RNG stream from the data stream of
/// the same trial.
const LABEL_SEED_SALT: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DatasetSpec {
    TwoMoons {
        n_major: usize,
        n_minor: usize,
        noise: f64,
    },
    TwoCircles {
        n_major: usize,
        n_minor: usize,
        noise: f64,
        radius_ratio: f64,
    },
    Csv {
        path: String,
        label_column: LabelColumn,
        #[serde(default = "default_delimiter")]
        delimiter: char,
        #[serde(default = "default_standardize")]
        standardize: bool,
    },
    EmbeddingCsv {
        path: String,
    },
}

fn default_delimiter() -> char {
    ','
}

fn default_standardize() -> bool {
    true
}

impl DatasetSpec {
    /// File-backed datasets keep their features (and graph) fixed across
    /// trials; synthetic clouds are regenerated per trial.
    pub fn is_file_backed(&self) -> bool {
        matches!(self, DatasetSpec::Csv { .. } | DatasetSpec::EmbeddingCsv { .. })
    }

    pub fn load(&self, seed: u64) -> Result<LabeledDataset> {
        match self {
            DatasetSpec::TwoMoons {
                n_major,
                n_minor,
                noise,
            } => two_moons(*n_major, *n_minor, *noise, seed),
            DatasetSpec::TwoCircles {
                n_major,
                n_minor,
                noise,
                radius_ratio,
            } => two_circles(*n_major, *n_minor, *noise, *radius_ratio, seed),
            DatasetSpec::Csv {
                path,
                label_column,
                delimiter,
                standardize,
            } => load_csv(
                path,
                label_column,
                &CsvFormat {
                    delimiter: *delimiter as u8,
                    standardize: *standardize,
                },
            ),
            DatasetSpec::EmbeddingCsv { path } => features_from_csv_embedding(path),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum BandwidthSpec {
    LocalScaling,
    Fixed { sigma: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GraphSpec {
    Knn {
        k: usize,
        bandwidth: BandwidthSpec,
    },
    Full {
        sigma: f64,
        #[serde(default = "default_weight_floor")]
        weight_floor: f64,
    },
}

fn default_weight_floor() -> f64 {
    1e-12
}

impl GraphSpec {
    pub fn build(&self, data: &LabeledDataset) -> Result<GraphOperators> {
        let graph = match self {
            GraphSpec::Knn { k, bandwidth } => {
                let bw = match bandwidth {
                    BandwidthSpec::LocalScaling => Bandwidth::LocalScaling,
                    BandwidthSpec::Fixed { sigma } => Bandwidth::Fixed(*sigma),
                };
                build_knn_graph(&data.cloud, *k, bw)?
            }
            GraphSpec::Full {
                sigma,
                weight_floor,
            } => build_full_graph_with_floor(&data.cloud, *sigma, *weight_floor)?,
        };
        operators(graph)
    }
}

/// Solver names follow the algorithm acronyms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Grf,
    Mgrf,
    Igrf,
    Poisson,
    Ipl,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Grf => "grf",
            Method::Mgrf => "mgrf",
            Method::Igrf => "igrf",
            Method::Poisson => "poisson",
            Method::Ipl => "ipl",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "grf" => Ok(Method::Grf),
            "mgrf" => Ok(Method::Mgrf),
            "igrf" => Ok(Method::Igrf),
            "poisson" => Ok(Method::Poisson),
            "ipl" => Ok(Method::Ipl),
            other => Err(Error::InvalidParameter(format!(
                "unknown solver '{other}' (expected grf, mgrf, igrf, poisson or ipl)"
            ))),
        }
    }

    /// The update rule with the parameter mapping spelled out, recorded in
    /// every report.
    pub fn update_form(self) -> &'static str {
        match self {
            Method::Grf => "harmonic extension: (I - P_uu) U_u = P_ul U_l",
            Method::Mgrf => "U <- alpha1*S*U + (1-alpha1)*D^{-1/2}*B",
            Method::Igrf => "U <- (alpha1*S - alpha2*G + alpha3*I)*U + (1-alpha1)*D^{-1/2}*B",
            Method::Poisson => "U <- U + D^{-1}*(B - L*U)",
            Method::Ipl => "U <- (P - alpha1*Q + alpha2*I)*U + alpha3*D^{-1}*B",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverSpec {
    pub method: Method,
    pub config: SolverConfig,
    /// Stationary vector for the IGRF centering term (ignored elsewhere).
    #[serde(default = "default_pi")]
    pub igrf_center: PiKind,
}

fn default_pi() -> PiKind {
    PiKind::SymNormalized
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dataset: DatasetSpec,
    pub graph: GraphSpec,
    pub solver: SolverSpec,
    pub sampling: SamplingPlan,
    pub trials: usize,
    pub base_seed: u64,
    pub scope: EvalScope,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::InvalidParameter(
                "trials must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Per-trial record kept in the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub trial: usize,
    pub seed: u64,
    pub accuracy: f64,
    pub precision: Vec<f64>,
    pub recall: Vec<f64>,
    pub f1: Vec<f64>,
    pub confusion: Vec<Vec<f64>>,
    pub iterations: usize,
    pub converged: bool,
    pub diverged: bool,
    pub final_residual: f64,
}

/// Aggregated experiment outcome with full provenance; serializing this
/// struct is the report JSON schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub config: ExperimentConfig,
    pub library_version: String,
    pub solver_update_form: String,
    pub class_names: Vec<String>,
    pub minority_class: usize,
    pub per_trial: Vec<TrialReport>,
    pub mean_metrics: MetricsRecord,
    pub sd_metrics: MetricsRecord,
    pub mean_confusion: Vec<Vec<f64>>,
    pub mean_iterations: f64,
    pub diverged_count: usize,
}

impl ExperimentSummary {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Serialize(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Serialize(e.to_string()))
    }
}

fn trial_seed(base: u64, trial: usize) -> u64 {
    base.wrapping_add(trial as u64)
}

struct TrialRun {
    report: TrialReport,
    cm: ConfusionMatrix,
    metrics: ClassMetrics,
}

fn run_trial_inner(
    cfg: &ExperimentConfig,
    trial: usize,
    shared: Option<&(LabeledDataset, GraphOperators)>,
) -> Result<TrialRun> {
    let seed = trial_seed(cfg.base_seed, trial);
    let owned;
    let (data, ops) = match shared {
        Some((data, ops)) => (data, ops),
        None => {
            let data = cfg.dataset.load(seed)?;
            let ops = cfg.graph.build(&data)?;
            owned = (data, ops);
            (&owned.0, &owned.1)
        }
    };

    let split = sample_labels(data, &cfg.sampling, seed ^ LABEL_SEED_SALT)?;
    let labels = &split.labels;
    let solver_cfg = &cfg.solver.config;
    let result = match cfg.solver.method {
        Method::Grf => grf_closed_form(ops, labels, solver_cfg)?,
        Method::Mgrf => mgrf(ops, labels, solver_cfg)?,
        Method::Igrf => igrf_with_center(ops, labels, solver_cfg, cfg.solver.igrf_center)?,
        Method::Poisson => poisson_learning(ops, labels, solver_cfg)?,
        Method::Ipl => ipl(ops, labels, solver_cfg)?,
    };

    let labeled = labels.labeled_indices();
    let cm = confusion(
        &data.truth,
        &result.predictions,
        data.num_classes(),
        cfg.scope,
        &labeled,
    )?;
    let metrics = class_metrics(&cm)?;
    let report = TrialReport {
        trial,
        seed,
        accuracy: metrics.accuracy,
        precision: metrics.precision.clone(),
        recall: metrics.recall.clone(),
        f1: metrics.f1.clone(),
        confusion: cm.to_rows(),
        iterations: result.iterations,
        converged: result.converged,
        diverged: result.diverged,
        final_residual: result.final_residual,
    };
    Ok(TrialRun {
        report,
        cm,
        metrics,
    })
}

/// Run a single trial of an experiment; trial `t` reuses seed
/// `base_seed + t` for data regeneration and a salted stream for label
/// sampling, so the call is deterministic end-to-end.
pub fn run_trial(
    cfg: &ExperimentConfig,
    trial: usize,
) -> Result<(ConfusionMatrix, ClassMetrics, TrialReport)> {
    cfg.validate()?;
    let shared = load_shared(cfg)?;
    let run = run_trial_inner(cfg, trial, shared.as_ref())?;
    Ok((run.cm, run.metrics, run.report))
}

fn load_shared(cfg: &ExperimentConfig) -> Result<Option<(LabeledDataset, GraphOperators)>> {
    if cfg.dataset.is_file_backed() {
        let data = cfg.dataset.load(cfg.base_seed)?;
        let ops = cfg.graph.build(&data)?;
        Ok(Some((data, ops)))
    } else {
        Ok(None)
    }
}

/// Run all trials (optionally across `jobs` worker threads — the summary
/// is identical either way) and aggregate. Diverged trials stay in
/// `per_trial` but are excluded from the metric means.
pub fn run_experiment(cfg: &ExperimentConfig, jobs: usize) -> Result<ExperimentSummary> {
    cfg.validate()?;
    let shared = load_shared(cfg)?;

    let runs: Vec<TrialRun> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
        pool.install(|| {
            use rayon::prelude::*;
            (0..cfg.trials)
                .into_par_iter()
                .map(|t| run_trial_inner(cfg, t, shared.as_ref()))
                .collect::<Result<Vec<_>>>()
        })?
    } else {
        (0..cfg.trials)
            .map(|t| run_trial_inner(cfg, t, shared.as_ref()))
            .collect::<Result<Vec<_>>>()?
    };

    // dataset metadata comes from the shared data or a trial-0 rebuild
    let meta = match &shared {
        Some((data, _)) => data.clone(),
        None => cfg.dataset.load(trial_seed(cfg.base_seed, 0))?,
    };

    let kept: Vec<(ConfusionMatrix, ClassMetrics)> = runs
        .iter()
        .filter(|r| !r.report.diverged)
        .map(|r| (r.cm.clone(), r.metrics.clone()))
        .collect();
    if kept.is_empty() {
        return Err(Error::AllTrialsDiverged(cfg.trials));
    }
    let agg = aggregate(&kept)?;
    let diverged_count = runs.len() - kept.len();
    let mean_iterations =
        runs.iter().map(|r| r.report.iterations as f64).sum::<f64>() / runs.len() as f64;

    Ok(ExperimentSummary {
        config: cfg.clone(),
        library_version: crate::VERSION.to_string(),
        solver_update_form: format!(
            "{}{}",
            cfg.solver.method.update_form(),
            match cfg.solver.method {
                Method::Igrf => match cfg.solver.igrf_center {
                    PiKind::SymNormalized => " with G rows = stationary vector of S",
                    PiKind::RandomWalk => " with G rows = stationary vector of P",
                },
                _ => "",
            }
        ),
        class_names: meta.class_names.clone(),
        minority_class: meta.minority_class(),
        per_trial: runs.into_iter().map(|r| r.report).collect(),
        mean_metrics: agg.mean,
        sd_metrics: agg.sd,
        mean_confusion: agg
            .mean_confusion
            .rows()
            .into_iter()
            .map(|r| r.to_vec())
            .collect(),
        mean_iterations,
        diverged_count,
    })
}

/// One evaluated grid point of a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub assignment: BTreeMap<String, f64>,
    pub summary: Option<ExperimentSummary>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
    /// Index of the best summary by mean accuracy; ties go to the first
    /// point in grid order.
    pub best: usize,
}

fn apply_param(cfg: &mut ExperimentConfig, name: &str, value: f64) -> Result<()> {
    let integral = |v: f64, name: &str| -> Result<usize> {
        if v.fract() != 0.0 || v < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "{name} must be a nonnegative integer, got {v}"
            )));
        }
        Ok(v as usize)
    };
    match name {
        "alpha1" => cfg.solver.config.alpha1 = value,
        "alpha2" => cfg.solver.config.alpha2 = value,
        "alpha3" => cfg.solver.config.alpha3 = value,
        "tolerance" => cfg.solver.config.tolerance = value,
        "max_iterations" => cfg.solver.config.max_iterations = integral(value, name)?,
        "labels_per_class" => cfg.sampling = SamplingPlan::PerClass(integral(value, name)?),
        "k" => match &mut cfg.graph {
            GraphSpec::Knn { k, .. } => *k = integral(value, name)?,
            GraphSpec::Full { .. } => {
                return Err(Error::InvalidParameter(
                    "parameter 'k' applies to knn graphs only".into(),
                ))
            }
        },
        "sigma" => match &mut cfg.graph {
            GraphSpec::Knn { bandwidth, .. } => *bandwidth = BandwidthSpec::Fixed { sigma: value },
            GraphSpec::Full { sigma, .. } => *sigma = value,
        },
        "noise" => match &mut cfg.dataset {
            DatasetSpec::TwoMoons { noise, .. } | DatasetSpec::TwoCircles { noise, .. } => {
                *noise = value
            }
            _ => {
                return Err(Error::InvalidParameter(
                    "parameter 'noise' applies to synthetic datasets only".into(),
                ))
            }
        },
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown sweep parameter '{other}'"
            )))
        }
    }
    Ok(())
}

/// Evaluate the Cartesian product of the grid in deterministic
/// lexicographic order (keys sorted, values in listed order).
pub fn sweep(
    cfg: &ExperimentConfig,
    grid: &BTreeMap<String, Vec<f64>>,
    cap: usize,
    jobs: usize,
) -> Result<SweepResult> {
    if grid.is_empty() || grid.values().any(Vec::is_empty) {
        return Err(Error::InvalidParameter(
            "sweep grid must list at least one value per parameter".into(),
        ));
    }
    let total: usize = grid.values().map(Vec::len).product();
    if total > cap {
        return Err(Error::GridTooLarge { points: total, cap });
    }

    let keys: Vec<&String> = grid.keys().collect();
    let sizes: Vec<usize> = keys.iter().map(|k| grid[*k].len()).collect();
    let mut points = Vec::with_capacity(total);
    let mut odometer = vec![0usize; keys.len()];
    for _ in 0..total {
        let assignment: BTreeMap<String, f64> = keys
            .iter()
            .zip(&odometer)
            .map(|(k, &i)| ((*k).clone(), grid[*k][i]))
            .collect();
        let mut point_cfg = cfg.clone();
        let applied: Result<()> = assignment
            .iter()
            .try_for_each(|(k, &v)| apply_param(&mut point_cfg, k, v));
        let point = match applied.and_then(|()| run_experiment(&point_cfg, jobs)) {
            Ok(summary) => SweepPoint {
                assignment,
                summary: Some(summary),
                error: None,
            },
            Err(e) => SweepPoint {
                assignment,
                summary: None,
                error: Some(e.to_string()),
            },
        };
        points.push(point);

        // advance the last key fastest
        for pos in (0..odometer.len()).rev() {
            odometer[pos] += 1;
            if odometer[pos] < sizes[pos] {
                break;
            }
            odometer[pos] = 0;
        }
    }

    let mut best: Option<usize> = None;
    for (i, p) in points.iter().enumerate() {
        if let Some(s) = &p.summary {
            let better = match best {
                None => true,
                Some(b) => {
                    s.mean_metrics.accuracy
                        > points[b].summary.as_ref().unwrap().mean_metrics.accuracy
                }
            };
            if better {
                best = Some(i);
            }
        }
    }
    let best = best.ok_or(Error::AllTrialsDiverged(total))?;
    Ok(SweepResult { points, best })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    TableText,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "table" | "table-text" => Ok(ReportFormat::TableText),
            other => Err(Error::InvalidParameter(format!(
                "unknown report format '{other}' (expected json, csv or table)"
            ))),
        }
    }
}

pub fn render_report(summary: &ExperimentSummary, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => summary.to_json(),
        ReportFormat::Csv => Ok(render_csv(summary)),
        ReportFormat::TableText => Ok(render_table(summary)),
    }
}

/// Render and write a report file.
pub fn emit_report(
    summary: &ExperimentSummary,
    format: ReportFormat,
    path: impl AsRef<Path>,
) -> Result<()> {
    let content = render_report(summary, format)?;
    std::fs::write(path, content)?;
    Ok(())
}

fn render_csv(summary: &ExperimentSummary) -> String {
    let names = &summary.class_names;
    let mut header = vec!["trial".to_string(), "seed".into(), "accuracy".into()];
    for kind in ["precision", "recall", "f1"] {
        for name in names {
            header.push(format!("{kind}_{name}"));
        }
    }
    header.extend(["iterations".into(), "converged".into(), "diverged".into()]);
    let mut out = header.join(",");
    out.push('\n');
    for t in &summary.per_trial {
        let mut row = vec![t.trial.to_string(), t.seed.to_string(), t.accuracy.to_string()];
        for values in [&t.precision, &t.recall, &t.f1] {
            row.extend(values.iter().map(f64::to_string));
        }
        row.push(t.iterations.to_string());
        row.push(t.converged.to_string());
        row.push(t.diverged.to_string());
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn render_table(summary: &ExperimentSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "experiment report (labelprop {})", summary.library_version);
    let _ = writeln!(out, "update form: {}", summary.solver_update_form);
    let _ = writeln!(out, "config:");
    let cfg = serde_json::to_string(&summary.config).unwrap_or_default();
    let _ = writeln!(out, "  {cfg}");
    let _ = writeln!(
        out,
        "trials: {} (diverged and excluded from means: {})",
        summary.per_trial.len(),
        summary.diverged_count
    );
    let _ = writeln!(out, "mean iterations: {:.1}", summary.mean_iterations);
    out.push('\n');

    let mean = &summary.mean_metrics;
    let sd = &summary.sd_metrics;
    if summary.class_names.len() == 2 {
        let min = summary.minority_class;
        let maj = 1 - min;
        let _ = writeln!(
            out,
            "{:>10} {:>8} {:>8} {:>11} {:>11} {:>14} {:>14}",
            "Accuracy", "F1 min", "F1 maj", "Recall min", "Recall maj", "Precision min",
            "Precision maj"
        );
        let _ = writeln!(
            out,
            "{:>10.4} {:>8.4} {:>8.4} {:>11.4} {:>11.4} {:>14.4} {:>14.4}",
            mean.accuracy,
            mean.f1[min],
            mean.f1[maj],
            mean.recall[min],
            mean.recall[maj],
            mean.precision[min],
            mean.precision[maj]
        );
        let _ = writeln!(
            out,
            "{:>10.4} {:>8.4} {:>8.4} {:>11.4} {:>11.4} {:>14.4} {:>14.4}  (sd)",
            sd.accuracy,
            sd.f1[min],
            sd.f1[maj],
            sd.recall[min],
            sd.recall[maj],
            sd.precision[min],
            sd.precision[maj]
        );
    } else {
        let _ = writeln!(out, "accuracy: {:.4} (sd {:.4})", mean.accuracy, sd.accuracy);
        let _ = writeln!(
            out,
            "{:>12} {:>10} {:>10} {:>10}",
            "class", "precision", "recall", "f1"
        );
        for (j, name) in summary.class_names.iter().enumerate() {
            let _ = writeln!(
                out,
                "{:>12} {:>10.4} {:>10.4} {:>10.4}",
                name, mean.precision[j], mean.recall[j], mean.f1[j]
            );
        }
    }
    out.push('\n');
    let _ = writeln!(out, "mean confusion matrix (rows = truth):");
    for row in &summary.mean_confusion {
        let cells: Vec<String> = row.iter().map(|c| format!("{c:>10.2}")).collect();
        let _ = writeln!(out, "  [{}]", cells.join(" "));
    }
    out
}

/// Render a Table-1-style text block for a sweep: one column per grid
/// point of a single swept parameter, mean accuracy per cell.
pub fn render_sweep_table(result: &SweepResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "sweep over {} points", result.points.len());
    for (i, p) in result.points.iter().enumerate() {
        let assign: Vec<String> = p
            .assignment
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        let marker = if i == result.best { " <- best" } else { "" };
        match (&p.summary, &p.error) {
            (Some(s), _) => {
                let _ = writeln!(
                    out,
                    "  {}: mean accuracy {:.4} (sd {:.4}){marker}",
                    assign.join(", "),
                    s.mean_metrics.accuracy,
                    s.sd_metrics.accuracy
                );
            }
            (None, Some(e)) => {
                let _ = writeln!(out, "  {}: failed: {e}", assign.join(", "));
            }
            _ => {}
        }
    }
    out
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

/// Write a self-contained SVG scatter of a 2-d dataset colored by
/// prediction (labeled nodes get a black outline) plus a companion CSV
/// `(x, y, truth, prediction, is_labeled)` next to it.
pub fn emit_scatter(
    data: &LabeledDataset,
    predictions: &[usize],
    labeled: &[usize],
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    if data.cloud.dim() != 2 {
        return Err(Error::InvalidParameter(format!(
            "scatter plots need 2-d points, got d={}; project the features externally",
            data.cloud.dim()
        )));
    }
    if predictions.len() != data.n() {
        return Err(Error::InvalidParameter(format!(
            "{} predictions for {} points",
            predictions.len(),
            data.n()
        )));
    }

    let coords = data.cloud.coords();
    let (mut xmin, mut xmax) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY);
    for row in coords.rows() {
        xmin = xmin.min(row[0]);
        xmax = xmax.max(row[0]);
        ymin = ymin.min(row[1]);
        ymax = ymax.max(row[1]);
    }
    let pad_x = ((xmax - xmin) * 0.05).max(1e-9);
    let pad_y = ((ymax - ymin) * 0.05).max(1e-9);
    xmin -= pad_x;
    xmax += pad_x;
    ymin -= pad_y;
    ymax += pad_y;
    let (w, h) = (640.0, 480.0);
    let to_screen = |x: f64, y: f64| {
        let sx = (x - xmin) / (xmax - xmin) * w;
        let sy = h - (y - ymin) / (ymax - ymin) * h;
        (sx, sy)
    };

    let mut is_labeled = vec![false; data.n()];
    for &i in labeled {
        if i < is_labeled.len() {
            is_labeled[i] = true;
        }
    }

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    let _ = writeln!(svg, "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>");
    for i in 0..data.n() {
        let (sx, sy) = to_screen(coords[[i, 0]], coords[[i, 1]]);
        let color = PALETTE[predictions[i] % PALETTE.len()];
        if is_labeled[i] {
            let _ = writeln!(
                svg,
                "<circle class=\"pt\" cx=\"{sx:.2}\" cy=\"{sy:.2}\" r=\"6\" fill=\"{color}\" stroke=\"black\" stroke-width=\"1.5\"/>"
            );
        } else {
            let _ = writeln!(
                svg,
                "<circle class=\"pt\" cx=\"{sx:.2}\" cy=\"{sy:.2}\" r=\"3\" fill=\"{color}\"/>"
            );
        }
    }
    let _ = writeln!(svg, "<g id=\"legend\">");
    for (j, name) in data.class_names.iter().enumerate() {
        let y = 20.0 + 18.0 * j as f64;
        let color = PALETTE[j % PALETTE.len()];
        let _ = writeln!(
            svg,
            "<circle cx=\"16\" cy=\"{y:.2}\" r=\"5\" fill=\"{color}\"/><text x=\"28\" y=\"{:.2}\" font-size=\"12\" font-family=\"sans-serif\">class {name}</text>",
            y + 4.0
        );
    }
    let _ = writeln!(svg, "</g>");
    let _ = writeln!(svg, "</svg>");
    std::fs::write(path, &svg)?;

    let mut csv = String::from("x,y,truth,prediction,is_labeled\n");
    for i in 0..data.n() {
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            coords[[i, 0]],
            coords[[i, 1]],
            data.truth[i],
            predictions[i],
            is_labeled[i]
        );
    }
    std::fs::write(path.with_extension("csv"), csv)?;
    Ok(())
}
