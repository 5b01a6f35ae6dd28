//! The five label-propagation solvers, expressed as fixed-point iterations
//! over [`GraphOperators`](crate::graph::GraphOperators).
//!
//! Binary solvers (`mgrf`, `igrf`) carry one score column and decode by
//! sign; multiclass solvers (`grf_closed_form`, `poisson_learning`, `ipl`)
//! carry `n×k` scores and decode by per-row argmax with ties to the lowest
//! class index.

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::GraphOperators;
use crate::labels::{build_source_vector, LabelSet, SourceMode};

/// Consecutive residual increases tolerated before a run is declared
/// divergent and the minimum-residual iterate returned.
const DIVERGENCE_WINDOW: usize = 25;

/// Iteration parameters shared by all solvers.
///
/// `alpha1` is the single `α` of MGRF; IGRF and IPL read all three in the
/// order of their update rules (`alpha1` on the rank-one term for IPL,
/// `alpha2` on the identity shift, `alpha3` on the source).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    /// Stopping threshold on the Frobenius norm of successive iterates.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Optional class priors `b`; when present, Poisson scores are
    /// rescaled by `diag(b/ȳ)` before decoding.
    pub class_priors: Option<Vec<f64>>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            alpha1: 0.9,
            alpha2: 0.0,
            alpha3: 0.0,
            tolerance: 1e-8,
            max_iterations: 1500,
            class_priors: None,
        }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.max_iterations < 1 {
            return Err(Error::InvalidParameter(
                "max_iterations must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Which stationary vector centers the IGRF rank-one term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PiKind {
    /// Left eigenvector of `S` at eigenvalue 1 (`∝ √dᵢ`).
    SymNormalized,
    /// Stationary distribution of `P` (`dᵢ/d`).
    RandomWalk,
}

/// Final scores and decoded classes of one solver run.
#[derive(Debug, Clone)]
pub struct PropagationResult {
    /// `n×1` (binary) or `n×k` (multiclass) score matrix.
    pub scores: Array2<f64>,
    /// Decoded class per node, dense `0..k` indices.
    pub predictions: Vec<usize>,
    pub iterations: usize,
    pub converged: bool,
    pub diverged: bool,
    pub final_residual: f64,
    pub residual_history: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeMode {
    /// Score ≥ 0 decodes to class 0 (the `+1` class), otherwise class 1.
    Sign,
    /// Lowest index among the maximal entries of each row.
    Argmax,
}

pub fn decode(scores: &Array2<f64>, mode: DecodeMode) -> Vec<usize> {
    match mode {
        DecodeMode::Sign => scores
            .column(0)
            .iter()
            .map(|&s| if s >= 0.0 { 0 } else { 1 })
            .collect(),
        DecodeMode::Argmax => scores
            .rows()
            .into_iter()
            .map(|row| {
                let mut best = 0;
                let mut best_val = row[0];
                for (j, &v) in row.iter().enumerate().skip(1) {
                    if v > best_val {
                        best = j;
                        best_val = v;
                    }
                }
                best
            })
            .collect(),
    }
}

struct IterationOutcome {
    scores: Array2<f64>,
    iterations: usize,
    converged: bool,
    diverged: bool,
    final_residual: f64,
    residual_history: Vec<f64>,
}

fn frobenius_diff(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Drive `u ← step(u)` until the successive-iterate norm falls below
/// `tol`, the iteration cap is reached, or (when `guard` is set) the
/// residual grows for [`DIVERGENCE_WINDOW`] consecutive steps.
fn run_fixed_point(
    u0: Array2<f64>,
    tol: f64,
    max_iterations: usize,
    guard: bool,
    step: impl Fn(&Array2<f64>) -> Array2<f64>,
) -> IterationOutcome {
    let mut u = u0;
    let mut history = Vec::new();
    let mut best: Option<(f64, Array2<f64>)> = None;
    let mut growth_streak = 0usize;

    for m in 1..=max_iterations {
        let next = step(&u);
        let r = frobenius_diff(&next, &u);
        history.push(r);

        if guard {
            let improved = best.as_ref().map_or(true, |(br, _)| r < *br);
            if improved {
                best = Some((r, next.clone()));
            }
            let grew = history.len() >= 2 && r > history[history.len() - 2];
            growth_streak = if grew { growth_streak + 1 } else { 0 };
            if growth_streak >= DIVERGENCE_WINDOW {
                let (br, bu) = best.unwrap();
                return IterationOutcome {
                    scores: bu,
                    iterations: m,
                    converged: false,
                    diverged: true,
                    final_residual: br,
                    residual_history: history,
                };
            }
        }

        u = next;
        if r <= tol {
            return IterationOutcome {
                scores: u,
                iterations: m,
                converged: true,
                diverged: false,
                final_residual: r,
                residual_history: history,
            };
        }
    }

    let final_residual = history.last().copied().unwrap_or(0.0);
    IterationOutcome {
        scores: u,
        iterations: max_iterations,
        converged: false,
        diverged: false,
        final_residual,
        residual_history: history,
    }
}

fn result_from(outcome: IterationOutcome, mode: DecodeMode) -> PropagationResult {
    let predictions = decode(&outcome.scores, mode);
    PropagationResult {
        scores: outcome.scores,
        predictions,
        iterations: outcome.iterations,
        converged: outcome.converged,
        diverged: outcome.diverged,
        final_residual: outcome.final_residual,
        residual_history: outcome.residual_history,
    }
}

/// Harmonic extension of one-hot labels: the unlabeled block solves
/// `(I − P_uu) U_u = P_ul U_l`, labeled rows stay fixed at `Y_l`.
pub fn grf_closed_form(
    ops: &GraphOperators,
    labels: &LabelSet,
    cfg: &SolverConfig,
) -> Result<PropagationResult> {
    cfg.validate()?;
    let n = ops.n();
    let y = labels.one_hot(n)?;
    let labeled = {
        let mut mask = vec![false; n];
        for &(i, _) in labels.entries() {
            mask[i] = true;
        }
        mask
    };

    if labels.len() == n {
        // empty unlabeled block: the labels are the solution
        return Ok(result_from(
            IterationOutcome {
                scores: y,
                iterations: 0,
                converged: true,
                diverged: false,
                final_residual: 0.0,
                residual_history: Vec::new(),
            },
            DecodeMode::Argmax,
        ));
    }

    // Jacobi iteration on the block system, run over full-size matrices:
    // labeled rows are re-pinned after every P application.
    let step = |u: &Array2<f64>| {
        let mut next = ops.apply_random_walk(u);
        for (i, &is_labeled) in labeled.iter().enumerate() {
            if is_labeled {
                next.row_mut(i).assign(&y.row(i));
            }
        }
        next
    };
    let outcome = run_fixed_point(y.clone(), cfg.tolerance, cfg.max_iterations, false, step);
    Ok(result_from(outcome, DecodeMode::Argmax))
}

fn check_unit_interval(name: &str, value: f64, allow_one: bool) -> Result<()> {
    let ok = value > 0.0 && (value < 1.0 || (allow_one && value == 1.0));
    if !ok {
        let range = if allow_one { "(0, 1]" } else { "(0, 1)" };
        return Err(Error::InvalidParameter(format!(
            "{name} must lie in {range}, got {value}"
        )));
    }
    Ok(())
}

fn check_nonnegative(name: &str, value: f64) -> Result<()> {
    if value < 0.0 || !value.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "{name} must be nonnegative, got {value}"
        )));
    }
    Ok(())
}

/// MGRF: `U ← α S U + (1−α) D^{-1/2} B`, initialized at `D⁻¹Y`, decoded by
/// sign. `α` is `cfg.alpha1` and must lie in `(0, 1)`.
pub fn mgrf(ops: &GraphOperators, labels: &LabelSet, cfg: &SolverConfig) -> Result<PropagationResult> {
    cfg.validate()?;
    let alpha = cfg.alpha1;
    check_unit_interval("alpha", alpha, false)?;
    let n = ops.n();
    let y = labels.signed(n)?;
    let source = build_source_vector(labels, n, SourceMode::Binary)?;
    let rhs = ops.scale_inv_sqrt_degree(&source.values) * (1.0 - alpha);
    let u0 = ops.scale_inv_degree(&y);
    let step = |u: &Array2<f64>| ops.apply_sym(u) * alpha + &rhs;
    let outcome = run_fixed_point(u0, cfg.tolerance, cfg.max_iterations, false, step);
    Ok(result_from(outcome, DecodeMode::Sign))
}

/// IGRF with an explicit choice of the stationary vector for the rank-one
/// centering term `G`.
pub fn igrf_with_center(
    ops: &GraphOperators,
    labels: &LabelSet,
    cfg: &SolverConfig,
    center: PiKind,
) -> Result<PropagationResult> {
    cfg.validate()?;
    check_unit_interval("alpha1", cfg.alpha1, true)?;
    check_nonnegative("alpha2", cfg.alpha2)?;
    check_nonnegative("alpha3", cfg.alpha3)?;
    let n = ops.n();
    let y = labels.signed(n)?;
    let source = build_source_vector(labels, n, SourceMode::Binary)?;
    let rhs = ops.scale_inv_sqrt_degree(&source.values) * (1.0 - cfg.alpha1);
    let u0 = ops.scale_inv_degree(&y);
    let pi: Array1<f64> = match center {
        PiKind::SymNormalized => ops.pi_sym().clone(),
        PiKind::RandomWalk => ops.pi_walk().clone(),
    };
    let (a1, a2, a3) = (cfg.alpha1, cfg.alpha2, cfg.alpha3);
    let step = |u: &Array2<f64>| {
        ops.apply_sym(u) * a1 - ops.apply_rank_one(&pi, u) * a2 + u * a3 + &rhs
    };
    let outcome = run_fixed_point(u0, cfg.tolerance, cfg.max_iterations, true, step);
    Ok(result_from(outcome, DecodeMode::Sign))
}

/// IGRF: `U ← (α₁ S − α₂ G + α₃ I) U + (1−α₁) D^{-1/2} B` with `G` the
/// rank-one operator whose rows are the stationary vector of `S`.
/// Spectral divergence is detected at runtime and flagged.
pub fn igrf(ops: &GraphOperators, labels: &LabelSet, cfg: &SolverConfig) -> Result<PropagationResult> {
    igrf_with_center(ops, labels, cfg, PiKind::SymNormalized)
}

/// Poisson learning: `U ← U + D⁻¹(B − L U)` from `U⁰ = 0`, run for
/// `max_iterations` steps or until the step norm falls below `tolerance`.
/// When `class_priors` are supplied the final scores are rescaled by
/// `diag(priors/ȳ)`.
pub fn poisson_learning(
    ops: &GraphOperators,
    labels: &LabelSet,
    cfg: &SolverConfig,
) -> Result<PropagationResult> {
    cfg.validate()?;
    let n = ops.n();
    labels.check_bounds(n)?;
    let k = labels.num_classes();
    let source = build_source_vector(labels, n, SourceMode::Multiclass)?;
    if let Some(priors) = &cfg.class_priors {
        if priors.len() != k {
            return Err(Error::InvalidParameter(format!(
                "class_priors has {} entries for k={k}",
                priors.len()
            )));
        }
        if priors.iter().any(|&p| p <= 0.0) || (priors.iter().sum::<f64>() - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidParameter(
                "class_priors must be positive and sum to 1".into(),
            ));
        }
    }

    let b = &source.values;
    let u0 = Array2::<f64>::zeros((n, k));
    let step = |u: &Array2<f64>| u + &ops.scale_inv_degree(&(b - &ops.apply_laplacian(u)));
    let mut outcome = run_fixed_point(u0, cfg.tolerance, cfg.max_iterations, false, step);

    if let Some(priors) = &cfg.class_priors {
        let ybar = labels.mean_label();
        for (j, mut col) in outcome.scores.columns_mut().into_iter().enumerate() {
            col *= priors[j] / ybar[j];
        }
    }
    Ok(result_from(outcome, DecodeMode::Argmax))
}

/// IPL: `U ← (P − α₁ Q + α₂ I) U + α₃ D⁻¹ B` from `U⁰ = D⁻¹Y`, with `Q`
/// the rank-one operator whose rows are the stationary distribution of
/// `P`. Decoded by per-row argmax; divergence is flagged like IGRF.
pub fn ipl(ops: &GraphOperators, labels: &LabelSet, cfg: &SolverConfig) -> Result<PropagationResult> {
    cfg.validate()?;
    check_unit_interval("alpha1", cfg.alpha1, true)?;
    check_nonnegative("alpha2", cfg.alpha2)?;
    if !(cfg.alpha3 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha3 must be positive, got {}",
            cfg.alpha3
        )));
    }
    let n = ops.n();
    let y = labels.one_hot(n)?;
    let source = build_source_vector(labels, n, SourceMode::Multiclass)?;
    let rhs = ops.scale_inv_degree(&source.values) * cfg.alpha3;
    let u0 = ops.scale_inv_degree(&y);
    let (a1, a2) = (cfg.alpha1, cfg.alpha2);
    let step = |u: &Array2<f64>| {
        ops.apply_random_walk(u) - ops.apply_rank_one(ops.pi_walk(), u) * a1 + u * a2 + &rhs
    };
    let outcome = run_fixed_point(u0, cfg.tolerance, cfg.max_iterations, true, step);
    Ok(result_from(outcome, DecodeMode::Argmax))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{operators, WeightedGraph};
    use ndarray::array;

    fn path3_ops() -> GraphOperators {
        operators(WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap()).unwrap()
    }

    fn binary_path_labels() -> LabelSet {
        LabelSet::new(vec![(0, 0), (2, 1)], 2).unwrap()
    }

    #[test]
    fn decode_tie_rules() {
        let scores = array![[0.0], [-0.1], [0.3]];
        assert_eq!(decode(&scores, DecodeMode::Sign), vec![0, 1, 0]);
        let scores = array![[0.2, 0.2], [0.1, 0.9], [0.9, 0.1]];
        assert_eq!(decode(&scores, DecodeMode::Argmax), vec![0, 1, 0]);
    }

    #[test]
    fn decode_invariant_under_positive_scaling() {
        let scores = array![[0.2, 0.7, -0.3], [1.0, 0.4, 1.0], [-2.0, -1.0, -3.0]];
        let scaled = &scores * 3.7;
        assert_eq!(
            decode(&scores, DecodeMode::Argmax),
            decode(&scaled, DecodeMode::Argmax)
        );
    }

    #[test]
    fn zero_source_has_zero_fixed_point() {
        let ops = path3_ops();
        let alpha = 0.5;
        let u0 = Array2::<f64>::zeros((3, 1));
        let outcome = run_fixed_point(u0, 1e-12, 100, false, |u| ops.apply_sym(u) * alpha);
        assert!(outcome.converged);
        assert_eq!(outcome.iterations, 1);
        assert!(outcome.scores.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn mgrf_rejects_bad_alpha_and_multiclass() {
        let ops = path3_ops();
        let labels = binary_path_labels();
        for alpha in [0.0, 1.0, -0.3, 1.5] {
            let cfg = SolverConfig {
                alpha1: alpha,
                ..Default::default()
            };
            assert!(mgrf(&ops, &labels, &cfg).is_err());
        }
        let multi = LabelSet::new(vec![(0, 0), (1, 1), (2, 2)], 3).unwrap();
        let cfg = SolverConfig {
            alpha1: 0.5,
            ..Default::default()
        };
        assert!(mgrf(&ops, &multi, &cfg).is_err());
    }

    #[test]
    fn mgrf_fixed_point_satisfies_update_map() {
        let ops = path3_ops();
        let labels = binary_path_labels();
        let cfg = SolverConfig {
            alpha1: 0.5,
            tolerance: 1e-12,
            max_iterations: 10_000,
            ..Default::default()
        };
        let res = mgrf(&ops, &labels, &cfg).unwrap();
        assert!(res.converged);
        // substitute U* back into the update map
        let source = build_source_vector(&labels, 3, SourceMode::Binary).unwrap();
        let rhs = ops.scale_inv_sqrt_degree(&source.values) * 0.5;
        let reapplied = ops.apply_sym(&res.scores) * 0.5 + &rhs;
        assert!(frobenius_diff(&reapplied, &res.scores) <= 10.0 * cfg.tolerance);
        // antisymmetric scores on the symmetric path fixture
        assert!(res.scores[[1, 0]].abs() < 1e-9);
        assert_eq!(res.predictions[0], 0);
        assert_eq!(res.predictions[2], 1);
    }

    #[test]
    fn igrf_degenerates_to_mgrf() {
        let ops = path3_ops();
        let labels = binary_path_labels();
        let cfg = SolverConfig {
            alpha1: 0.5,
            alpha2: 0.0,
            alpha3: 0.0,
            tolerance: 1e-12,
            max_iterations: 10_000,
            class_priors: None,
        };
        let a = mgrf(&ops, &labels, &cfg).unwrap();
        let b = igrf(&ops, &labels, &cfg).unwrap();
        assert!(frobenius_diff(&a.scores, &b.scores) <= 1e-12);
        assert_eq!(a.predictions, b.predictions);
    }

    #[test]
    fn igrf_divergence_guard_flags_and_returns_best() {
        let ops = path3_ops();
        let labels = binary_path_labels();
        // alpha1 = 1 with alpha3 = 1 pushes the spectral radius past 1
        let cfg = SolverConfig {
            alpha1: 1.0,
            alpha2: 0.0,
            alpha3: 1.0,
            tolerance: 1e-12,
            max_iterations: 100_000,
            class_priors: None,
        };
        let res = igrf(&ops, &labels, &cfg).unwrap();
        assert!(res.diverged);
        assert!(!res.converged);
        assert!(res.iterations < 100_000);
        assert!(res.scores.iter().all(|x| x.is_finite()));
        let min_hist = res
            .residual_history
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        assert_eq!(res.final_residual, min_hist);
    }

    #[test]
    fn poisson_step_equals_random_walk_form() {
        let ops = path3_ops();
        let labels = binary_path_labels();
        let source = build_source_vector(&labels, 3, SourceMode::Multiclass).unwrap();
        let b = &source.values;
        let u = array![[0.3, -0.2], [1.1, 0.4], [-0.7, 0.9]];
        let literal = &u + &ops.scale_inv_degree(&(b - &ops.apply_laplacian(&u)));
        let walk_form = ops.apply_random_walk(&u) + ops.scale_inv_degree(b);
        assert!(frobenius_diff(&literal, &walk_form) <= 1e-12);
    }

    #[test]
    fn poisson_path_graph_monotone_and_tiebreak() {
        let ops = path3_ops();
        let labels = binary_path_labels();
        let cfg = SolverConfig {
            max_iterations: 500,
            ..Default::default()
        };
        let res = poisson_learning(&ops, &labels, &cfg).unwrap();
        let diff: Vec<f64> = (0..3)
            .map(|i| res.scores[[i, 0]] - res.scores[[i, 1]])
            .collect();
        assert!(diff[0] > diff[1] && diff[1] > diff[2]);
        // node 1 sits symmetric between the labels: tie decodes to class 0
        assert!((res.scores[[1, 0]] - res.scores[[1, 1]]).abs() < 1e-12);
        assert_eq!(res.predictions[1], 0);
    }

    #[test]
    fn poisson_prior_rescaling_changes_decoding_only_when_given() {
        let ops = path3_ops();
        let labels = binary_path_labels();
        let cfg = SolverConfig::default();
        let plain = poisson_learning(&ops, &labels, &cfg).unwrap();
        let with_priors = poisson_learning(
            &ops,
            &labels,
            &SolverConfig {
                class_priors: Some(vec![0.9, 0.1]),
                ..cfg
            },
        )
        .unwrap();
        // node 1 was a tie; boosting class 0 keeps it, boosting class 1 flips it
        assert_eq!(with_priors.predictions[1], 0);
        let flipped = poisson_learning(
            &ops,
            &labels,
            &SolverConfig {
                class_priors: Some(vec![0.1, 0.9]),
                ..SolverConfig::default()
            },
        )
        .unwrap();
        assert_eq!(flipped.predictions[1], 1);
        assert_eq!(plain.predictions[0], 0);
    }

    #[test]
    fn ipl_telescoping_partial_sums() {
        let ops = path3_ops();
        let labels = binary_path_labels();
        let source = build_source_vector(&labels, 3, SourceMode::Multiclass).unwrap();
        let rhs = ops.scale_inv_degree(&source.values); // alpha3 = 1
        // alpha1 = 1, alpha2 = 0, starting from U0 = rhs:
        // U^m = sum_{i<m} (P - Q)^i rhs
        let step = |u: &Array2<f64>| {
            ops.apply_random_walk(u) - ops.apply_rank_one(ops.pi_walk(), u) + &rhs
        };
        let mut u = rhs.clone();
        let mut term = rhs.clone();
        let mut partial = rhs.clone();
        let mut residuals = Vec::new();
        for _ in 0..10 {
            let next = step(&u);
            residuals.push(frobenius_diff(&next, &u));
            u = next;
            term = ops.apply_random_walk(&term) - ops.apply_rank_one(ops.pi_walk(), &term);
            partial = partial + &term;
            assert!(frobenius_diff(&u, &partial) <= 1e-12);
        }
        // geometric decay of the residual
        assert!(residuals.last().unwrap() < &residuals[0]);
        for w in residuals.windows(2) {
            assert!(w[1] <= w[0] + 1e-15);
        }
    }

    #[test]
    fn ipl_rejects_bad_parameters() {
        let ops = path3_ops();
        let labels = binary_path_labels();
        let bad = [
            (0.0, 0.0, 1.0),
            (1.5, 0.0, 1.0),
            (1.0, -0.1, 1.0),
            (1.0, 0.0, 0.0),
        ];
        for (a1, a2, a3) in bad {
            let cfg = SolverConfig {
                alpha1: a1,
                alpha2: a2,
                alpha3: a3,
                ..Default::default()
            };
            assert!(ipl(&ops, &labels, &cfg).is_err(), "{a1} {a2} {a3}");
        }
    }

    #[test]
    fn grf_all_labeled_returns_labels_in_zero_iterations() {
        let ops = path3_ops();
        let labels = LabelSet::new(vec![(0, 0), (1, 1), (2, 0)], 2).unwrap();
        let res = grf_closed_form(&ops, &labels, &SolverConfig::default()).unwrap();
        assert_eq!(res.iterations, 0);
        assert!(res.converged);
        assert_eq!(res.predictions, vec![0, 1, 0]);
        assert_eq!(res.scores[[0, 0]], 1.0);
        assert_eq!(res.scores[[1, 1]], 1.0);
    }

    #[test]
    fn grf_path_graph_midpoint_tie() {
        let ops = path3_ops();
        let labels = binary_path_labels();
        let cfg = SolverConfig {
            tolerance: 1e-13,
            max_iterations: 10_000,
            ..Default::default()
        };
        let res = grf_closed_form(&ops, &labels, &cfg).unwrap();
        // the 1x1 unlabeled system gives the harmonic mean of the neighbors
        assert!((res.scores[[1, 0]] - 0.5).abs() < 1e-10);
        assert!((res.scores[[1, 1]] - 0.5).abs() < 1e-10);
        assert_eq!(res.predictions[1], 0);
        assert_eq!(res.predictions[0], 0);
        assert_eq!(res.predictions[2], 1);
    }

    #[test]
    fn grf_triangle_weight_proportional_average() {
        let g = WeightedGraph::from_edges(3, &[(0, 2, 2.0), (1, 2, 1.0), (0, 1, 0.5)]).unwrap();
        let ops = operators(g).unwrap();
        let labels = LabelSet::new(vec![(0, 0), (1, 1)], 2).unwrap();
        let cfg = SolverConfig {
            tolerance: 1e-13,
            max_iterations: 10_000,
            ..Default::default()
        };
        let res = grf_closed_form(&ops, &labels, &cfg).unwrap();
        // dense solve of the 1x1 system by hand: u2 = (2*y0 + 1*y1)/3
        assert!((res.scores[[2, 0]] - 2.0 / 3.0).abs() < 1e-10);
        assert!((res.scores[[2, 1]] - 1.0 / 3.0).abs() < 1e-10);
        // harmonic at the unlabeled node
        let lu = ops.apply_laplacian(&res.scores);
        assert!(lu[[2, 0]].abs() <= 1e-6 * ops.max_degree());
        assert!(lu[[2, 1]].abs() <= 1e-6 * ops.max_degree());
    }
}
