//! Graph-based semi-supervised classification at very low label rates.
//!
//! The crate builds sparse affinity graphs over point clouds, propagates a
//! handful of labels to every node with one of five solvers, and wraps the
//! whole pipeline in a repeated-trial benchmark harness with
//! imbalance-robust metrics.
//!
//! Solvers:
//!
//! | name      | update | labels |
//! |-----------|--------|--------|
//! | `grf`     | harmonic extension, block solve of the random-walk system | one-hot, any k |
//! | `mgrf`    | `U ← α S U + (1−α) D^{-1/2} B` | binary ±1 |
//! | `igrf`    | `U ← (α₁ S − α₂ G + α₃ I) U + (1−α₁) D^{-1/2} B` | binary ±1 |
//! | `poisson` | `U ← U + D^{-1}(B − L U)` | one-hot, any k |
//! | `ipl`     | `U ← (P − α₁ Q + α₂ I) U + α₃ D^{-1} B` | one-hot, any k |
//!
//! `S = D^{-1/2} W D^{-1/2}`, `P = D^{-1} W`, `L = D − W`; `Q` and `G` are
//! the rank-one operators whose rows are the stationary distributions of
//! `P` and `S` respectively, and `B` is the zero-sum source built from the
//! labeled nodes.
//!
//! A quick end-to-end run:
//!
//! ```
//! use labelprop::datasets::{two_moons, sample_labels, SamplingPlan};
//! use labelprop::graph::{build_knn_graph, operators, Bandwidth};
//! use labelprop::propagation::{poisson_learning, SolverConfig};
//!
//! let data = two_moons(100, 100, 0.1, 7).unwrap();
//! let graph = build_knn_graph(&data.cloud, 8, Bandwidth::LocalScaling).unwrap();
//! let ops = operators(graph).unwrap();
//! let split = sample_labels(&data, &SamplingPlan::PerClass(3), 7).unwrap();
//! let result = poisson_learning(&ops, &split.labels, &SolverConfig::default()).unwrap();
//! assert_eq!(result.predictions.len(), 200);
//! ```

pub mod datasets;
pub mod error;
pub mod graph;
pub mod harness;
pub mod labels;
pub mod metrics;
pub mod propagation;
mod sparse;

pub use error::{Error, Result};
pub use graph::{GraphOperators, PointCloud, WeightedGraph};
pub use labels::{LabelSet, SourceVector};
pub use metrics::{ClassMetrics, ConfusionMatrix, EvalScope};
pub use propagation::{PropagationResult, SolverConfig};

/// Version string embedded in report provenance.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
