//! Affinity-graph construction and the operator family every solver runs on.
//!
//! A [`WeightedGraph`] holds the symmetric nonnegative weight matrix `W`
//! (sparse rows for KNN graphs, dense storage for full RBF graphs), the
//! degree vector `d_i = Σ_j w_ij` and the total degree `d`. From a
//! connected graph, [`operators`] derives the random-walk matrix
//! `P = D⁻¹W`, the symmetric normalization `S = D^{-1/2} W D^{-1/2}`, the
//! Laplacian `L = D − W`, and the stationary distributions of `P` and `S`.
//! The rank-one limits (`Q` with rows `π_P`, `G` with rows `π_S`) are never
//! densified; they are applied as `v ↦ 𝟙(πᵀv)`.

use ndarray::{Array1, Array2};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

/// A set of `n` points in `ℝᵈ`, stored row-major.
#[derive(Debug, Clone)]
pub struct PointCloud {
    points: Array2<f64>,
}

impl PointCloud {
    pub fn new(points: Array2<f64>) -> Result<Self> {
        let (n, d) = points.dim();
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "point cloud needs at least 2 points, got {n}"
            )));
        }
        if d < 1 {
            return Err(Error::InvalidParameter(
                "point cloud needs at least one feature dimension".into(),
            ));
        }
        if points.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter(
                "point cloud contains a non-finite coordinate".into(),
            ));
        }
        Ok(Self { points })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let d = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidParameter(
                "point rows have mixed dimensions".into(),
            ));
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        let points = Array2::from_shape_vec((n, d), flat)
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
        Self::new(points)
    }

    pub fn n(&self) -> usize {
        self.points.nrows()
    }

    pub fn dim(&self) -> usize {
        self.points.ncols()
    }

    pub fn coords(&self) -> &Array2<f64> {
        &self.points
    }

    fn sq_dist(&self, i: usize, j: usize) -> f64 {
        let a = self.points.row(i);
        let b = self.points.row(j);
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| (x - y) * (x - y))
            .sum()
    }
}

/// Kernel bandwidth for KNN graphs: one global σ, or per-node local
/// scaling where σᵢ is the distance from `xᵢ` to its k-th neighbor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bandwidth {
    Fixed(f64),
    LocalScaling,
}

#[derive(Debug, Clone)]
enum Storage {
    Sparse(CsrMatrix),
    Dense(Array2<f64>),
}

/// Symmetric nonnegative affinity matrix with cached degrees.
///
/// Invariants: `w_ij = w_ji` exactly, `w_ij ≥ 0`, `w_ii = 0`, and every
/// node has positive degree.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    storage: Storage,
    degrees: Array1<f64>,
    total_degree: f64,
}

impl WeightedGraph {
    fn from_storage(storage: Storage) -> Result<Self> {
        let degrees: Array1<f64> = match &storage {
            Storage::Sparse(m) => Array1::from_vec(m.row_sums()),
            Storage::Dense(w) => w.rows().into_iter().map(|r| r.sum()).collect(),
        };
        if let Some(i) = degrees.iter().position(|&d| d <= 0.0) {
            return Err(Error::IsolatedNode(i));
        }
        let total_degree = degrees.sum();
        Ok(Self {
            storage,
            degrees,
            total_degree,
        })
    }

    /// Wrap a symmetric dense weight matrix, validating the invariants.
    pub fn from_dense(weights: Array2<f64>) -> Result<Self> {
        let (r, c) = weights.dim();
        if r != c {
            return Err(Error::InvalidParameter(format!(
                "weight matrix must be square, got {r}x{c}"
            )));
        }
        for i in 0..r {
            if weights[[i, i]] != 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "nonzero diagonal weight at node {i}"
                )));
            }
            for j in 0..i {
                let w = weights[[i, j]];
                if w < 0.0 || !w.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "invalid weight {w} at ({i},{j})"
                    )));
                }
                if w != weights[[j, i]] {
                    return Err(Error::InvalidParameter(format!(
                        "weight matrix not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Self::from_storage(Storage::Dense(weights))
    }

    /// Build from undirected (i, j, w) triplets; both orientations are
    /// inserted, duplicates merged with max.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut triplets = Vec::with_capacity(edges.len() * 2);
        for &(i, j, w) in edges {
            if i == j {
                return Err(Error::InvalidParameter(format!("self loop at node {i}")));
            }
            if i >= n || j >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({i},{j}) out of range for n={n}"
                )));
            }
            if w < 0.0 || !w.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "invalid weight {w} on edge ({i},{j})"
                )));
            }
            triplets.push((i as u32, j as u32, w));
            triplets.push((j as u32, i as u32, w));
        }
        Self::from_storage(Storage::Sparse(CsrMatrix::from_triplets_max(n, triplets)))
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &Array1<f64> {
        &self.degrees
    }

    pub fn total_degree(&self) -> f64 {
        self.total_degree
    }

    pub fn max_degree(&self) -> f64 {
        self.degrees.iter().cloned().fold(0.0, f64::max)
    }

    /// Number of undirected edges with positive weight.
    pub fn edge_count(&self) -> usize {
        match &self.storage {
            Storage::Sparse(m) => m.nnz() / 2,
            Storage::Dense(w) => w.iter().filter(|&&x| x > 0.0).count() / 2,
        }
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        match &self.storage {
            Storage::Sparse(m) => m.get(i, j),
            Storage::Dense(w) => w[[i, j]],
        }
    }

    /// `W · U` for an `n×k` score matrix.
    pub fn apply(&self, u: &Array2<f64>) -> Array2<f64> {
        match &self.storage {
            Storage::Sparse(m) => m.apply(u),
            Storage::Dense(w) => w.dot(u),
        }
    }

    fn for_each_neighbor(&self, i: usize, mut f: impl FnMut(usize, f64)) {
        match &self.storage {
            Storage::Sparse(m) => {
                let (cols, vals) = m.row(i);
                for (&j, &w) in cols.iter().zip(vals) {
                    f(j as usize, w);
                }
            }
            Storage::Dense(w) => {
                for (j, &x) in w.row(i).iter().enumerate() {
                    if x > 0.0 {
                        f(j, x);
                    }
                }
            }
        }
    }

    /// True iff a traversal from node 0 over positive-weight edges reaches
    /// every node.
    pub fn is_connected(&self) -> bool {
        let n = self.n();
        let mut visited = vec![false; n];
        let mut stack = vec![0usize];
        visited[0] = true;
        let mut seen = 1usize;
        while let Some(i) = stack.pop() {
            self.for_each_neighbor(i, |j, _| {
                if !visited[j] {
                    visited[j] = true;
                    seen += 1;
                    stack.push(j);
                }
            });
        }
        seen == n
    }

    /// Dense copy of the weight matrix (tests and small direct solves).
    pub fn to_dense(&self) -> Array2<f64> {
        match &self.storage {
            Storage::Sparse(m) => m.to_dense(),
            Storage::Dense(w) => w.clone(),
        }
    }
}

/// True iff one traversal from node 0 over positive-weight edges reaches
/// all nodes.
pub fn is_connected(graph: &WeightedGraph) -> bool {
    graph.is_connected()
}

/// Per-node k-nearest-neighbor lists by squared Euclidean distance, ties
/// broken by node index. Returns `(neighbors, kth_distance, min_positive)`.
fn knn_search(cloud: &PointCloud, k: usize) -> (Vec<Vec<(usize, f64)>>, Vec<f64>, Option<f64>) {
    let n = cloud.n();
    let per_node: Vec<(Vec<(usize, f64)>, f64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut cand: Vec<(f64, usize)> = (0..n)
                .filter(|&j| j != i)
                .map(|j| (cloud.sq_dist(i, j), j))
                .collect();
            cand.select_nth_unstable_by(k - 1, |a, b| {
                a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
            });
            cand.truncate(k);
            cand.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let kth = cand[k - 1].0.sqrt();
            let nbrs = cand.into_iter().map(|(d2, j)| (j, d2)).collect();
            (nbrs, kth)
        })
        .collect();

    let mut neighbors = Vec::with_capacity(n);
    let mut kth = Vec::with_capacity(n);
    let mut min_positive: Option<f64> = None;
    for (nbrs, kd) in per_node {
        for &(_, d2) in &nbrs {
            if d2 > 0.0 {
                let d = d2.sqrt();
                min_positive = Some(min_positive.map_or(d, |m: f64| m.min(d)));
            }
        }
        neighbors.push(nbrs);
        kth.push(kd);
    }
    (neighbors, kth, min_positive)
}

/// Gaussian-weighted k-nearest-neighbor graph.
///
/// Each node is connected to its `k` nearest Euclidean neighbors with
/// weight `exp(−‖xᵢ−xⱼ‖² / (2 σᵢ σⱼ))`, where `σᵢ` is the node bandwidth
/// (fixed, or the distance to the k-th neighbor under local scaling).
/// Directed edges are symmetrized by taking the maximum.
pub fn build_knn_graph(cloud: &PointCloud, k: usize, bandwidth: Bandwidth) -> Result<WeightedGraph> {
    let n = cloud.n();
    if k < 1 || k >= n {
        return Err(Error::InvalidParameter(format!(
            "k must satisfy 1 <= k < n, got k={k}, n={n}"
        )));
    }
    if let Bandwidth::Fixed(sigma) = bandwidth {
        if sigma <= 0.0 || !sigma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "fixed bandwidth must be positive, got {sigma}"
            )));
        }
    }

    let (neighbors, kth, min_positive) = knn_search(cloud, k);

    let sigmas: Vec<f64> = match bandwidth {
        Bandwidth::Fixed(sigma) => vec![sigma; n],
        Bandwidth::LocalScaling => {
            // Duplicate points give a zero k-th distance; substitute the
            // smallest positive neighbor distance in the cloud.
            let fallback = min_positive.ok_or_else(|| {
                Error::InvalidParameter(
                    "all points coincide; local scaling bandwidth undefined".into(),
                )
            })?;
            kth.iter()
                .map(|&d| if d > 0.0 { d } else { fallback })
                .collect()
        }
    };

    let mut triplets = Vec::with_capacity(2 * n * k);
    for (i, nbrs) in neighbors.iter().enumerate() {
        for &(j, d2) in nbrs {
            let w = (-d2 / (2.0 * sigmas[i] * sigmas[j])).exp();
            triplets.push((i as u32, j as u32, w));
            triplets.push((j as u32, i as u32, w));
        }
    }
    WeightedGraph::from_storage(Storage::Sparse(CsrMatrix::from_triplets_max(n, triplets)))
}

/// Fully connected Gaussian affinity graph, `w_ij = exp(−‖xᵢ−xⱼ‖²/(2σ²))`,
/// with entries below `weight_floor` dropped.
pub fn build_full_graph_with_floor(
    cloud: &PointCloud,
    sigma: f64,
    weight_floor: f64,
) -> Result<WeightedGraph> {
    if sigma <= 0.0 || !sigma.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    let n = cloud.n();
    let denom = 2.0 * sigma * sigma;
    let mut w = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in (i + 1)..n {
            let v = (-cloud.sq_dist(i, j) / denom).exp();
            if v >= weight_floor {
                w[[i, j]] = v;
                w[[j, i]] = v;
            }
        }
    }
    WeightedGraph::from_storage(Storage::Dense(w))
}

/// [`build_full_graph_with_floor`] with the default floor of `1e-12`.
pub fn build_full_graph(cloud: &PointCloud, sigma: f64) -> Result<WeightedGraph> {
    build_full_graph_with_floor(cloud, sigma, 1e-12)
}

/// The derived operator family of a connected graph.
///
/// `P`, `S` and `L` are exposed as matrix-apply operators; `pi_walk` is the
/// stationary distribution `dᵢ/d` of `P`, and `pi_sym` the left eigenvector
/// of `S` at eigenvalue 1 (`∝ √dᵢ`), normalized to sum 1.
#[derive(Debug, Clone)]
pub struct GraphOperators {
    graph: WeightedGraph,
    inv_degrees: Array1<f64>,
    inv_sqrt_degrees: Array1<f64>,
    pi_walk: Array1<f64>,
    pi_sym: Array1<f64>,
}

/// Derive the operator family, verifying connectivity first (the
/// stationary distribution of a disconnected walk is not unique).
pub fn operators(graph: WeightedGraph) -> Result<GraphOperators> {
    if !graph.is_connected() {
        return Err(Error::NotConnected);
    }
    let inv_degrees = graph.degrees().mapv(|d| 1.0 / d);
    let inv_sqrt_degrees = graph.degrees().mapv(|d| 1.0 / d.sqrt());
    let pi_walk = graph.degrees() / graph.total_degree();
    let sqrt_d = graph.degrees().mapv(f64::sqrt);
    let pi_sym = &sqrt_d / sqrt_d.sum();
    Ok(GraphOperators {
        graph,
        inv_degrees,
        inv_sqrt_degrees,
        pi_walk,
        pi_sym,
    })
}

fn scale_rows(mut u: Array2<f64>, s: &Array1<f64>) -> Array2<f64> {
    for (mut row, &si) in u.rows_mut().into_iter().zip(s.iter()) {
        row *= si;
    }
    u
}

impl GraphOperators {
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn degrees(&self) -> &Array1<f64> {
        self.graph.degrees()
    }

    pub fn max_degree(&self) -> f64 {
        self.graph.max_degree()
    }

    pub fn pi_walk(&self) -> &Array1<f64> {
        &self.pi_walk
    }

    pub fn pi_sym(&self) -> &Array1<f64> {
        &self.pi_sym
    }

    /// `P · U = D⁻¹ W U`.
    pub fn apply_random_walk(&self, u: &Array2<f64>) -> Array2<f64> {
        scale_rows(self.graph.apply(u), &self.inv_degrees)
    }

    /// Left action `vᵀP` returned as a column vector; equals `W (v/d)` by
    /// symmetry of `W`.
    pub fn apply_random_walk_left(&self, v: &Array1<f64>) -> Array1<f64> {
        let scaled = (v * &self.inv_degrees).insert_axis(ndarray::Axis(1));
        self.graph.apply(&scaled).remove_axis(ndarray::Axis(1))
    }

    /// `S · U = D^{-1/2} W D^{-1/2} U`.
    pub fn apply_sym(&self, u: &Array2<f64>) -> Array2<f64> {
        let v = scale_rows(u.clone(), &self.inv_sqrt_degrees);
        scale_rows(self.graph.apply(&v), &self.inv_sqrt_degrees)
    }

    /// `L · U = (D − W) U`.
    pub fn apply_laplacian(&self, u: &Array2<f64>) -> Array2<f64> {
        let wu = self.graph.apply(u);
        scale_rows(u.clone(), self.graph.degrees()) - wu
    }

    /// Rank-one action `𝟙 (πᵀ U)`: every output row is the π-weighted
    /// column sum of `U`.
    pub fn apply_rank_one(&self, pi: &Array1<f64>, u: &Array2<f64>) -> Array2<f64> {
        let r = pi.dot(u);
        let n = u.nrows();
        let mut out = Array2::<f64>::zeros(u.raw_dim());
        for i in 0..n {
            out.row_mut(i).assign(&r);
        }
        out
    }

    /// `D⁻¹ U` (rows scaled by inverse degree).
    pub fn scale_inv_degree(&self, u: &Array2<f64>) -> Array2<f64> {
        scale_rows(u.clone(), &self.inv_degrees)
    }

    /// `D^{-1/2} U`.
    pub fn scale_inv_sqrt_degree(&self, u: &Array2<f64>) -> Array2<f64> {
        scale_rows(u.clone(), &self.inv_sqrt_degrees)
    }
}
