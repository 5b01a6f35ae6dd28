//! Compressed-row storage for the affinity matrix.
//!
//! Column indices are sorted within each row; duplicate triplets are merged
//! by taking the maximum, which is also how directed KNN edges are
//! symmetrized.

use ndarray::Array2;

#[derive(Debug, Clone)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<u32>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Build a square CSR matrix from (row, col, value) triplets, merging
    /// duplicates with `max` and dropping explicit zeros.
    pub fn from_triplets_max(n: usize, mut triplets: Vec<(u32, u32, f64)>) -> Self {
        triplets.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

        let mut merged: Vec<(u32, u32, f64)> = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => {
                    if v > last.2 {
                        last.2 = v;
                    }
                }
                _ => merged.push((r, c, v)),
            }
        }

        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(merged.len());
        let mut values = Vec::with_capacity(merged.len());
        let mut cur_row = 0usize;
        for (r, c, v) in merged {
            if v == 0.0 {
                continue;
            }
            let r = r as usize;
            while cur_row <= r {
                row_ptr[cur_row] = col_idx.len();
                cur_row += 1;
            }
            col_idx.push(c);
            values.push(v);
        }
        while cur_row <= n {
            row_ptr[cur_row] = col_idx.len();
            cur_row += 1;
        }

        Self {
            n,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> (&[u32], &[f64]) {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[span.clone()], &self.values[span])
    }

    /// Entry lookup by binary search within the row.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&(j as u32)) {
            Ok(pos) => vals[pos],
            Err(_) => 0.0,
        }
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).1.iter().sum())
            .collect()
    }

    /// Dense product `W · U` for a standard-layout `n×k` matrix.
    pub fn apply(&self, u: &Array2<f64>) -> Array2<f64> {
        let k = u.ncols();
        assert_eq!(u.nrows(), self.n);
        let us = u.as_slice().expect("scores must be standard layout");
        let mut out = Array2::<f64>::zeros((self.n, k));
        let os = out.as_slice_mut().unwrap();
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            let orow = &mut os[i * k..(i + 1) * k];
            for (&j, &w) in cols.iter().zip(vals) {
                let urow = &us[j as usize * k..(j as usize + 1) * k];
                for (o, &x) in orow.iter_mut().zip(urow) {
                    *o += w * x;
                }
            }
        }
        out
    }

    #[cfg(test)]
    pub fn is_symmetric(&self) -> bool {
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            for (&j, &w) in cols.iter().zip(vals) {
                if self.get(j as usize, i) != w {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_dense(&self) -> Array2<f64> {
        let mut out = Array2::<f64>::zeros((self.n, self.n));
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            for (&j, &w) in cols.iter().zip(vals) {
                out[[i, j as usize]] = w;
            }
        }
        out
    }
}
