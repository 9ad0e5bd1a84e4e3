use super::DenseMatrix;
use crate::error::{Result, SketchError};

/// Compressed sparse row matrix; the universal input format.
///
/// Canonical form is enforced at construction: within each row the column
/// indices are strictly increasing, duplicates are merged, and explicit
/// zeros are dropped, so `nnz` is well-defined for runtime accounting.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n_rows: usize,
    n_cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        CsrMatrix {
            n_rows,
            n_cols,
            row_ptr: vec![0; n_rows + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        CsrMatrix {
            n_rows: n,
            n_cols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    /// Build from (row, col, value) triplets. Sorts, merges duplicates by
    /// summation, and drops entries that are (or merge to) zero.
    pub fn from_triplets(
        n_rows: usize,
        n_cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let mut items: Vec<(usize, usize, f64)> = triplets.into_iter().collect();
        for &(r, c, v) in &items {
            if r >= n_rows || c >= n_cols {
                return Err(SketchError::BadParams(format!(
                    "triplet ({r},{c}) out of bounds for {n_rows}x{n_cols}"
                )));
            }
            if !v.is_finite() {
                return Err(SketchError::BadParams("non-finite matrix entry".into()));
            }
        }
        items.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

        let mut row_ptr = vec![0usize; n_rows + 1];
        let mut col_idx = Vec::with_capacity(items.len());
        let mut values = Vec::with_capacity(items.len());
        let mut iter = items.into_iter().peekable();
        while let Some((r, c, mut v)) = iter.next() {
            while let Some(&(r2, c2, v2)) = iter.peek() {
                if r2 == r && c2 == c {
                    v += v2;
                    iter.next();
                } else {
                    break;
                }
            }
            if v != 0.0 {
                row_ptr[r + 1] += 1;
                col_idx.push(c);
                values.push(v);
            }
        }
        for i in 0..n_rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(CsrMatrix {
            n_rows,
            n_cols,
            row_ptr,
            col_idx,
            values,
        })
    }

    /// Build from raw CSR arrays, validating all structural invariants.
    pub fn from_parts(
        n_rows: usize,
        n_cols: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if row_ptr.len() != n_rows + 1 {
            return Err(SketchError::BadParams("row_ptr length".into()));
        }
        if row_ptr[0] != 0 || *row_ptr.last().unwrap() != col_idx.len() {
            return Err(SketchError::BadParams("row_ptr bounds".into()));
        }
        if col_idx.len() != values.len() {
            return Err(SketchError::BadParams("col_idx/values length".into()));
        }
        for w in row_ptr.windows(2) {
            if w[1] < w[0] {
                return Err(SketchError::BadParams("row_ptr must be nondecreasing".into()));
            }
        }
        for i in 0..n_rows {
            let row = &col_idx[row_ptr[i]..row_ptr[i + 1]];
            for w in row.windows(2) {
                if w[1] <= w[0] {
                    return Err(SketchError::BadParams(
                        "column indices must be strictly increasing within a row".into(),
                    ));
                }
            }
            if let Some(&last) = row.last() {
                if last >= n_cols {
                    return Err(SketchError::BadParams("column index out of range".into()));
                }
            }
        }
        if values.iter().any(|v| *v == 0.0 || !v.is_finite()) {
            return Err(SketchError::BadParams(
                "values must be nonzero and finite (canonical form)".into(),
            ));
        }
        Ok(CsrMatrix {
            n_rows,
            n_cols,
            row_ptr,
            col_idx,
            values,
        })
    }

    pub fn from_dense(a: &DenseMatrix, drop_tol: f64) -> Self {
        let mut triplets = Vec::new();
        for i in 0..a.n_rows() {
            for j in 0..a.n_cols() {
                let v = a.get(i, j);
                if v.abs() > drop_tol {
                    triplets.push((i, j, v));
                }
            }
        }
        CsrMatrix::from_triplets(a.n_rows(), a.n_cols(), triplets).expect("valid dense source")
    }

    #[inline]
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    #[inline]
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (s, e) = (self.row_ptr[i], self.row_ptr[i + 1]);
        (&self.col_idx[s..e], &self.values[s..e])
    }

    pub fn row_nnz(&self, i: usize) -> usize {
        self.row_ptr[i + 1] - self.row_ptr[i]
    }

    pub fn iter_triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n_rows).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&c, &v)| (i, c, v))
        })
    }

    pub fn transpose(&self) -> CsrMatrix {
        let mut counts = vec![0usize; self.n_cols + 1];
        for &c in &self.col_idx {
            counts[c + 1] += 1;
        }
        for i in 0..self.n_cols {
            counts[i + 1] += counts[i];
        }
        let mut col_idx = vec![0usize; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        let mut cursor = counts.clone();
        for i in 0..self.n_rows {
            let (cols, vals) = self.row(i);
            for (&c, &v) in cols.iter().zip(vals) {
                let p = cursor[c];
                col_idx[p] = i;
                values[p] = v;
                cursor[c] += 1;
            }
        }
        CsrMatrix {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            row_ptr: counts,
            col_idx,
            values,
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.n_rows, self.n_cols);
        for i in 0..self.n_rows {
            let (cols, vals) = self.row(i);
            let r = out.row_mut(i);
            for (&c, &v) in cols.iter().zip(vals) {
                r[c] = v;
            }
        }
        out
    }

    /// `self * x` for a dense vector.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n_cols);
        (0..self.n_rows)
            .map(|i| {
                let (cols, vals) = self.row(i);
                cols.iter().zip(vals).map(|(&c, &v)| v * x[c]).sum()
            })
            .collect()
    }

    /// `self * b` for dense `b`; output dense.
    pub fn matmul_dense(&self, b: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.n_cols, b.n_rows());
        let m = b.n_cols();
        let mut out = DenseMatrix::zeros(self.n_rows, m);
        for i in 0..self.n_rows {
            let (cols, vals) = self.row(i);
            let orow = out.row_mut(i);
            for (&c, &v) in cols.iter().zip(vals) {
                let brow = b.row(c);
                for (o, &bv) in orow.iter_mut().zip(brow) {
                    *o += v * bv;
                }
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn select_rows(&self, idx: &[usize]) -> CsrMatrix {
        let mut row_ptr = Vec::with_capacity(idx.len() + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for &i in idx {
            let (cols, vals) = self.row(i);
            col_idx.extend_from_slice(cols);
            values.extend_from_slice(vals);
            row_ptr.push(col_idx.len());
        }
        CsrMatrix {
            n_rows: idx.len(),
            n_cols: self.n_cols,
            row_ptr,
            col_idx,
            values,
        }
    }

    /// Rows scaled by per-row factors (used by sampling operators).
    pub fn scale_rows(&self, factors: &[f64]) -> CsrMatrix {
        assert_eq!(factors.len(), self.n_rows);
        let mut out = self.clone();
        for i in 0..self.n_rows {
            let (s, e) = (out.row_ptr[i], out.row_ptr[i + 1]);
            for v in &mut out.values[s..e] {
                *v *= factors[i];
            }
        }
        out
    }

    /// Horizontal concatenation `[self other]` (used for augmented systems).
    pub fn hstack(&self, other: &CsrMatrix) -> CsrMatrix {
        assert_eq!(self.n_rows, other.n_rows);
        let n_cols = self.n_cols + other.n_cols;
        let mut row_ptr = Vec::with_capacity(self.n_rows + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::with_capacity(self.nnz() + other.nnz());
        let mut values = Vec::with_capacity(self.nnz() + other.nnz());
        for i in 0..self.n_rows {
            let (c1, v1) = self.row(i);
            let (c2, v2) = other.row(i);
            col_idx.extend_from_slice(c1);
            values.extend_from_slice(v1);
            col_idx.extend(c2.iter().map(|&c| c + self.n_cols));
            values.extend_from_slice(v2);
            row_ptr.push(col_idx.len());
        }
        CsrMatrix {
            n_rows: self.n_rows,
            n_cols,
            row_ptr,
            col_idx,
            values,
        }
    }
}
