//! Oblivious sketch constructions: CountSketch, OSNAP, Gaussian,
//! sparse-sign, and rank-preserving sketches.
//!
//! Every spec is a small, seed-bearing description; applying a spec is
//! deterministic given its seed, and all per-column randomness comes from
//! independent seed streams so the output cannot depend on evaluation
//! order. Apply cost for the sparse specs is proportional to
//! `nnz(input) * nonzeros-per-column`.

use crate::error::{Result, SketchError};
use crate::linalg::{thin_svd, CsrMatrix, DenseMatrix};
use crate::rng::{self, salt};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// One random row and sign per input row; the sparsest sparse embedding.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CountSketchSpec {
    pub m: usize,
    pub n: usize,
    pub seed: u64,
}

/// `s` random rows per input row with values `±1/sqrt(s)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OsnapSpec {
    pub m: usize,
    pub n: usize,
    pub s: usize,
    pub seed: u64,
}

/// Dense i.i.d. normal sketch with entry standard deviation `scale`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaussianSpec {
    pub m: usize,
    pub n: usize,
    pub scale: f64,
    pub seed: u64,
}

/// Each entry independently 0 with probability `1-p`, `±scale` with
/// probability `p/2` each.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SparseSignSpec {
    pub m: usize,
    pub r: usize,
    pub p: f64,
    pub scale: f64,
    pub seed: u64,
}

/// Sparse sketch that preserves rank up to `z/c`: at most 2 nonzeros per
/// column (values ±1) and at most `ceil(2n/z)` nonzeros per row, placed by
/// a seeded balanced assignment. `z >= n` degenerates to the identity.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankPreservingSpec {
    pub z: usize,
    pub n: usize,
    pub c: usize,
    pub seed: u64,
    pub identity: bool,
}

/// Tagged union of every sketch spec, for JSON descriptors and reports.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SketchSpec {
    CountSketch(CountSketchSpec),
    Osnap(OsnapSpec),
    Gaussian(GaussianSpec),
    SparseSign(SparseSignSpec),
    RankPreserving(RankPreservingSpec),
}

/// Common sketch interface: a linear map from `in_rows()`-dimensional row
/// space to `out_rows()` dimensions.
pub trait Sketch {
    fn out_rows(&self) -> usize;
    fn in_rows(&self) -> usize;
    /// For each input row index, the list of (output row, coefficient)
    /// pairs of the implied matrix column. Dense specs return the full column.
    fn column(&self, j: usize) -> Vec<(usize, f64)>;

    fn apply_csr(&self, a: &CsrMatrix) -> Result<DenseMatrix> {
        check_dims(self.in_rows(), a.n_rows())?;
        let mut out = DenseMatrix::zeros(self.out_rows(), a.n_cols());
        for j in 0..a.n_rows() {
            let (cols, vals) = a.row(j);
            if cols.is_empty() {
                continue;
            }
            for (i, w) in self.column(j) {
                let orow = out.row_mut(i);
                for (&c, &v) in cols.iter().zip(vals) {
                    orow[c] += w * v;
                }
            }
        }
        Ok(out)
    }

    fn apply_dense(&self, a: &DenseMatrix) -> Result<DenseMatrix> {
        check_dims(self.in_rows(), a.n_rows())?;
        let mut out = DenseMatrix::zeros(self.out_rows(), a.n_cols());
        for j in 0..a.n_rows() {
            let arow = a.row(j);
            for (i, w) in self.column(j) {
                let orow = out.row_mut(i);
                for (o, &v) in orow.iter_mut().zip(arow) {
                    *o += w * v;
                }
            }
        }
        Ok(out)
    }

    fn apply_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dims(self.in_rows(), x.len())?;
        let mut out = vec![0.0; self.out_rows()];
        for (j, &v) in x.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            for (i, w) in self.column(j) {
                out[i] += w * v;
            }
        }
        Ok(out)
    }

    /// The implied matrix, for brute-force oracles on small instances.
    fn materialize(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.out_rows(), self.in_rows());
        for j in 0..self.in_rows() {
            for (i, w) in self.column(j) {
                m.set(i, j, m.get(i, j) + w);
            }
        }
        m
    }
}

fn check_dims(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(SketchError::DimMismatch {
            context: "apply_sketch",
            expected,
            got,
        });
    }
    Ok(())
}

/// Apply any sketch spec to a sparse matrix.
pub fn apply_sketch(spec: &impl Sketch, a: &CsrMatrix) -> Result<DenseMatrix> {
    spec.apply_csr(a)
}

impl CountSketchSpec {
    pub fn new(m: usize, n: usize, seed: u64) -> Self {
        assert!(m > 0);
        CountSketchSpec { m, n, seed }
    }

    pub fn target_row(&self, j: usize) -> usize {
        rng::hash_mod(self.seed, salt::COUNT_SKETCH, 2 * j as u64, self.m)
    }

    pub fn sign(&self, j: usize) -> f64 {
        rng::hash_sign(self.seed, salt::COUNT_SKETCH, 2 * j as u64 + 1)
    }
}

impl Sketch for CountSketchSpec {
    fn out_rows(&self) -> usize {
        self.m
    }
    fn in_rows(&self) -> usize {
        self.n
    }
    fn column(&self, j: usize) -> Vec<(usize, f64)> {
        vec![(self.target_row(j), self.sign(j))]
    }
}

impl OsnapSpec {
    pub fn new(m: usize, n: usize, s: usize, seed: u64) -> Self {
        assert!(m > 0 && s > 0);
        let s = s.min(m);
        OsnapSpec { m, n, s, seed }
    }

    /// The `s` distinct target rows and signs for input row `j`.
    fn targets(&self, j: usize) -> Vec<(usize, f64)> {
        let mut r = rng::stream_rng(self.seed, salt::OSNAP, j as u64);
        let val = 1.0 / (self.s as f64).sqrt();
        let mut rows: Vec<usize> = Vec::with_capacity(self.s);
        if self.s * 2 >= self.m {
            // Dense-ish column: Fisher-Yates over the full row range.
            let mut all: Vec<usize> = (0..self.m).collect();
            for i in 0..self.s {
                let pick = r.gen_range(i..self.m);
                all.swap(i, pick);
            }
            rows.extend_from_slice(&all[..self.s]);
        } else {
            while rows.len() < self.s {
                let cand = r.gen_range(0..self.m);
                if !rows.contains(&cand) {
                    rows.push(cand);
                }
            }
        }
        rows.into_iter()
            .map(|row| (row, if r.gen::<bool>() { val } else { -val }))
            .collect()
    }
}

impl Sketch for OsnapSpec {
    fn out_rows(&self) -> usize {
        self.m
    }
    fn in_rows(&self) -> usize {
        self.n
    }
    fn column(&self, j: usize) -> Vec<(usize, f64)> {
        self.targets(j)
    }
}

impl GaussianSpec {
    pub fn new(m: usize, n: usize, scale: f64, seed: u64) -> Self {
        assert!(m > 0 && scale > 0.0);
        GaussianSpec { m, n, scale, seed }
    }
}

impl Sketch for GaussianSpec {
    fn out_rows(&self) -> usize {
        self.m
    }
    fn in_rows(&self) -> usize {
        self.n
    }
    fn column(&self, j: usize) -> Vec<(usize, f64)> {
        rng::gaussian_column(self.seed, salt::GAUSSIAN_COL, j as u64, self.m)
            .into_iter()
            .enumerate()
            .map(|(i, g)| (i, g * self.scale))
            .collect()
    }
}

impl SparseSignSpec {
    pub fn new(m: usize, r: usize, p: f64, scale: f64, seed: u64) -> Self {
        assert!(m > 0 && p > 0.0 && p <= 1.0 && scale > 0.0);
        SparseSignSpec {
            m,
            r,
            p,
            scale,
            seed,
        }
    }

    /// Nonzero positions in column `j`, via geometric gap skipping.
    fn nonzeros(&self, j: usize) -> Vec<(usize, f64)> {
        let mut r = rng::stream_rng(self.seed, salt::SPARSE_SIGN_COL, j as u64);
        let mut out = Vec::new();
        if self.p >= 1.0 {
            for i in 0..self.m {
                let sign = if r.gen::<bool>() { self.scale } else { -self.scale };
                out.push((i, sign));
            }
            return out;
        }
        let log1mp = (1.0 - self.p).ln();
        let mut i: i64 = -1;
        loop {
            let u: f64 = r.gen_range(f64::MIN_POSITIVE..1.0);
            let gap = (u.ln() / log1mp).floor() as i64 + 1;
            i += gap;
            if i >= self.m as i64 {
                break;
            }
            let sign = if r.gen::<bool>() { self.scale } else { -self.scale };
            out.push((i as usize, sign));
        }
        out
    }

    /// Max nonzeros over all rows and over all columns of the realized matrix.
    pub fn realized_max_nnz(&self) -> (usize, usize) {
        let mut row_counts = vec![0usize; self.m];
        let mut max_col = 0;
        for j in 0..self.r {
            let nz = self.nonzeros(j);
            max_col = max_col.max(nz.len());
            for (i, _) in nz {
                row_counts[i] += 1;
            }
        }
        (row_counts.into_iter().max().unwrap_or(0), max_col)
    }
}

impl Sketch for SparseSignSpec {
    fn out_rows(&self) -> usize {
        self.m
    }
    fn in_rows(&self) -> usize {
        self.r
    }
    fn column(&self, j: usize) -> Vec<(usize, f64)> {
        self.nonzeros(j)
    }
}

/// Build a rank-preserving sketch spec. When `z >= n` the identity is
/// returned and rank is preserved exactly.
pub fn sample_rank_preserving(z: usize, n: usize, c: usize, seed: u64) -> RankPreservingSpec {
    assert!(c >= 1);
    if z >= n {
        return RankPreservingSpec {
            z: n,
            n,
            c,
            seed,
            identity: true,
        };
    }
    RankPreservingSpec {
        z,
        n,
        c,
        seed,
        identity: false,
    }
}

impl RankPreservingSpec {
    /// Balanced slot assignment: 2n slots are filled round-robin with row
    /// indices mod z, shuffled, and de-collided per column so each column
    /// gets two distinct target rows. Row occupancy never exceeds
    /// `ceil(2n/z)` because swaps preserve the slot multiset.
    fn assignment(&self) -> Vec<u32> {
        let n = self.n;
        let z = self.z;
        let mut slots: Vec<u32> = (0..2 * n).map(|t| (t % z) as u32).collect();
        let mut r = rng::stream_rng(self.seed, salt::RANK_PRESERVE, 0);
        for i in (1..slots.len()).rev() {
            let j = r.gen_range(0..=i);
            slots.swap(i, j);
        }
        if z >= 2 {
            for col in 0..n {
                if slots[2 * col] != slots[2 * col + 1] {
                    continue;
                }
                let bad = slots[2 * col];
                let mut w = (2 * col + 2) % (2 * n);
                loop {
                    let partner = w ^ 1;
                    if slots[w] != bad && slots[partner] != bad {
                        slots.swap(2 * col + 1, w);
                        break;
                    }
                    w = (w + 1) % (2 * n);
                    debug_assert_ne!(w, 2 * col, "no collision-free slot found");
                }
            }
        }
        slots
    }

    /// Apply on the right: `a * self^T`, keeping the result sparse.
    pub fn apply_right_csr(&self, a: &CsrMatrix) -> Result<CsrMatrix> {
        check_dims(self.n, a.n_cols())?;
        if self.identity {
            return Ok(a.clone());
        }
        let slots = self.assignment();
        let mut triplets = Vec::with_capacity(2 * a.nnz());
        for i in 0..a.n_rows() {
            let (cols, vals) = a.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                let (t0, t1) = (slots[2 * j] as usize, slots[2 * j + 1] as usize);
                let s0 = rng::hash_sign(self.seed, salt::RANK_PRESERVE, 2 * j as u64 + 1);
                let s1 = rng::hash_sign(self.seed, salt::RANK_PRESERVE, 2 * j as u64 + 2);
                triplets.push((i, t0, s0 * v));
                if self.z >= 2 {
                    triplets.push((i, t1, s1 * v));
                }
            }
        }
        CsrMatrix::from_triplets(a.n_rows(), self.z, triplets)
    }

    /// Sparse-output left apply (`self * a`), for rank pipelines that keep
    /// shrinking a sparse matrix.
    pub fn apply_csr_sparse(&self, a: &CsrMatrix) -> Result<CsrMatrix> {
        check_dims(self.n, a.n_rows())?;
        if self.identity {
            return Ok(a.clone());
        }
        let slots = self.assignment();
        let mut triplets = Vec::with_capacity(2 * a.nnz());
        for j in 0..a.n_rows() {
            let (cols, vals) = a.row(j);
            if cols.is_empty() {
                continue;
            }
            let (t0, t1) = (slots[2 * j] as usize, slots[2 * j + 1] as usize);
            let s0 = rng::hash_sign(self.seed, salt::RANK_PRESERVE, 2 * j as u64 + 1);
            let s1 = rng::hash_sign(self.seed, salt::RANK_PRESERVE, 2 * j as u64 + 2);
            for (&c, &v) in cols.iter().zip(vals) {
                triplets.push((t0, c, s0 * v));
                if self.z >= 2 {
                    triplets.push((t1, c, s1 * v));
                }
            }
        }
        CsrMatrix::from_triplets(self.z, a.n_cols(), triplets)
    }

    /// Columns of the implied matrix touching output row set `rows`,
    /// i.e. the input rows that contribute to those sketch rows.
    pub fn touching_columns(&self, rows: &[usize]) -> Vec<usize> {
        if self.identity {
            let mut v = rows.to_vec();
            v.sort_unstable();
            return v;
        }
        let slots = self.assignment();
        let mut mask = vec![false; self.z];
        for &r in rows {
            mask[r] = true;
        }
        (0..self.n)
            .filter(|&j| {
                mask[slots[2 * j] as usize] || (self.z >= 2 && mask[slots[2 * j + 1] as usize])
            })
            .collect()
    }
}

impl Sketch for RankPreservingSpec {
    fn out_rows(&self) -> usize {
        self.z
    }
    fn in_rows(&self) -> usize {
        self.n
    }
    fn column(&self, j: usize) -> Vec<(usize, f64)> {
        if self.identity {
            return vec![(j, 1.0)];
        }
        let slots = self.assignment();
        let s0 = rng::hash_sign(self.seed, salt::RANK_PRESERVE, 2 * j as u64 + 1);
        let s1 = rng::hash_sign(self.seed, salt::RANK_PRESERVE, 2 * j as u64 + 2);
        if self.z >= 2 {
            vec![
                (slots[2 * j] as usize, s0),
                (slots[2 * j + 1] as usize, s1),
            ]
        } else {
            vec![(slots[2 * j] as usize, s0)]
        }
    }

    // Column queries rebuild the assignment; batch paths below avoid that.
    fn apply_csr(&self, a: &CsrMatrix) -> Result<DenseMatrix> {
        check_dims(self.n, a.n_rows())?;
        if self.identity {
            return Ok(a.to_dense());
        }
        let slots = self.assignment();
        let mut out = DenseMatrix::zeros(self.z, a.n_cols());
        for j in 0..a.n_rows() {
            let (cols, vals) = a.row(j);
            if cols.is_empty() {
                continue;
            }
            let s0 = rng::hash_sign(self.seed, salt::RANK_PRESERVE, 2 * j as u64 + 1);
            let s1 = rng::hash_sign(self.seed, salt::RANK_PRESERVE, 2 * j as u64 + 2);
            for (&c, &v) in cols.iter().zip(vals) {
                out.set(
                    slots[2 * j] as usize,
                    c,
                    out.get(slots[2 * j] as usize, c) + s0 * v,
                );
                if self.z >= 2 {
                    out.set(
                        slots[2 * j + 1] as usize,
                        c,
                        out.get(slots[2 * j + 1] as usize, c) + s1 * v,
                    );
                }
            }
        }
        Ok(out)
    }
}

/// Distortion bracket of a sketched orthonormal basis: extreme singular
/// values of `S * U`. The second argument is the unsketched basis; when it
/// is not exactly orthonormal the output is first aligned by `V Sigma^-1`
/// from its thin SVD so the bracket still measures span distortion.
pub fn embedding_distortion(
    sketch_output: &DenseMatrix,
    a_basis: &DenseMatrix,
) -> (f64, f64) {
    let defect = crate::linalg::orthonormality_defect(a_basis);
    let target = if defect < 1e-10 {
        sketch_output.clone()
    } else {
        let svd = thin_svd(a_basis);
        let k = svd
            .singular_values
            .iter()
            .filter(|&&s| s > svd.singular_values[0] * 1e-12)
            .count();
        let idx: Vec<usize> = (0..k).collect();
        let mut v = svd.vt.select_rows(&idx).transpose();
        for i in 0..v.n_rows() {
            let row = v.row_mut(i);
            for (j, val) in row.iter_mut().enumerate() {
                *val /= svd.singular_values[j];
            }
        }
        sketch_output.matmul(&v)
    };
    crate::linalg::extreme_singular_values(&target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{numerical_rank_dense, RankTolerance};
    use crate::rng::gaussian_column;

    fn random_csr(n: usize, d: usize, seed: u64) -> CsrMatrix {
        let mut trips = Vec::new();
        for i in 0..n {
            let col = gaussian_column(seed, salt::SYNTH, i as u64, d);
            for (j, v) in col.into_iter().enumerate() {
                trips.push((i, j, v));
            }
        }
        CsrMatrix::from_triplets(n, d, trips).unwrap()
    }

    #[test]
    fn count_sketch_single_row_output_is_signed_column_sum() {
        // m = 1 forces the hash to a single row, so the output must be the
        // sign-weighted sum of input rows.
        let spec = CountSketchSpec::new(1, 4, 7);
        let a = CsrMatrix::identity(4);
        let out = apply_sketch(&spec, &a).unwrap();
        for j in 0..4 {
            assert_eq!(out.get(0, j), spec.sign(j));
        }
    }

    #[test]
    fn apply_matches_materialized_product() {
        let a = random_csr(40, 6, 3);
        let ad = a.to_dense();
        let specs: Vec<Box<dyn Sketch>> = vec![
            Box::new(CountSketchSpec::new(13, 40, 11)),
            Box::new(OsnapSpec::new(17, 40, 3, 12)),
            Box::new(GaussianSpec::new(9, 40, 0.5, 13)),
            Box::new(SparseSignSpec::new(11, 40, 0.3, 1.25, 14)),
            Box::new(sample_rank_preserving(19, 40, 11, 15)),
        ];
        for spec in specs {
            let fast = spec.apply_csr(&a).unwrap();
            let oracle = spec.materialize().matmul(&ad);
            assert!(
                fast.sub(&oracle).max_abs() < 1e-12,
                "apply disagrees with materialized product"
            );
            let dense_path = spec.apply_dense(&ad).unwrap();
            assert!(dense_path.sub(&oracle).max_abs() < 1e-12);
        }
    }

    #[test]
    fn osnap_column_structure_on_basis_vector() {
        let spec = OsnapSpec::new(64, 10, 2, 5);
        for j in 0..10 {
            let e = CsrMatrix::from_triplets(10, 1, vec![(j, 0, 1.0)]).unwrap();
            let out = apply_sketch(&spec, &e).unwrap();
            let nz: Vec<f64> = (0..64)
                .map(|i| out.get(i, 0))
                .filter(|v| *v != 0.0)
                .collect();
            assert_eq!(nz.len(), 2);
            let expect = 1.0 / 2f64.sqrt();
            for v in nz {
                assert!((v.abs() - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn materialized_sparsity_counts() {
        let cs = CountSketchSpec::new(8, 30, 1).materialize();
        let os = OsnapSpec::new(16, 30, 4, 2).materialize();
        for j in 0..30 {
            let cs_nnz = (0..8).filter(|&i| cs.get(i, j) != 0.0).count();
            assert_eq!(cs_nnz, 1);
            let os_nnz = (0..16).filter(|&i| os.get(i, j) != 0.0).count();
            assert_eq!(os_nnz, 4);
        }
    }

    #[test]
    fn gaussian_embeds_orthonormal_basis() {
        // 1000x10 orthonormal columns sketched to 200 rows with scale
        // 1/sqrt(200): singular values stay within [0.5, 1.5].
        let a = random_csr(1000, 10, 21);
        let (q, _) = crate::linalg::orthonormalize_columns(&a.to_dense()).unwrap();
        for seed in 0..5 {
            let spec = GaussianSpec::new(200, 1000, 1.0 / 200f64.sqrt(), 100 + seed);
            let out = spec.apply_dense(&q).unwrap();
            let (lo, hi) = crate::linalg::extreme_singular_values(&out);
            assert!(lo > 0.5 && hi < 1.5, "seed {seed}: [{lo}, {hi}]");
        }
    }

    #[test]
    fn unbiasedness_of_sq_norm_estimates() {
        let x: Vec<f64> = gaussian_column(77, salt::SYNTH, 0, 25);
        let x_norm2: f64 = x.iter().map(|v| v * v).sum();
        let trials = 1000;

        let mut cs_mean = 0.0;
        let mut os_mean = 0.0;
        let mut ss_mean = 0.0;
        let (m, p, scale) = (12usize, 0.25f64, 1.5f64);
        for t in 0..trials {
            let cs = CountSketchSpec::new(8, 25, t as u64);
            let y = cs.apply_vec(&x).unwrap();
            cs_mean += y.iter().map(|v| v * v).sum::<f64>();

            let os = OsnapSpec::new(10, 25, 3, t as u64);
            let y = os.apply_vec(&x).unwrap();
            os_mean += y.iter().map(|v| v * v).sum::<f64>();

            let ss = SparseSignSpec::new(m, 25, p, scale, t as u64);
            let y = ss.apply_vec(&x).unwrap();
            ss_mean += y.iter().map(|v| v * v).sum::<f64>();
        }
        cs_mean /= trials as f64;
        os_mean /= trials as f64;
        ss_mean /= trials as f64 * (m as f64 * p * scale * scale);
        assert!((cs_mean / x_norm2 - 1.0).abs() < 0.05, "countsketch {cs_mean}");
        assert!((os_mean / x_norm2 - 1.0).abs() < 0.05, "osnap {os_mean}");
        assert!((ss_mean / x_norm2 - 1.0).abs() < 0.05, "sparse sign {ss_mean}");
    }

    #[test]
    fn determinism_bit_identical() {
        let a = random_csr(30, 5, 9);
        let spec = OsnapSpec::new(12, 30, 2, 4);
        let o1 = apply_sketch(&spec, &a).unwrap();
        let o2 = apply_sketch(&spec, &a).unwrap();
        assert_eq!(o1.data(), o2.data());
    }

    #[test]
    fn rank_preserving_identity_when_z_at_least_n() {
        let spec = sample_rank_preserving(50, 20, 11, 3);
        assert!(spec.identity);
        let a = random_csr(20, 4, 44);
        let out = apply_sketch(&spec, &a).unwrap();
        assert!(out.sub(&a.to_dense()).max_abs() == 0.0);
    }

    #[test]
    fn rank_preserving_structure_caps() {
        // Column/row sparsity audit at n = 4096 over many seeds.
        let n = 4096;
        let z = 173;
        for seed in 0..20 {
            let spec = sample_rank_preserving(z, n, 11, seed);
            let mut row_counts = vec![0usize; z];
            for j in 0..n {
                let col = spec.column(j);
                assert!(col.len() <= 2);
                assert_eq!(col.len(), 2);
                assert_ne!(col[0].0, col[1].0, "column {j} has duplicate targets");
                for (i, v) in col {
                    assert!(v.abs() == 1.0);
                    row_counts[i] += 1;
                }
            }
            let cap = (2 * n + z - 1) / z;
            let max_row = row_counts.into_iter().max().unwrap();
            assert!(max_row <= cap, "row count {max_row} exceeds cap {cap}");
        }
    }

    #[test]
    fn rank_preserving_keeps_planted_rank() {
        // I_100 sketched to z=44 with c=11: min(rank(SA), 4) = 4 should
        // hold for the vast majority of seeds.
        let a = CsrMatrix::identity(100);
        let tol = RankTolerance::default_for_dims(100, 100);
        let mut failures = 0;
        for seed in 0..100 {
            let spec = sample_rank_preserving(44, 100, 11, seed);
            let sa = apply_sketch(&spec, &a).unwrap();
            let r = numerical_rank_dense(&sa, &tol);
            if r.min(4) < 4 {
                failures += 1;
            }
        }
        assert!(failures < 5, "{failures} rank failures out of 100");
    }

    #[test]
    fn rank_preserving_right_apply_matches_transpose_route() {
        let a = random_csr(15, 40, 6);
        let spec = sample_rank_preserving(9, 40, 11, 77);
        let fast = spec.apply_right_csr(&a).unwrap().to_dense();
        let oracle = a.to_dense().matmul(&spec.materialize().transpose());
        assert!(fast.sub(&oracle).max_abs() < 1e-12);
        let sparse_left = spec.apply_csr_sparse(&a.transpose()).unwrap().to_dense();
        let oracle_left = spec.materialize().matmul(&a.transpose().to_dense());
        assert!(sparse_left.sub(&oracle_left).max_abs() < 1e-12);
    }

    #[test]
    fn distortion_of_identity_and_scaled_identity() {
        let u = DenseMatrix::identity(6);
        assert_eq!(embedding_distortion(&u, &u), (1.0, 1.0));
        let twice = u.scale(2.0);
        let (lo, hi) = embedding_distortion(&twice, &u);
        assert!((lo - 2.0).abs() < 1e-12 && (hi - 2.0).abs() < 1e-12);
    }

    #[test]
    fn distortion_aligns_non_orthonormal_basis() {
        // S = I applied to a skewed basis must still report (1, 1).
        let a = random_csr(30, 4, 91).to_dense();
        let (lo, hi) = embedding_distortion(&a, &a);
        assert!((lo - 1.0).abs() < 1e-8 && (hi - 1.0).abs() < 1e-8);
    }

    #[test]
    fn spec_json_roundtrip() {
        let spec = SketchSpec::Osnap(OsnapSpec::new(8, 100, 2, 42));
        let json = serde_json::to_string(&spec).unwrap();
        assert!(json.contains("\"type\":\"osnap\""));
        let back: SketchSpec = serde_json::from_str(&json).unwrap();
        match back {
            SketchSpec::Osnap(o) => {
                assert_eq!(o.m, 8);
                assert_eq!(o.seed, 42);
            }
            _ => panic!("wrong variant"),
        }
    }
}
