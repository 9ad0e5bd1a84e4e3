//! Dense/sparse matrix substrate and exact oracles used both by the
//! sketching pipelines and by the test suite.

mod csr;
mod dense;
mod factor;
pub mod mm;

pub use csr::CsrMatrix;
pub use dense::DenseMatrix;
pub use factor::{
    col_piv_qr_pivots, exact_leverage_scores, extreme_singular_values, numerical_rank,
    numerical_rank_dense, orthonormalize_columns, orthonormality_defect,
    principal_angle_cosines, pseudo_inverse, thin_svd, truncated_svd, RankTolerance, SvdResult,
};
