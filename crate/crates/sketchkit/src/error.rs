use thiserror::Error;

/// Errors produced by the toolkit. Each variant maps to a stable
/// machine-readable code used by the CLI (exit code and report field).
#[derive(Debug, Error)]
pub enum SketchError {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("matrix is rank deficient: {0}")]
    RankDeficient(String),
    #[error("rank {k} out of range for {rows}x{cols} matrix")]
    BadRank { k: usize, rows: usize, cols: usize },
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("flattening output would exceed the blow-up cap: {m_out} > {cap} for input {n_in}")]
    BlowupExceeded {
        n_in: usize,
        m_out: usize,
        cap: usize,
    },
    #[error("norm estimate degenerate (zero) for a nonzero matrix")]
    DegenerateNorm,
    #[error("residual is numerically zero; approximation already exact")]
    DegenerateResidual,
    #[error("sketch lost rank ({0}); retry with a fresh seed")]
    RankLost(String),
    #[error("intermediate factor lost rank ({0})")]
    RankCollapse(String),
    #[error("barrier selection cannot place the next weight at step {step} of {target}")]
    BarrierStuck { step: usize, target: usize },
    #[error("no convergence after {iters} iterations (residual {residual:.3e})")]
    NoConvergence { iters: usize, residual: f64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl SketchError {
    /// Stable machine-readable error code; also the CLI exit code.
    pub fn code(&self) -> i32 {
        match self {
            SketchError::Parse(_) => 2,
            SketchError::DimMismatch { .. } => 3,
            SketchError::RankDeficient(_) => 4,
            SketchError::BadRank { .. } => 5,
            SketchError::BadParams(_) => 6,
            SketchError::BlowupExceeded { .. } => 7,
            SketchError::DegenerateNorm => 8,
            SketchError::DegenerateResidual => 9,
            SketchError::RankLost(_) => 10,
            SketchError::RankCollapse(_) => 11,
            SketchError::BarrierStuck { .. } => 12,
            SketchError::NoConvergence { .. } => 13,
            SketchError::Io(_) => 14,
        }
    }

    /// Short identifier for reports.
    pub fn name(&self) -> &'static str {
        match self {
            SketchError::Parse(_) => "parse_error",
            SketchError::DimMismatch { .. } => "dim_mismatch",
            SketchError::RankDeficient(_) => "rank_deficient",
            SketchError::BadRank { .. } => "bad_rank",
            SketchError::BadParams(_) => "bad_params",
            SketchError::BlowupExceeded { .. } => "blowup_exceeded",
            SketchError::DegenerateNorm => "degenerate_norm",
            SketchError::DegenerateResidual => "degenerate_residual",
            SketchError::RankLost(_) => "rank_lost",
            SketchError::RankCollapse(_) => "rank_collapse",
            SketchError::BarrierStuck { .. } => "barrier_stuck",
            SketchError::NoConvergence { .. } => "no_convergence",
            SketchError::Io(_) => "io_error",
        }
    }
}

pub type Result<T> = std::result::Result<T, SketchError>;
