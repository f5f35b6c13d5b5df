use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector of dimension {found} does not fit shape {dim_a}x{dim_b}")]
    ShapeMismatch { dim_a: usize, dim_b: usize, found: usize },

    #[error("{what}: expected dimension {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("state is not normalized (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("spectrum is empty")]
    EmptySpectrum,

    #[error("spectrum entry {index} is not a positive probability ({value})")]
    NonPositiveProbability { index: usize, value: f64 },

    #[error("spectrum sums to {sum} instead of 1")]
    SpectrumSum { sum: f64 },

    #[error("qudit dimension must be at least 2, got {d}")]
    InvalidDimension { d: usize },

    #[error("infeasible spectrum: largest Schmidt coefficient {p_max} exceeds 1/{d}")]
    InfeasibleSpectrum { p_max: f64, d: usize },

    #[error("no partition into {d} subgroups of weight 1/{d} exists")]
    NoPartition { d: usize },

    #[error("phase factors not found (best residual {best_residual:e})")]
    PhaseFactorsNotFound { best_residual: f64 },

    #[error("phase matrix does not satisfy the orthogonality constraint (residual {residual:e})")]
    InvalidPhases { residual: f64 },

    #[error("outcome {outcome}: defined unitary columns deviate from orthonormality by {deviation:e}")]
    DegenerateColumns { outcome: usize, deviation: f64 },

    #[error("at least one trial is required")]
    NoTrials,

    #[error("Schmidt rank order violated: n1 = {n1} < n2 = {n2}")]
    RankOrder { n1: usize, n2: usize },
}
