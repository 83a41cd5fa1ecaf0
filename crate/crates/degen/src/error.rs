use thiserror::Error;
use tropfm_core::CoreError;
use tropfm_fm::FmError;
use tropfm_grid::GridError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DegenError {
    #[error("need r >= 2 and n >= 1, got r = {r}, n = {n}")]
    BadShape { r: usize, n: usize },
    #[error("point {point} has coordinate sum {sum}, expected height {t}")]
    HeightMismatch { point: usize, sum: String, t: String },
    #[error("{count} cells exceed the budget of {budget}")]
    SizeLimit { count: u64, budget: u64 },
    #[error("cell {0} is not a rigid type")]
    NotRigid(usize),
    #[error("cell {rho} is not a face of cell {tau}")]
    NotAFace { rho: usize, tau: usize },
    #[error("slice height {t} is too small for a sample point")]
    SliceTooSmall { t: String },
    #[error("unsupported dimension: r = {0}")]
    UnsupportedDim(usize),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Fm(#[from] FmError),
}
