use thiserror::Error;
use tropfm_core::CoreError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GridError {
    #[error("point {0} is not in the support of the fan")]
    NotInSupport(usize),
    #[error("point {point} has a negative coordinate on ray {ray}")]
    Negative { point: usize, ray: usize },
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("at least one marked point is required")]
    NoPoints,
    #[error("enumeration needs {count} types, budget is {budget}")]
    SizeLimit { count: u64, budget: u64 },
    #[error(transparent)]
    Core(#[from] CoreError),
}
