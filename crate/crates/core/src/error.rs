use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cell {0} has no matrix in the complex map")]
    MapUndefined(usize),
    #[error("{0} is not a cell of the complex")]
    NotACell(usize),
    #[error("vector is not in the lattice")]
    NotInLattice,
    #[error("parse error: {0}")]
    Parse(String),
}
