use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FmError {
    #[error("unstable: node {node} of the tree at vertex {vertex} has valence below 3")]
    Unstable { vertex: usize, node: usize },
    #[error("malformed forest: {0}")]
    Malformed(String),
    #[error("enumeration needs {count} types, budget is {budget}")]
    SizeLimit { count: u64, budget: u64 },
}
