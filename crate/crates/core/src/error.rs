use crate::partition::{Cell, Partition};

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid tableau: {0}")]
    InvalidTableau(String),
    #[error("sizes do not match: {0}")]
    SizeMismatch(String),
    #[error("entry {0} not present in the tableau")]
    EntryNotFound(u32),
    #[error("cell {0} has no neighbor below or to the left")]
    NoInwardNeighbor(Cell),
    #[error("cell {0} has no neighbor above or to the right")]
    NoOutwardNeighbor(Cell),
    #[error("cell {0} is not part of the shape or subtree")]
    CellOutside(Cell),
    #[error("{0} is not a ribbon")]
    NotARibbon(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("target {target} is not determined by the known formulas; missing {missing:?}")]
    Underdetermined {
        target: Partition,
        missing: Vec<Partition>,
    },
    #[error("derivation scheme failed: {0}")]
    SchemeFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
