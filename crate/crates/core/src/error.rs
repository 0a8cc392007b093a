//! Error type shared by all simulation modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the physical domain (non-positive constant, measure out of [0,1], ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Two states or fields that must share a lattice do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Phase reconstruction attempted across a node of the density.
    #[error("phase undefined in nodal region: cell {cell} has density {rho:e} below floor {floor:e}")]
    NodalRegion { cell: usize, rho: f64, floor: f64 },

    /// A numerical procedure failed a residual or sanity check.
    #[error("numerical failure in {context}: residual {residual:e}")]
    Numerical { context: String, residual: f64 },

    /// API misuse (wrong boundary kind, too few snapshots, ...).
    #[error("usage error: {0}")]
    Usage(String),

    /// A Monte Carlo run did not terminate cleanly enough to report.
    #[error("inconclusive run: {0}")]
    Inconclusive(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
