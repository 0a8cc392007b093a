//! 1D lattice the wavefunction lives on.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

/// Boundary handling for spatial derivatives and the propagator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// Cell `n_cells` is identified with cell 0.
    Periodic,
    /// The wavefunction is implicitly zero outside the lattice.
    Dirichlet,
}

/// Uniform 1D lattice: `n_cells` nodes at `x_i = x_min + i * dx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeGrid<T: Real> {
    n_cells: usize,
    dx: T,
    x_min: T,
    boundary: Boundary,
}

impl<T: Real> LatticeGrid<T> {
    pub fn new(n_cells: usize, dx: T, x_min: T, boundary: Boundary) -> Result<Self> {
        if n_cells < 2 {
            return Err(Error::Domain(format!("grid needs at least 2 cells, got {n_cells}")));
        }
        if !(dx > T::zero()) || !dx.is_finite() {
            return Err(Error::Domain("cell width dx must be positive and finite".into()));
        }
        Ok(Self { n_cells, dx, x_min, boundary })
    }

    /// Periodic grid centered on the origin with total length `length`.
    pub fn centered(n_cells: usize, length: T) -> Result<Self> {
        let dx = length / T::from_usize(n_cells).unwrap();
        let half = length / T::real(2.0);
        Self::new(n_cells, dx, -half, Boundary::Periodic)
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn dx(&self) -> T {
        self.dx
    }

    pub fn x_min(&self) -> T {
        self.x_min
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Node position `x_i`.
    pub fn x(&self, i: usize) -> T {
        self.x_min + self.dx * T::from_usize(i).unwrap()
    }

    /// Total lattice length `n_cells * dx`.
    pub fn length(&self) -> T {
        self.dx * T::from_usize(self.n_cells).unwrap()
    }

    pub fn positions(&self) -> Vec<T> {
        (0..self.n_cells).map(|i| self.x(i)).collect()
    }

    pub(crate) fn require_same(&self, other: &Self, what: &str) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{what}: lattices differ")))
        }
    }
}
