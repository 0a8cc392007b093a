//! Discrete position <-> momentum transform.
//!
//! The map is the unitary DFT dressed so the continuum kernel
//! exp(+i p x / hbar) is literal on the lattice: momentum bins sit at
//! p_k = 2 pi hbar k / (n dx) centered on zero, amplitudes carry the
//! symmetric 1/sqrt(2 pi hbar) split, and sum f dp equals sum rho dx.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::grid::{Boundary, LatticeGrid};
use crate::real::Real;
use crate::state::WaveFunction;
use crate::units::UnitSystem;

/// Momentum-space amplitudes on the conjugate grid of a periodic lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumState<T: Real> {
    grid: LatticeGrid<T>,
    dp: T,
    amp: Vec<Complex<T>>,
    time: T,
}

impl<T: Real> MomentumState<T> {
    /// Build directly from centered momentum amplitudes (index `n/2` is p = 0).
    pub fn new(
        grid: LatticeGrid<T>,
        units: &UnitSystem<T>,
        amp: Vec<Complex<T>>,
        time: T,
    ) -> Result<Self> {
        if amp.len() != grid.n_cells() {
            return Err(Error::Domain("amplitude count does not match grid".into()));
        }
        require_periodic(&grid)?;
        let state = Self { grid, dp: conjugate_spacing(&grid, units), amp, time };
        let total = state.total_measure();
        if (total - T::one()).abs() > T::tol(1e-9, 1e3) {
            return Err(Error::Domain(format!(
                "momentum state not normalized: total = {}",
                total.to_f64().unwrap_or(f64::NAN)
            )));
        }
        Ok(state)
    }

    /// Source position lattice.
    pub fn grid(&self) -> &LatticeGrid<T> {
        &self.grid
    }

    /// Momentum bin spacing 2 pi hbar / (n dx).
    pub fn dp(&self) -> T {
        self.dp
    }

    pub fn amp(&self) -> &[Complex<T>] {
        &self.amp
    }

    pub fn time(&self) -> T {
        self.time
    }

    pub fn n_modes(&self) -> usize {
        self.amp.len()
    }

    /// Momentum value of centered bin `k`.
    pub fn p(&self, k: usize) -> T {
        let n = self.amp.len();
        let offset = T::from_usize(k).unwrap() - T::from_usize(n / 2).unwrap();
        self.dp * offset
    }

    pub fn momenta(&self) -> Vec<T> {
        (0..self.amp.len()).map(|k| self.p(k)).collect()
    }

    /// Momentum measure density f_k = |amp_k|^2.
    pub fn f(&self) -> Vec<T> {
        self.amp.iter().map(|a| a.norm_sqr()).collect()
    }

    /// sum f_k dp.
    pub fn total_measure(&self) -> T {
        self.amp.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr()) * self.dp
    }

    /// <self|other> = sum conj(a_k) b_k dp.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        self.grid.require_same(&other.grid, "momentum inner product")?;
        let s = self
            .amp
            .iter()
            .zip(&other.amp)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b);
        Ok(s * Complex::new(self.dp, T::zero()))
    }
}

fn require_periodic<T: Real>(grid: &LatticeGrid<T>) -> Result<()> {
    match grid.boundary() {
        Boundary::Periodic => Ok(()),
        Boundary::Dirichlet => Err(Error::Usage(
            "spectral operations require a periodic grid".into(),
        )),
    }
}

fn conjugate_spacing<T: Real>(grid: &LatticeGrid<T>, units: &UnitSystem<T>) -> T {
    T::real(2.0) * T::PI() * units.hbar / grid.length()
}

/// Phase exp(-i p_k x_min / hbar) attached so the transform kernel is the
/// literal exp(-i p x / hbar) at node positions, not just at lattice indices.
/// hbar cancels: p_k x_min / hbar = 2 pi (k - n/2) x_min / (n dx).
fn origin_phase<T: Real>(grid: &LatticeGrid<T>, k_centered: isize) -> T {
    let n = T::from_usize(grid.n_cells()).unwrap();
    T::real(2.0) * T::PI() * T::from_isize(k_centered).unwrap() * grid.x_min() / (n * grid.dx())
}

/// Forward transform: amp_k = (1 / sqrt(2 pi hbar)) sum_j psi_j e^(-i p_k x_j / hbar) dx.
pub fn to_momentum<T: Real>(
    psi: &WaveFunction<T>,
    units: &UnitSystem<T>,
) -> Result<MomentumState<T>> {
    require_periodic(psi.grid())?;
    let n = psi.grid().n_cells();
    let mut buf: Vec<Complex<T>> = psi.amp().to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let grid = *psi.grid();
    let dp = conjugate_spacing(&grid, units);
    let scale = grid.dx() / (T::real(2.0) * T::PI() * units.hbar).sqrt();
    let shift = n / 2;
    let amp: Vec<Complex<T>> = (0..n)
        .map(|c| {
            let m = c as isize - shift as isize;
            let theta = -origin_phase(&grid, m);
            let bin = (c + n - shift) % n;
            buf[bin] * Complex::new(theta.cos(), theta.sin()).scale(scale)
        })
        .collect();
    Ok(MomentumState { grid, dp, amp, time: psi.time() })
}

/// Inverse transform: psi_j = (1 / sqrt(2 pi hbar)) sum_k amp_k e^(+i p_k x_j / hbar) dp.
///
/// Exact inverse of `to_momentum`; round trips are identity to rounding.
pub fn from_momentum<T: Real>(
    phi: &MomentumState<T>,
    units: &UnitSystem<T>,
) -> Result<WaveFunction<T>> {
    let grid = phi.grid;
    let n = grid.n_cells();
    let expected_dp = conjugate_spacing(&grid, units);
    if ((phi.dp - expected_dp) / expected_dp).abs() > T::tol(1e-12, 16.0) {
        return Err(Error::Usage(
            "momentum state was built with a different unit system".into(),
        ));
    }
    let scale = (T::real(2.0) * T::PI() * units.hbar).sqrt() / grid.dx();
    let shift = n / 2;
    let mut buf = vec![Complex::new(T::zero(), T::zero()); n];
    for c in 0..n {
        let m = c as isize - shift as isize;
        let theta = origin_phase(&grid, m);
        let bin = (c + n - shift) % n;
        buf[bin] = phi.amp[c] * Complex::new(theta.cos(), theta.sin()).scale(scale);
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    let inv_n = T::one() / T::from_usize(n).unwrap();
    for a in &mut buf {
        *a = a.scale(inv_n);
    }
    WaveFunction::new(grid, buf, phi.time)
}

/// Free evolution in momentum space: each bin acquires exp(-i E t / hbar)
/// with E = p^2 / 2m. The measure density f is untouched.
pub fn free_phase_advance<T: Real>(
    phi: &MomentumState<T>,
    t: T,
    units: &UnitSystem<T>,
) -> Result<MomentumState<T>> {
    if !t.is_finite() || t < T::zero() {
        return Err(Error::Domain("free phase advance requires t >= 0".into()));
    }
    let two_m_hbar = T::real(2.0) * units.mass * units.hbar;
    let amp: Vec<Complex<T>> = phi
        .amp
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let p = phi.p(k);
            let theta = -(p * p * t / two_m_hbar);
            a * Complex::new(theta.cos(), theta.sin())
        })
        .collect();
    Ok(MomentumState { grid: phi.grid, dp: phi.dp, amp, time: phi.time + t })
}
