//! Lattice wavefunction and its kinematic descriptions: position density
//! rho(x,t), flux j(x,t), phase S(x,t), and the continuity residual
//! d(rho)/dt + dj/dx that should vanish under unitary evolution.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::grid::{Boundary, LatticeGrid};
use crate::real::Real;
use crate::units::UnitSystem;

/// Complex amplitudes on a lattice, dimension length^(-1/2).
///
/// Invariant: sum |amp_i|^2 dx = 1 (validated at construction).
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction<T: Real> {
    grid: LatticeGrid<T>,
    amp: Vec<Complex<T>>,
    time: T,
}

impl<T: Real> WaveFunction<T> {
    /// Build from amplitudes that are already normalized (within 1e-9).
    pub fn new(grid: LatticeGrid<T>, amp: Vec<Complex<T>>, time: T) -> Result<Self> {
        if amp.len() != grid.n_cells() {
            return Err(Error::Domain(format!(
                "amplitude count {} does not match grid cells {}",
                amp.len(),
                grid.n_cells()
            )));
        }
        let psi = Self { grid, amp, time };
        let err = (psi.norm_sq() - T::one()).abs();
        let tol = T::tol(1e-9, 1e3);
        if err > tol {
            return Err(Error::Domain(format!(
                "state not normalized: |norm^2 - 1| = {:e}",
                err.to_f64().unwrap_or(f64::NAN)
            )));
        }
        Ok(psi)
    }

    /// Build from arbitrary non-null amplitudes, rescaling to unit norm.
    pub fn from_unnormalized(grid: LatticeGrid<T>, amp: Vec<Complex<T>>, time: T) -> Result<Self> {
        if amp.len() != grid.n_cells() {
            return Err(Error::Domain(format!(
                "amplitude count {} does not match grid cells {}",
                amp.len(),
                grid.n_cells()
            )));
        }
        let mut psi = Self { grid, amp, time };
        let n = psi.norm_sq();
        if !(n > T::zero()) || !n.is_finite() {
            return Err(Error::Domain("cannot normalize a null or non-finite state".into()));
        }
        let scale = T::one() / n.sqrt();
        for a in &mut psi.amp {
            *a = a.scale(scale);
        }
        Ok(psi)
    }

    pub(crate) fn new_unchecked(grid: LatticeGrid<T>, amp: Vec<Complex<T>>, time: T) -> Self {
        Self { grid, amp, time }
    }

    pub fn grid(&self) -> &LatticeGrid<T> {
        &self.grid
    }

    pub fn amp(&self) -> &[Complex<T>] {
        &self.amp
    }

    pub fn time(&self) -> T {
        self.time
    }

    pub(crate) fn set_time(&mut self, t: T) {
        self.time = t;
    }

    pub(crate) fn amp_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.amp
    }

    /// sum |amp_i|^2 dx.
    pub fn norm_sq(&self) -> T {
        let s = self
            .amp
            .iter()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr());
        s * self.grid.dx()
    }

    /// Pointwise density |psi_i|^2.
    pub fn density(&self) -> Vec<T> {
        self.amp.iter().map(|a| a.norm_sqr()).collect()
    }

    /// <self|other> = sum conj(a_i) b_i dx.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        self.grid.require_same(&other.grid, "inner product")?;
        let s = self
            .amp
            .iter()
            .zip(&other.amp)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b);
        Ok(s * Complex::new(self.grid.dx(), T::zero()))
    }

    /// Rescale to exact unit norm (guards drift accumulated over long runs).
    pub fn renormalize(&mut self) {
        let n = self.norm_sq();
        if n > T::zero() {
            let scale = T::one() / n.sqrt();
            for a in &mut self.amp {
                *a = a.scale(scale);
            }
        }
    }
}

/// Position measure density rho(x) (length^-1) and flux j(x) (time^-1).
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureField<T: Real> {
    grid: LatticeGrid<T>,
    rho: Vec<T>,
    flux: Vec<T>,
}

impl<T: Real> MeasureField<T> {
    pub fn new(grid: LatticeGrid<T>, rho: Vec<T>, flux: Vec<T>) -> Result<Self> {
        if rho.len() != grid.n_cells() || flux.len() != grid.n_cells() {
            return Err(Error::Domain("field length does not match grid".into()));
        }
        if rho.iter().any(|&r| r < T::zero() || !r.is_finite()) {
            return Err(Error::Domain("density must be non-negative and finite".into()));
        }
        let total = rho.iter().fold(T::zero(), |acc, &r| acc + r) * grid.dx();
        if (total - T::one()).abs() > T::tol(1e-9, 1e3) {
            return Err(Error::Domain(format!(
                "density not normalized: total = {}",
                total.to_f64().unwrap_or(f64::NAN)
            )));
        }
        Ok(Self { grid, rho, flux })
    }

    pub fn grid(&self) -> &LatticeGrid<T> {
        &self.grid
    }

    pub fn rho(&self) -> &[T] {
        &self.rho
    }

    pub fn flux(&self) -> &[T] {
        &self.flux
    }
}

/// Density floor below which the phase S = m int j/rho dx' is treated as
/// undefined: 1e-12 of the uniform density 1/(n dx).
pub fn rho_floor<T: Real>(grid: &LatticeGrid<T>) -> T {
    T::real(1e-12) / grid.length()
}

/// Spatial derivative, second order: central in the bulk, periodic wrap or
/// one-sided three-point stencils at Dirichlet edges.
fn derivative<T: Real, V, F>(grid: &LatticeGrid<T>, f: F, n: usize) -> Vec<V>
where
    V: Copy
        + std::ops::Sub<Output = V>
        + std::ops::Add<Output = V>
        + std::ops::Mul<T, Output = V>,
    F: Fn(usize) -> V,
{
    let dx = grid.dx();
    let half = T::one() / (T::real(2.0) * dx);
    let mut out = Vec::with_capacity(n);
    match grid.boundary() {
        Boundary::Periodic => {
            for i in 0..n {
                let prev = f((i + n - 1) % n);
                let next = f((i + 1) % n);
                out.push((next - prev) * half);
            }
        }
        Boundary::Dirichlet => {
            for i in 0..n {
                let d = if i == 0 {
                    if n >= 3 {
                        // (-3 f0 + 4 f1 - f2) / (2 dx)
                        (f(1) * T::real(4.0) - f(0) * T::real(3.0) - f(2)) * half
                    } else {
                        (f(1) - f(0)) * (T::one() / dx)
                    }
                } else if i == n - 1 {
                    if n >= 3 {
                        (f(n - 1) * T::real(3.0) - f(n - 2) * T::real(4.0) + f(n - 3)) * half
                    } else {
                        (f(n - 1) - f(n - 2)) * (T::one() / dx)
                    }
                } else {
                    (f(i + 1) - f(i - 1)) * half
                };
                out.push(d);
            }
        }
    }
    out
}

/// rho = |psi|^2 and j = (hbar/m) Im(psi* dpsi/dx).
pub fn extract_measures<T: Real>(
    psi: &WaveFunction<T>,
    units: &UnitSystem<T>,
) -> MeasureField<T> {
    let n = psi.grid().n_cells();
    let amp = psi.amp();
    let rho: Vec<T> = amp.iter().map(|a| a.norm_sqr()).collect();
    let dpsi = derivative(psi.grid(), |i| amp[i], n);
    let scale = units.hbar / units.mass;
    let flux: Vec<T> = amp
        .iter()
        .zip(&dpsi)
        .map(|(a, d)| (a.conj() * d).im * scale)
        .collect();
    MeasureField { grid: *psi.grid(), rho, flux }
}

/// Phase field S(x) with S(x_min) = 0, from S = m int_{x_min}^x j/rho dx'
/// (trapezoid rule). Fails on any cell whose density sits below the floor.
pub fn reconstruct_phase<T: Real>(
    mf: &MeasureField<T>,
    units: &UnitSystem<T>,
) -> Result<Vec<T>> {
    let floor = rho_floor(mf.grid());
    let n = mf.grid().n_cells();
    for (i, &r) in mf.rho.iter().enumerate() {
        if r <= floor {
            return Err(Error::NodalRegion {
                cell: i,
                rho: r.to_f64().unwrap_or(f64::NAN),
                floor: floor.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    let v: Vec<T> = (0..n).map(|i| units.mass * mf.flux[i] / mf.rho[i]).collect();
    let half_dx = mf.grid().dx() / T::real(2.0);
    let mut s = Vec::with_capacity(n);
    s.push(T::zero());
    for i in 1..n {
        let prev = s[i - 1];
        s.push(prev + (v[i - 1] + v[i]) * half_dx);
    }
    Ok(s)
}

/// psi = rho^(1/2) exp(i S / hbar); inverse of `extract_measures` composed
/// with `reconstruct_phase`, up to a global phase.
pub fn wavefunction_from_measures<T: Real>(
    mf: &MeasureField<T>,
    phase: &[T],
    units: &UnitSystem<T>,
    time: T,
) -> Result<WaveFunction<T>> {
    if phase.len() != mf.grid.n_cells() {
        return Err(Error::Domain("phase length does not match grid".into()));
    }
    let amp: Vec<Complex<T>> = mf
        .rho
        .iter()
        .zip(phase)
        .map(|(&r, &s)| {
            let theta = s / units.hbar;
            Complex::new(theta.cos(), theta.sin()).scale(r.sqrt())
        })
        .collect();
    WaveFunction::new(mf.grid, amp, time)
}

/// Pointwise residual of d(rho)/dt + dj/dx between two snapshots.
#[derive(Debug, Clone)]
pub struct ContinuityCheck<T> {
    pub residual: Vec<T>,
    pub max_norm: T,
}

/// Forward difference in time against the midpoint flux divergence
/// (average of j at the two snapshots), both second order.
pub fn continuity_residual<T: Real>(
    psi_t1: &WaveFunction<T>,
    psi_t2: &WaveFunction<T>,
    units: &UnitSystem<T>,
) -> Result<ContinuityCheck<T>> {
    psi_t1.grid().require_same(psi_t2.grid(), "continuity residual")?;
    let dt = psi_t2.time() - psi_t1.time();
    if !(dt > T::zero()) {
        return Err(Error::Usage("continuity residual requires t2 > t1".into()));
    }
    let m1 = extract_measures(psi_t1, units);
    let m2 = extract_measures(psi_t2, units);
    let n = psi_t1.grid().n_cells();
    let half = T::real(0.5);
    let j_mid: Vec<T> = (0..n).map(|i| (m1.flux[i] + m2.flux[i]) * half).collect();
    let djdx = derivative(psi_t1.grid(), |i| j_mid[i], n);
    let mut max_norm = T::zero();
    let mut residual = Vec::with_capacity(n);
    for i in 0..n {
        let r = (m2.rho[i] - m1.rho[i]) / dt + djdx[i];
        max_norm = max_norm.max(r.abs());
        residual.push(r);
    }
    Ok(ContinuityCheck { residual, max_norm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn scaled() -> UnitSystem<f64> {
        UnitSystem::scaled(1.0).unwrap()
    }

    fn grid(n: usize, len: f64) -> LatticeGrid<f64> {
        LatticeGrid::centered(n, len).unwrap()
    }

    #[test]
    fn plane_wave_measures_are_uniform() {
        let u = scaled();
        let g = grid(128, 16.0);
        let mode = 3i64;
        let psi = presets::plane_wave(&g, &u, mode).unwrap();
        let p0 = 2.0 * std::f64::consts::PI * u.hbar * mode as f64 / g.length();
        let mf = extract_measures(&psi, &u);
        let rho_expect = 1.0 / g.length();
        for &r in mf.rho() {
            assert_relative_eq!(r, rho_expect, max_relative = 1e-12);
        }
        // Central differences see sin(p dx / hbar)/dx instead of p/hbar.
        let k = p0 / u.hbar;
        let sinc = (k * g.dx()).sin() / (k * g.dx());
        let flux_expect = rho_expect * p0 / u.mass;
        for &j in mf.flux() {
            assert_relative_eq!(j, flux_expect * sinc, max_relative = 1e-10);
            assert_relative_eq!(j, flux_expect, max_relative = (k * g.dx()).powi(2) / 5.0);
        }
    }

    #[test]
    fn real_state_has_zero_flux() {
        let u = scaled();
        let g = grid(200, 20.0);
        let psi = presets::gaussian_packet(&g, &u, 0.0, 1.0, 0.0).unwrap();
        let mf = extract_measures(&psi, &u);
        for &j in mf.flux() {
            assert!(j.abs() < 1e-14);
        }
    }

    #[test]
    fn boosted_gaussian_flux_tracks_density() {
        let u = scaled();
        let p0 = 1.0;
        let errs: Vec<f64> = [0.05, 0.025]
            .iter()
            .map(|&dx| {
                let n = (20.0 / dx) as usize;
                let g = LatticeGrid::new(n, dx, -10.0, Boundary::Periodic).unwrap();
                let psi = presets::gaussian_packet(&g, &u, 0.0, 1.0, p0).unwrap();
                let mf = extract_measures(&psi, &u);
                let rho_max = mf.rho().iter().cloned().fold(0.0, f64::max);
                mf.rho()
                    .iter()
                    .zip(mf.flux())
                    .filter(|(&r, _)| r > 1e-3 * rho_max)
                    .map(|(&r, &j)| (j / (r * p0 / u.mass) - 1.0).abs())
                    .fold(0.0, f64::max)
            })
            .collect();
        assert!(errs[0] < 1e-2, "coarse grid error {}", errs[0]);
        assert!(errs[0] / errs[1] > 3.0, "not second order: {errs:?}");
    }

    #[test]
    fn two_mode_superposition_density_is_fringed() {
        let u = scaled();
        let g = grid(256, 32.0);
        let (m1, m2) = (2i64, 5i64);
        let (c1, c2) = (0.3, 1.1);
        let w1 = presets::plane_wave(&g, &u, m1).unwrap();
        let w2 = presets::plane_wave(&g, &u, m2).unwrap();
        let rot = |c: f64| Complex::new(0.0, -c).exp();
        let amp: Vec<Complex<f64>> = w1
            .amp()
            .iter()
            .zip(w2.amp())
            .map(|(a, b)| (a * rot(c1) + b * rot(c2)) / 2f64.sqrt())
            .collect();
        let psi = WaveFunction::new(g, amp, 0.0).unwrap();
        let dp = 2.0 * std::f64::consts::PI * u.hbar / g.length();
        let (p1, p2) = (dp * m1 as f64, dp * m2 as f64);
        for (i, &r) in psi.density().iter().enumerate() {
            let x = g.x(i);
            let expect = (1.0 + ((c2 - c1) - (p2 - p1) * x / u.hbar).cos()) / g.length();
            assert!((r - expect).abs() < 1e-12, "cell {i}: {r} vs {expect}");
        }
    }

    #[test]
    fn plane_wave_phase_is_linear() {
        let u = scaled();
        let g = grid(64, 8.0);
        let psi = presets::plane_wave(&g, &u, 2).unwrap();
        let p0 = 2.0 * std::f64::consts::PI * u.hbar * 2.0 / g.length();
        let mf = extract_measures(&psi, &u);
        let s = reconstruct_phase(&mf, &u).unwrap();
        // The trapezoid rule integrates the constant integrand exactly, up to
        // the sinc factor the discrete flux carries.
        let k = p0 / u.hbar;
        let sinc = (k * g.dx()).sin() / (k * g.dx());
        for (i, &si) in s.iter().enumerate() {
            let expect = p0 * (g.x(i) - g.x_min()) * sinc;
            assert_relative_eq!(si, expect, max_relative = 1e-10, epsilon = 1e-12);
        }
    }

    #[test]
    fn zero_flux_means_zero_phase() {
        let u = scaled();
        let g = grid(64, 16.0);
        let psi = presets::gaussian_packet(&g, &u, 0.0, 2.0, 0.0).unwrap();
        let mf = extract_measures(&psi, &u);
        let s = reconstruct_phase(&mf, &u).unwrap();
        for &si in &s {
            assert!(si.abs() < 1e-12);
        }
    }

    #[test]
    fn measure_roundtrip_recovers_state() {
        let u = scaled();
        let g = grid(512, 32.0);
        let psi = presets::gaussian_packet(&g, &u, 1.0, 2.0, 0.7).unwrap();
        let mf = extract_measures(&psi, &u);
        let s = reconstruct_phase(&mf, &u).unwrap();
        let rebuilt = wavefunction_from_measures(&mf, &s, &u, psi.time()).unwrap();
        let fidelity = rebuilt.inner(&psi).unwrap().norm();
        assert!(fidelity > 1.0 - 1e-6, "fidelity {fidelity}");
    }

    #[test]
    fn nodal_state_refuses_phase() {
        let u = scaled();
        let g = grid(128, 16.0);
        // Odd superposition with a node at the origin.
        let a = presets::gaussian_packet(&g, &u, -3.0, 1.0, 0.0).unwrap();
        let b = presets::gaussian_packet(&g, &u, 3.0, 1.0, 0.0).unwrap();
        let amp: Vec<Complex<f64>> = a
            .amp()
            .iter()
            .zip(b.amp())
            .map(|(x, y)| x - y)
            .collect();
        let psi = WaveFunction::from_unnormalized(g, amp, 0.0).unwrap();
        let mf = extract_measures(&psi, &u);
        match reconstruct_phase(&mf, &u) {
            Err(Error::NodalRegion { .. }) => {}
            other => panic!("expected nodal-region error, got {other:?}"),
        }
    }

    #[test]
    fn stationary_state_satisfies_continuity() {
        let u = scaled();
        let n = 128;
        let g = LatticeGrid::new(n, 0.1, 0.0, Boundary::Dirichlet).unwrap();
        // Exact eigenvector of the discrete Dirichlet Laplacian.
        let amp: Vec<Complex<f64>> = (0..n)
            .map(|j| {
                Complex::new(
                    (std::f64::consts::PI * (j as f64 + 1.0) / (n as f64 + 1.0)).sin(),
                    0.0,
                )
            })
            .collect();
        let psi1 = WaveFunction::from_unnormalized(g, amp, 0.0).unwrap();
        let energy = u.hbar * u.hbar / (u.mass * g.dx() * g.dx())
            * (1.0 - (std::f64::consts::PI / (n as f64 + 1.0)).cos());
        let dt = 0.05;
        let phase = Complex::new(0.0, -energy * dt / u.hbar).exp();
        let amp2: Vec<Complex<f64>> = psi1.amp().iter().map(|a| a * phase).collect();
        let mut psi2 = WaveFunction::new(g, amp2, 0.0).unwrap();
        psi2.set_time(dt);
        let check = continuity_residual(&psi1, &psi2, &u).unwrap();
        assert!(check.max_norm < 1e-10, "max residual {}", check.max_norm);
    }

    #[test]
    fn plane_wave_continuity_is_exact() {
        let u = scaled();
        let g = grid(64, 8.0);
        let psi1 = presets::plane_wave(&g, &u, 3).unwrap();
        let p0 = 2.0 * std::f64::consts::PI * u.hbar * 3.0 / g.length();
        let energy = p0 * p0 / (2.0 * u.mass);
        let dt = 0.1;
        let phase = Complex::new(0.0, -energy * dt / u.hbar).exp();
        let amp2: Vec<Complex<f64>> = psi1.amp().iter().map(|a| a * phase).collect();
        let mut psi2 = WaveFunction::new(g, amp2, 0.0).unwrap();
        psi2.set_time(dt);
        let check = continuity_residual(&psi1, &psi2, &u).unwrap();
        assert!(check.max_norm < 1e-10);
    }

    #[test]
    fn mismatched_grids_are_rejected() {
        let u = scaled();
        let a = presets::gaussian_packet(&grid(64, 8.0), &u, 0.0, 1.0, 0.0).unwrap();
        let b = presets::gaussian_packet(&grid(128, 8.0), &u, 0.0, 1.0, 0.0).unwrap();
        assert!(matches!(
            continuity_residual(&a, &b, &u),
            Err(Error::GridMismatch(_))
        ));
    }

    proptest! {
        #[test]
        fn extraction_preserves_total_measure(seedlets in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16)) {
            let u = scaled();
            let g = grid(16, 8.0);
            let amp: Vec<Complex<f64>> = seedlets.iter().map(|&(re, im)| Complex::new(re + 0.1, im)).collect();
            let psi = WaveFunction::from_unnormalized(g, amp, 0.0).unwrap();
            let mf = extract_measures(&psi, &u);
            let total: f64 = mf.rho().iter().sum::<f64>() * g.dx();
            prop_assert!((total - psi.norm_sq()).abs() < 1e-12);
        }

        #[test]
        fn flux_is_conjugation_antisymmetric(seedlets in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 24)) {
            let u = scaled();
            let g = grid(24, 6.0);
            let amp: Vec<Complex<f64>> = seedlets.iter().map(|&(re, im)| Complex::new(re + 0.05, im)).collect();
            let psi = WaveFunction::from_unnormalized(g, amp.clone(), 0.0).unwrap();
            let conj_amp: Vec<Complex<f64>> = psi.amp().iter().map(|a| a.conj()).collect();
            let psi_conj = WaveFunction::new(g, conj_amp, 0.0).unwrap();
            let f = extract_measures(&psi, &u);
            let fc = extract_measures(&psi_conj, &u);
            for (a, b) in f.flux().iter().zip(fc.flux()) {
                prop_assert_eq!(*a, -*b);
            }
        }
    }
}
