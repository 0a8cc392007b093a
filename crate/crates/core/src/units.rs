//! Physical-constant registry and Planck-scale formulas.
//!
//! Two modes are supported. "SI" carries the CODATA 2018 constants and is
//! used for headline numbers (Planck length ~1.616e-35 m, Planck time
//! ~5.391e-44 s, collapse-time estimates). "Scaled" sets hbar = mass = 1
//! with a configurable Planck energy; the lattice dynamics only depend on
//! the ratio dE / (k * E_p), so E_p acts as a free scale parameter there.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Newtonian constant of gravitation, m^3 kg^-1 s^-2 (CODATA 2018, ~6.674e-11).
pub const GRAV_CONSTANT: f64 = 6.674_30e-11;
/// Reduced Planck constant, J s (~1.055e-34).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Electron mass, kg (~9.109e-31); default SI particle mass.
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
/// Joules per GeV (~1.602e-10).
pub const JOULE_PER_GEV: f64 = 1.602_176_634e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitMode {
    Si,
    Scaled,
}

/// Simulation unit system. Immutable after construction; share freely.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem<T: Real> {
    pub mode: UnitMode,
    pub hbar: T,
    pub mass: T,
    pub planck_energy: T,
    pub planck_time: T,
    pub planck_length: T,
    /// SI mode only.
    pub speed_of_light: Option<T>,
    /// SI mode only.
    pub grav_constant: Option<T>,
}

impl<T: Real> UnitSystem<T> {
    /// CODATA 2018 constants; particle mass defaults to the electron mass.
    pub fn si() -> Self {
        let c = T::real(SPEED_OF_LIGHT);
        let hbar = T::real(HBAR);
        let (l_p, t_p) = planck_scales(c, T::real(GRAV_CONSTANT), hbar)
            .expect("CODATA constants are positive");
        Self {
            mode: UnitMode::Si,
            hbar,
            mass: T::real(ELECTRON_MASS),
            // E_p derived as hbar / T_p so E_p * T_p == hbar holds to rounding.
            planck_energy: hbar / t_p,
            planck_time: t_p,
            planck_length: l_p,
            speed_of_light: Some(c),
            grav_constant: Some(T::real(GRAV_CONSTANT)),
        }
    }

    /// hbar = mass = 1; Planck energy is the free scale knob.
    ///
    /// The Planck length has no dynamical role on the lattice (collapse
    /// granularity is the configured cell width), so it is set to one unit.
    pub fn scaled(planck_energy: T) -> Result<Self> {
        if !(planck_energy > T::zero()) || !planck_energy.is_finite() {
            return Err(Error::Domain("scaled Planck energy must be positive".into()));
        }
        Ok(Self {
            mode: UnitMode::Scaled,
            hbar: T::one(),
            mass: T::one(),
            planck_energy,
            planck_time: T::one() / planck_energy,
            planck_length: T::one(),
            speed_of_light: None,
            grav_constant: None,
        })
    }

    /// Minimum measurable length bounds for measuring a distance `length`
    /// with a clock of mass `clock_mass`. SI mode only.
    pub fn min_length_uncertainty(&self, length: T, clock_mass: T) -> Result<MinLengthBounds<T>> {
        let (c, g) = match (self.speed_of_light, self.grav_constant) {
            (Some(c), Some(g)) => (c, g),
            _ => return Err(Error::Usage("min_length_uncertainty requires SI mode".into())),
        };
        if !(length > T::zero()) || !(clock_mass > T::zero()) {
            return Err(Error::Domain("length and clock mass must be positive".into()));
        }
        let quantum = (self.hbar * length / (clock_mass * c)).sqrt();
        let gravitational = g * clock_mass / (c * c);
        let total = (length * self.planck_length * self.planck_length).cbrt();
        Ok(MinLengthBounds { quantum, gravitational, total })
    }
}

/// The three length-measurement lower bounds; `total` is clock-mass independent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinLengthBounds<T> {
    /// dL >= (hbar L / (m c))^(1/2): quantum clock spreading.
    pub quantum: T,
    /// dL >= G m / c^2: gravitational back-action of the clock.
    pub gravitational: T,
    /// dL >= (L L_p^2)^(1/3): combined, after optimizing over clock mass.
    pub total: T,
}

/// Planck length and time from (c, G, hbar):
/// L_p = (G hbar / c^3)^(1/2), T_p = (G hbar / c^5)^(1/2) = L_p / c.
pub fn planck_scales<T: Real>(c: T, g: T, hbar: T) -> Result<(T, T)> {
    for (name, v) in [("c", c), ("G", g), ("hbar", hbar)] {
        if !(v > T::zero()) || !v.is_finite() {
            return Err(Error::Domain(format!("{name} must be positive and finite")));
        }
    }
    let l_p = (g * hbar / (c * c * c)).sqrt();
    let t_p = (g * hbar / (c * c * c * c * c)).sqrt();
    Ok((l_p, t_p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codata_planck_scales() {
        let (l_p, t_p) =
            planck_scales(SPEED_OF_LIGHT, GRAV_CONSTANT, HBAR).unwrap();
        // CODATA 2018 published values.
        assert!((l_p / 1.616_255e-35 - 1.0).abs() < 1e-4, "L_p = {l_p:e}");
        assert!((t_p / 5.391_247e-44 - 1.0).abs() < 1e-4, "T_p = {t_p:e}");
    }

    #[test]
    fn rounded_inputs_reproduce_rounded_scales() {
        // 4-significant-figure constants still land on the familiar values.
        let (l_p, t_p) = planck_scales(2.998e8, 6.674e-11, 1.055e-34).unwrap();
        assert!((l_p / 1.616e-35 - 1.0).abs() < 1e-3);
        assert!((t_p / 5.391e-44 - 1.0).abs() < 2e-3);
    }

    #[test]
    fn natural_units_degenerate_to_one() {
        let (l_p, t_p) = planck_scales(1.0f64, 1.0, 1.0).unwrap();
        assert_eq!(l_p, 1.0);
        assert_eq!(t_p, 1.0);
    }

    #[test]
    fn length_over_time_is_light_speed() {
        for (c, g, h) in [(3.1e8, 7.0e-11, 1.0e-34), (12.0, 0.5, 2.0), (1.0, 1.0, 1.0)] {
            let (l_p, t_p) = planck_scales(c, g, h).unwrap();
            assert!((l_p / t_p / c - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn planck_scales_reject_nonpositive() {
        assert!(planck_scales(0.0, 1.0, 1.0).is_err());
        assert!(planck_scales(1.0, -1.0, 1.0).is_err());
        assert!(planck_scales(1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn energy_time_product_is_hbar() {
        let si = UnitSystem::<f64>::si();
        assert!((si.planck_energy * si.planck_time - si.hbar).abs() <= 4.0 * f64::EPSILON * si.hbar);
        let sc = UnitSystem::<f64>::scaled(250.0).unwrap();
        assert!((sc.planck_energy * sc.planck_time - sc.hbar).abs() <= 4.0 * f64::EPSILON);
        assert_eq!(sc.hbar, 1.0);
        assert_eq!(sc.mass, 1.0);
    }

    #[test]
    fn min_length_bounds_match_direct_evaluation() {
        let si = UnitSystem::<f64>::si();
        let b = si.min_length_uncertainty(1.0, 1.0e-3).unwrap();
        // (L * L_p^2)^(1/3) with the CODATA Planck length.
        assert!((b.total / 6.392_6e-24 - 1.0).abs() < 1e-3, "total = {:e}", b.total);
        // Fixed point at L = L_p.
        let at_lp = si.min_length_uncertainty(si.planck_length, 1.0).unwrap();
        assert!((at_lp.total / si.planck_length - 1.0).abs() < 1e-12);
    }

    #[test]
    fn min_length_mass_scaling() {
        let si = UnitSystem::<f64>::si();
        let m = 2.5e-5;
        let b1 = si.min_length_uncertainty(1.0, m).unwrap();
        let b2 = si.min_length_uncertainty(1.0, 2.0 * m).unwrap();
        assert!((b2.quantum * 2.0f64.sqrt() / b1.quantum - 1.0).abs() < 1e-12);
        assert!((b2.gravitational / (2.0 * b1.gravitational) - 1.0).abs() < 1e-12);
        assert_eq!(b1.total, b2.total);
    }

    #[test]
    fn combined_bound_tracks_minimum_over_clock_mass() {
        // min_m (dL_qm + dL_gr) stays within a factor 2 of (L L_p^2)^(1/3).
        let si = UnitSystem::<f64>::si();
        for length in [1e-10, 1.0, 1e6] {
            let total = si.min_length_uncertainty(length, 1.0).unwrap().total;
            let mut best = f64::INFINITY;
            for i in 0..2000 {
                let m = 10f64.powf(-30.0 + 40.0 * (i as f64) / 2000.0);
                let b = si.min_length_uncertainty(length, m).unwrap();
                best = best.min(b.quantum + b.gravitational);
            }
            assert!(best >= total * 0.999, "minimum undercuts the combined bound");
            assert!(best < 2.0 * total, "minimum should sit within 2x of the bound");
        }
    }

    #[test]
    fn scaled_mode_rejects_si_only_queries() {
        let sc = UnitSystem::<f64>::scaled(1.0).unwrap();
        assert!(sc.min_length_uncertainty(1.0, 1.0).is_err());
        assert!(UnitSystem::<f64>::scaled(0.0).is_err());
    }
}
