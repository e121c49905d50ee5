//! Ideal-gas reference channel.
//!
//! Free particles in three dimensions have density of states `g(ε) ∝ √ε`,
//! so the equilibrium energy density is `n(ε) ∝ √ε·exp(−ε/Δ)` and vanishes
//! at zero energy. The market has constant density of states and its
//! density peaks at zero instead. This module provides both analytic laws
//! and a collision simulator in energy space whose steady state reproduces
//! the Maxwell-Boltzmann form.
//!
//! A collision pools the two energies and splits the total with a
//! `Beta(3/2, 3/2)` fraction, the microcanonical marginal for two particles
//! with three kinetic degrees of freedom each.

use std::f64::consts::{FRAC_PI_4, PI};

use rand::Rng;

use crate::error::{Error, Result};
use crate::exchange::{random_pair, GibbsModel, PairwiseSystem};
use crate::rng::SimRng;

/// Maxwell-Boltzmann energy law with scale `Δ = κT`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MBModel {
    pub delta: f64,
}

impl MBModel {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::NonPositiveTotal(delta));
        }
        Ok(MBModel { delta })
    }

    /// Scale implied by a mean energy: `Δ = (2/3)·⟨ε⟩`.
    pub fn from_mean(mean_energy: f64) -> Result<Self> {
        MBModel::new(2.0 / 3.0 * mean_energy)
    }

    pub fn mean(&self) -> f64 {
        1.5 * self.delta
    }

    pub fn mode(&self) -> f64 {
        0.5 * self.delta
    }

    /// `(2/√π)·Δ^(−3/2)·√ε·exp(−ε/Δ)`; zero for `ε ≤ 0`.
    pub fn pdf(&self, energy: f64) -> f64 {
        if energy <= 0.0 {
            return 0.0;
        }
        let x = energy / self.delta;
        2.0 / PI.sqrt() * x.sqrt() * (-x).exp() / self.delta
    }

    /// Regularized lower incomplete gamma `P(3/2, ε/Δ)`.
    pub fn cdf(&self, energy: f64) -> f64 {
        if energy <= 0.0 {
            return 0.0;
        }
        let x = energy / self.delta;
        let sx = x.sqrt();
        (libm::erf(sx) - 2.0 / PI.sqrt() * sx * (-x).exp()).clamp(0.0, 1.0)
    }
}

pub fn mb_pdf(energy: f64, model: &MBModel) -> Result<f64> {
    if energy < 0.0 {
        return Err(Error::Negative {
            what: "energy",
            value: energy,
        });
    }
    Ok(model.pdf(energy))
}

pub fn gibbs_pdf(money: f64, model: &GibbsModel) -> Result<f64> {
    if money < 0.0 {
        return Err(Error::Negative {
            what: "money",
            value: money,
        });
    }
    Ok(model.pdf(money))
}

/// CDF of `Beta(3/2, 3/2)`: `(2/π)·(asin √x − (1−2x)·√(x(1−x)))`.
pub fn beta_3_2_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    2.0 / PI * (x.sqrt().asin() - (1.0 - 2.0 * x) * (x * (1.0 - x)).sqrt())
}

// With x = sin²θ the CDF becomes (2θ − sin(4θ)/2)/π, which is smooth in θ.
fn cdf_in_angle(theta: f64) -> f64 {
    (2.0 * theta - 0.5 * (4.0 * theta).sin()) / PI
}

/// Inverse CDF of `Beta(3/2, 3/2)`.
///
/// Solved in the angle variable by Newton steps kept inside a shrinking
/// bisection bracket; the lower half is solved directly and the upper half
/// by symmetry, so `quantile(1−u) = 1 − quantile(u)` holds exactly.
pub fn beta_3_2_quantile(u: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::ProbabilityOutOfRange(u));
    }
    Ok(quantile_unchecked(u))
}

#[inline]
fn quantile_unchecked(u: f64) -> f64 {
    if u == 0.5 {
        0.5
    } else if u > 0.5 {
        1.0 - lower_quantile(1.0 - u)
    } else {
        lower_quantile(u)
    }
}

fn lower_quantile(u: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, FRAC_PI_4);
    // Small-angle expansion: F(θ) ≈ 16θ³/(3π).
    let mut theta = (3.0 * PI * u / 16.0).cbrt().min(FRAC_PI_4);
    for _ in 0..100 {
        let f = cdf_in_angle(theta) - u;
        if f == 0.0 {
            break;
        }
        if f < 0.0 {
            lo = theta;
        } else {
            hi = theta;
        }
        let s = (2.0 * theta).sin();
        let slope = 4.0 * s * s / PI;
        let newton = theta - f / slope;
        if (newton - theta).abs() <= 4.0 * f64::EPSILON * theta {
            theta = newton;
            break;
        }
        theta = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    let s = theta.sin();
    s * s
}

/// Energy-conserving collision: the pooled energy `E` is split as
/// `(s·E, E − s·E)` with `s` the `Beta(3/2, 3/2)` quantile at `u`.
/// The smaller share is formed by subtraction so the pair sum is exact.
pub fn collide(energy_i: f64, energy_j: f64, u: f64) -> (f64, f64) {
    debug_assert!(energy_i >= 0.0 && energy_j >= 0.0);
    debug_assert!((0.0..=1.0).contains(&u));
    let total = energy_i + energy_j;
    let s = quantile_unchecked(u);
    if s >= 0.5 {
        let share = (s * total).min(total);
        (share, total - share)
    } else {
        let share = ((1.0 - s) * total).min(total);
        (total - share, share)
    }
}

/// Particles exchanging kinetic energy through random pair collisions.
#[derive(Debug, Clone, PartialEq)]
pub struct GasEnsemble {
    energy: Vec<f64>,
    total_energy: f64,
}

impl GasEnsemble {
    /// `n_particles` particles, each starting at `total_energy / n_particles`.
    pub fn new(n_particles: usize, total_energy: f64) -> Result<Self> {
        if n_particles < 2 {
            return Err(Error::TooFewAgents(n_particles));
        }
        if !(total_energy.is_finite() && total_energy > 0.0) {
            return Err(Error::NonPositiveTotal(total_energy));
        }
        Ok(GasEnsemble {
            energy: vec![total_energy / n_particles as f64; n_particles],
            total_energy,
        })
    }

    pub fn n_particles(&self) -> usize {
        self.energy.len()
    }

    pub fn total_energy(&self) -> f64 {
        self.total_energy
    }

    pub fn energy(&self) -> &[f64] {
        &self.energy
    }

    pub fn mean_energy(&self) -> f64 {
        self.total_energy / self.energy.len() as f64
    }

    /// Maxwell-Boltzmann law with `Δ` fixed by the conserved mean energy.
    pub fn mb_model(&self) -> MBModel {
        MBModel {
            delta: 2.0 / 3.0 * self.mean_energy(),
        }
    }

    pub fn collide_pair(&mut self, i: usize, j: usize, u: f64) {
        let (a, b) = collide(self.energy[i], self.energy[j], u);
        self.energy[i] = a;
        self.energy[j] = b;
    }
}

impl PairwiseSystem for GasEnsemble {
    fn values(&self) -> &[f64] {
        &self.energy
    }

    #[inline]
    fn step(&mut self, rng: &mut SimRng) {
        let (i, j) = random_pair(rng, self.energy.len());
        let u: f64 = rng.random();
        self.collide_pair(i, j, u);
    }
}
