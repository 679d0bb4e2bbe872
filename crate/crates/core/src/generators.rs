//! Synthetic inputs with known scaling: deterministic binomial and
//! four-quadrant cascades, Gaussian white noise, and shuffle surrogates.
//!
//! Random generators use ChaCha8 seeded through `SeedableRng::seed_from_u64`;
//! the same seed gives the same output on every platform.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::data::{Matrix, Series, Surface};
use crate::error::{invalid, Result};

/// Largest 1D cascade depth (2^30 samples).
pub const MAX_LEVELS_1D: u32 = 30;
/// Largest 2D cascade depth (4096 x 4096).
pub const MAX_LEVELS_2D: u32 = 12;

/// Binomial p-model: each segment passes `p1` of its mass to the left half
/// and `1 - p1` to the right half.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CascadeSpec1D {
    pub p1: f64,
    pub levels: u32,
}

impl CascadeSpec1D {
    pub fn new(p1: f64, levels: u32) -> Result<Self> {
        let spec = CascadeSpec1D { p1, levels };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p1 > 0.0 && self.p1 < 1.0) {
            return Err(invalid!("p1 = {} must lie in the open interval (0, 1)", self.p1));
        }
        if self.levels == 0 || self.levels > MAX_LEVELS_1D {
            return Err(invalid!(
                "cascade levels {} outside 1..={MAX_LEVELS_1D}",
                self.levels
            ));
        }
        Ok(())
    }

    pub fn p2(&self) -> f64 {
        1.0 - self.p1
    }

    pub fn weights(&self) -> [f64; 2] {
        [self.p1, self.p2()]
    }
}

/// Four-quadrant cascade. Weights are assigned in row-major quadrant order:
/// top-left, top-right, bottom-left, bottom-right.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CascadeSpec2D {
    pub weights: [f64; 4],
    pub levels: u32,
}

impl CascadeSpec2D {
    pub fn new(weights: [f64; 4], levels: u32) -> Result<Self> {
        let spec = CascadeSpec2D { weights, levels };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(invalid!("cascade weights must be finite and nonnegative"));
        }
        let total: f64 = self.weights.iter().sum();
        if libm::fabs(total - 1.0) > 1e-12 {
            return Err(invalid!("cascade weights sum to {total}, expected 1"));
        }
        if self.levels == 0 || self.levels > MAX_LEVELS_2D {
            return Err(invalid!(
                "cascade levels {} outside 1..={MAX_LEVELS_2D}",
                self.levels
            ));
        }
        Ok(())
    }
}

/// Deterministic binomial measure of length `2^levels` with unit total mass.
pub fn binomial_measure_1d(spec: &CascadeSpec1D) -> Result<Series> {
    spec.validate()?;
    let [p1, p2] = spec.weights();
    let mut mass = Vec::with_capacity(1usize << spec.levels);
    mass.push(1.0);
    for _ in 0..spec.levels {
        let parent = core::mem::take(&mut mass);
        mass.reserve(parent.len() * 2);
        for m in parent {
            mass.push(m * p1);
            mass.push(m * p2);
        }
    }
    Series::new(mass)
}

/// Deterministic four-quadrant measure of shape `2^levels x 2^levels`.
pub fn cascade_measure_2d(spec: &CascadeSpec2D) -> Result<Surface> {
    spec.validate()?;
    let [tl, tr, bl, br] = spec.weights;
    let mut side = 1usize;
    let mut mass = alloc::vec![1.0];
    for _ in 0..spec.levels {
        let next_side = side * 2;
        let mut next = alloc::vec![0.0; next_side * next_side];
        for r in 0..side {
            for c in 0..side {
                let m = mass[r * side + c];
                let top = 2 * r * next_side + 2 * c;
                let bottom = top + next_side;
                next[top] = m * tl;
                next[top + 1] = m * tr;
                next[bottom] = m * bl;
                next[bottom + 1] = m * br;
            }
        }
        mass = next;
        side = next_side;
    }
    Surface::new(Matrix::new(side, side, mass)?)
}

/// I.i.d. standard normal draws.
pub fn gaussian_noise(length: usize, seed: u64) -> Result<Series> {
    if length == 0 {
        return Err(invalid!("noise length must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..length)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    Series::new(values)
}

/// Uniform random permutation of `values` (Fisher-Yates).
pub fn shuffle_values(values: &[f64], seed: u64) -> Vec<f64> {
    let mut out = values.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    out.shuffle(&mut rng);
    out
}

/// Shuffle surrogate of a series: same values, temporal order destroyed.
pub fn shuffle_surrogate(series: &Series, seed: u64) -> Series {
    let shuffled = shuffle_values(series.values(), seed);
    let out = Series::new(shuffled).expect("permutation of a valid series is valid");
    match series.name() {
        Some(name) => out.with_name(alloc::format!("{name} (shuffled)")),
        None => out,
    }
}
