//! Multifractal detrending moving average (MFDMA) analysis of one-dimensional
//! series and two-dimensional surfaces.
//!
//! The crate is `no_std` (with `alloc`). It provides
//!
//! - [`generators`]: binomial and four-quadrant multiplicative cascades with
//!   known spectra, Gaussian white noise, and shuffle surrogates;
//! - [`dma_1d`] and [`dma_2d`]: fluctuation functions `F_q(n)` by MFDMA with a
//!   backward, centred or forward moving average, plus an MFDFA baseline;
//! - [`spectrum`]: log-log fits for `h(q)` and `tau(q)`, the numerical
//!   Legendre transform to `(alpha, f(alpha))`, and closed-form cascade
//!   spectra.
//!
//! ```
//! use mfdma_core::prelude::*;
//!
//! let measure = binomial_measure_1d(&CascadeSpec1D::new(0.3, 12).unwrap()).unwrap();
//! let scales = build_scale_grid(10, 1000, 20).unwrap();
//! let qs = QGrid::uniform(-4.0, 4.0, 0.5).unwrap();
//! let table = mfdma_fluctuations_1d(&measure, &scales, &qs, 0.0).unwrap();
//! let est = fit_scaling(&table, None, 1.0).unwrap();
//! let h2 = est.h_at(2.0).unwrap();
//! assert!((h2 - (analytic_tau_1d(0.3, 2.0) + 1.0) / 2.0).abs() < 0.05);
//! ```
//!
//! Enable the `rayon` feature to evaluate scales (1D) and window rows (2D) in
//! parallel; results are bitwise identical to the sequential path.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod data;
pub mod dma_1d;
pub mod dma_2d;
pub mod error;
pub mod generators;
mod numeric;
pub mod spectrum;

pub use data::{Matrix, Series, Surface};
pub use error::{Error, Result};

pub mod prelude {
    pub use crate::data::{Matrix, Series, Surface};
    pub use crate::dma_1d::{
        mfdfa_fluctuations_1d, mfdma_fluctuations_1d, moving_average, overall_fluctuation, profile,
        residual_series, segment_rms, DetrendConfig, MovingAverage, Profile, SegmentFluctuations,
    };
    pub use crate::dma_2d::{
        mfdfa_fluctuations_2d, mfdma_fluctuations_2d, mfdma_segments_2d, residual_matrix_2d,
        segment_rms_2d, window_aggregates, AggregateMatrix, DetrendConfig2D, Window2DAggregate,
    };
    pub use crate::error::{Error, Result};
    pub use crate::generators::{
        binomial_measure_1d, cascade_measure_2d, gaussian_noise, shuffle_surrogate, shuffle_values,
        CascadeSpec1D, CascadeSpec2D,
    };
    pub use crate::spectrum::*;
}
