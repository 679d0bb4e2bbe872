//! One-dimensional MFDMA and its MFDFA baseline.
//!
//! For a series `x(1..N)` with profile `y(t) = x(1) + ... + x(t)`, the moving
//! average over a window of `n` points positioned by `theta` is
//!
//! ```text
//! y~(t) = (1/n) * sum_{k = -lead}^{lag} y(t - k),   lead = floor((n-1) theta),
//!                                                   lag  = (n-1) - lead,
//! ```
//!
//! defined for `t` in `[n - lead, N - lead]`. The residual `y - y~` on that
//! domain (length `N - n + 1`) is cut into `floor((N - n + 1) / n)` disjoint
//! blocks of the same size `n` as the averaging window, and the block RMS
//! values are combined into the q-order fluctuation function `F_q(n)`.

use alloc::vec::Vec;

use crate::data::Series;
use crate::error::{invalid, Error, Result};
use crate::numeric::{floor_snapped, CompensatedSum, Dd};
use crate::spectrum::{FluctuationTable, QGrid, ScaleGrid};

/// Cumulative sums `y(t)` of a series.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    values: Vec<f64>,
}

impl Profile {
    /// Wrap precomputed profile values.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid!("profile is empty"));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Profile { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Cumulative sums, accumulated in double-double precision.
pub fn profile(series: &Series) -> Profile {
    let mut acc = Dd::ZERO;
    let values = series
        .values()
        .iter()
        .map(|&x| {
            acc = acc.add_f64(x);
            acc.to_f64()
        })
        .collect();
    Profile { values }
}

/// Moving-average window size `n` and position parameter `theta`.
///
/// `theta = 0` averages the current and `n - 1` past points (backward),
/// `theta = 1` the current and `n - 1` future points (forward).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DetrendConfig {
    window: usize,
    theta: f64,
}

impl DetrendConfig {
    pub fn new(window: usize, theta: f64) -> Result<Self> {
        if window < 2 {
            return Err(invalid!("window size {window} must be at least 2"));
        }
        validate_theta(theta)?;
        Ok(DetrendConfig { window, theta })
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Number of future points in the window, `floor((n - 1) theta)`.
    pub fn lead(&self) -> usize {
        floor_snapped((self.window - 1) as f64 * self.theta) as usize
    }

    /// Number of past points in the window, `ceil((n - 1)(1 - theta))`.
    pub fn lag(&self) -> usize {
        self.window - 1 - self.lead()
    }

    /// First and last `t` (1-based) on which the moving average is defined.
    pub fn domain(&self, len: usize) -> Result<(usize, usize)> {
        if self.window > len {
            return Err(invalid!(
                "window size {} exceeds the profile length {len}",
                self.window
            ));
        }
        let lead = self.lead();
        Ok((self.window - lead, len - lead))
    }
}

pub(crate) fn validate_theta(theta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(invalid!("position parameter theta = {theta} must lie in [0, 1]"));
    }
    Ok(())
}

/// `y~(t)` on its domain `[first, last]` (1-based, inclusive).
#[derive(Debug, Clone, PartialEq)]
pub struct MovingAverage {
    first: usize,
    values: Vec<f64>,
}

impl MovingAverage {
    pub fn first(&self) -> usize {
        self.first
    }

    pub fn last(&self) -> usize {
        self.first + self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `y~(t)` for 1-based `t`.
    pub fn get(&self, t: usize) -> Result<f64> {
        if t < self.first || t > self.last() {
            return Err(Error::OutOfDomain {
                index: t,
                first: self.first,
                last: self.last(),
            });
        }
        Ok(self.values[t - self.first])
    }
}

/// Profile together with double-double prefix sums of its values, so any
/// window mean costs O(1) and keeps full relative precision.
struct ProfileWindows<'a> {
    y: &'a [f64],
    prefix: Vec<Dd>,
}

impl<'a> ProfileWindows<'a> {
    fn new(y: &'a [f64]) -> Self {
        let mut prefix = Vec::with_capacity(y.len() + 1);
        let mut acc = Dd::ZERO;
        prefix.push(acc);
        for &v in y {
            acc = acc.add_f64(v);
            prefix.push(acc);
        }
        ProfileWindows { y, prefix }
    }

    /// Mean of `y[start .. start + n]` (0-based).
    #[inline]
    fn window_mean(&self, start: usize, n: usize) -> Dd {
        self.prefix[start + n]
            .sub(self.prefix[start])
            .div_f64(n as f64)
    }

    fn residuals(&self, cfg: &DetrendConfig) -> Result<Vec<f64>> {
        cfg.domain(self.y.len())?;
        let n = cfg.window;
        let lag = cfg.lag();
        Ok((0..=self.y.len() - n)
            .map(|j| {
                self.window_mean(j, n)
                    .neg()
                    .add_f64(self.y[j + lag])
                    .to_f64()
            })
            .collect())
    }
}

/// Moving average of the profile with window size `n` positioned by `theta`.
pub fn moving_average(profile: &Profile, cfg: &DetrendConfig) -> Result<MovingAverage> {
    let (first, _) = cfg.domain(profile.len())?;
    let windows = ProfileWindows::new(&profile.values);
    let n = cfg.window;
    let values = (0..=profile.len() - n)
        .map(|j| windows.window_mean(j, n).to_f64())
        .collect();
    Ok(MovingAverage { first, values })
}

/// Residuals `y(i) - y~(i)` for `i` in `[n - lead, N - lead]`; length `N - n + 1`.
pub fn residual_series(profile: &Profile, cfg: &DetrendConfig) -> Result<Vec<f64>> {
    ProfileWindows::new(&profile.values).residuals(cfg)
}

/// Per-segment RMS values `F_v(n)` at one scale.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SegmentFluctuations {
    values: Vec<f64>,
    scale: f64,
}

impl SegmentFluctuations {
    pub fn new(values: Vec<f64>, scale: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid!("no segments at scale {scale}"));
        }
        if let Some(index) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(invalid!(
                "segment fluctuation {} at index {index} is not a finite nonnegative number",
                values[index]
            ));
        }
        Ok(SegmentFluctuations { values, scale })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub(crate) fn block_rms<I: IntoIterator<Item = f64>>(values: I, count: usize) -> f64 {
    let mut acc = CompensatedSum::default();
    for v in values {
        acc.add(v * v);
    }
    libm::sqrt(acc.value() / count as f64)
}

/// Split residuals into `floor(len / n)` consecutive blocks of `n` (the
/// remainder is dropped) and return each block's RMS.
pub fn segment_rms(residuals: &[f64], n: usize) -> Result<SegmentFluctuations> {
    if n == 0 || n > residuals.len() {
        return Err(invalid!(
            "segment size {n} does not fit {} residuals",
            residuals.len()
        ));
    }
    let values = residuals
        .chunks_exact(n)
        .map(|block| block_rms(block.iter().copied(), n))
        .collect();
    SegmentFluctuations::new(values, n as f64)
}

/// q-order power mean of the segment fluctuations.
///
/// `q != 0`: `[mean(F_v^q)]^(1/q)`; `q = 0`: `exp(mean(ln F_v))`. Computed in
/// log space so large `|q|` neither overflows nor underflows. A zero segment
/// with `q <= 0` is an error.
pub fn overall_fluctuation(segments: &SegmentFluctuations, q: f64) -> Result<f64> {
    let values = &segments.values;
    if !q.is_finite() {
        return Err(invalid!("moment order q = {q} is not finite"));
    }
    if q <= 0.0 && values.contains(&0.0) {
        return Err(Error::DegenerateSegment {
            scale: segments.scale,
            q,
        });
    }
    let first = values[0];
    if values.iter().all(|&f| f == first) {
        return Ok(first);
    }
    let count = values.len() as f64;
    if q == 0.0 {
        let mut acc = CompensatedSum::default();
        for &f in values {
            acc.add(libm::log(f));
        }
        return Ok(libm::exp(acc.value() / count));
    }
    let logs = || values.iter().filter(|&&f| f > 0.0).map(|&f| q * libm::log(f));
    let shift = logs().fold(f64::NEG_INFINITY, f64::max);
    let mut acc = CompensatedSum::default();
    for l in logs() {
        acc.add(libm::exp(l - shift));
    }
    let log_mean = shift + libm::log(acc.value()) - libm::log(count);
    Ok(libm::exp(log_mean / q))
}

/// `F_q(n)` for every q in the grid.
pub(crate) fn fluctuation_row(segments: &SegmentFluctuations, qs: &QGrid) -> Result<Vec<f64>> {
    qs.values()
        .iter()
        .map(|&q| overall_fluctuation(segments, q))
        .collect()
}

/// Evaluate `f` at every scale, in parallel when the `rayon` feature is on.
/// Errors are reported for the smallest failing scale.
pub(crate) fn map_scales<F>(scales: &[usize], f: F) -> Result<Vec<Vec<f64>>>
where
    F: Fn(usize) -> Result<Vec<f64>> + Sync + Send,
{
    #[cfg(feature = "rayon")]
    let rows: Vec<Result<Vec<f64>>> = {
        use rayon::prelude::*;
        scales.par_iter().map(|&n| f(n)).collect()
    };
    #[cfg(not(feature = "rayon"))]
    let rows: Vec<Result<Vec<f64>>> = scales.iter().map(|&n| f(n)).collect();
    rows.into_iter().collect()
}

pub(crate) fn check_scale_cap(scales: &ScaleGrid, len: usize) -> Result<()> {
    let limit = len / 4;
    if scales.max() > limit {
        return Err(Error::ScaleTooLarge {
            scale: scales.max(),
            limit,
        });
    }
    Ok(())
}

/// MFDMA fluctuation functions of a series. At every scale the moving-average
/// window and the partition segment are the same size `n`.
pub fn mfdma_fluctuations_1d(
    series: &Series,
    scales: &ScaleGrid,
    qs: &QGrid,
    theta: f64,
) -> Result<FluctuationTable> {
    series.require_analysable()?;
    validate_theta(theta)?;
    check_scale_cap(scales, series.len())?;
    let profile = profile(series);
    let windows = ProfileWindows::new(&profile.values);
    let rows = map_scales(scales.values(), |n| {
        let cfg = DetrendConfig::new(n, theta)?;
        let residuals = windows.residuals(&cfg)?;
        fluctuation_row(&segment_rms(&residuals, n)?, qs)
    })?;
    Ok(FluctuationTable::from_rows(scales.clone(), qs.clone(), rows))
}

/// Largest polynomial order accepted by the MFDFA baseline.
pub const MAX_MFDFA_ORDER: usize = 8;

/// Orthonormal basis of polynomials of degree `<= order` sampled on `n`
/// equispaced points, built by modified Gram-Schmidt on `[-1, 1]`.
pub(crate) fn polynomial_basis(n: usize, order: usize) -> Vec<Vec<f64>> {
    let xs: Vec<f64> = (0..n)
        .map(|i| (2.0 * i as f64 - (n - 1) as f64) / (n - 1) as f64)
        .collect();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(order + 1);
    for degree in 0..=order {
        let mut v: Vec<f64> = xs.iter().map(|&x| libm::pow(x, degree as f64)).collect();
        for _ in 0..2 {
            for b in &basis {
                let dot: f64 = v.iter().zip(b).map(|(a, c)| a * c).sum();
                v.iter_mut().zip(b).for_each(|(a, c)| *a -= dot * c);
            }
        }
        let norm = libm::sqrt(v.iter().map(|a| a * a).sum::<f64>());
        v.iter_mut().for_each(|a| *a /= norm);
        basis.push(v);
    }
    basis
}

/// Remove the least-squares projection onto `basis` from `values` in place.
pub(crate) fn project_out(values: &mut [f64], basis: &[Vec<f64>]) {
    for b in basis {
        let mut dot = CompensatedSum::default();
        for (v, c) in values.iter().zip(b) {
            dot.add(v * c);
        }
        let dot = dot.value();
        values.iter_mut().zip(b).for_each(|(v, c)| *v -= dot * c);
    }
}

/// MFDFA baseline: the profile is cut into `floor(N / n)` disjoint segments
/// and a degree-`order` least-squares polynomial is removed from each.
pub fn mfdfa_fluctuations_1d(
    series: &Series,
    scales: &ScaleGrid,
    qs: &QGrid,
    order: usize,
) -> Result<FluctuationTable> {
    series.require_analysable()?;
    if order == 0 || order > MAX_MFDFA_ORDER {
        return Err(invalid!(
            "detrending order {order} outside 1..={MAX_MFDFA_ORDER}"
        ));
    }
    if scales.min() < order + 2 {
        return Err(invalid!(
            "scale {} is too small for a degree-{order} fit (minimum {})",
            scales.min(),
            order + 2
        ));
    }
    check_scale_cap(scales, series.len())?;
    let x = series.values();
    let rows = map_scales(scales.values(), |n| {
        let basis = polynomial_basis(n, order);
        let mut local = alloc::vec![0.0; n];
        let values = x
            .chunks_exact(n)
            .map(|segment| {
                // Profile relative to the segment start; the offset is absorbed by the fit.
                let mut acc = CompensatedSum::default();
                for (dst, &v) in local.iter_mut().zip(segment) {
                    acc.add(v);
                    *dst = acc.value();
                }
                project_out(&mut local, &basis);
                block_rms(local.iter().copied(), n)
            })
            .collect();
        fluctuation_row(&SegmentFluctuations::new(values, n as f64)?, qs)
    })?;
    Ok(FluctuationTable::from_rows(scales.clone(), qs.clone(), rows))
}
