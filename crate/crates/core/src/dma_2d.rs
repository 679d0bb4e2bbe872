//! Two-dimensional MFDMA over sliding rectangular windows, and the 2D MFDFA
//! baseline.
//!
//! For every `n1 x n2` window `Z` of the surface two aggregates are formed:
//! the window sum `Y = sum Z` and the mean of the in-window cumulative sum
//! `W~(m1, m2) = sum_{d1 <= m1, d2 <= m2} Z(d1, d2)`. The residual pairs each
//! window sum with the cumulative-sum mean of the window shifted by
//! `delta_a = min(floor(n_a theta_a), n_a - 1)` along each axis.
//!
//! The cumulative-sum mean is a separable weighted sum,
//! `n1 n2 mean(W~) = sum_{a, b} (n1 - a)(n2 - b) Z(a, b)` (0-based offsets),
//! so each window costs O(1) once per-column prefix sums of `X` and `i X` are
//! available. All prefix arithmetic is double-double.

use alloc::vec;
use alloc::vec::Vec;

use crate::data::{Matrix, Surface};
use crate::dma_1d::{block_rms, fluctuation_row, map_scales, validate_theta, SegmentFluctuations};
use crate::error::{invalid, Error, Result};
use crate::numeric::{floor_snapped, Dd};
use crate::spectrum::{FluctuationTable, QGrid, ScaleGrid};

/// Window sizes and position parameters per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DetrendConfig2D {
    pub n1: usize,
    pub n2: usize,
    pub theta1: f64,
    pub theta2: f64,
}

impl DetrendConfig2D {
    pub fn new(n1: usize, n2: usize, theta1: f64, theta2: f64) -> Result<Self> {
        if n1 < 2 || n2 < 2 {
            return Err(invalid!("window {n1} x {n2} must be at least 2 x 2"));
        }
        validate_theta(theta1)?;
        validate_theta(theta2)?;
        Ok(DetrendConfig2D {
            n1,
            n2,
            theta1,
            theta2,
        })
    }

    /// Square window `n x n` with a common position parameter.
    pub fn isotropic(n: usize, theta: f64) -> Result<Self> {
        DetrendConfig2D::new(n, n, theta, theta)
    }

    /// Alignment shift between window sums and cumulative-sum means.
    pub fn shifts(&self) -> (usize, usize) {
        let shift = |n: usize, theta: f64| (floor_snapped(n as f64 * theta) as usize).min(n - 1);
        (shift(self.n1, self.theta1), shift(self.n2, self.theta2))
    }

    /// Effective scale `sqrt((n1^2 + n2^2) / 2)`; equal to `n` for square windows.
    pub fn scale(&self) -> f64 {
        if self.n1 == self.n2 {
            return self.n1 as f64;
        }
        let (a, b) = (self.n1 as f64, self.n2 as f64);
        libm::sqrt((a * a + b * b) / 2.0)
    }

    fn check_fits(&self, rows: usize, cols: usize) -> Result<()> {
        if self.n1 > rows || self.n2 > cols {
            return Err(invalid!(
                "window {} x {} does not fit a {rows} x {cols} surface",
                self.n1,
                self.n2
            ));
        }
        Ok(())
    }

    fn check_cap(&self, surface: &Surface) -> Result<()> {
        for (n, len) in [(self.n1, surface.rows()), (self.n2, surface.cols())] {
            if n > len / 4 {
                return Err(Error::ScaleTooLarge {
                    scale: n,
                    limit: len / 4,
                });
            }
        }
        Ok(())
    }
}

/// Sum of a window and mean of its in-window cumulative sum.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Window2DAggregate {
    pub total: f64,
    pub cummean: f64,
}

/// Aggregates for every window position, indexed by the window's top-left
/// corner; shape `(N1 - n1 + 1) x (N2 - n2 + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Window2DAggregate>,
}

impl AggregateMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Window2DAggregate {
        self.data[r * self.cols + c]
    }

    pub fn as_slice(&self) -> &[Window2DAggregate] {
        &self.data
    }
}

/// Per-column prefix sums of `X(i, l)` and `i * X(i, l)` (row index `i`,
/// 0-based), stored row-major with `N1 + 1` rows.
struct ColumnPrefix {
    cols: usize,
    plain: Vec<Dd>,
    weighted: Vec<Dd>,
}

impl ColumnPrefix {
    fn new(x: &Matrix) -> Self {
        let (rows, cols) = (x.rows(), x.cols());
        let mut plain = vec![Dd::ZERO; (rows + 1) * cols];
        let mut weighted = vec![Dd::ZERO; (rows + 1) * cols];
        for i in 0..rows {
            let row = x.row(i);
            for l in 0..cols {
                let v = row[l];
                plain[(i + 1) * cols + l] = plain[i * cols + l].add_f64(v);
                weighted[(i + 1) * cols + l] =
                    weighted[i * cols + l].add(Dd::from_prod(i as f64, v));
            }
        }
        ColumnPrefix {
            cols,
            plain,
            weighted,
        }
    }

    /// Aggregates of all windows whose top row is `j`.
    fn aggregate_row(&self, j: usize, n1: usize, n2: usize, out: &mut [Window2DAggregate], scratch: &mut RowScratch) {
        let cols = self.cols;
        let top = j * cols;
        let bottom = (j + n1) * cols;
        let row_weight = (n1 + j) as f64;
        scratch.plain[0] = Dd::ZERO;
        scratch.weighted[0] = Dd::ZERO;
        scratch.col_weighted[0] = Dd::ZERO;
        for l in 0..cols {
            // vertical sums over rows j..j+n1 of X and (n1 + j - i) X
            let r0 = self.plain[bottom + l].sub(self.plain[top + l]);
            let r1 = r0
                .mul_f64(row_weight)
                .sub(self.weighted[bottom + l].sub(self.weighted[top + l]));
            scratch.plain[l + 1] = scratch.plain[l].add(r0);
            scratch.weighted[l + 1] = scratch.weighted[l].add(r1);
            scratch.col_weighted[l + 1] = scratch.col_weighted[l].add(r1.mul_f64(l as f64));
        }
        let area = (n1 * n2) as f64;
        for (k, slot) in out.iter_mut().enumerate() {
            let total = scratch.plain[k + n2].sub(scratch.plain[k]);
            let weighted = scratch.weighted[k + n2]
                .sub(scratch.weighted[k])
                .mul_f64((n2 + k) as f64)
                .sub(scratch.col_weighted[k + n2].sub(scratch.col_weighted[k]));
            *slot = Window2DAggregate {
                total: total.to_f64(),
                cummean: weighted.to_f64() / area,
            };
        }
    }

    fn aggregates(&self, rows: usize, cfg: &DetrendConfig2D) -> AggregateMatrix {
        let out_rows = rows - cfg.n1 + 1;
        let out_cols = self.cols - cfg.n2 + 1;
        let mut data = vec![Window2DAggregate::default(); out_rows * out_cols];
        let fill = |(j, out): (usize, &mut [Window2DAggregate])| {
            let mut scratch = RowScratch::new(self.cols);
            self.aggregate_row(j, cfg.n1, cfg.n2, out, &mut scratch);
        };
        #[cfg(feature = "rayon")]
        {
            use rayon::prelude::*;
            data.par_chunks_mut(out_cols).enumerate().for_each(fill);
        }
        #[cfg(not(feature = "rayon"))]
        data.chunks_mut(out_cols).enumerate().for_each(fill);
        AggregateMatrix {
            rows: out_rows,
            cols: out_cols,
            data,
        }
    }
}

struct RowScratch {
    plain: Vec<Dd>,
    weighted: Vec<Dd>,
    col_weighted: Vec<Dd>,
}

impl RowScratch {
    fn new(cols: usize) -> Self {
        RowScratch {
            plain: vec![Dd::ZERO; cols + 1],
            weighted: vec![Dd::ZERO; cols + 1],
            col_weighted: vec![Dd::ZERO; cols + 1],
        }
    }
}

/// Window sums and cumulative-sum means for every window position.
pub fn window_aggregates(surface: &Surface, cfg: &DetrendConfig2D) -> Result<AggregateMatrix> {
    cfg.check_fits(surface.rows(), surface.cols())?;
    Ok(ColumnPrefix::new(surface.matrix()).aggregates(surface.rows(), cfg))
}

/// `eps(j1, j2) = total(j1, j2) - cummean(j1 + delta1, j2 + delta2)`.
pub fn residual_matrix_2d(aggregates: &AggregateMatrix, cfg: &DetrendConfig2D) -> Result<Matrix> {
    let (d1, d2) = cfg.shifts();
    if d1 >= aggregates.rows || d2 >= aggregates.cols {
        return Err(invalid!(
            "alignment shift ({d1}, {d2}) leaves no residuals in a {} x {} aggregate matrix",
            aggregates.rows,
            aggregates.cols
        ));
    }
    let rows = aggregates.rows - d1;
    let cols = aggregates.cols - d2;
    let mut data = Vec::with_capacity(rows * cols);
    for j1 in 0..rows {
        for j2 in 0..cols {
            data.push(aggregates.get(j1, j2).total - aggregates.get(j1 + d1, j2 + d2).cummean);
        }
    }
    Matrix::new(rows, cols, data)
}

/// RMS of each disjoint `n1 x n2` block of `eps` (trailing rows and columns
/// that do not fill a block are dropped), flattened row-major.
pub fn segment_rms_2d_rect(eps: &Matrix, n1: usize, n2: usize, scale: f64) -> Result<SegmentFluctuations> {
    if n1 == 0 || n2 == 0 || n1 > eps.rows() || n2 > eps.cols() {
        return Err(invalid!(
            "block {n1} x {n2} does not fit a {} x {} residual matrix",
            eps.rows(),
            eps.cols()
        ));
    }
    let (b1, b2) = (eps.rows() / n1, eps.cols() / n2);
    let mut values = Vec::with_capacity(b1 * b2);
    for v1 in 0..b1 {
        for v2 in 0..b2 {
            let block = (v1 * n1..(v1 + 1) * n1)
                .flat_map(|r| eps.row(r)[v2 * n2..(v2 + 1) * n2].iter().copied());
            values.push(block_rms(block, n1 * n2));
        }
    }
    SegmentFluctuations::new(values, scale)
}

/// RMS of each disjoint `n x n` block of `eps`.
pub fn segment_rms_2d(eps: &Matrix, n: usize) -> Result<SegmentFluctuations> {
    segment_rms_2d_rect(eps, n, n, n as f64)
}

/// Segment fluctuations for one (possibly anisotropic) window configuration.
/// The reported scale is `sqrt((n1^2 + n2^2) / 2)`.
pub fn mfdma_segments_2d(surface: &Surface, cfg: &DetrendConfig2D) -> Result<SegmentFluctuations> {
    surface.require_analysable()?;
    cfg.check_cap(surface)?;
    let aggregates = window_aggregates(surface, cfg)?;
    let eps = residual_matrix_2d(&aggregates, cfg)?;
    segment_rms_2d_rect(&eps, cfg.n1, cfg.n2, cfg.scale())
}

fn check_scale_cap_2d(surface: &Surface, scales: &ScaleGrid) -> Result<()> {
    let limit = surface.rows().min(surface.cols()) / 4;
    if scales.max() > limit {
        return Err(Error::ScaleTooLarge {
            scale: scales.max(),
            limit,
        });
    }
    Ok(())
}

/// Isotropic 2D MFDMA: square windows `n x n` with `theta1 = theta2 = theta`.
pub fn mfdma_fluctuations_2d(
    surface: &Surface,
    scales: &ScaleGrid,
    qs: &QGrid,
    theta: f64,
) -> Result<FluctuationTable> {
    surface.require_analysable()?;
    validate_theta(theta)?;
    check_scale_cap_2d(surface, scales)?;
    let prefix = ColumnPrefix::new(surface.matrix());
    let mut rows = Vec::with_capacity(scales.len());
    // Window rows are already evaluated in parallel; scales run in sequence
    // to bound memory.
    for &n in scales.values() {
        let cfg = DetrendConfig2D::isotropic(n, theta)?;
        let aggregates = prefix.aggregates(surface.rows(), &cfg);
        let eps = residual_matrix_2d(&aggregates, &cfg)?;
        rows.push(fluctuation_row(&segment_rms_2d(&eps, n)?, qs)?);
    }
    Ok(FluctuationTable::from_rows(scales.clone(), qs.clone(), rows))
}

/// RMS of a block's doubly cumulative sum after removing the least-squares
/// plane `a + b u + c v`.
fn detrended_block_rms(surface: &Matrix, r0: usize, c0: usize, n: usize, cum: &mut [f64]) -> f64 {
    // in-block cumulative sum along both axes
    for u in 0..n {
        let row = &surface.row(r0 + u)[c0..c0 + n];
        let mut run = Dd::ZERO;
        for v in 0..n {
            run = run.add_f64(row[v]);
            let above = if u > 0 { cum[(u - 1) * n + v] } else { 0.0 };
            cum[u * n + v] = run.add_f64(above).to_f64();
        }
    }
    // Centred coordinates make {1, u, v} orthogonal on the square grid.
    let centre = (n - 1) as f64 / 2.0;
    let count = (n * n) as f64;
    let axis_ss: f64 = (0..n).map(|u| (u as f64 - centre) * (u as f64 - centre)).sum::<f64>() * n as f64;
    let (mut s, mut su, mut sv) = (Dd::ZERO, Dd::ZERO, Dd::ZERO);
    for u in 0..n {
        for v in 0..n {
            let g = cum[u * n + v];
            s = s.add_f64(g);
            su = su.add(Dd::from_prod(u as f64 - centre, g));
            sv = sv.add(Dd::from_prod(v as f64 - centre, g));
        }
    }
    let mean = s.to_f64() / count;
    let bu = su.to_f64() / axis_ss;
    let bv = sv.to_f64() / axis_ss;
    let residuals = (0..n * n).map(|idx| {
        let (u, v) = ((idx / n) as f64 - centre, (idx % n) as f64 - centre);
        cum[idx] - mean - bu * u - bv * v
    });
    block_rms(residuals, n * n)
}

/// 2D MFDFA baseline: the surface is cut into disjoint `n x n` blocks; within
/// each block the doubly cumulative sum is detrended by a least-squares plane.
pub fn mfdfa_fluctuations_2d(surface: &Surface, scales: &ScaleGrid, qs: &QGrid) -> Result<FluctuationTable> {
    surface.require_analysable()?;
    check_scale_cap_2d(surface, scales)?;
    let x = surface.matrix();
    let rows = map_scales(scales.values(), |n| {
        let mut cum = vec![0.0; n * n];
        let mut values = Vec::new();
        for v1 in 0..x.rows() / n {
            for v2 in 0..x.cols() / n {
                values.push(detrended_block_rms(x, v1 * n, v2 * n, n, &mut cum));
            }
        }
        fluctuation_row(&SegmentFluctuations::new(values, n as f64)?, qs)
    })?;
    Ok(FluctuationTable::from_rows(scales.clone(), qs.clone(), rows))
}
