use alloc::vec::Vec;

use super::grid::QGrid;
use super::table::FluctuationTable;
use crate::error::{invalid, Error, Result};
use crate::numeric::fit_line;

/// Inclusive range of scales `[lo, hi]` used in the log-log regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FitRange {
    pub lo: usize,
    pub hi: usize,
}

impl FitRange {
    pub fn new(lo: usize, hi: usize) -> Result<Self> {
        if lo > hi {
            return Err(invalid!("fit range [{lo}, {hi}] is inverted"));
        }
        Ok(FitRange { lo, hi })
    }

    pub fn contains(&self, n: usize) -> bool {
        (self.lo..=self.hi).contains(&n)
    }
}

/// Generalized Hurst exponents and mass exponents for one analysis.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScalingEstimate {
    pub qs: QGrid,
    /// `h(q)`, the log-log slope of `F_q(n)`.
    pub h: Vec<f64>,
    /// OLS standard error of each slope.
    pub h_se: Vec<f64>,
    /// Intercept of each log-log fit, `ln F_q(n) ~ intercept + h ln n`.
    pub intercept: Vec<f64>,
    /// `tau(q) = q h(q) - D_f`.
    pub tau: Vec<f64>,
    pub fractal_dim: f64,
    pub fit_range: FitRange,
}

impl ScalingEstimate {
    /// Standard error of `tau(q)`, i.e. `|q| * se(h)`.
    pub fn tau_se(&self) -> Vec<f64> {
        self.qs
            .values()
            .iter()
            .zip(&self.h_se)
            .map(|(q, se)| libm::fabs(*q) * se)
            .collect()
    }

    /// `h` at the grid point matching `q`, if present.
    pub fn h_at(&self, q: f64) -> Option<f64> {
        self.qs.position(q).map(|i| self.h[i])
    }
}

/// Regress `ln F_q(n)` on `ln n` for every q over the scales in `fit_range`
/// (all scales when `None`).
pub fn fit_scaling(
    table: &FluctuationTable,
    fit_range: Option<FitRange>,
    fractal_dim: f64,
) -> Result<ScalingEstimate> {
    let scales = table.scales().values();
    let range = fit_range.unwrap_or(FitRange {
        lo: scales[0],
        hi: scales[scales.len() - 1],
    });
    let rows: Vec<usize> = (0..scales.len())
        .filter(|&i| range.contains(scales[i]))
        .collect();
    if rows.len() < 3 {
        return Err(invalid!(
            "fit range [{}, {}] covers {} scales, at least 3 required",
            range.lo,
            range.hi,
            rows.len()
        ));
    }
    let log_n: Vec<f64> = rows.iter().map(|&i| libm::log(scales[i] as f64)).collect();

    let qs = table.qs().values();
    let mut h = Vec::with_capacity(qs.len());
    let mut h_se = Vec::with_capacity(qs.len());
    let mut intercept = Vec::with_capacity(qs.len());
    let mut tau = Vec::with_capacity(qs.len());
    let mut log_f = Vec::with_capacity(rows.len());
    for (j, &q) in qs.iter().enumerate() {
        log_f.clear();
        for &i in &rows {
            let value = table.get(i, j);
            if value.is_nan() || value <= 0.0 || value.is_infinite() {
                return Err(Error::NonPositiveFluctuation {
                    scale: scales[i],
                    q,
                    value,
                });
            }
            log_f.push(libm::log(value));
        }
        let fit = fit_line(&log_n, &log_f);
        h.push(fit.slope);
        h_se.push(fit.slope_se);
        intercept.push(fit.intercept);
        tau.push(q * fit.slope - fractal_dim);
    }
    Ok(ScalingEstimate {
        qs: table.qs().clone(),
        h,
        h_se,
        intercept,
        tau,
        fractal_dim,
        fit_range: range,
    })
}

/// `tau(q) - tau_th(q)` pointwise.
pub fn tau_error(est: &ScalingEstimate, tau_th: &[f64]) -> Result<Vec<f64>> {
    if tau_th.len() != est.tau.len() {
        return Err(Error::GridMismatch(alloc::format!(
            "estimate has {} q values, reference has {}",
            est.tau.len(),
            tau_th.len()
        )));
    }
    Ok(est.tau.iter().zip(tau_th).map(|(t, th)| t - th).collect())
}

/// `tau(q) - tau_th(q)` with the reference evaluated from a closure on the
/// estimate's own q grid.
pub fn tau_error_with(est: &ScalingEstimate, tau_th: impl Fn(f64) -> f64) -> Vec<f64> {
    est.qs
        .values()
        .iter()
        .zip(&est.tau)
        .map(|(&q, t)| t - tau_th(q))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::grid::{build_scale_grid, ScaleGrid};
    use alloc::vec;

    fn power_law_table(scales: ScaleGrid, qs: QGrid, amp: f64, expo: impl Fn(f64) -> f64) -> FluctuationTable {
        let mut values = Vec::new();
        for &n in scales.values() {
            for &q in qs.values() {
                values.push(amp * libm::pow(n as f64, expo(q)));
            }
        }
        FluctuationTable::new(scales, qs, values).unwrap()
    }

    #[test]
    fn exact_power_law_recovered() {
        let qs = QGrid::new(vec![-2.0, 0.0, 2.0]).unwrap();
        let table = power_law_table(build_scale_grid(10, 1000, 20).unwrap(), qs, 2.0, |_| 0.75);
        let est = fit_scaling(&table, None, 1.0).unwrap();
        for (h, se) in est.h.iter().zip(&est.h_se) {
            assert!((h - 0.75).abs() < 1e-12);
            assert!(*se < 1e-12);
        }
        assert_eq!(est.tau[1], -1.0);
        assert!((est.intercept[0] - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn fit_range_restricts_scales() {
        let qs = QGrid::new(vec![1.0]).unwrap();
        let scales = ScaleGrid::new(vec![4, 8, 16, 32, 64]).unwrap();
        // slope changes above 16
        let values = vec![4.0, 8.0, 16.0, 1000.0, 5000.0];
        let table = FluctuationTable::new(scales, qs, values).unwrap();
        let est = fit_scaling(&table, Some(FitRange::new(4, 16).unwrap()), 1.0).unwrap();
        assert!((est.h[0] - 1.0).abs() < 1e-12);
        assert!(fit_scaling(&table, Some(FitRange::new(4, 8).unwrap()), 1.0).is_err());
    }

    #[test]
    fn non_positive_values_rejected() {
        let qs = QGrid::new(vec![1.0]).unwrap();
        let scales = ScaleGrid::new(vec![4, 8, 16]).unwrap();
        let table = FluctuationTable::new(scales, qs, vec![1.0, 0.0, 2.0]).unwrap();
        assert!(matches!(
            fit_scaling(&table, None, 1.0),
            Err(Error::NonPositiveFluctuation { scale: 8, .. })
        ));
    }

    #[test]
    fn tau_error_checks_alignment() {
        let qs = QGrid::new(vec![0.0, 1.0, 2.0]).unwrap();
        let table = power_law_table(ScaleGrid::new(vec![4, 8, 16]).unwrap(), qs, 1.0, |q| (q + 1.0) / 2.0);
        let est = fit_scaling(&table, None, 1.0).unwrap();
        let th: Vec<f64> = est.tau.clone();
        assert!(tau_error(&est, &th).unwrap().iter().all(|d| *d == 0.0));
        assert!(matches!(tau_error(&est, &th[..2]), Err(Error::GridMismatch(_))));
    }
}
