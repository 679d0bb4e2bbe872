use alloc::vec::Vec;

use super::grid::{QGrid, ScaleGrid};
use crate::error::{invalid, Result};

/// `F_q(n)` sampled on a (scale, q) grid. Rows are scales, columns are q.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FluctuationTable {
    scales: ScaleGrid,
    qs: QGrid,
    values: Vec<f64>,
}

impl FluctuationTable {
    pub fn new(scales: ScaleGrid, qs: QGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != scales.len() * qs.len() {
            return Err(invalid!(
                "table has {} values, expected {} scales x {} q",
                values.len(),
                scales.len(),
                qs.len()
            ));
        }
        Ok(FluctuationTable { scales, qs, values })
    }

    /// Assemble a table from per-scale rows, each holding one value per q.
    pub(crate) fn from_rows(scales: ScaleGrid, qs: QGrid, rows: Vec<Vec<f64>>) -> Self {
        let values = rows.into_iter().flatten().collect();
        FluctuationTable { scales, qs, values }
    }

    pub fn scales(&self) -> &ScaleGrid {
        &self.scales
    }

    pub fn qs(&self) -> &QGrid {
        &self.qs
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, scale_idx: usize, q_idx: usize) -> f64 {
        self.values[scale_idx * self.qs.len() + q_idx]
    }

    /// `F_q(n)` at every scale for the q in column `q_idx`.
    pub fn column(&self, q_idx: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.scales.len()).map(move |s| self.get(s, q_idx))
    }

    /// All q values at scale row `scale_idx`.
    pub fn row(&self, scale_idx: usize) -> &[f64] {
        let w = self.qs.len();
        &self.values[scale_idx * w..(scale_idx + 1) * w]
    }

    /// Multiply every entry by `factor`.
    pub fn scaled(&self, factor: f64) -> FluctuationTable {
        FluctuationTable {
            scales: self.scales.clone(),
            qs: self.qs.clone(),
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }
}
