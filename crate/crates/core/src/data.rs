//! Input containers for one-dimensional series and two-dimensional surfaces.
//!
//! Constructors only check that values are finite and non-empty; the minimum
//! sizes required by an analysis (at least four samples per axis) are checked
//! by the analysis entry points so that small generator outputs remain
//! representable.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};

/// Minimum length per axis accepted by the analysis routines.
pub const MIN_ANALYSIS_LEN: usize = 4;

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

/// An ordered real-valued signal `x(1..N)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Series {
    values: Vec<f64>,
    name: Option<String>,
}

impl Series {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid!("series is empty"));
        }
        check_finite(&values)?;
        Ok(Series { values, name: None })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Fails unless the data is long enough to analyse at all.
    pub fn require_analysable(&self) -> Result<()> {
        if self.values.len() < MIN_ANALYSIS_LEN {
            return Err(Error::TooShort {
                what: "series",
                len: self.values.len(),
                min: MIN_ANALYSIS_LEN,
            });
        }
        Ok(())
    }
}

/// Dense row-major real matrix.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(invalid!(
                "matrix data has {} entries, expected {rows} x {cols}",
                data.len()
            ));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: alloc::vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(invalid!(
                    "row {} has {} entries, expected {cols}",
                    i + 1,
                    row.len()
                ));
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }
}

/// A real field `X(i1, i2)` of shape `N1 x N2`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Surface {
    values: Matrix,
    name: Option<String>,
}

impl Surface {
    pub fn new(values: Matrix) -> Result<Self> {
        if values.rows() == 0 || values.cols() == 0 {
            return Err(invalid!("surface is empty"));
        }
        check_finite(values.as_slice())?;
        Ok(Surface { values, name: None })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Surface::new(Matrix::from_rows(rows)?)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.values
    }

    pub fn rows(&self) -> usize {
        self.values.rows()
    }

    pub fn cols(&self) -> usize {
        self.values.cols()
    }

    pub fn transpose(&self) -> Surface {
        Surface {
            values: self.values.transpose(),
            name: self.name.clone(),
        }
    }

    /// Fails unless the data is long enough to analyse at all.
    pub fn require_analysable(&self) -> Result<()> {
        for (what, len) in [("surface rows", self.rows()), ("surface columns", self.cols())] {
            if len < MIN_ANALYSIS_LEN {
                return Err(Error::TooShort {
                    what,
                    len,
                    min: MIN_ANALYSIS_LEN,
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn series_rejects_nan_and_empty() {
        assert!(Series::new(vec![]).is_err());
        assert_eq!(
            Series::new(vec![1.0, f64::NAN]),
            Err(Error::NonFinite { index: 1 })
        );
    }

    #[test]
    fn short_series_is_representable_but_not_analysable() {
        let s = Series::new(vec![5.0]).unwrap();
        assert!(matches!(s.require_analysable(), Err(Error::TooShort { .. })));
    }

    #[test]
    fn ragged_rows_name_the_row() {
        let err = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]).unwrap_err();
        assert!(alloc::format!("{err}").contains("row 2"));
    }

    #[test]
    fn single_row_surface_rejected_for_analysis() {
        let s = Surface::from_rows(&[vec![1.0, 2.0, 3.0, 4.0]]).unwrap();
        let err = s.require_analysable().unwrap_err();
        assert!(alloc::format!("{err}").contains("surface rows has length 1"));
    }
}
