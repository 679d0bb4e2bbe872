use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};

/// Strictly increasing window sizes, all at least 2.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "Vec<usize>", into = "Vec<usize>"))]
pub struct ScaleGrid(Vec<usize>);

impl ScaleGrid {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid!("scale grid is empty"));
        }
        if let Some(&n) = values.iter().find(|&&n| n < 2) {
            return Err(invalid!("scale {n} is below the minimum window size 2"));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid!("scale grid must be strictly increasing"));
        }
        Ok(ScaleGrid(values))
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> usize {
        *self.0.last().expect("grid is non-empty")
    }

    pub fn min(&self) -> usize {
        self.0[0]
    }
}

impl TryFrom<Vec<usize>> for ScaleGrid {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        ScaleGrid::new(v)
    }
}

impl From<ScaleGrid> for Vec<usize> {
    fn from(g: ScaleGrid) -> Self {
        g.0
    }
}

/// `count` log-uniform points between `n_min` and `n_max`, rounded to the
/// nearest integer and deduplicated.
pub fn build_scale_grid(n_min: usize, n_max: usize, count: usize) -> Result<ScaleGrid> {
    if n_min < 2 {
        return Err(invalid!("n_min = {n_min} must be at least 2"));
    }
    if n_min >= n_max {
        return Err(invalid!("n_min = {n_min} must be below n_max = {n_max}"));
    }
    if count < 2 {
        return Err(invalid!("scale count {count} must be at least 2"));
    }
    let lo = libm::log10(n_min as f64);
    let hi = libm::log10(n_max as f64);
    let step = (hi - lo) / (count - 1) as f64;
    let mut values: Vec<usize> = (0..count)
        .map(|i| {
            let e = if i == count - 1 { hi } else { lo + step * i as f64 };
            libm::round(libm::pow(10.0, e)) as usize
        })
        .collect();
    values.sort_unstable();
    values.dedup();
    ScaleGrid::new(values)
}

/// Strictly increasing, finite moment orders.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "Vec<f64>", into = "Vec<f64>"))]
pub struct QGrid(Vec<f64>);

impl QGrid {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid!("q grid is empty"));
        }
        if let Some(index) = values.iter().position(|q| !q.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid!("q grid must be strictly increasing"));
        }
        Ok(QGrid(values))
    }

    /// Uniform grid `q_min, q_min + step, ..., q_max`.
    ///
    /// When `q_min` is an integer multiple of `step` the points are generated
    /// as `k * step`, or as `k / m` when `step = 1 / m`, so values such as 0,
    /// 2 and -3.9 come out as the nearest doubles.
    pub fn uniform(q_min: f64, q_max: f64, step: f64) -> Result<Self> {
        if !(q_min.is_finite() && q_max.is_finite() && step.is_finite()) {
            return Err(invalid!("q range must be finite"));
        }
        if step <= 0.0 {
            return Err(invalid!("q step must be positive, got {step}"));
        }
        if q_max < q_min {
            return Err(invalid!("q_max = {q_max} is below q_min = {q_min}"));
        }
        let span = (q_max - q_min) / step;
        let count = libm::round(span);
        if libm::fabs(span - count) > 1e-9 * libm::fmax(1.0, span) {
            return Err(invalid!(
                "q range [{q_min}, {q_max}] is not a whole number of steps of {step}"
            ));
        }
        let count = count as usize + 1;
        let k0 = q_min / step;
        let aligned = libm::fabs(k0 - libm::round(k0)) <= 1e-9 * libm::fmax(1.0, libm::fabs(k0));
        let inv = 1.0 / step;
        let reciprocal = libm::fabs(inv - libm::round(inv)) <= 1e-9 * inv;
        let values = (0..count)
            .map(|i| {
                if aligned && reciprocal {
                    (libm::round(k0) + i as f64) / libm::round(inv)
                } else if aligned {
                    (libm::round(k0) + i as f64) * step
                } else {
                    q_min + i as f64 * step
                }
            })
            .collect();
        QGrid::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Index of the grid point within `1e-9` of `q`.
    pub fn position(&self, q: f64) -> Option<usize> {
        self.0.iter().position(|&v| libm::fabs(v - q) <= 1e-9)
    }

    /// Common spacing when the grid is uniform to a relative `1e-6`.
    pub fn uniform_step(&self) -> Option<f64> {
        if self.0.len() < 2 {
            return None;
        }
        let step = (self.0[self.0.len() - 1] - self.0[0]) / (self.0.len() - 1) as f64;
        let uniform = self
            .0
            .windows(2)
            .all(|w| libm::fabs((w[1] - w[0]) - step) <= 1e-6 * step);
        uniform.then_some(step)
    }
}

impl TryFrom<Vec<f64>> for QGrid {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        QGrid::new(v)
    }
}

impl From<QGrid> for Vec<f64> {
    fn from(g: QGrid) -> Self {
        g.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn log_grid_examples() {
        assert_eq!(build_scale_grid(10, 100, 5).unwrap().values(), &[10, 18, 32, 56, 100]);
        assert_eq!(build_scale_grid(2, 4, 10).unwrap().values(), &[2, 3, 4]);
        assert!(build_scale_grid(10, 10, 5).is_err());
        assert!(build_scale_grid(20, 10, 5).is_err());
        assert!(build_scale_grid(1, 10, 5).is_err());
    }

    #[test]
    fn log_grid_matches_reference_rounding() {
        // unique(round(logspace(1, 3, 30)))
        let expected = [
            10, 12, 14, 16, 19, 22, 26, 30, 36, 42, 49, 57, 67, 79, 92, 108, 127, 149, 174, 204,
            240, 281, 329, 386, 452, 530, 621, 728, 853, 1000,
        ];
        assert_eq!(build_scale_grid(10, 1000, 30).unwrap().values(), &expected);
        let expected_2d = [8, 10, 13, 17, 22, 28, 35, 45, 58, 74, 95, 122, 156, 200, 256];
        assert_eq!(build_scale_grid(8, 256, 15).unwrap().values(), &expected_2d);
    }

    #[test]
    fn scale_grid_rejects_bad_values() {
        assert!(ScaleGrid::new(vec![2, 2]).is_err());
        assert!(ScaleGrid::new(vec![1, 3]).is_err());
        assert!(ScaleGrid::new(vec![]).is_err());
    }

    #[test]
    fn uniform_q_grid_is_exact_at_integers() {
        let g = QGrid::uniform(-4.0, 4.0, 0.1).unwrap();
        assert_eq!(g.len(), 81);
        for q in [-4.0, -2.0, 0.0, 2.0, 4.0] {
            let i = g.position(q).unwrap();
            assert_eq!(g.values()[i], q);
        }
        assert!(g.uniform_step().is_some());
        assert_eq!(g.values()[1], -3.9);
        assert_eq!(g.values()[77], 3.7);
        assert!(QGrid::uniform(-4.0, 4.0, 0.3).is_err());
        let g = QGrid::uniform(-5.0, 5.0, 0.25).unwrap();
        assert_eq!(g.values()[1], -4.75);
    }

    #[test]
    fn q_grid_non_uniform_detected() {
        let g = QGrid::new(vec![-1.0, 0.0, 2.0]).unwrap();
        assert!(g.uniform_step().is_none());
        assert!(QGrid::new(vec![0.0, 0.0]).is_err());
    }
}
