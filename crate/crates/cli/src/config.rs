//! Analysis configuration: defaults, TOML file and command-line overrides.

use std::path::{Path, PathBuf};

use mfdma_core::spectrum::{build_scale_grid, FitRange, QGrid, ScaleGrid, DEFAULT_HALF_WINDOW};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::ingest::SeriesFormat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Series,
    Surface,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Mfdma,
    Mfdfa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Json,
    CsvSet,
    PlotData,
}

/// Analytic cascade whose mass exponents serve as the reference for `Δτ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reference {
    Binomial { p1: f64 },
    Quadrant { weights: [f64; 4] },
}

impl Reference {
    pub fn weights(&self) -> Vec<f64> {
        match self {
            Reference::Binomial { p1 } => vec![*p1, 1.0 - p1],
            Reference::Quadrant { weights } => weights.to_vec(),
        }
    }

    pub fn tau(&self, q: f64) -> f64 {
        mfdma_core::spectrum::cascade_tau(&self.weights(), q)
    }
}

/// Every knob of one analysis run. Optional scale fields are filled in by
/// [`AnalysisConfig::resolve`] once the input size is known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    pub mode: Mode,
    pub method: Method,
    pub theta: f64,
    /// Polynomial order for 1D MFDFA; 2D MFDFA always removes a plane.
    pub order: usize,
    pub q_min: f64,
    pub q_max: f64,
    pub q_step: f64,
    pub n_min: Option<usize>,
    pub n_max: Option<usize>,
    pub n_count: Option<usize>,
    pub fit_lo: Option<usize>,
    pub fit_hi: Option<usize>,
    pub legendre_window: usize,
    pub seed: u64,
    pub input: Option<PathBuf>,
    pub input_format: Option<SeriesFormat>,
    pub out_dir: Option<PathBuf>,
    pub format: OutputFormat,
    pub reference: Option<Reference>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            mode: Mode::Series,
            method: Method::Mfdma,
            theta: 0.0,
            order: 1,
            q_min: -4.0,
            q_max: 4.0,
            q_step: 0.1,
            n_min: None,
            n_max: None,
            n_count: None,
            fit_lo: None,
            fit_hi: None,
            legendre_window: DEFAULT_HALF_WINDOW,
            seed: 0,
            input: None,
            input_format: None,
            out_dir: None,
            format: OutputFormat::Json,
            reference: None,
        }
    }
}

/// Default scale grids: 10..1000 (30 points) for series, 8..256 (15 points)
/// for surfaces, with the upper end clipped to a quarter of the data.
const SERIES_SCALES: (usize, usize, usize) = (10, 1000, 30);
const SURFACE_SCALES: (usize, usize, usize) = (8, 256, 15);

impl AnalysisConfig {
    pub fn from_toml_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
    }

    pub fn fractal_dim(&self) -> f64 {
        match self.mode {
            Mode::Series => 1.0,
            Mode::Surface => 2.0,
        }
    }

    /// Checks everything that does not depend on the input.
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(CliError::Validation(format!("theta = {} outside [0, 1]", self.theta)));
        }
        self.q_grid()?;
        if let (Some(lo), Some(hi)) = (self.fit_lo, self.fit_hi) {
            FitRange::new(lo, hi)?;
        }
        if self.legendre_window == 0 {
            return Err(CliError::Validation("legendre window must be at least 1".into()));
        }
        let max_order = mfdma_core::dma_1d::MAX_MFDFA_ORDER;
        if self.method == Method::Mfdfa
            && self.mode == Mode::Series
            && !(1..=max_order).contains(&self.order)
        {
            return Err(CliError::Validation(format!(
                "order {} outside 1..={max_order}",
                self.order
            )));
        }
        Ok(())
    }

    pub fn q_grid(&self) -> Result<QGrid> {
        QGrid::uniform(self.q_min, self.q_max, self.q_step)
            .map_err(|e| CliError::Validation(format!("q grid: {e}")))
    }

    /// Fills in the scale grid for data whose shortest side is `len`, and
    /// rejects an explicit `n_max` above `len / 4`.
    pub fn resolve(&self, len: usize) -> Result<AnalysisConfig> {
        let (dmin, dmax, dcount) = match self.mode {
            Mode::Series => SERIES_SCALES,
            Mode::Surface => SURFACE_SCALES,
        };
        let limit = len / 4;
        let n_max = match self.n_max {
            Some(n) if n > limit => {
                return Err(CliError::Validation(format!(
                    "n_max = {n} exceeds a quarter of the data ({limit})"
                )))
            }
            Some(n) => n,
            None => dmax.min(limit),
        };
        let mut out = self.clone();
        out.n_min = Some(self.n_min.unwrap_or(dmin));
        out.n_max = Some(n_max);
        out.n_count = Some(self.n_count.unwrap_or(dcount));
        out.scale_grid()?;
        Ok(out)
    }

    /// Scale grid of a resolved config.
    pub fn scale_grid(&self) -> Result<ScaleGrid> {
        match (self.n_min, self.n_max, self.n_count) {
            (Some(lo), Some(hi), Some(count)) => build_scale_grid(lo, hi, count)
                .map_err(|e| CliError::Validation(format!("scale grid: {e}"))),
            _ => Err(CliError::Validation("scale grid is not resolved".into())),
        }
    }

    pub fn fit_range(&self, scales: &ScaleGrid) -> Result<FitRange> {
        let lo = self.fit_lo.unwrap_or(scales.min());
        let hi = self.fit_hi.unwrap_or(scales.max());
        FitRange::new(lo, hi).map_err(|e| CliError::Validation(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_overrides_defaults() {
        let cfg: AnalysisConfig = toml::from_str(
            "mode = \"surface\"\ntheta = 0.5\nformat = \"csv-set\"\n\
             [reference.quadrant]\nweights = [0.1, 0.2, 0.3, 0.4]\n",
        )
        .unwrap();
        assert_eq!(cfg.mode, Mode::Surface);
        assert_eq!(cfg.theta, 0.5);
        assert_eq!(cfg.format, OutputFormat::CsvSet);
        assert_eq!(cfg.q_step, 0.1);
        assert_eq!(cfg.reference, Some(Reference::Quadrant { weights: [0.1, 0.2, 0.3, 0.4] }));
        assert!(toml::from_str::<AnalysisConfig>("thetta = 1").is_err());
    }

    #[test]
    fn resolve_defaults_and_cap() {
        let cfg = AnalysisConfig::default();
        let r = cfg.resolve(16384).unwrap();
        assert_eq!((r.n_min, r.n_max, r.n_count), (Some(10), Some(1000), Some(30)));
        let r = cfg.resolve(1000).unwrap();
        assert_eq!(r.n_max, Some(250));
        let explicit = AnalysisConfig { n_max: Some(300), ..cfg };
        assert!(matches!(explicit.resolve(1000), Err(CliError::Validation(_))));
    }

    #[test]
    fn validation() {
        let bad = AnalysisConfig { theta: 1.5, ..Default::default() };
        assert_eq!(bad.validate().unwrap_err().exit_code(), 2);
        let bad = AnalysisConfig { q_step: -0.1, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = AnalysisConfig { fit_lo: Some(50), fit_hi: Some(10), ..Default::default() };
        assert!(bad.validate().is_err());
        AnalysisConfig::default().validate().unwrap();
    }
}
