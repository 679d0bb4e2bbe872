//! Input → fluctuation table → scaling fit → Legendre spectrum.

use std::path::Path;

use mfdma_core::dma_1d::{mfdfa_fluctuations_1d, mfdma_fluctuations_1d};
use mfdma_core::dma_2d::{mfdfa_fluctuations_2d, mfdma_fluctuations_2d};
use mfdma_core::spectrum::{
    fit_scaling, legendre_spectrum, tau_error_with, FluctuationTable, ScalingEstimate,
    SingularitySpectrum,
};
use mfdma_core::{Series, Surface};
use serde::{Deserialize, Serialize};

use crate::config::{AnalysisConfig, Method, Mode};
use crate::error::{CliError, Result};
use crate::ingest::{self, SeriesFormat};

pub const TOOLKIT: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Series(Series),
    Surface(Surface),
}

impl Input {
    pub fn shape(&self) -> Vec<usize> {
        match self {
            Input::Series(s) => vec![s.len()],
            Input::Surface(s) => vec![s.rows(), s.cols()],
        }
    }

    pub fn require_analysable(&self) -> mfdma_core::Result<()> {
        match self {
            Input::Series(s) => s.require_analysable(),
            Input::Surface(s) => s.require_analysable(),
        }
    }

    /// Length of the shortest side, which bounds the scales.
    pub fn min_side(&self) -> usize {
        self.shape().into_iter().min().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputRecord {
    pub path: Option<String>,
    pub sha256: String,
    pub shape: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub toolkit: String,
    pub version: String,
    /// Effective configuration, defaults included.
    pub config: AnalysisConfig,
    pub input: InputRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultBundle {
    pub provenance: Provenance,
    pub table: FluctuationTable,
    pub estimate: ScalingEstimate,
    pub spectrum: SingularitySpectrum,
    /// `τ(q) − τ_th(q)` when the config names a reference cascade.
    pub tau_error: Option<Vec<f64>>,
}

impl ResultBundle {
    pub fn width(&self) -> f64 {
        self.spectrum.width
    }
}

/// Parses raw input bytes according to the config's mode and format.
pub fn parse_input(cfg: &AnalysisConfig, path: &Path, bytes: &[u8]) -> Result<Input> {
    match cfg.mode {
        Mode::Series => {
            let format = cfg.input_format.unwrap_or_else(|| SeriesFormat::from_path(path));
            ingest::parse_series(path, bytes, format).map(Input::Series)
        }
        Mode::Surface => ingest::parse_surface(path, bytes).map(Input::Surface),
    }
}

/// Reads `cfg.input` and runs the full analysis on it.
pub fn run_pipeline(cfg: &AnalysisConfig) -> Result<ResultBundle> {
    cfg.validate()?;
    let path = cfg
        .input
        .as_deref()
        .ok_or_else(|| CliError::Validation("no input file given".into()))?;
    let bytes = ingest::read_bytes(path)?;
    let input = parse_input(cfg, path, &bytes)?;
    let record = InputRecord {
        path: Some(path.display().to_string()),
        sha256: ingest::sha256_hex(&bytes),
        shape: input.shape(),
    };
    analyze(cfg, &input, record)
}

/// Runs the analysis on data already in memory. `record` describes where it
/// came from and ends up in the provenance block.
pub fn analyze(cfg: &AnalysisConfig, input: &Input, record: InputRecord) -> Result<ResultBundle> {
    cfg.validate()?;
    let context = record.path.clone().unwrap_or_else(|| "<memory>".into());
    input
        .require_analysable()
        .map_err(|e| CliError::analysis(context.clone(), e))?;
    let cfg = cfg.resolve(input.min_side())?;
    let scales = cfg.scale_grid()?;
    let qs = cfg.q_grid()?;
    let fit_range = cfg.fit_range(&scales)?;

    let wrap = |e| CliError::analysis(context.clone(), e);
    let table = match (input, cfg.method) {
        (Input::Series(s), Method::Mfdma) => mfdma_fluctuations_1d(s, &scales, &qs, cfg.theta),
        (Input::Series(s), Method::Mfdfa) => mfdfa_fluctuations_1d(s, &scales, &qs, cfg.order),
        (Input::Surface(s), Method::Mfdma) => mfdma_fluctuations_2d(s, &scales, &qs, cfg.theta),
        (Input::Surface(s), Method::Mfdfa) => mfdfa_fluctuations_2d(s, &scales, &qs),
    }
    .map_err(wrap)?;
    let estimate = fit_scaling(&table, Some(fit_range), cfg.fractal_dim()).map_err(wrap)?;
    let spectrum = legendre_spectrum(&estimate, cfg.legendre_window).map_err(wrap)?;
    let tau_error = cfg
        .reference
        .as_ref()
        .map(|r| tau_error_with(&estimate, |q| r.tau(q)));

    Ok(ResultBundle {
        provenance: Provenance {
            toolkit: TOOLKIT.into(),
            version: VERSION.into(),
            config: cfg,
            input: record,
        },
        table,
        estimate,
        spectrum,
        tau_error,
    })
}

/// Sum of `|Δτ(q)|` over the grid, if a reference was configured.
pub fn total_tau_error(bundle: &ResultBundle) -> Option<f64> {
    bundle
        .tau_error
        .as_ref()
        .map(|d| d.iter().map(|x| x.abs()).sum())
}
