//! File formats, configuration and the end-to-end analysis pipeline behind
//! the `mfdma` command.

pub mod config;
pub mod emit;
pub mod error;
pub mod ingest;
pub mod pipeline;

pub use config::{AnalysisConfig, Method, Mode, OutputFormat, Reference};
pub use emit::{emit_results, from_json, to_json};
pub use error::{CliError, Result};
pub use ingest::{ingest_series, ingest_surface, SeriesFormat};
pub use pipeline::{analyze, run_pipeline, Input, InputRecord, ResultBundle};
