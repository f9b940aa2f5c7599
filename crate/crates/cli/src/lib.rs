//! Command-line pipeline around `lexmap`: staged, cached runs over an
//! output directory, plus per-paper explanations and a Markdown report.

pub mod config;
pub mod error;
pub mod explain;
pub mod pipeline;
pub mod report;

pub use config::PipelineConfig;
pub use error::{CliError, Result};
pub use pipeline::{Manifest, Pipeline, Stage, StageOutcome};
