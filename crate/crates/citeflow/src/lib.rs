//! File formats, parallel drivers and the staged pipeline behind the
//! `citeflow` command-line tool.
//!
//! All analytical logic lives in `citeflow-core`; this crate adds I/O
//! (CSV/JSONL corpora, cached graphs, report tables), rayon-based parallel
//! execution that preserves the core's deterministic output order, and the
//! ingest → resolve → analyze → report staging with on-disk artifacts
//! between stages.

#![forbid(unsafe_code)]

pub mod cache;
pub mod formats;
pub mod parallel;
pub mod pipeline;
pub mod report;

use std::fmt;

/// Top-level failure, split by exit code: configuration/validation problems
/// exit with 1, I/O and parse problems with 2.
#[derive(Debug)]
pub enum AppError {
    /// Invalid configuration or corpus contents (exit code 1).
    Validation(String),
    /// Failed to read, parse or write a file (exit code 2).
    Input(String),
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Validation(msg) => write!(f, "validation error: {msg}"),
            Self::Input(msg) => write!(f, "input error: {msg}"),
        }
    }
}

impl std::error::Error for AppError {}

impl AppError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Validation(_) => 1,
            Self::Input(_) => 2,
        }
    }
}

impl From<citeflow_core::CorpusError> for AppError {
    fn from(err: citeflow_core::CorpusError) -> Self {
        Self::Validation(err.to_string())
    }
}

impl From<citeflow_core::synth::SynthError> for AppError {
    fn from(err: citeflow_core::synth::SynthError) -> Self {
        Self::Validation(err.to_string())
    }
}
