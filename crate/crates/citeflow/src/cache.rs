//! On-disk graph cache written by `ingest` and consumed by later stages.
//!
//! The cache stores the canonical record lists plus the analysis years; the
//! graph itself is rebuilt on load, so the adjacency indexes never need a
//! serialized form and a cache is valid exactly when its records are.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use citeflow_core::corpus::{
    build_graph, CitationRecord, CorpusGraph, GraphOptions, PublicationRecord, VenueRecord,
};
use citeflow_core::registry::{RegistryRecord, SubjectCategoryRegistry};
use serde::{Deserialize, Serialize};

use crate::AppError;

pub const GRAPH_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphCache {
    pub schema_version: u32,
    pub reference_schema: bool,
    pub cohort_year: i32,
    pub horizon_year: i32,
    pub registry: Vec<RegistryRecord>,
    pub venues: Vec<VenueRecord>,
    pub publications: Vec<PublicationRecord>,
    pub citations: Vec<CitationRecord>,
}

impl GraphCache {
    pub fn build(&self) -> Result<CorpusGraph, AppError> {
        let registry = SubjectCategoryRegistry::from_records(&self.registry, self.reference_schema)?;
        Ok(build_graph(
            registry,
            &self.venues,
            &self.publications,
            &self.citations,
            self.cohort_year,
            self.horizon_year,
            GraphOptions::default(),
        )?)
    }

    pub fn save(&self, path: &Path) -> Result<(), AppError> {
        let file =
            File::create(path).map_err(|e| AppError::Input(format!("{}: {e}", path.display())))?;
        serde_json::to_writer(BufWriter::new(file), self)
            .map_err(|e| AppError::Input(format!("{}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<Self, AppError> {
        let file =
            File::open(path).map_err(|e| AppError::Input(format!("{}: {e}", path.display())))?;
        let cache: Self = serde_json::from_reader(BufReader::new(file))
            .map_err(|e| AppError::Input(format!("{}: {e}", path.display())))?;
        if cache.schema_version != GRAPH_SCHEMA_VERSION {
            return Err(AppError::Input(format!(
                "{}: unsupported graph cache schema version {} (expected {})",
                path.display(),
                cache.schema_version,
                GRAPH_SCHEMA_VERSION
            )));
        }
        Ok(cache)
    }
}
