//! Staged pipeline with on-disk artifacts between stages.
//!
//! `ingest` writes a graph cache, `resolve` an `assignments.csv`, `analyze`
//! the per-publication dumps, `report` the tables and figures; `pipeline`
//! chains all four. Staging means a large corpus is resolved once and can be
//! re-analyzed under many windows cheaply. Each stage prints one JSON
//! summary object on standard output; diagnostics go to standard error.

use std::path::{Path, PathBuf};

use citeflow_core::corpus::CorpusGraph;
use citeflow_core::flows::CitationWindow;
use citeflow_core::impact::compute_impacts;
use citeflow_core::resolver::{Assignment, AssignmentTable, ResolutionMethod};
use citeflow_core::synth::{generate, SynthConfig};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cache::{GraphCache, GRAPH_SCHEMA_VERSION};
use crate::formats;
use crate::parallel;
use crate::report::{write_reports, ReportFormat};
use crate::AppError;

/// Resolved run configuration: defaults, overlaid by a TOML config file,
/// overlaid by command-line flags.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Directory holding the four corpus input files.
    pub input: Option<PathBuf>,
    /// Directory receiving every artifact (graph cache, caches, reports).
    pub out: PathBuf,
    pub cohort_year: i32,
    pub horizon_year: i32,
    pub seed: u64,
    /// Citation windows: year counts or "full".
    pub windows: Vec<String>,
    /// Report formats: "csv" and/or "json".
    pub formats: Vec<String>,
    /// Worker threads; 0 means one per core.
    pub threads: usize,
    /// Treat the registry as the full reference schema (enables the
    /// size warning).
    pub reference_schema: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            input: None,
            out: PathBuf::from("out"),
            cohort_year: 2015,
            horizon_year: 2022,
            seed: 42,
            windows: vec![String::from("full")],
            formats: vec![String::from("csv"), String::from("json")],
            threads: 0,
            reference_schema: false,
        }
    }
}

pub fn parse_window(s: &str) -> Result<CitationWindow, AppError> {
    if s == "full" {
        return Ok(CitationWindow::FullHorizon);
    }
    s.parse::<u32>()
        .map(CitationWindow::Years)
        .map_err(|_| AppError::Validation(format!("invalid window {s:?} (expected a year count or \"full\")")))
}

impl RunConfig {
    pub fn from_toml(path: &Path) -> Result<Self, AppError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| AppError::Input(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| AppError::Input(format!("{}: {e}", path.display())))
    }

    pub fn windows(&self) -> Result<Vec<CitationWindow>, AppError> {
        let max = (self.horizon_year - self.cohort_year) as u32;
        let mut windows = Vec::with_capacity(self.windows.len());
        for s in &self.windows {
            let w = parse_window(s)?;
            if let CitationWindow::Years(y) = w {
                if y > max {
                    return Err(AppError::Validation(format!(
                        "window {y} exceeds the horizon span {max}"
                    )));
                }
            }
            windows.push(w);
        }
        if windows.is_empty() {
            return Err(AppError::Validation(String::from("no citation windows configured")));
        }
        Ok(windows)
    }

    pub fn formats(&self) -> Result<Vec<ReportFormat>, AppError> {
        self.formats.iter().map(|s| ReportFormat::parse(s)).collect()
    }

    fn input_dir(&self) -> Result<&Path, AppError> {
        self.input
            .as_deref()
            .ok_or_else(|| AppError::Validation(String::from("no input directory configured")))
    }

    fn graph_cache_path(&self) -> PathBuf {
        self.out.join("graph.json")
    }

    fn assignments_path(&self) -> PathBuf {
        self.out.join("assignments.csv")
    }

    fn ensure_out(&self) -> Result<(), AppError> {
        std::fs::create_dir_all(&self.out)
            .map_err(|e| AppError::Input(format!("{}: {e}", self.out.display())))
    }
}

fn warning_text(w: &citeflow_core::corpus::ValidationWarning) -> String {
    use citeflow_core::corpus::ValidationWarning as W;
    match w {
        W::TemporalAnomaly { count } => {
            format!("{count} citation(s) predate the cited publication; they fall outside every window")
        }
        W::UncitedCohortPublication { count } => {
            format!("{count} cohort publication(s) have no citations and are excluded from analysis populations")
        }
        W::NonReferenceSchemaSize { n_scs, n_areas } => {
            format!("registry flagged as reference schema but has {n_scs} categories in {n_areas} areas")
        }
    }
}

/// Reads and validates the corpus, writes the graph cache.
pub fn cmd_ingest(cfg: &RunConfig) -> Result<Value, AppError> {
    let dir = cfg.input_dir()?;
    let registry = formats::read_registry(&formats::find_input(dir, "registry")?)?;
    let venues = formats::read_venues(&formats::find_input(dir, "venues")?)?;
    let publications = formats::read_publications(&formats::find_input(dir, "publications")?)?;
    let citations = formats::read_citations(&formats::find_input(dir, "citations")?)?;

    let cache = GraphCache {
        schema_version: GRAPH_SCHEMA_VERSION,
        reference_schema: cfg.reference_schema,
        cohort_year: cfg.cohort_year,
        horizon_year: cfg.horizon_year,
        registry,
        venues,
        publications,
        citations,
    };
    let graph = cache.build()?;
    let warnings: Vec<String> = graph.validate().warnings.iter().map(warning_text).collect();
    for w in &warnings {
        eprintln!("warning: {w}");
    }

    cfg.ensure_out()?;
    cache.save(&cfg.graph_cache_path())?;

    Ok(json!({
        "stage": "ingest",
        "publications": graph.n_publications(),
        "venues": graph.n_venues(),
        "edges": graph.n_edges(),
        "cohort_publications": graph.cohort_publications().len(),
        "warnings": warnings,
        "graph_cache": cfg.graph_cache_path(),
    }))
}

fn load_graph(cfg: &RunConfig) -> Result<CorpusGraph, AppError> {
    GraphCache::load(&cfg.graph_cache_path())?.build()
}

/// Rebuilds an [`AssignmentTable`] from a cached `assignments.csv`.
pub fn load_assignments(
    graph: &CorpusGraph,
    path: &Path,
    seed: u64,
) -> Result<AssignmentTable, AppError> {
    let records = formats::read_assignments(path)?;
    if records.len() != graph.n_publications() {
        return Err(AppError::Validation(format!(
            "{}: {} assignment(s) for {} publication(s)",
            path.display(),
            records.len(),
            graph.n_publications()
        )));
    }
    let mut slots: Vec<Option<Assignment>> = vec![None; graph.n_publications()];
    for rec in &records {
        let idx = graph.pub_idx(&rec.pub_id)?;
        let sc = graph.registry().sc_id(&rec.sc_code).ok_or_else(|| {
            AppError::Validation(format!(
                "{}: unknown subject category {:?} for publication {:?}",
                path.display(),
                rec.sc_code,
                rec.pub_id
            ))
        })?;
        let method = ResolutionMethod::parse(&rec.method).ok_or_else(|| {
            AppError::Validation(format!(
                "{}: unknown resolution method {:?}",
                path.display(),
                rec.method
            ))
        })?;
        let slot = &mut slots[idx.0 as usize];
        if slot.is_some() {
            return Err(AppError::Validation(format!(
                "{}: duplicate assignment for publication {:?}",
                path.display(),
                rec.pub_id
            )));
        }
        *slot = Some(Assignment {
            sc,
            method,
            tied: rec.tied,
        });
    }
    let assignments = slots
        .into_iter()
        .map(|s| s.expect("every slot filled: counts match and no duplicates"))
        .collect();
    Ok(AssignmentTable::from_parts(assignments, seed))
}

/// Resolves every publication and writes `assignments.csv`.
pub fn cmd_resolve(cfg: &RunConfig) -> Result<Value, AppError> {
    let graph = load_graph(cfg)?;
    let pool = parallel::make_pool(cfg.threads)?;
    let table = parallel::resolve_all_parallel(&graph, cfg.seed, &pool);
    cfg.ensure_out()?;
    formats::write_assignments(&cfg.assignments_path(), &table.to_records(&graph))?;

    let mut tie_broken = 0usize;
    let mut fallback = 0usize;
    for (_, a) in table.iter() {
        match a.method {
            ResolutionMethod::TieBreakRandom => tie_broken += 1,
            ResolutionMethod::FallbackRandom => fallback += 1,
            _ => {}
        }
    }
    Ok(json!({
        "stage": "resolve",
        "publications": table.len(),
        "seed": cfg.seed,
        "tie_broken": tie_broken,
        "fallback_random": fallback,
        "assignments": cfg.assignments_path(),
    }))
}

/// Computes per-publication profiles and impacts, writes the dumps.
pub fn cmd_analyze(cfg: &RunConfig) -> Result<Value, AppError> {
    let graph = load_graph(cfg)?;
    let table = load_assignments(&graph, &cfg.assignments_path(), cfg.seed)?;
    let windows = cfg.windows()?;
    let pool = parallel::make_pool(cfg.threads)?;

    let populations: Vec<_> = windows
        .iter()
        .map(|&w| parallel::profile_population_parallel(&graph, &table, w, &pool))
        .collect();
    for pop in &populations {
        if pop.profiles.is_empty() {
            eprintln!(
                "warning: no cited cohort publications in window {}",
                formats::window_label(pop.window)
            );
        }
    }
    let impacts = compute_impacts(&graph, &table, CitationWindow::FullHorizon);

    cfg.ensure_out()?;
    let pairs: Vec<_> = populations
        .iter()
        .map(|p| (p.window, p.profiles.as_slice()))
        .collect();
    formats::write_profiles(&cfg.out.join("profiles.csv"), &graph, &pairs)?;
    formats::write_impact(&cfg.out.join("impact.csv"), &graph, &impacts)?;

    Ok(json!({
        "stage": "analyze",
        "windows": populations.iter().map(|p| json!({
            "window": formats::window_label(p.window),
            "profiled": p.profiles.len(),
            "skipped_uncited": p.skipped_uncited,
        })).collect::<Vec<_>>(),
        "impact_population": impacts.len(),
    }))
}

/// Writes the summary tables, figure series and combined JSON report.
pub fn cmd_report(cfg: &RunConfig) -> Result<Value, AppError> {
    let graph = load_graph(cfg)?;
    let table = load_assignments(&graph, &cfg.assignments_path(), cfg.seed)?;
    let windows = cfg.windows()?;
    cfg.ensure_out()?;
    let files = write_reports(&graph, &table, &windows, &cfg.formats()?, &cfg.out)?;
    Ok(json!({
        "stage": "report",
        "out": cfg.out,
        "files": files,
    }))
}

/// Generates a synthetic corpus and writes it as input files plus the
/// planted truth.
pub fn cmd_synth(
    config_path: Option<&Path>,
    seed_override: Option<u64>,
    out: &Path,
) -> Result<Value, AppError> {
    let mut config: SynthConfig = match config_path {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| AppError::Input(format!("{}: {e}", path.display())))?;
            toml::from_str(&text).map_err(|e| AppError::Input(format!("{}: {e}", path.display())))?
        }
        None => SynthConfig::default(),
    };
    if let Some(seed) = seed_override {
        config.seed = seed;
    }
    let corpus = generate(&config)?;
    std::fs::create_dir_all(out).map_err(|e| AppError::Input(format!("{}: {e}", out.display())))?;
    formats::write_registry(&out.join("registry.csv"), &corpus.registry)?;
    formats::write_venues(&out.join("venues.csv"), &corpus.venues)?;
    formats::write_publications(&out.join("publications.csv"), &corpus.publications)?;
    formats::write_citations(&out.join("citations.csv"), &corpus.citations)?;
    formats::write_truth(&out.join("truth.csv"), &corpus.truth)?;
    Ok(json!({
        "stage": "synth",
        "out": out,
        "seed": config.seed,
        "publications": corpus.publications.len(),
        "venues": corpus.venues.len(),
        "edges": corpus.citations.len(),
        "cohort_year": corpus.cohort_year,
        "horizon_year": corpus.horizon_year,
    }))
}

/// All four stages in order, sharing one output directory.
pub fn cmd_pipeline(cfg: &RunConfig) -> Result<Value, AppError> {
    let ingest = cmd_ingest(cfg)?;
    let resolve = cmd_resolve(cfg)?;
    let analyze = cmd_analyze(cfg)?;
    let report = cmd_report(cfg)?;
    Ok(json!({
        "stage": "pipeline",
        "ingest": ingest,
        "resolve": resolve,
        "analyze": analyze,
        "report": report,
    }))
}
