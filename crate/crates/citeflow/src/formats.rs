//! Readers and writers for the on-disk interchange formats.
//!
//! Corpus inputs are CSV or JSONL (one object per line, same field names),
//! inferred from the file extension. Every read error carries the file path
//! and, where known, the line number.

use std::fmt::Display;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter};
use std::path::{Path, PathBuf};

use citeflow_core::corpus::{CitationRecord, CorpusGraph, PublicationRecord, VenueRecord};
use citeflow_core::flows::{CitationWindow, FlowProfile};
use citeflow_core::impact::ImpactScore;
use citeflow_core::registry::RegistryRecord;
use citeflow_core::resolver::AssignmentRecord;
use citeflow_core::synth::GroundTruth;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::AppError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileFormat {
    Csv,
    Jsonl,
}

/// Infers the format from the file extension.
pub fn detect_format(path: &Path) -> Result<FileFormat, AppError> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => Ok(FileFormat::Csv),
        Some("jsonl") | Some("ndjson") => Ok(FileFormat::Jsonl),
        _ => Err(AppError::Input(format!(
            "{}: unsupported extension (expected .csv or .jsonl)",
            path.display()
        ))),
    }
}

/// Locates `stem.csv` or `stem.jsonl` inside an input directory.
pub fn find_input(dir: &Path, stem: &str) -> Result<PathBuf, AppError> {
    for ext in ["csv", "jsonl", "ndjson"] {
        let candidate = dir.join(format!("{stem}.{ext}"));
        if candidate.is_file() {
            return Ok(candidate);
        }
    }
    Err(AppError::Input(format!(
        "{}: no {stem}.csv or {stem}.jsonl found",
        dir.display()
    )))
}

fn input_err(path: &Path, detail: impl Display) -> AppError {
    AppError::Input(format!("{}: {detail}", path.display()))
}

fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, AppError> {
    let file = File::open(path).map_err(|e| input_err(path, e))?;
    let mut rdr = csv::Reader::from_reader(BufReader::new(file));
    let mut rows = Vec::new();
    for result in rdr.deserialize::<T>() {
        rows.push(result.map_err(|e| {
            match e.position().map(|p| p.line()) {
                Some(line) => AppError::Input(format!("{}:{line}: {e}", path.display())),
                None => input_err(path, e),
            }
        })?);
    }
    Ok(rows)
}

fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, AppError> {
    let file = File::open(path).map_err(|e| input_err(path, e))?;
    let mut rows = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| input_err(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        rows.push(serde_json::from_str(&line).map_err(|e| {
            AppError::Input(format!("{}:{}: {e}", path.display(), i + 1))
        })?);
    }
    Ok(rows)
}

fn read_records<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, AppError> {
    match detect_format(path)? {
        FileFormat::Csv => read_csv(path),
        FileFormat::Jsonl => read_jsonl(path),
    }
}

pub fn read_registry(path: &Path) -> Result<Vec<RegistryRecord>, AppError> {
    read_records(path)
}

/// CSV carries the candidate categories as one ";"-separated field; JSONL
/// carries them as a list.
#[derive(Debug, Serialize, Deserialize)]
struct VenueRow {
    venue_id: String,
    name: String,
    sc_codes: String,
}

pub fn read_venues(path: &Path) -> Result<Vec<VenueRecord>, AppError> {
    match detect_format(path)? {
        FileFormat::Csv => Ok(read_csv::<VenueRow>(path)?
            .into_iter()
            .map(|row| VenueRecord {
                venue_id: row.venue_id,
                name: row.name,
                sc_codes: row
                    .sc_codes
                    .split(';')
                    .filter(|s| !s.is_empty())
                    .map(String::from)
                    .collect(),
            })
            .collect()),
        FileFormat::Jsonl => read_jsonl(path),
    }
}

pub fn read_publications(path: &Path) -> Result<Vec<PublicationRecord>, AppError> {
    read_records(path)
}

pub fn read_citations(path: &Path) -> Result<Vec<CitationRecord>, AppError> {
    read_records(path)
}

pub fn read_assignments(path: &Path) -> Result<Vec<AssignmentRecord>, AppError> {
    read_records(path)
}

pub fn csv_writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>, AppError> {
    let file = File::create(path).map_err(|e| input_err(path, e))?;
    Ok(csv::Writer::from_writer(BufWriter::new(file)))
}

fn finish(path: &Path, mut wtr: csv::Writer<BufWriter<File>>) -> Result<(), AppError> {
    wtr.flush().map_err(|e| input_err(path, e))
}

pub fn write_registry(path: &Path, records: &[RegistryRecord]) -> Result<(), AppError> {
    let mut wtr = csv_writer(path)?;
    for rec in records {
        wtr.serialize(rec).map_err(|e| input_err(path, e))?;
    }
    finish(path, wtr)
}

pub fn write_venues(path: &Path, records: &[VenueRecord]) -> Result<(), AppError> {
    let mut wtr = csv_writer(path)?;
    for rec in records {
        wtr.serialize(VenueRow {
            venue_id: rec.venue_id.clone(),
            name: rec.name.clone(),
            sc_codes: rec.sc_codes.join(";"),
        })
        .map_err(|e| input_err(path, e))?;
    }
    finish(path, wtr)
}

pub fn write_publications(path: &Path, records: &[PublicationRecord]) -> Result<(), AppError> {
    let mut wtr = csv_writer(path)?;
    for rec in records {
        wtr.serialize(rec).map_err(|e| input_err(path, e))?;
    }
    finish(path, wtr)
}

pub fn write_citations(path: &Path, records: &[CitationRecord]) -> Result<(), AppError> {
    let mut wtr = csv_writer(path)?;
    for rec in records {
        wtr.serialize(rec).map_err(|e| input_err(path, e))?;
    }
    finish(path, wtr)
}

pub fn write_assignments(path: &Path, records: &[AssignmentRecord]) -> Result<(), AppError> {
    let mut wtr = csv_writer(path)?;
    for rec in records {
        wtr.serialize(rec).map_err(|e| input_err(path, e))?;
    }
    finish(path, wtr)
}

pub fn write_truth(path: &Path, truth: &GroundTruth) -> Result<(), AppError> {
    let mut wtr = csv_writer(path)?;
    wtr.write_record(["pub_id", "true_sc"])
        .map_err(|e| input_err(path, e))?;
    for (pub_id, sc) in &truth.true_sc {
        wtr.write_record([pub_id.as_str(), sc.as_str()])
            .map_err(|e| input_err(path, e))?;
    }
    finish(path, wtr)
}

/// Stable textual form of a citation window ("full" or the year count).
pub fn window_label(window: CitationWindow) -> String {
    match window {
        CitationWindow::Years(w) => w.to_string(),
        CitationWindow::FullHorizon => String::from("full"),
    }
}

pub fn write_profiles(
    path: &Path,
    graph: &CorpusGraph,
    profiles: &[(CitationWindow, &[FlowProfile])],
) -> Result<(), AppError> {
    let mut wtr = csv_writer(path)?;
    wtr.write_record([
        "pub_id",
        "window",
        "n_cit",
        "n_intra",
        "share_intra",
        "flow_class",
        "distinct_all",
        "distinct_extra",
    ])
    .map_err(|e| input_err(path, e))?;
    for (window, rows) in profiles {
        let label = window_label(*window);
        for p in *rows {
            let share = *p.share_intra.numer() as f64 / *p.share_intra.denom() as f64;
            wtr.write_record([
                graph.publication(p.pub_idx).pub_id.as_str(),
                &label,
                &p.n_cit.to_string(),
                &p.n_intra.to_string(),
                &share.to_string(),
                p.flow_class.as_str(),
                &p.distinct_all.to_string(),
                &p.distinct_extra.to_string(),
            ])
            .map_err(|e| input_err(path, e))?;
        }
    }
    finish(path, wtr)
}

pub fn write_impact(
    path: &Path,
    graph: &CorpusGraph,
    impacts: &[ImpactScore],
) -> Result<(), AppError> {
    let mut wtr = csv_writer(path)?;
    wtr.write_record(["pub_id", "sc_code", "raw_citations", "norm_impact"])
        .map_err(|e| input_err(path, e))?;
    for i in impacts {
        wtr.write_record([
            graph.publication(i.pub_idx).pub_id.as_str(),
            graph.registry().category(i.sc).code.as_str(),
            &i.raw_citations.to_string(),
            &i.norm_impact.to_string(),
        ])
        .map_err(|e| input_err(path, e))?;
    }
    finish(path, wtr)
}
