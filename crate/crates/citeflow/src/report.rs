//! Report emission: one CSV per summary table (`table1.csv`…`table6.csv`),
//! one per figure data series (`fig3.csv`, `fig5.csv`–`fig8.csv`), plus a
//! combined `report.json`.
//!
//! Percentage columns are rendered at one decimal place in the CSVs; the
//! JSON report carries full precision. All rows come out in a fixed order
//! (area id, category id, or series key), so reruns are byte-identical.

use std::path::Path;

use citeflow_core::corpus::CorpusGraph;
use citeflow_core::flows::CitationWindow;
use citeflow_core::impact::{compute_impacts, ImpactScore};
use citeflow_core::registry::AreaId;
use citeflow_core::resolver::AssignmentTable;
use citeflow_core::stats::{
    area_flow_breakdown, impact_by_flow_class, impact_by_spread, sc_flow_shares,
    sc_impact_correlation, sc_majority_count, spread_descriptives, window_comparison,
};
use serde_json::json;

use crate::formats::{csv_writer, window_label};
use crate::AppError;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl ReportFormat {
    pub fn parse(s: &str) -> Result<Self, AppError> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(AppError::Validation(format!(
                "unknown report format {other:?} (expected csv or json)"
            ))),
        }
    }
}

fn area_label(graph: &CorpusGraph, area: Option<AreaId>) -> String {
    match area {
        Some(a) => graph.registry().area(a).code.clone(),
        None => String::from("Total"),
    }
}

fn pct(v: f64) -> String {
    format!("{v:.1}")
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> AppError {
    AppError::Input(format!("{}: {e}", path.display()))
}

fn write_rows(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), AppError> {
    let mut wtr = csv_writer(path)?;
    wtr.write_record(header).map_err(|e| io_err(path, e))?;
    for row in rows {
        wtr.write_record(row).map_err(|e| io_err(path, e))?;
    }
    wtr.flush().map_err(|e| io_err(path, e))
}

/// Emits every table and figure file plus `report.json` into `out_dir`.
/// Returns the list of files written.
pub fn write_reports(
    graph: &CorpusGraph,
    assignments: &AssignmentTable,
    windows: &[CitationWindow],
    formats: &[ReportFormat],
    out_dir: &Path,
) -> Result<Vec<String>, AppError> {
    let full = citeflow_core::flows::profile_population(graph, assignments, CitationWindow::FullHorizon);
    let impacts: Vec<ImpactScore> = compute_impacts(graph, assignments, CitationWindow::FullHorizon);

    let breakdown = area_flow_breakdown(&full.profiles, graph.registry());
    let shares = sc_flow_shares(&full.profiles, graph.registry());
    let majority = sc_majority_count(&shares, graph.registry());
    let spread = spread_descriptives(&full.profiles, graph.registry());
    let by_class = impact_by_flow_class(&full.profiles, &impacts, graph.registry());
    let (_, correlation) = sc_impact_correlation(&full.profiles, &impacts, graph.registry());
    let by_spread = impact_by_spread(&full.profiles, &impacts);
    let series = window_comparison(graph, assignments, windows);

    let mut written = Vec::new();
    let csv = formats.contains(&ReportFormat::Csv);

    if csv {
        let rows: Vec<Vec<String>> = breakdown
            .iter()
            .map(|r| {
                vec![
                    area_label(graph, r.area),
                    r.total_pubs.to_string(),
                    pct(r.pct_totally_intra),
                    pct(r.pct_totally_extra),
                    pct(r.pct_predominantly_intra),
                    pct(r.avg_share_intra_pct),
                ]
            })
            .collect();
        let path = out_dir.join("table1.csv");
        write_rows(
            &path,
            &[
                "area_code",
                "total_pubs",
                "pct_totally_intra",
                "pct_totally_extra",
                "pct_predominantly_intra",
                "avg_share_intra_pct",
            ],
            &rows,
        )?;
        written.push(String::from("table1.csv"));

        let rows: Vec<Vec<String>> = shares
            .iter()
            .map(|r| {
                vec![
                    graph.registry().category(r.sc).code.clone(),
                    graph.registry().area(r.area).code.clone(),
                    r.n_obs.to_string(),
                    pct(r.avg_intra_pct),
                    pct(r.avg_extra_pct),
                    pct(r.diff_pct),
                    r.n_totally_intra.to_string(),
                    r.n_totally_extra.to_string(),
                ]
            })
            .collect();
        write_rows(
            &out_dir.join("table2.csv"),
            &[
                "sc_code",
                "area_code",
                "n_obs",
                "avg_intra_pct",
                "avg_extra_pct",
                "diff_pct",
                "n_totally_intra",
                "n_totally_extra",
            ],
            &rows,
        )?;
        written.push(String::from("table2.csv"));

        let rows: Vec<Vec<String>> = majority
            .iter()
            .map(|r| {
                vec![
                    area_label(graph, r.area),
                    r.n_scs.to_string(),
                    r.n_majority_intra.to_string(),
                ]
            })
            .collect();
        write_rows(
            &out_dir.join("table3.csv"),
            &["area_code", "n_scs", "n_majority_intra"],
            &rows,
        )?;
        written.push(String::from("table3.csv"));

        let rows: Vec<Vec<String>> = spread
            .iter()
            .map(|r| {
                vec![
                    area_label(graph, r.area),
                    r.n.to_string(),
                    r.mean.to_string(),
                    r.sd.to_string(),
                    r.min.to_string(),
                    r.max.to_string(),
                    r.median.to_string(),
                    r.q1.to_string(),
                    r.q3.to_string(),
                ]
            })
            .collect();
        write_rows(
            &out_dir.join("table4.csv"),
            &["area_code", "n", "mean", "sd", "min", "max", "median", "q1", "q3"],
            &rows,
        )?;
        written.push(String::from("table4.csv"));

        let rows: Vec<Vec<String>> = by_class
            .iter()
            .map(|r| {
                vec![
                    area_label(graph, r.area),
                    r.n_intra.to_string(),
                    r.avg_impact_intra.to_string(),
                    r.n_extra.to_string(),
                    r.avg_impact_extra.to_string(),
                    r.delta.to_string(),
                ]
            })
            .collect();
        write_rows(
            &out_dir.join("table5.csv"),
            &[
                "area_code",
                "n_intra",
                "avg_impact_intra",
                "n_extra",
                "avg_impact_extra",
                "delta",
            ],
            &rows,
        )?;
        written.push(String::from("table5.csv"));

        let rows: Vec<Vec<String>> = correlation
            .iter()
            .map(|r| {
                vec![
                    area_label(graph, r.area),
                    r.n_scs.to_string(),
                    r.n_excluded.to_string(),
                    r.n_negative.to_string(),
                    r.corr_min.to_string(),
                    r.corr_max.to_string(),
                    r.corr_mean.to_string(),
                ]
            })
            .collect();
        write_rows(
            &out_dir.join("table6.csv"),
            &[
                "area_code",
                "n_scs",
                "n_excluded",
                "n_negative",
                "corr_min",
                "corr_max",
                "corr_mean",
            ],
            &rows,
        )?;
        written.push(String::from("table6.csv"));

        let rows: Vec<Vec<String>> = by_spread
            .iter()
            .map(|p| {
                vec![
                    p.spread.to_string(),
                    p.mean_impact.to_string(),
                    p.n.to_string(),
                ]
            })
            .collect();
        write_rows(&out_dir.join("fig3.csv"), &["spread", "mean_impact", "n"], &rows)?;
        written.push(String::from("fig3.csv"));

        // long format: one (area, window, value) row per series point
        let mut fig5 = Vec::new();
        let mut fig6 = Vec::new();
        let mut fig7 = Vec::new();
        let mut fig8 = Vec::new();
        for s in &series {
            let label = window_label(s.window);
            for &(area, _, _) in &s.coverage.per_area {
                let value = s
                    .coverage
                    .area_share(area)
                    .map(|v| v.to_string())
                    .unwrap_or_default();
                fig5.push(vec![area_label(graph, Some(area)), label.clone(), value]);
            }
            let total = s
                .coverage
                .total_share()
                .map(|v| v.to_string())
                .unwrap_or_default();
            fig5.push(vec![String::from("Total"), label.clone(), total]);
            for r in &s.breakdown {
                let area = area_label(graph, r.area);
                fig6.push(vec![area.clone(), label.clone(), pct(r.pct_totally_intra)]);
                fig7.push(vec![area.clone(), label.clone(), pct(r.pct_predominantly_intra)]);
                fig8.push(vec![area, label.clone(), pct(r.avg_share_intra_pct)]);
            }
        }
        for (name, rows) in [("fig5.csv", fig5), ("fig6.csv", fig6), ("fig7.csv", fig7), ("fig8.csv", fig8)] {
            write_rows(&out_dir.join(name), &["area_code", "window", "value"], &rows)?;
            written.push(String::from(name));
        }
    }

    if formats.contains(&ReportFormat::Json) {
        let report = json!({
            "schema_version": REPORT_SCHEMA_VERSION,
            "cohort_year": graph.cohort_year(),
            "horizon_year": graph.horizon_year(),
            "seed": assignments.seed(),
            "windows": windows.iter().map(|&w| window_label(w)).collect::<Vec<_>>(),
            "population": {
                "profiled": full.profiles.len(),
                "skipped_uncited": full.skipped_uncited,
            },
            "table1": breakdown.iter().map(|r| json!({
                "area_code": area_label(graph, r.area),
                "total_pubs": r.total_pubs,
                "pct_totally_intra": r.pct_totally_intra,
                "pct_totally_extra": r.pct_totally_extra,
                "pct_predominantly_intra": r.pct_predominantly_intra,
                "avg_share_intra_pct": r.avg_share_intra_pct,
            })).collect::<Vec<_>>(),
            "table2": shares.iter().map(|r| json!({
                "sc_code": graph.registry().category(r.sc).code,
                "area_code": graph.registry().area(r.area).code,
                "n_obs": r.n_obs,
                "avg_intra_pct": r.avg_intra_pct,
                "avg_extra_pct": r.avg_extra_pct,
                "diff_pct": r.diff_pct,
                "n_totally_intra": r.n_totally_intra,
                "n_totally_extra": r.n_totally_extra,
            })).collect::<Vec<_>>(),
            "table3": majority.iter().map(|r| json!({
                "area_code": area_label(graph, r.area),
                "n_scs": r.n_scs,
                "n_majority_intra": r.n_majority_intra,
            })).collect::<Vec<_>>(),
            "table4": spread.iter().map(|r| json!({
                "area_code": area_label(graph, r.area),
                "n": r.n,
                "mean": r.mean,
                "sd": r.sd,
                "min": r.min,
                "max": r.max,
                "median": r.median,
                "q1": r.q1,
                "q3": r.q3,
            })).collect::<Vec<_>>(),
            "table5": by_class.iter().map(|r| json!({
                "area_code": area_label(graph, r.area),
                "n_intra": r.n_intra,
                "avg_impact_intra": r.avg_impact_intra,
                "n_extra": r.n_extra,
                "avg_impact_extra": r.avg_impact_extra,
                "delta": r.delta,
            })).collect::<Vec<_>>(),
            "table6": correlation.iter().map(|r| json!({
                "area_code": area_label(graph, r.area),
                "n_scs": r.n_scs,
                "n_excluded": r.n_excluded,
                "n_negative": r.n_negative,
                "corr_min": r.corr_min,
                "corr_max": r.corr_max,
                "corr_mean": r.corr_mean,
            })).collect::<Vec<_>>(),
            "fig3": by_spread.iter().map(|p| json!({
                "spread": p.spread,
                "mean_impact": p.mean_impact,
                "n": p.n,
            })).collect::<Vec<_>>(),
            "window_series": series.iter().map(|s| json!({
                "window": window_label(s.window),
                "skipped_uncited": s.skipped_uncited,
                "coverage": {
                    "per_area": s.coverage.per_area.iter().map(|&(a, num, den)| json!({
                        "area_code": area_label(graph, Some(a)),
                        "cited_in_window": num,
                        "cited_total": den,
                        "share": s.coverage.area_share(a),
                    })).collect::<Vec<_>>(),
                    "total_share": s.coverage.total_share(),
                },
                "breakdown": s.breakdown.iter().map(|r| json!({
                    "area_code": area_label(graph, r.area),
                    "total_pubs": r.total_pubs,
                    "pct_totally_intra": r.pct_totally_intra,
                    "pct_predominantly_intra": r.pct_predominantly_intra,
                    "avg_share_intra_pct": r.avg_share_intra_pct,
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        });
        let path = out_dir.join("report.json");
        let file = std::fs::File::create(&path).map_err(|e| io_err(&path, e))?;
        serde_json::to_writer_pretty(std::io::BufWriter::new(file), &report)
            .map_err(|e| io_err(&path, e))?;
        written.push(String::from("report.json"));
    }

    Ok(written)
}
