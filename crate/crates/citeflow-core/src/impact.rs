//! Field-normalized scholarly impact: raw citations rescaled by the mean
//! citations of cited cohort publications in the same subject category.
//!
//! The population is the cited cohort (at least one citation by the full
//! horizon), matching the analysis population everywhere else. Means are
//! exact integer sums divided once at the end, so results are reproducible
//! regardless of traversal order.

use alloc::vec::Vec;

use crate::corpus::{CorpusGraph, PubIdx};
use crate::flows::{in_window_citations, CitationWindow};
use crate::registry::ScId;
use crate::resolver::AssignmentTable;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpactScore {
    pub pub_idx: PubIdx,
    pub sc: ScId,
    /// Citations received within the impact window.
    pub raw_citations: u64,
    /// raw / mean(raw over cited cohort publications of the same category).
    pub norm_impact: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ImpactError {
    #[error("subject category {0:?} has no cited cohort publications")]
    EmptySubjectCategory(alloc::string::String),
    #[error("publication {0:?} is not a cited cohort publication")]
    NotCohortPublication(alloc::string::String),
}

/// Members of the impact population assigned to `sc`: cohort publications
/// with at least one full-horizon citation.
fn sc_population<'a>(
    graph: &'a CorpusGraph,
    assignments: &'a AssignmentTable,
    sc: ScId,
) -> impl Iterator<Item = PubIdx> + 'a {
    graph
        .cohort_publications()
        .iter()
        .copied()
        .filter(move |&idx| {
            assignments.sc_of(idx) == sc
                && in_window_citations(graph, idx, CitationWindow::FullHorizon) >= 1
        })
}

/// Mean in-window citation count over the cited cohort publications of a
/// category.
pub fn sc_mean_citations(
    graph: &CorpusGraph,
    assignments: &AssignmentTable,
    sc: ScId,
    window: CitationWindow,
) -> Result<f64, ImpactError> {
    let mut sum = 0u64;
    let mut n = 0u64;
    for idx in sc_population(graph, assignments, sc) {
        sum += in_window_citations(graph, idx, window);
        n += 1;
    }
    if n == 0 {
        return Err(ImpactError::EmptySubjectCategory(
            graph.registry().category(sc).code.clone(),
        ));
    }
    Ok(sum as f64 / n as f64)
}

/// Normalized impact of one cited cohort publication.
pub fn normalized_impact(
    graph: &CorpusGraph,
    assignments: &AssignmentTable,
    idx: PubIdx,
    window: CitationWindow,
) -> Result<ImpactScore, ImpactError> {
    let p = graph.publication(idx);
    if p.year != graph.cohort_year()
        || in_window_citations(graph, idx, CitationWindow::FullHorizon) == 0
    {
        return Err(ImpactError::NotCohortPublication(p.pub_id.clone()));
    }
    let sc = assignments.sc_of(idx);
    let mean = sc_mean_citations(graph, assignments, sc, window)?;
    let raw = in_window_citations(graph, idx, window);
    // mean == 0 implies every raw in the category (this one included) is 0
    let norm = if mean == 0.0 { 0.0 } else { raw as f64 / mean };
    Ok(ImpactScore {
        pub_idx: idx,
        sc,
        raw_citations: raw,
        norm_impact: norm,
    })
}

/// Impact scores for the whole cited cohort, in pub_id order. Single pass:
/// category means first, then one division per publication.
pub fn compute_impacts(
    graph: &CorpusGraph,
    assignments: &AssignmentTable,
    window: CitationWindow,
) -> Vec<ImpactScore> {
    let n_scs = graph.registry().n_categories();
    let mut sums = alloc::vec![0u64; n_scs];
    let mut counts = alloc::vec![0u64; n_scs];
    let mut raws: Vec<(PubIdx, ScId, u64)> = Vec::new();

    for &idx in graph.cohort_publications() {
        if in_window_citations(graph, idx, CitationWindow::FullHorizon) == 0 {
            continue;
        }
        let sc = assignments.sc_of(idx);
        let raw = in_window_citations(graph, idx, window);
        sums[sc.0 as usize] += raw;
        counts[sc.0 as usize] += 1;
        raws.push((idx, sc, raw));
    }

    raws.into_iter()
        .map(|(idx, sc, raw)| {
            let sum = sums[sc.0 as usize];
            let norm = if sum == 0 {
                0.0
            } else {
                raw as f64 * counts[sc.0 as usize] as f64 / sum as f64
            };
            ImpactScore {
                pub_idx: idx,
                sc,
                raw_citations: raw,
                norm_impact: norm,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::testutil::*;
    use crate::corpus::{build_graph, CorpusGraph, GraphOptions};
    use crate::resolver::resolve_all;
    use alloc::format;
    use alloc::string::ToString;
    use alloc::vec::Vec;

    /// Cohort pubs in category A with the given citation counts.
    fn corpus_with_counts(counts: &[u64]) -> CorpusGraph {
        let mut pubs = Vec::new();
        let mut edges = Vec::new();
        for (i, &c) in counts.iter().enumerate() {
            let id = format!("p{i}");
            pubs.push(publication(&id, "va", 2015));
            for k in 0..c {
                let citer = format!("q{i}_{k}");
                pubs.push(publication(&citer, "va", 2016));
                edges.push(edge(&citer, &id));
            }
        }
        build_graph(
            registry(&[("A", "X")]),
            &[venue("va", &["A"])],
            &pubs,
            &edges,
            2015,
            2022,
            GraphOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn mean_is_arithmetic() {
        let g = corpus_with_counts(&[2, 4, 6]);
        let t = resolve_all(&g, 0);
        let sc = g.registry().sc_id("A").unwrap();
        let mean = sc_mean_citations(&g, &t, sc, CitationWindow::FullHorizon).unwrap();
        assert_eq!(mean, 4.0);

        let single = corpus_with_counts(&[7]);
        let t = resolve_all(&single, 0);
        let sc = single.registry().sc_id("A").unwrap();
        assert_eq!(
            sc_mean_citations(&single, &t, sc, CitationWindow::FullHorizon).unwrap(),
            7.0
        );
    }

    #[test]
    fn empty_category_errors() {
        let g = build_graph(
            registry(&[("A", "X"), ("B", "X")]),
            &[venue("va", &["A"]), venue("vb", &["B"])],
            &[publication("p", "va", 2015), publication("q", "va", 2016)],
            &[edge("q", "p")],
            2015,
            2022,
            GraphOptions::default(),
        )
        .unwrap();
        let t = resolve_all(&g, 0);
        let b = g.registry().sc_id("B").unwrap();
        assert!(matches!(
            sc_mean_citations(&g, &t, b, CitationWindow::FullHorizon),
            Err(ImpactError::EmptySubjectCategory(code)) if code == "B"
        ));
    }

    #[test]
    fn identical_counts_give_unit_impact() {
        let g = corpus_with_counts(&[3, 3, 3]);
        let t = resolve_all(&g, 0);
        for imp in compute_impacts(&g, &t, CitationWindow::FullHorizon) {
            assert_eq!(imp.norm_impact, 1.0);
        }
    }

    #[test]
    fn impact_is_ratio_to_mean() {
        let g = corpus_with_counts(&[2, 4, 6]);
        let t = resolve_all(&g, 0);
        let p2 = g.pub_idx("p2").unwrap();
        let imp = normalized_impact(&g, &t, p2, CitationWindow::FullHorizon).unwrap();
        assert_eq!(imp.raw_citations, 6);
        assert_eq!(imp.norm_impact, 1.5);
    }

    #[test]
    fn normalization_closure() {
        let g = corpus_with_counts(&[1, 2, 3, 4, 10]);
        let t = resolve_all(&g, 0);
        let impacts = compute_impacts(&g, &t, CitationWindow::FullHorizon);
        let mean: f64 =
            impacts.iter().map(|i| i.norm_impact).sum::<f64>() / impacts.len() as f64;
        assert!((mean - 1.0).abs() < 1e-9);
    }

    #[test]
    fn uncited_excluded_from_population() {
        let g = build_graph(
            registry(&[("A", "X")]),
            &[venue("va", &["A"])],
            &[
                publication("p0", "va", 2015),
                publication("p1", "va", 2015),
                publication("q", "va", 2016),
            ],
            &[edge("q", "p0")],
            2015,
            2022,
            GraphOptions::default(),
        )
        .unwrap();
        let t = resolve_all(&g, 0);
        let impacts = compute_impacts(&g, &t, CitationWindow::FullHorizon);
        assert_eq!(impacts.len(), 1);
        assert_eq!(g.publication(impacts[0].pub_idx).pub_id, "p0".to_string());
        let p1 = g.pub_idx("p1").unwrap();
        assert!(matches!(
            normalized_impact(&g, &t, p1, CitationWindow::FullHorizon),
            Err(ImpactError::NotCohortPublication(_))
        ));
    }
}
