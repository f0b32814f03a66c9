//! Rayon drivers over the core's pure per-publication functions.
//!
//! Results are collected in index order, so the output is byte-identical
//! regardless of the thread count — parallelism only changes who computes
//! each element, never the order they are assembled in.

use citeflow_core::corpus::{CorpusGraph, PubIdx};
use citeflow_core::flows::{flow_profile, CitationWindow, FlowError, PopulationProfiles};
use citeflow_core::resolver::{
    phase1_anchors, resolve_multi, Assignment, AssignmentTable, ResolutionMethod,
};
use rayon::prelude::*;

use crate::AppError;

/// Builds a thread pool with the requested size; 0 means one thread per
/// available core.
pub fn make_pool(threads: usize) -> Result<rayon::ThreadPool, AppError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| AppError::Validation(format!("thread pool: {e}")))
}

/// Parallel equivalent of `resolve_all`; same result for any pool size.
pub fn resolve_all_parallel(
    graph: &CorpusGraph,
    seed: u64,
    pool: &rayon::ThreadPool,
) -> AssignmentTable {
    let anchors = phase1_anchors(graph);
    let assignments: Vec<Assignment> = pool.install(|| {
        (0..graph.n_publications() as u32)
            .into_par_iter()
            .map(|i| match anchors[i as usize] {
                Some(sc) => Assignment {
                    sc,
                    method: ResolutionMethod::SingleCategoryVenue,
                    tied: false,
                },
                None => resolve_multi(graph, &anchors, seed, PubIdx(i)),
            })
            .collect()
    });
    AssignmentTable::from_parts(assignments, seed)
}

/// Parallel equivalent of `profile_population`; profiles stay in pub_id
/// order for any pool size.
pub fn profile_population_parallel(
    graph: &CorpusGraph,
    assignments: &AssignmentTable,
    window: CitationWindow,
    pool: &rayon::ThreadPool,
) -> PopulationProfiles {
    let results: Vec<_> = pool.install(|| {
        graph
            .cohort_publications()
            .par_iter()
            .map(|&idx| flow_profile(graph, assignments, idx, window))
            .collect()
    });
    let mut profiles = Vec::with_capacity(results.len());
    let mut skipped = 0u64;
    for r in results {
        match r {
            Ok(p) => profiles.push(p),
            Err(FlowError::NoCitationsInWindow(_)) => skipped += 1,
            Err(FlowError::NotCohortPublication(_)) => unreachable!(),
        }
    }
    PopulationProfiles {
        window,
        profiles,
        skipped_uncited: skipped,
    }
}
