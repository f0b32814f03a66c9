//! Per-publication citation flow profiles under a citation window.
//!
//! A profile looks at one cohort publication and histograms the resolved
//! subject categories of its in-window citers. Intra shares are exact
//! rationals, so the 1/2 classification boundary never depends on float
//! rounding. Assignments are frozen at the full horizon; a window only
//! filters which citation edges count.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use num_rational::Ratio;

use crate::corpus::{CorpusGraph, PubIdx};
use crate::registry::{AreaId, ScId};
use crate::resolver::AssignmentTable;

/// Citation window: edges count iff
/// `cohort_year <= citing_year <= cohort_year + w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CitationWindow {
    Years(u32),
    FullHorizon,
}

impl CitationWindow {
    /// Window length in years for a concrete graph.
    pub fn years(&self, graph: &CorpusGraph) -> u32 {
        match self {
            Self::Years(w) => *w,
            Self::FullHorizon => (graph.horizon_year() - graph.cohort_year()) as u32,
        }
    }

    /// Whether a citing publication of this year falls inside the window.
    /// Years before the cohort year never count, so temporally anomalous
    /// edges are clamped out of every window.
    pub fn contains(&self, graph: &CorpusGraph, citing_year: i32) -> bool {
        citing_year >= graph.cohort_year()
            && citing_year <= graph.cohort_year() + self.years(graph) as i32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum FlowClass {
    TotallyIntra,
    TotallyExtra,
    PredominantlyIntra,
    PredominantlyExtra,
    Balanced,
}

impl FlowClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::TotallyIntra => "TotallyIntra",
            Self::TotallyExtra => "TotallyExtra",
            Self::PredominantlyIntra => "PredominantlyIntra",
            Self::PredominantlyExtra => "PredominantlyExtra",
            Self::Balanced => "Balanced",
        }
    }

    /// Intra share strictly above one half (includes totally intra).
    pub fn is_predominantly_intra(&self) -> bool {
        matches!(self, Self::TotallyIntra | Self::PredominantlyIntra)
    }

    /// Intra share strictly below one half (includes totally extra).
    pub fn is_predominantly_extra(&self) -> bool {
        matches!(self, Self::TotallyExtra | Self::PredominantlyExtra)
    }
}

/// Maps an exact intra share in [0, 1] to its flow class. The comparison at
/// 1/2 is exact rational arithmetic.
pub fn classify(share_intra: Ratio<u64>) -> FlowClass {
    let half = Ratio::new(1u64, 2u64);
    if share_intra == Ratio::from_integer(1) {
        FlowClass::TotallyIntra
    } else if share_intra == Ratio::from_integer(0) {
        FlowClass::TotallyExtra
    } else if share_intra > half {
        FlowClass::PredominantlyIntra
    } else if share_intra < half {
        FlowClass::PredominantlyExtra
    } else {
        FlowClass::Balanced
    }
}

/// Citation flow profile of one cited cohort publication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowProfile {
    pub pub_idx: PubIdx,
    /// The publication's own resolved category.
    pub own_sc: ScId,
    pub window: CitationWindow,
    pub n_cit: u64,
    pub n_intra: u64,
    pub share_intra: Ratio<u64>,
    /// Citations per citing category, sorted by [`ScId`].
    pub sc_histogram: Vec<(ScId, u64)>,
    pub distinct_all: u64,
    pub distinct_extra: u64,
    pub flow_class: FlowClass,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FlowError {
    #[error("publication {0:?} has no citations within the window")]
    NoCitationsInWindow(alloc::string::String),
    #[error("publication {0:?} is not a cohort publication")]
    NotCohortPublication(alloc::string::String),
}

/// Number of in-window citations of a publication.
pub fn in_window_citations(graph: &CorpusGraph, idx: PubIdx, window: CitationWindow) -> u64 {
    graph
        .in_citations(idx)
        .iter()
        .filter(|&&q| window.contains(graph, graph.publication(q).year))
        .count() as u64
}

pub fn flow_profile(
    graph: &CorpusGraph,
    assignments: &AssignmentTable,
    idx: PubIdx,
    window: CitationWindow,
) -> Result<FlowProfile, FlowError> {
    let p = graph.publication(idx);
    if p.year != graph.cohort_year() {
        return Err(FlowError::NotCohortPublication(p.pub_id.clone()));
    }

    let own_sc = assignments.sc_of(idx);
    let mut histogram: BTreeMap<ScId, u64> = BTreeMap::new();
    let mut n_cit = 0u64;
    for &q in graph.in_citations(idx) {
        if window.contains(graph, graph.publication(q).year) {
            *histogram.entry(assignments.sc_of(q)).or_insert(0) += 1;
            n_cit += 1;
        }
    }
    if n_cit == 0 {
        return Err(FlowError::NoCitationsInWindow(p.pub_id.clone()));
    }

    let n_intra = histogram.get(&own_sc).copied().unwrap_or(0);
    let share_intra = Ratio::new(n_intra, n_cit);
    let distinct_all = histogram.len() as u64;
    let distinct_extra = distinct_all - u64::from(n_intra > 0);

    Ok(FlowProfile {
        pub_idx: idx,
        own_sc,
        window,
        n_cit,
        n_intra,
        share_intra,
        sc_histogram: histogram.into_iter().collect(),
        distinct_all,
        distinct_extra,
        flow_class: classify(share_intra),
    })
}

/// Flow profiles of a whole window population, in pub_id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PopulationProfiles {
    pub window: CitationWindow,
    pub profiles: Vec<FlowProfile>,
    /// Cohort publications skipped because they have no in-window citation.
    pub skipped_uncited: u64,
}

/// One profile per cohort publication with at least one in-window citation.
pub fn profile_population(
    graph: &CorpusGraph,
    assignments: &AssignmentTable,
    window: CitationWindow,
) -> PopulationProfiles {
    let mut profiles = Vec::new();
    let mut skipped = 0u64;
    for &idx in graph.cohort_publications() {
        match flow_profile(graph, assignments, idx, window) {
            Ok(profile) => profiles.push(profile),
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

/// Per-area share of full-horizon-cited cohort publications that already
/// have a citation within the window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageShare {
    pub window: CitationWindow,
    /// (area, cited within window, cited by horizon), in [`AreaId`] order.
    pub per_area: Vec<(AreaId, u64, u64)>,
    pub total_in_window: u64,
    pub total_cited: u64,
}

impl CoverageShare {
    pub fn area_share(&self, area: AreaId) -> Option<f64> {
        self.per_area.iter().find(|(a, _, _)| *a == area).and_then(
            |&(_, num, den)| {
                if den == 0 {
                    None
                } else {
                    Some(num as f64 / den as f64)
                }
            },
        )
    }

    pub fn total_share(&self) -> Option<f64> {
        if self.total_cited == 0 {
            None
        } else {
            Some(self.total_in_window as f64 / self.total_cited as f64)
        }
    }
}

pub fn coverage_share(
    graph: &CorpusGraph,
    assignments: &AssignmentTable,
    window: CitationWindow,
) -> CoverageShare {
    let n_areas = graph.registry().n_areas();
    let mut num = alloc::vec![0u64; n_areas];
    let mut den = alloc::vec![0u64; n_areas];
    let mut total_num = 0u64;
    let mut total_den = 0u64;
    for &idx in graph.cohort_publications() {
        if in_window_citations(graph, idx, CitationWindow::FullHorizon) == 0 {
            continue;
        }
        let area = graph.registry().area_of(assignments.sc_of(idx));
        den[area.0 as usize] += 1;
        total_den += 1;
        if in_window_citations(graph, idx, window) >= 1 {
            num[area.0 as usize] += 1;
            total_num += 1;
        }
    }
    CoverageShare {
        window,
        per_area: (0..n_areas)
            .map(|i| (AreaId(i as u32), num[i], den[i]))
            .collect(),
        total_in_window: total_num,
        total_cited: total_den,
    }
}
