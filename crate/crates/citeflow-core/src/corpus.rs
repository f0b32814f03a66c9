//! Immutable, validated citation graph.
//!
//! Publications, venues and edges are canonicalized at build time:
//! publications are indexed in lexicographic `pub_id` order and adjacency
//! lists are sorted by counterpart id, so every downstream computation is
//! independent of input record order.

use alloc::string::String;
use alloc::vec::Vec;
use hashbrown::HashMap;

use crate::registry::{ScId, SubjectCategoryRegistry};

/// Dense index of a publication within a [`CorpusGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PubIdx(pub u32);

/// Dense index of a venue within a [`CorpusGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VenueIdx(pub u32);

/// One row of `venues.csv`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VenueRecord {
    pub venue_id: String,
    pub name: String,
    /// Candidate subject-category codes of the venue, in source order.
    pub sc_codes: Vec<String>,
}

/// One row of `publications.csv`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PublicationRecord {
    pub pub_id: String,
    pub venue_id: String,
    pub year: i32,
}

/// One row of `citations.csv`: `citing_id` cites `cited_id`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CitationRecord {
    pub citing_id: String,
    pub cited_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Venue {
    pub venue_id: String,
    pub name: String,
    /// Candidate categories, deduplication-checked, source order preserved.
    pub candidates: Vec<ScId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Publication {
    pub pub_id: String,
    pub venue: VenueIdx,
    pub year: i32,
}

/// Referential or structural defect detected while building a graph.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("registry is empty")]
    EmptyRegistry,
    #[error("duplicate subject category code {0:?}")]
    DuplicateSubjectCategory(String),
    #[error("venue {venue_id:?} references unknown subject category {sc_code:?}")]
    UnknownSubjectCategory { venue_id: String, sc_code: String },
    #[error("venue {0:?} has an empty candidate subject-category set")]
    EmptyCandidateSet(String),
    #[error("venue {venue_id:?} lists subject category {sc_code:?} more than once")]
    DuplicateCandidate { venue_id: String, sc_code: String },
    #[error("duplicate venue id {0:?}")]
    DuplicateVenue(String),
    #[error("publication {pub_id:?} references unknown venue {venue_id:?}")]
    UnknownVenue { pub_id: String, venue_id: String },
    #[error("duplicate publication id {0:?}")]
    DuplicatePublication(String),
    #[error("publication {pub_id:?} has year {year} outside [{min_year}, {max_year}]")]
    YearOutOfRange {
        pub_id: String,
        year: i32,
        min_year: i32,
        max_year: i32,
    },
    #[error("unknown publication {0:?}")]
    UnknownPublication(String),
    #[error("self-citation on publication {0:?}")]
    SelfCitation(String),
    #[error("duplicate citation edge ({citing_id:?}, {cited_id:?})")]
    DuplicateEdge { citing_id: String, cited_id: String },
    #[error("cohort year {cohort_year} is after horizon year {horizon_year}")]
    CohortAfterHorizon { cohort_year: i32, horizon_year: i32 },
}

/// Build-time options. Year bounds are a sanity check on publication years.
#[derive(Debug, Clone, Copy)]
pub struct GraphOptions {
    pub min_year: i32,
    pub max_year: i32,
}

impl Default for GraphOptions {
    fn default() -> Self {
        Self {
            min_year: 1500,
            max_year: 2500,
        }
    }
}

/// Non-fatal condition reported by [`CorpusGraph::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationWarning {
    /// Edges where the citing publication predates the cited one. Such edges
    /// are retained but fall outside every citation window.
    TemporalAnomaly { count: u64 },
    /// Cohort publications with zero in-citations; retained in the graph but
    /// excluded from every analysis population.
    UncitedCohortPublication { count: u64 },
    /// Registry flagged as the reference schema but of different size.
    NonReferenceSchemaSize { n_scs: usize, n_areas: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub warnings: Vec<ValidationWarning>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.warnings.is_empty()
    }
}

/// Immutable citation graph over a validated corpus.
#[derive(Debug, Clone)]
pub struct CorpusGraph {
    registry: SubjectCategoryRegistry,
    venues: Vec<Venue>,
    pubs: Vec<Publication>,
    pub_by_id: HashMap<String, PubIdx>,
    n_edges: usize,
    // CSR adjacency; neighbor lists sorted by counterpart pub_id.
    in_off: Vec<u32>,
    in_adj: Vec<PubIdx>,
    out_off: Vec<u32>,
    out_adj: Vec<PubIdx>,
    cohort_year: i32,
    horizon_year: i32,
    cohort_pubs: Vec<PubIdx>,
}

/// Validates the inputs and assembles an immutable graph with adjacency
/// indexes. Rejects any referential violation; never mutates after return.
pub fn build_graph(
    registry: SubjectCategoryRegistry,
    venues: &[VenueRecord],
    publications: &[PublicationRecord],
    edges: &[CitationRecord],
    cohort_year: i32,
    horizon_year: i32,
    options: GraphOptions,
) -> Result<CorpusGraph, CorpusError> {
    if cohort_year > horizon_year {
        return Err(CorpusError::CohortAfterHorizon {
            cohort_year,
            horizon_year,
        });
    }

    // Venues, canonicalized by venue_id.
    let mut venue_rows: Vec<&VenueRecord> = venues.iter().collect();
    venue_rows.sort_unstable_by(|a, b| a.venue_id.cmp(&b.venue_id));
    let mut built_venues: Vec<Venue> = Vec::with_capacity(venue_rows.len());
    let mut venue_by_id: HashMap<&str, VenueIdx> = HashMap::with_capacity(venue_rows.len());
    for rec in &venue_rows {
        if rec.sc_codes.is_empty() {
            return Err(CorpusError::EmptyCandidateSet(rec.venue_id.clone()));
        }
        let mut candidates = Vec::with_capacity(rec.sc_codes.len());
        for code in &rec.sc_codes {
            let sc = registry
                .sc_id(code)
                .ok_or_else(|| CorpusError::UnknownSubjectCategory {
                    venue_id: rec.venue_id.clone(),
                    sc_code: code.clone(),
                })?;
            if candidates.contains(&sc) {
                return Err(CorpusError::DuplicateCandidate {
                    venue_id: rec.venue_id.clone(),
                    sc_code: code.clone(),
                });
            }
            candidates.push(sc);
        }
        let idx = VenueIdx(built_venues.len() as u32);
        if venue_by_id.insert(&rec.venue_id, idx).is_some() {
            return Err(CorpusError::DuplicateVenue(rec.venue_id.clone()));
        }
        built_venues.push(Venue {
            venue_id: rec.venue_id.clone(),
            name: rec.name.clone(),
            candidates,
        });
    }

    // Publications, canonicalized by pub_id.
    let mut pub_rows: Vec<&PublicationRecord> = publications.iter().collect();
    pub_rows.sort_unstable_by(|a, b| a.pub_id.cmp(&b.pub_id));
    let mut pubs: Vec<Publication> = Vec::with_capacity(pub_rows.len());
    let mut pub_by_id: HashMap<String, PubIdx> = HashMap::with_capacity(pub_rows.len());
    for rec in &pub_rows {
        let venue =
            *venue_by_id
                .get(rec.venue_id.as_str())
                .ok_or_else(|| CorpusError::UnknownVenue {
                    pub_id: rec.pub_id.clone(),
                    venue_id: rec.venue_id.clone(),
                })?;
        if rec.year < options.min_year || rec.year > options.max_year {
            return Err(CorpusError::YearOutOfRange {
                pub_id: rec.pub_id.clone(),
                year: rec.year,
                min_year: options.min_year,
                max_year: options.max_year,
            });
        }
        let idx = PubIdx(pubs.len() as u32);
        if pub_by_id.insert(rec.pub_id.clone(), idx).is_some() {
            return Err(CorpusError::DuplicatePublication(rec.pub_id.clone()));
        }
        pubs.push(Publication {
            pub_id: rec.pub_id.clone(),
            venue,
            year: rec.year,
        });
    }

    // Edges, canonicalized by (citing, cited) index pair. Index order equals
    // pub_id order, so duplicate detection and adjacency order are stable.
    let mut edge_idx: Vec<(PubIdx, PubIdx)> = Vec::with_capacity(edges.len());
    for rec in edges {
        let citing = *pub_by_id
            .get(rec.citing_id.as_str())
            .ok_or_else(|| CorpusError::UnknownPublication(rec.citing_id.clone()))?;
        let cited = *pub_by_id
            .get(rec.cited_id.as_str())
            .ok_or_else(|| CorpusError::UnknownPublication(rec.cited_id.clone()))?;
        if citing == cited {
            return Err(CorpusError::SelfCitation(rec.citing_id.clone()));
        }
        edge_idx.push((citing, cited));
    }
    edge_idx.sort_unstable();
    for pair in edge_idx.windows(2) {
        if pair[0] == pair[1] {
            return Err(CorpusError::DuplicateEdge {
                citing_id: pubs[pair[0].0 .0 as usize].pub_id.clone(),
                cited_id: pubs[pair[0].1 .0 as usize].pub_id.clone(),
            });
        }
    }

    let n = pubs.len();
    let (out_off, out_adj) = csr(n, edge_idx.iter().map(|&(citing, cited)| (citing, cited)));
    let (in_off, in_adj) = csr(n, edge_idx.iter().map(|&(citing, cited)| (cited, citing)));

    let cohort_pubs: Vec<PubIdx> = pubs
        .iter()
        .enumerate()
        .filter(|(_, p)| p.year == cohort_year)
        .map(|(i, _)| PubIdx(i as u32))
        .collect();

    Ok(CorpusGraph {
        registry,
        venues: built_venues,
        pubs,
        pub_by_id,
        n_edges: edge_idx.len(),
        in_off,
        in_adj,
        out_off,
        out_adj,
        cohort_year,
        horizon_year,
        cohort_pubs,
    })
}

/// Builds a CSR index from (source, target) pairs; each target list ends up
/// sorted because the input pairs are globally sorted by index.
fn csr(n: usize, pairs: impl Iterator<Item = (PubIdx, PubIdx)> + Clone) -> (Vec<u32>, Vec<PubIdx>) {
    let mut counts = alloc::vec![0u32; n + 1];
    for (src, _) in pairs.clone() {
        counts[src.0 as usize + 1] += 1;
    }
    for i in 1..=n {
        counts[i] += counts[i - 1];
    }
    let mut adj = alloc::vec![PubIdx(0); counts[n] as usize];
    let mut cursor = counts.clone();
    for (src, dst) in pairs {
        let slot = cursor[src.0 as usize];
        adj[slot as usize] = dst;
        cursor[src.0 as usize] += 1;
    }
    // in-neighbor lists must be sorted by counterpart; sorting pairs by
    // (cited, citing) is not guaranteed by the global (citing, cited) order.
    for i in 0..n {
        adj[counts[i] as usize..counts[i + 1] as usize].sort_unstable();
    }
    (counts, adj)
}

impl CorpusGraph {
    pub fn registry(&self) -> &SubjectCategoryRegistry {
        &self.registry
    }

    pub fn cohort_year(&self) -> i32 {
        self.cohort_year
    }

    pub fn horizon_year(&self) -> i32 {
        self.horizon_year
    }

    pub fn n_publications(&self) -> usize {
        self.pubs.len()
    }

    pub fn n_venues(&self) -> usize {
        self.venues.len()
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn publication(&self, idx: PubIdx) -> &Publication {
        &self.pubs[idx.0 as usize]
    }

    pub fn venue(&self, idx: VenueIdx) -> &Venue {
        &self.venues[idx.0 as usize]
    }

    /// Venue hosting a publication.
    pub fn venue_of(&self, idx: PubIdx) -> &Venue {
        self.venue(self.pubs[idx.0 as usize].venue)
    }

    pub fn pub_idx(&self, pub_id: &str) -> Result<PubIdx, CorpusError> {
        self.pub_by_id
            .get(pub_id)
            .copied()
            .ok_or_else(|| CorpusError::UnknownPublication(String::from(pub_id)))
    }

    /// Publications in index order (lexicographic by pub_id).
    pub fn publications(&self) -> impl Iterator<Item = (PubIdx, &Publication)> {
        self.pubs
            .iter()
            .enumerate()
            .map(|(i, p)| (PubIdx(i as u32), p))
    }

    pub fn venues(&self) -> impl Iterator<Item = (VenueIdx, &Venue)> {
        self.venues
            .iter()
            .enumerate()
            .map(|(i, v)| (VenueIdx(i as u32), v))
    }

    /// Cohort publications (year == cohort_year), in pub_id order.
    pub fn cohort_publications(&self) -> &[PubIdx] {
        &self.cohort_pubs
    }

    /// Publications citing `idx`, sorted by pub_id.
    pub fn in_citations(&self, idx: PubIdx) -> &[PubIdx] {
        let i = idx.0 as usize;
        &self.in_adj[self.in_off[i] as usize..self.in_off[i + 1] as usize]
    }

    /// Publications cited by `idx`, sorted by pub_id.
    pub fn out_references(&self, idx: PubIdx) -> &[PubIdx] {
        let i = idx.0 as usize;
        &self.out_adj[self.out_off[i] as usize..self.out_off[i + 1] as usize]
    }

    /// Id-based variant of [`Self::in_citations`].
    pub fn in_citations_by_id(&self, pub_id: &str) -> Result<&[PubIdx], CorpusError> {
        Ok(self.in_citations(self.pub_idx(pub_id)?))
    }

    /// Id-based variant of [`Self::out_references`].
    pub fn out_references_by_id(&self, pub_id: &str) -> Result<&[PubIdx], CorpusError> {
        Ok(self.out_references(self.pub_idx(pub_id)?))
    }

    pub fn in_degree(&self, idx: PubIdx) -> usize {
        self.in_citations(idx).len()
    }

    /// Scans for non-fatal anomalies. Warnings never abort an analysis.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();

        let mut anomalies = 0u64;
        for (citing, p) in self.publications() {
            for &cited in self.out_references(citing) {
                if p.year < self.publication(cited).year {
                    anomalies += 1;
                }
            }
        }
        if anomalies > 0 {
            report
                .warnings
                .push(ValidationWarning::TemporalAnomaly { count: anomalies });
        }

        let uncited = self
            .cohort_pubs
            .iter()
            .filter(|&&p| self.in_degree(p) == 0)
            .count() as u64;
        if uncited > 0 {
            report
                .warnings
                .push(ValidationWarning::UncitedCohortPublication { count: uncited });
        }

        if self.registry.is_reference_schema() && !self.registry.matches_reference_size() {
            report.warnings.push(ValidationWarning::NonReferenceSchemaSize {
                n_scs: self.registry.n_categories(),
                n_areas: self.registry.n_areas(),
            });
        }

        report
    }
}
