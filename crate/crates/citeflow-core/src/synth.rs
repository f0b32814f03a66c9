//! Seeded synthetic corpus generator with planted ground truth.
//!
//! The generative model exists for testing and demonstration only; it makes
//! no attempt to fit real bibliometric distributions. Every publication gets
//! a true category; each citation to a cohort publication is drawn intra
//! (citer from the cited publication's true category) with probability
//! `intra_affinity * (1 + immediacy_decay)^(-year_offset)` clamped to [0, 1],
//! else extra, uniformly over the other categories. A positive decay makes
//! early citations more intra, reproducing the direction of the short-window
//! vs long-window comparison.
//!
//! One seeded stream drives everything in a fixed iteration order, so a seed
//! fully determines the corpus byte for byte.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use hashbrown::HashMap;
#[allow(unused_imports)]
use num_traits::Float;
use hashbrown::HashSet;
use rand_core::{RngCore, SeedableRng};

use crate::corpus::{CitationRecord, CorpusGraph, PublicationRecord, VenueRecord};
use crate::registry::RegistryRecord;
use crate::resolver::AssignmentTable;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct SynthConfig {
    pub n_areas: u32,
    pub n_scs: u32,
    pub n_venues: u32,
    /// Fraction of non-anchor venues carrying more than one category.
    pub multi_sc_venue_fraction: f64,
    pub n_cohort_pubs: u32,
    /// Citing publications generated per offset year 0..=window_years.
    pub citing_pubs_per_year: u32,
    pub window_years: u32,
    /// Probability a citation is intra-domain at offset 0.
    pub intra_affinity: f64,
    /// Exponential decay of the intra probability per offset year.
    pub immediacy_decay: f64,
    pub citations_min: u32,
    pub citations_max: u32,
    pub cohort_year: i32,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            n_areas: 3,
            n_scs: 12,
            n_venues: 20,
            multi_sc_venue_fraction: 0.3,
            n_cohort_pubs: 50,
            citing_pubs_per_year: 60,
            window_years: 7,
            intra_affinity: 0.5,
            immediacy_decay: 0.0,
            citations_min: 1,
            citations_max: 8,
            cohort_year: 2015,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SynthError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
}

impl SynthConfig {
    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |msg: &str| Err(SynthError::InvalidConfig(String::from(msg)));
        if self.n_areas == 0 || self.n_scs == 0 || self.n_venues == 0 {
            return bad("counts must be positive");
        }
        if self.n_scs < 2 {
            return bad("need at least 2 subject categories for extra-domain draws");
        }
        if self.n_areas > self.n_scs {
            return bad("n_areas must not exceed n_scs");
        }
        if self.n_venues < self.n_scs {
            return bad("need at least one single-category venue per category (n_venues >= n_scs)");
        }
        if self.citing_pubs_per_year < self.n_scs {
            return bad("citing_pubs_per_year must be >= n_scs so every (year, category) pool is non-empty");
        }
        if !(0.0..=1.0).contains(&self.multi_sc_venue_fraction) {
            return bad("multi_sc_venue_fraction must be in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.intra_affinity) {
            return bad("intra_affinity must be in [0, 1]");
        }
        if self.immediacy_decay < 0.0 {
            return bad("immediacy_decay must be >= 0");
        }
        if self.citations_min > self.citations_max {
            return bad("citations_min must be <= citations_max");
        }
        Ok(())
    }

    /// Intra probability at a given year offset.
    pub fn intra_probability(&self, year_offset: u32) -> f64 {
        let p = self.intra_affinity * (1.0 + self.immediacy_decay).powf(-(year_offset as f64));
        p.clamp(0.0, 1.0)
    }
}

/// One generated citation with the randomness that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeDraw {
    pub citing_id: String,
    pub cited_id: String,
    pub year_offset: u32,
    pub intra: bool,
    pub p_intra: f64,
}

/// Planted truth: every publication's true category plus the per-edge draws.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    /// (pub_id, true sc_code) in generation order; covers all publications.
    pub true_sc: Vec<(String, String)>,
    pub edge_log: Vec<EdgeDraw>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthCorpus {
    pub registry: Vec<RegistryRecord>,
    pub venues: Vec<VenueRecord>,
    pub publications: Vec<PublicationRecord>,
    pub citations: Vec<CitationRecord>,
    pub truth: GroundTruth,
    pub cohort_year: i32,
    pub horizon_year: i32,
}

struct Rng(rand_chacha::ChaCha12Rng);

impl Rng {
    fn new(seed: u64) -> Self {
        Self(rand_chacha::ChaCha12Rng::seed_from_u64(seed))
    }

    fn f64(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [0, n) by rejection.
    fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        let limit = u64::MAX - u64::MAX % n;
        loop {
            let v = self.0.next_u64();
            if v < limit {
                return v % n;
            }
        }
    }
}

pub fn generate(config: &SynthConfig) -> Result<SynthCorpus, SynthError> {
    config.validate()?;
    let mut rng = Rng::new(config.seed);

    let n_scs = config.n_scs as usize;
    let sc_code = |i: usize| format!("S{:03}", i + 1);

    let mut registry = Vec::with_capacity(n_scs);
    for i in 0..n_scs {
        let area = i % config.n_areas as usize;
        registry.push(RegistryRecord {
            sc_code: sc_code(i),
            sc_name: format!("Synthetic Category {:03}", i + 1),
            area_code: format!("A{:02}", area + 1),
            area_name: format!("Synthetic Area {:02}", area + 1),
        });
    }

    // anchor venues: one single-category venue per category, then extras
    let mut venues = Vec::with_capacity(config.n_venues as usize);
    for i in 0..n_scs {
        venues.push(VenueRecord {
            venue_id: format!("V{:04}", i + 1),
            name: format!("Anchor venue {:04}", i + 1),
            sc_codes: alloc::vec![sc_code(i)],
        });
    }
    for i in n_scs..config.n_venues as usize {
        let primary = rng.below(n_scs as u64) as usize;
        let mut codes = alloc::vec![sc_code(primary)];
        if rng.f64() < config.multi_sc_venue_fraction {
            let extra = 1 + rng.below(2) as usize;
            while codes.len() < 1 + extra {
                let cand = sc_code(rng.below(n_scs as u64) as usize);
                if !codes.contains(&cand) {
                    codes.push(cand);
                }
            }
        }
        venues.push(VenueRecord {
            venue_id: format!("V{:04}", i + 1),
            name: format!("Extra venue {:04}", i + 1),
            sc_codes: codes,
        });
    }

    let mut publications = Vec::new();
    let mut truth = Vec::new();

    // citing pool, one sub-pool per (offset year, category); category
    // assignment is round-robin so every sub-pool is non-empty
    let w = config.window_years as usize;
    let mut pool: Vec<Vec<Vec<String>>> = alloc::vec![alloc::vec![Vec::new(); n_scs]; w + 1];
    for (t, year_pool) in pool.iter_mut().enumerate() {
        for j in 0..config.citing_pubs_per_year as usize {
            let sc = j % n_scs;
            let pub_id = format!("c{t}_{j:06}");
            publications.push(PublicationRecord {
                pub_id: pub_id.clone(),
                venue_id: format!("V{:04}", sc + 1),
                year: config.cohort_year + t as i32,
            });
            truth.push((pub_id.clone(), sc_code(sc)));
            year_pool[sc].push(pub_id);
        }
    }

    // cohort publications over all venues
    let mut cohort: Vec<(String, usize)> = Vec::with_capacity(config.n_cohort_pubs as usize);
    for i in 0..config.n_cohort_pubs as usize {
        let venue = rng.below(config.n_venues as u64) as usize;
        let codes = &venues[venue].sc_codes;
        let true_code = codes[rng.below(codes.len() as u64) as usize].clone();
        let true_sc = true_code[1..].parse::<usize>().expect("generated code") - 1;
        let pub_id = format!("p{i:06}");
        publications.push(PublicationRecord {
            pub_id: pub_id.clone(),
            venue_id: venues[venue].venue_id.clone(),
            year: config.cohort_year,
        });
        truth.push((pub_id.clone(), true_code));
        cohort.push((pub_id, true_sc));
    }

    let mut citations = Vec::new();
    let mut edge_log = Vec::new();
    let span = u64::from(config.citations_max - config.citations_min) + 1;
    for (cited_id, true_sc) in &cohort {
        let n_cit = u64::from(config.citations_min) + rng.below(span);
        let mut used: HashSet<&str> = HashSet::new();
        for _ in 0..n_cit {
            let t = rng.below(w as u64 + 1) as usize;
            let p_intra = config.intra_probability(t as u32);
            let intra = rng.f64() < p_intra;
            let sc = if intra {
                *true_sc
            } else {
                let other = rng.below(n_scs as u64 - 1) as usize;
                if other >= *true_sc {
                    other + 1
                } else {
                    other
                }
            };
            let bucket = &pool[t][sc];
            // resample for an unused citer; skip the citation if the pool
            // for this (year, category) is effectively exhausted
            let mut chosen: Option<&String> = None;
            for _ in 0..32 {
                let cand = &bucket[rng.below(bucket.len() as u64) as usize];
                if !used.contains(cand.as_str()) {
                    chosen = Some(cand);
                    break;
                }
            }
            let Some(citing_id) = chosen else { continue };
            used.insert(citing_id);
            citations.push(CitationRecord {
                citing_id: citing_id.clone(),
                cited_id: cited_id.clone(),
            });
            edge_log.push(EdgeDraw {
                citing_id: citing_id.clone(),
                cited_id: cited_id.clone(),
                year_offset: t as u32,
                intra,
                p_intra,
            });
        }
    }

    Ok(SynthCorpus {
        registry,
        venues,
        publications,
        citations,
        truth: GroundTruth {
            true_sc: truth,
            edge_log,
        },
        cohort_year: config.cohort_year,
        horizon_year: config.cohort_year + config.window_years as i32,
    })
}

impl SynthCorpus {
    pub fn build(&self) -> Result<CorpusGraph, crate::corpus::CorpusError> {
        let registry = crate::registry::SubjectCategoryRegistry::from_records(&self.registry, false)?;
        crate::corpus::build_graph(
            registry,
            &self.venues,
            &self.publications,
            &self.citations,
            self.cohort_year,
            self.horizon_year,
            crate::corpus::GraphOptions::default(),
        )
    }
}

/// Fraction of multi-category-venue publications whose resolved category
/// equals the planted one. 1.0 when there are no such publications.
pub fn ground_truth_accuracy(
    graph: &CorpusGraph,
    assignments: &AssignmentTable,
    truth: &GroundTruth,
) -> f64 {
    let by_id: HashMap<&str, &str> = truth
        .true_sc
        .iter()
        .map(|(id, sc)| (id.as_str(), sc.as_str()))
        .collect();
    let mut total = 0u64;
    let mut correct = 0u64;
    for (idx, p) in graph.publications() {
        if graph.venue_of(idx).candidates.len() < 2 {
            continue;
        }
        total += 1;
        let resolved = &graph.registry().category(assignments.sc_of(idx)).code;
        if by_id.get(p.pub_id.as_str()) == Some(&resolved.as_str()) {
            correct += 1;
        }
    }
    if total == 0 {
        1.0
    } else {
        correct as f64 / total as f64
    }
}
