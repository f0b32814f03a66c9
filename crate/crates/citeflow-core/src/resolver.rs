//! Single subject-category assignment per publication.
//!
//! Resolution is a deterministic two-phase pass:
//!
//! * Phase 1: publications hosted in single-category venues take that
//!   category. These are the anchors.
//! * Phase 2: publications in multi-category venues are scored over their
//!   counterparts. Cohort publications with at least one citation are scored
//!   over their citing publications; every other publication is scored over
//!   the publications in its bibliography. A counterpart anchored in Phase 1
//!   contributes a full point to its category; an unanchored counterpart
//!   splits one point evenly over its venue's candidate categories. Only
//!   scores for the publication's own candidate categories are kept.
//!
//! Scores are exact rationals, so argmax and tie detection never depend on
//! float rounding. Ties are broken by a seed-keyed hash of the publication id,
//! making the result reproducible across runs, machines and thread counts.

use alloc::string::String;
use alloc::vec::Vec;
use num_rational::Ratio;

use crate::corpus::{CorpusGraph, PubIdx};
use crate::registry::ScId;

/// How a publication's subject category was determined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ResolutionMethod {
    SingleCategoryVenue,
    PredominantAmongCiting,
    PredominantAmongReferences,
    TieBreakRandom,
    FallbackRandom,
}

impl ResolutionMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::SingleCategoryVenue => "SingleCategoryVenue",
            Self::PredominantAmongCiting => "PredominantAmongCiting",
            Self::PredominantAmongReferences => "PredominantAmongReferences",
            Self::TieBreakRandom => "TieBreakRandom",
            Self::FallbackRandom => "FallbackRandom",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "SingleCategoryVenue" => Self::SingleCategoryVenue,
            "PredominantAmongCiting" => Self::PredominantAmongCiting,
            "PredominantAmongReferences" => Self::PredominantAmongReferences,
            "TieBreakRandom" => Self::TieBreakRandom,
            "FallbackRandom" => Self::FallbackRandom,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Assignment {
    pub sc: ScId,
    pub method: ResolutionMethod,
    pub tied: bool,
}

/// Total map publication -> resolved subject category, indexed by [`PubIdx`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignmentTable {
    assignments: Vec<Assignment>,
    seed: u64,
}

impl AssignmentTable {
    pub fn get(&self, idx: PubIdx) -> Assignment {
        self.assignments[idx.0 as usize]
    }

    pub fn sc_of(&self, idx: PubIdx) -> ScId {
        self.assignments[idx.0 as usize].sc
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (PubIdx, Assignment)> + '_ {
        self.assignments
            .iter()
            .enumerate()
            .map(|(i, &a)| (PubIdx(i as u32), a))
    }

    /// Rebuilds a table from per-publication assignments, e.g. from a cached
    /// `assignments.csv`. `assignments` must be indexed by [`PubIdx`].
    pub fn from_parts(assignments: Vec<Assignment>, seed: u64) -> Self {
        Self { assignments, seed }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TieBreakError {
    #[error("tie set is empty")]
    EmptyTieSet,
}

/// 64-bit mixing function keying tie-breaks: FNV-1a over the publication id
/// bytes folded with the seed, then a splitmix64 finalizer. Fixed for all
/// time; changing it silently changes resolved corpora.
pub fn mix(seed: u64, pub_id: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed;
    for &b in pub_id.as_bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut z = h.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Picks one category from a tie set: the codes are put in lexicographic
/// order and indexed by `mix(seed, pub_id) mod |tied|`. Because [`ScId`]
/// order equals code order, sorting the ids is sorting the codes.
pub fn break_tie(tied: &[ScId], seed: u64, pub_id: &str) -> Result<ScId, TieBreakError> {
    if tied.is_empty() {
        return Err(TieBreakError::EmptyTieSet);
    }
    let mut sorted: Vec<ScId> = tied.to_vec();
    sorted.sort_unstable();
    let idx = (mix(seed, pub_id) % sorted.len() as u64) as usize;
    Ok(sorted[idx])
}

/// Which counterpart set scores a multi-category publication.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CounterpartRole {
    /// Cohort publication with at least one citation: scored over citers.
    Citing,
    /// Everything else: scored over its bibliography.
    References,
}

pub fn counterpart_role(graph: &CorpusGraph, idx: PubIdx) -> CounterpartRole {
    let p = graph.publication(idx);
    if p.year == graph.cohort_year() && graph.in_degree(idx) >= 1 {
        CounterpartRole::Citing
    } else {
        CounterpartRole::References
    }
}

/// Phase-1 anchors: the category of every publication hosted in a
/// single-candidate venue, indexed by [`PubIdx`].
pub fn phase1_anchors(graph: &CorpusGraph) -> Vec<Option<ScId>> {
    graph
        .publications()
        .map(|(idx, _)| {
            let cands = &graph.venue_of(idx).candidates;
            if cands.len() == 1 {
                Some(cands[0])
            } else {
                None
            }
        })
        .collect()
}

/// Scores the candidate categories of a multi-category publication over its
/// counterpart set. Returns one (category, score) pair per candidate, in the
/// venue's candidate order; contributions to non-candidate categories are
/// dropped.
pub fn tally_counterparts(
    graph: &CorpusGraph,
    anchors: &[Option<ScId>],
    idx: PubIdx,
) -> Vec<(ScId, Ratio<u64>)> {
    let candidates = &graph.venue_of(idx).candidates;
    let mut scores: Vec<(ScId, Ratio<u64>)> = candidates
        .iter()
        .map(|&sc| (sc, Ratio::from_integer(0)))
        .collect();

    let counterparts: &[PubIdx] = match counterpart_role(graph, idx) {
        CounterpartRole::Citing => graph.in_citations(idx),
        CounterpartRole::References => graph.out_references(idx),
    };

    for &q in counterparts {
        match anchors[q.0 as usize] {
            Some(sc) => {
                if let Some(slot) = scores.iter_mut().find(|(c, _)| *c == sc) {
                    slot.1 += Ratio::from_integer(1);
                }
            }
            None => {
                let q_cands = &graph.venue_of(q).candidates;
                let share = Ratio::new(1, q_cands.len() as u64);
                for qc in q_cands {
                    if let Some(slot) = scores.iter_mut().find(|(c, _)| c == qc) {
                        slot.1 += share;
                    }
                }
            }
        }
    }
    scores
}

/// Resolves one multi-category publication. Pure in (graph, anchors, seed),
/// so callers may fan this out over any number of threads.
pub fn resolve_multi(
    graph: &CorpusGraph,
    anchors: &[Option<ScId>],
    seed: u64,
    idx: PubIdx,
) -> Assignment {
    let pub_id = &graph.publication(idx).pub_id;
    let scores = tally_counterparts(graph, anchors, idx);
    let zero = Ratio::from_integer(0);
    let max = scores
        .iter()
        .map(|(_, s)| s)
        .max()
        .cloned()
        .unwrap_or(zero.clone());

    if max == zero {
        // no counterparts, or none landing in the candidate set
        let all: Vec<ScId> = scores.iter().map(|(c, _)| *c).collect();
        let sc = break_tie(&all, seed, pub_id).expect("venue candidate set is non-empty");
        return Assignment {
            sc,
            method: ResolutionMethod::FallbackRandom,
            tied: false,
        };
    }

    let tied: Vec<ScId> = scores
        .iter()
        .filter(|(_, s)| *s == max)
        .map(|(c, _)| *c)
        .collect();
    if tied.len() == 1 {
        let method = match counterpart_role(graph, idx) {
            CounterpartRole::Citing => ResolutionMethod::PredominantAmongCiting,
            CounterpartRole::References => ResolutionMethod::PredominantAmongReferences,
        };
        Assignment {
            sc: tied[0],
            method,
            tied: false,
        }
    } else {
        let sc = break_tie(&tied, seed, pub_id).expect("tie set has >= 2 entries");
        Assignment {
            sc,
            method: ResolutionMethod::TieBreakRandom,
            tied: true,
        }
    }
}

/// Assigns every publication exactly one subject category. Deterministic in
/// (graph, seed) and independent of input record order.
pub fn resolve_all(graph: &CorpusGraph, seed: u64) -> AssignmentTable {
    let anchors = phase1_anchors(graph);
    let assignments: Vec<Assignment> = graph
        .publications()
        .map(|(idx, _)| match anchors[idx.0 as usize] {
            Some(sc) => Assignment {
                sc,
                method: ResolutionMethod::SingleCategoryVenue,
                tied: false,
            },
            None => resolve_multi(graph, &anchors, seed, idx),
        })
        .collect();
    AssignmentTable { assignments, seed }
}

/// Serializable row of an `assignments.csv` cache.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AssignmentRecord {
    pub pub_id: String,
    pub sc_code: String,
    pub method: String,
    pub tied: bool,
}

impl AssignmentTable {
    /// Rows in pub_id order, ready for `assignments.csv`.
    pub fn to_records(&self, graph: &CorpusGraph) -> Vec<AssignmentRecord> {
        self.iter()
            .map(|(idx, a)| AssignmentRecord {
                pub_id: graph.publication(idx).pub_id.clone(),
                sc_code: graph.registry().category(a.sc).code.clone(),
                method: String::from(a.method.as_str()),
                tied: a.tied,
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::testutil::*;
    use crate::corpus::{build_graph, GraphOptions};
    use crate::fixtures;
    use alloc::vec;
    use alloc::vec::Vec;

    #[test]
    fn single_sc_venue_is_phase1() {
        let g = build_graph(
            registry(&[("A", "X")]),
            &[venue("v1", &["A"])],
            &[publication("p1", "v1", 2015)],
            &[],
            2015,
            2022,
            GraphOptions::default(),
        )
        .unwrap();
        let table = resolve_all(&g, 7);
        let a = table.get(g.pub_idx("p1").unwrap());
        assert_eq!(a.method, ResolutionMethod::SingleCategoryVenue);
        assert_eq!(g.registry().category(a.sc).code, "A");
    }

    #[test]
    fn worked_example_resolves_to_isls() {
        let g = fixtures::multi_category_example().build();
        let table = resolve_all(&g, 42);
        let p0 = g.pub_idx("p0").unwrap();
        let a = table.get(p0);
        assert_eq!(g.registry().category(a.sc).code, "ISLS");
        assert_eq!(a.method, ResolutionMethod::PredominantAmongCiting);
        assert!(!a.tied);

        let anchors = phase1_anchors(&g);
        let scores = tally_counterparts(&g, &anchors, p0);
        let get = |code: &str| {
            scores
                .iter()
                .find(|(c, _)| g.registry().category(*c).code == code)
                .unwrap()
                .1
        };
        assert_eq!(get("ISLS"), Ratio::from_integer(24));
        assert_eq!(get("CSIA"), Ratio::from_integer(4));
    }

    #[test]
    fn fractional_split_for_unanchored_counterpart() {
        // p references q; q sits in a 2-SC venue {A,B}; p's candidates {A,C}
        let g = build_graph(
            registry(&[("A", "X"), ("B", "X"), ("C", "X")]),
            &[venue("vab", &["A", "B"]), venue("vac", &["A", "C"])],
            &[
                publication("p", "vac", 2016),
                publication("q", "vab", 2015),
            ],
            &[edge("p", "q")],
            2015,
            2022,
            GraphOptions::default(),
        )
        .unwrap();
        let anchors = phase1_anchors(&g);
        let p = g.pub_idx("p").unwrap();
        let scores = tally_counterparts(&g, &anchors, p);
        let a = g.registry().sc_id("A").unwrap();
        let c = g.registry().sc_id("C").unwrap();
        assert_eq!(scores, vec![(a, Ratio::new(1, 2)), (c, Ratio::from_integer(0))]);
    }

    #[test]
    fn zero_counterparts_falls_back_deterministically() {
        let g = build_graph(
            registry(&[("A", "X"), ("B", "X")]),
            &[venue("vab", &["A", "B"])],
            &[publication("p", "vab", 2015)],
            &[],
            2015,
            2022,
            GraphOptions::default(),
        )
        .unwrap();
        let t1 = resolve_all(&g, 99);
        let t2 = resolve_all(&g, 99);
        let p = g.pub_idx("p").unwrap();
        assert_eq!(t1.get(p), t2.get(p));
        assert_eq!(t1.get(p).method, ResolutionMethod::FallbackRandom);
    }

    #[test]
    fn break_tie_contracts() {
        let a = ScId(0);
        let b = ScId(1);
        let first = break_tie(&[a, b], 5, "p").unwrap();
        for _ in 0..10 {
            assert_eq!(break_tie(&[b, a], 5, "p").unwrap(), first);
        }
        assert_eq!(break_tie(&[a], 123, "x").unwrap(), a);
        assert_eq!(break_tie(&[], 1, "x"), Err(TieBreakError::EmptyTieSet));
    }

    #[test]
    fn break_tie_roughly_uniform() {
        // 3-way ties over 1e5 distinct ids; each bin within 3 sigma of n/3
        let tied = [ScId(0), ScId(1), ScId(2)];
        let n = 100_000u64;
        let mut counts = [0u64; 3];
        for i in 0..n {
            let id = alloc::format!("pub-{i}");
            let sc = break_tie(&tied, 0xDEAD_BEEF, &id).unwrap();
            counts[sc.0 as usize] += 1;
        }
        let expect = n as f64 / 3.0;
        let sigma = (n as f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
        for &c in &counts {
            assert!((c as f64 - expect).abs() < 3.0 * sigma, "counts {counts:?}");
        }
    }

    #[test]
    fn totality_and_candidate_containment() {
        let g = fixtures::multi_category_example().build();
        let table = resolve_all(&g, 1);
        assert_eq!(table.len(), g.n_publications());
        for (idx, a) in table.iter() {
            assert!(g.venue_of(idx).candidates.contains(&a.sc));
        }
    }

    #[test]
    fn seed_stability_and_input_order_independence() {
        let ex = fixtures::multi_category_example();
        let g1 = ex.build();
        let mut shuffled = ex.clone();
        shuffled.publications.reverse();
        shuffled.citations.reverse();
        let g2 = shuffled.build();
        let t1 = resolve_all(&g1, 77);
        let t2 = resolve_all(&g2, 77);
        let ids: Vec<_> = g1.publications().map(|(_, p)| p.pub_id.clone()).collect();
        for id in ids {
            assert_eq!(
                t1.get(g1.pub_idx(&id).unwrap()),
                t2.get(g2.pub_idx(&id).unwrap())
            );
        }
    }
}
