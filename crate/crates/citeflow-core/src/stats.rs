//! Aggregation of flow profiles and impact scores into per-area and
//! per-category summary tables and figure data series.
//!
//! Conventions, fixed here and mirrored by the test oracles:
//! * Averages of shares and impacts are f64 sums in pub_id order divided once
//!   at the end; classification stays exact rational upstream.
//! * Quantiles interpolate linearly at position (n-1)*q over sorted values.
//! * Standard deviation is the sample estimate (n-1); single-observation
//!   groups report 0 rather than erroring.
//! * Every Total row is recomputed over the ungrouped population, never an
//!   average of area rows.
//! * Percentages are kept at full precision here; report writers round.

use alloc::vec::Vec;
use hashbrown::HashMap;
#[allow(unused_imports)]
use num_traits::Float;

use crate::corpus::{CorpusGraph, PubIdx};
use crate::flows::{
    coverage_share, profile_population, CitationWindow, CoverageShare, FlowProfile,
};
use crate::impact::ImpactScore;
use crate::registry::{AreaId, ScId, SubjectCategoryRegistry};
use crate::resolver::AssignmentTable;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StatsError {
    #[error("input vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("need at least 2 points, got {0}")]
    TooFewPoints(usize),
}

fn share_f64(p: &FlowProfile) -> f64 {
    *p.share_intra.numer() as f64 / *p.share_intra.denom() as f64
}

/// Flow-class breakdown of one area (or of the whole population when
/// `area` is `None`). Percentages are in [0, 100]; the predominantly-intra
/// column includes the totally-intra one.
#[derive(Debug, Clone, PartialEq)]
pub struct AreaFlowBreakdown {
    pub area: Option<AreaId>,
    pub total_pubs: u64,
    pub pct_totally_intra: f64,
    pub pct_totally_extra: f64,
    pub pct_predominantly_intra: f64,
    pub avg_share_intra_pct: f64,
}

#[derive(Default, Clone, Copy)]
struct BreakdownAcc {
    n: u64,
    tot_intra: u64,
    tot_extra: u64,
    pred_intra: u64,
    sum_share: f64,
}

impl BreakdownAcc {
    fn push(&mut self, p: &FlowProfile) {
        self.n += 1;
        if p.flow_class == crate::flows::FlowClass::TotallyIntra {
            self.tot_intra += 1;
        }
        if p.flow_class == crate::flows::FlowClass::TotallyExtra {
            self.tot_extra += 1;
        }
        if p.flow_class.is_predominantly_intra() {
            self.pred_intra += 1;
        }
        self.sum_share += share_f64(p);
    }

    fn row(&self, area: Option<AreaId>) -> AreaFlowBreakdown {
        let pct = |c: u64| {
            if self.n == 0 {
                0.0
            } else {
                100.0 * c as f64 / self.n as f64
            }
        };
        AreaFlowBreakdown {
            area,
            total_pubs: self.n,
            pct_totally_intra: pct(self.tot_intra),
            pct_totally_extra: pct(self.tot_extra),
            pct_predominantly_intra: pct(self.pred_intra),
            avg_share_intra_pct: if self.n == 0 {
                0.0
            } else {
                100.0 * self.sum_share / self.n as f64
            },
        }
    }
}

/// One row per registry area in [`AreaId`] order, plus a Total row last.
/// Profiles are grouped by the cited publication's own category's area.
pub fn area_flow_breakdown(
    profiles: &[FlowProfile],
    registry: &SubjectCategoryRegistry,
) -> Vec<AreaFlowBreakdown> {
    let mut per_area = alloc::vec![BreakdownAcc::default(); registry.n_areas()];
    let mut total = BreakdownAcc::default();
    for p in profiles {
        per_area[registry.area_of(p.own_sc).0 as usize].push(p);
        total.push(p);
    }
    let mut rows: Vec<AreaFlowBreakdown> = per_area
        .iter()
        .enumerate()
        .map(|(i, acc)| acc.row(Some(AreaId(i as u32))))
        .collect();
    rows.push(total.row(None));
    rows
}

/// Per-category mean intra/extra shares. Totally-intra/extra publication
/// counts are carried alongside so both per-category readings (average
/// share and class counts) are recoverable.
#[derive(Debug, Clone, PartialEq)]
pub struct ScFlowSummary {
    pub sc: ScId,
    pub area: AreaId,
    pub n_obs: u64,
    pub avg_intra_pct: f64,
    pub avg_extra_pct: f64,
    /// avg_intra_pct - avg_extra_pct.
    pub diff_pct: f64,
    pub n_totally_intra: u64,
    pub n_totally_extra: u64,
}

/// One summary per category with at least one profiled publication, sorted
/// by diff ascending (ties by category code).
pub fn sc_flow_shares(
    profiles: &[FlowProfile],
    registry: &SubjectCategoryRegistry,
) -> Vec<ScFlowSummary> {
    #[derive(Default, Clone, Copy)]
    struct Acc {
        n: u64,
        sum_share: f64,
        tot_intra: u64,
        tot_extra: u64,
    }
    let mut accs = alloc::vec![Acc::default(); registry.n_categories()];
    for p in profiles {
        let a = &mut accs[p.own_sc.0 as usize];
        a.n += 1;
        a.sum_share += share_f64(p);
        if p.flow_class == crate::flows::FlowClass::TotallyIntra {
            a.tot_intra += 1;
        }
        if p.flow_class == crate::flows::FlowClass::TotallyExtra {
            a.tot_extra += 1;
        }
    }
    let mut rows: Vec<ScFlowSummary> = accs
        .iter()
        .enumerate()
        .filter(|(_, a)| a.n > 0)
        .map(|(i, a)| {
            let sc = ScId(i as u32);
            let avg_intra = 100.0 * a.sum_share / a.n as f64;
            ScFlowSummary {
                sc,
                area: registry.area_of(sc),
                n_obs: a.n,
                avg_intra_pct: avg_intra,
                avg_extra_pct: 100.0 - avg_intra,
                diff_pct: avg_intra - (100.0 - avg_intra),
                n_totally_intra: a.tot_intra,
                n_totally_extra: a.tot_extra,
            }
        })
        .collect();
    rows.sort_by(|a, b| a.diff_pct.total_cmp(&b.diff_pct).then(a.sc.cmp(&b.sc)));
    rows
}

/// Bottom-k and top-k categories by intra-extra difference.
pub fn sc_flow_ranking(
    sorted_summaries: &[ScFlowSummary],
    k: usize,
) -> (Vec<ScFlowSummary>, Vec<ScFlowSummary>) {
    let n = sorted_summaries.len();
    let bottom = sorted_summaries[..k.min(n)].to_vec();
    let top = sorted_summaries[n.saturating_sub(k)..].to_vec();
    (bottom, top)
}

/// Count of categories whose average intra share is strictly above 50%.
/// `n_scs` is the number of registry categories in the area.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScMajorityCount {
    pub area: Option<AreaId>,
    pub n_scs: u64,
    pub n_majority_intra: u64,
}

pub fn sc_majority_count(
    summaries: &[ScFlowSummary],
    registry: &SubjectCategoryRegistry,
) -> Vec<ScMajorityCount> {
    let mut per_area = alloc::vec![(0u64, 0u64); registry.n_areas()];
    for (_, sc) in registry.categories() {
        per_area[sc.area.0 as usize].0 += 1;
    }
    let mut total_majority = 0u64;
    for s in summaries {
        if s.avg_intra_pct > 50.0 {
            per_area[s.area.0 as usize].1 += 1;
            total_majority += 1;
        }
    }
    let mut rows: Vec<ScMajorityCount> = per_area
        .iter()
        .enumerate()
        .map(|(i, &(n_scs, n_majority))| ScMajorityCount {
            area: Some(AreaId(i as u32)),
            n_scs,
            n_majority_intra: n_majority,
        })
        .collect();
    rows.push(ScMajorityCount {
        area: None,
        n_scs: registry.n_categories() as u64,
        n_majority_intra: total_majority,
    });
    rows
}

/// Quantile by linear interpolation at position (n-1)*q over sorted values.
pub fn quantile_sorted(sorted: &[u64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let pos = (sorted.len() - 1) as f64 * q;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo] as f64
    } else {
        let w = pos - lo as f64;
        sorted[lo] as f64 * (1.0 - w) + sorted[hi] as f64 * w
    }
}

/// Descriptive statistics of flow spread (distinct citing categories per
/// profile) for one area or the whole population.
#[derive(Debug, Clone, PartialEq)]
pub struct SpreadDescriptives {
    pub area: Option<AreaId>,
    pub n: u64,
    pub mean: f64,
    /// Sample standard deviation (n-1); 0 when n <= 1.
    pub sd: f64,
    pub min: u64,
    pub max: u64,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
}

fn describe(area: Option<AreaId>, values: &mut Vec<u64>) -> SpreadDescriptives {
    if values.is_empty() {
        return SpreadDescriptives {
            area,
            n: 0,
            mean: 0.0,
            sd: 0.0,
            min: 0,
            max: 0,
            median: 0.0,
            q1: 0.0,
            q3: 0.0,
        };
    }
    values.sort_unstable();
    let n = values.len();
    let mean = values.iter().map(|&v| v as f64).sum::<f64>() / n as f64;
    let sd = if n <= 1 {
        0.0
    } else {
        let ss: f64 = values.iter().map(|&v| (v as f64 - mean).powi(2)).sum();
        (ss / (n - 1) as f64).sqrt()
    };
    SpreadDescriptives {
        area,
        n: n as u64,
        mean,
        sd,
        min: values[0],
        max: values[n - 1],
        median: quantile_sorted(values, 0.5),
        q1: quantile_sorted(values, 0.25),
        q3: quantile_sorted(values, 0.75),
    }
}

/// Spread descriptives over `distinct_all` per profile, by area, plus Total.
pub fn spread_descriptives(
    profiles: &[FlowProfile],
    registry: &SubjectCategoryRegistry,
) -> Vec<SpreadDescriptives> {
    let mut per_area: Vec<Vec<u64>> = alloc::vec![Vec::new(); registry.n_areas()];
    let mut all: Vec<u64> = Vec::with_capacity(profiles.len());
    for p in profiles {
        per_area[registry.area_of(p.own_sc).0 as usize].push(p.distinct_all);
        all.push(p.distinct_all);
    }
    let mut rows: Vec<SpreadDescriptives> = per_area
        .iter_mut()
        .enumerate()
        .map(|(i, vals)| describe(Some(AreaId(i as u32)), vals))
        .collect();
    rows.push(describe(None, &mut all));
    rows
}

/// Lookup from publication to normalized impact.
pub fn impact_lookup(impacts: &[ImpactScore]) -> HashMap<PubIdx, f64> {
    impacts
        .iter()
        .map(|i| (i.pub_idx, i.norm_impact))
        .collect()
}

/// Average impact of the strictly-predominantly-intra vs strictly-
/// predominantly-extra subsets; balanced profiles belong to neither.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpactByClass {
    pub area: Option<AreaId>,
    pub n_intra: u64,
    pub avg_impact_intra: f64,
    pub n_extra: u64,
    pub avg_impact_extra: f64,
    /// avg_impact_intra - avg_impact_extra.
    pub delta: f64,
}

pub fn impact_by_flow_class(
    profiles: &[FlowProfile],
    impacts: &[ImpactScore],
    registry: &SubjectCategoryRegistry,
) -> Vec<ImpactByClass> {
    #[derive(Default, Clone, Copy)]
    struct Acc {
        n_intra: u64,
        sum_intra: f64,
        n_extra: u64,
        sum_extra: f64,
    }
    impl Acc {
        fn row(&self, area: Option<AreaId>) -> ImpactByClass {
            let avg_i = if self.n_intra == 0 {
                0.0
            } else {
                self.sum_intra / self.n_intra as f64
            };
            let avg_e = if self.n_extra == 0 {
                0.0
            } else {
                self.sum_extra / self.n_extra as f64
            };
            ImpactByClass {
                area,
                n_intra: self.n_intra,
                avg_impact_intra: avg_i,
                n_extra: self.n_extra,
                avg_impact_extra: avg_e,
                delta: avg_i - avg_e,
            }
        }
    }
    let lookup = impact_lookup(impacts);
    let mut per_area = alloc::vec![Acc::default(); registry.n_areas()];
    let mut total = Acc::default();
    for p in profiles {
        let Some(&imp) = lookup.get(&p.pub_idx) else {
            continue;
        };
        let area = registry.area_of(p.own_sc).0 as usize;
        if p.flow_class.is_predominantly_intra() {
            per_area[area].n_intra += 1;
            per_area[area].sum_intra += imp;
            total.n_intra += 1;
            total.sum_intra += imp;
        } else if p.flow_class.is_predominantly_extra() {
            per_area[area].n_extra += 1;
            per_area[area].sum_extra += imp;
            total.n_extra += 1;
            total.sum_extra += imp;
        }
    }
    let mut rows: Vec<ImpactByClass> = per_area
        .iter()
        .enumerate()
        .map(|(i, acc)| acc.row(Some(AreaId(i as u32))))
        .collect();
    rows.push(total.row(None));
    rows
}

/// Product-moment correlation. `Ok(None)` when either variance is zero.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<Option<f64>, StatsError> {
    if xs.len() != ys.len() {
        return Err(StatsError::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.len() < 2 {
        return Err(StatsError::TooFewPoints(xs.len()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(None);
    }
    let r = sxy / (sxx * syy).sqrt();
    Ok(Some(r.clamp(-1.0, 1.0)))
}

/// Correlation of (intra share, normalized impact) over one category's
/// cited cohort publications.
#[derive(Debug, Clone, PartialEq)]
pub struct ScCorrelation {
    pub sc: ScId,
    pub area: AreaId,
    pub n: u64,
    /// `None` when fewer than 2 observations or zero variance.
    pub r: Option<f64>,
}

/// Area rollup of per-category correlations. Categories without a defined
/// correlation are excluded and counted; min/max/mean run over defined
/// values only.
#[derive(Debug, Clone, PartialEq)]
pub struct ScCorrelationSummary {
    pub area: Option<AreaId>,
    pub n_scs: u64,
    pub n_excluded: u64,
    pub n_negative: u64,
    pub corr_min: f64,
    pub corr_max: f64,
    pub corr_mean: f64,
}

pub fn sc_impact_correlation(
    profiles: &[FlowProfile],
    impacts: &[ImpactScore],
    registry: &SubjectCategoryRegistry,
) -> (Vec<ScCorrelation>, Vec<ScCorrelationSummary>) {
    let lookup = impact_lookup(impacts);
    let mut pairs: Vec<(Vec<f64>, Vec<f64>)> =
        alloc::vec![(Vec::new(), Vec::new()); registry.n_categories()];
    for p in profiles {
        if let Some(&imp) = lookup.get(&p.pub_idx) {
            let slot = &mut pairs[p.own_sc.0 as usize];
            slot.0.push(share_f64(p));
            slot.1.push(imp);
        }
    }

    let correlations: Vec<ScCorrelation> = pairs
        .iter()
        .enumerate()
        .filter(|(_, (xs, _))| !xs.is_empty())
        .map(|(i, (xs, ys))| {
            let sc = ScId(i as u32);
            let r = if xs.len() < 2 {
                None
            } else {
                pearson(xs, ys).expect("lengths match and n >= 2")
            };
            ScCorrelation {
                sc,
                area: registry.area_of(sc),
                n: xs.len() as u64,
                r,
            }
        })
        .collect();

    #[derive(Clone)]
    struct Acc {
        n_scs: u64,
        n_excluded: u64,
        n_negative: u64,
        min: f64,
        max: f64,
        sum: f64,
    }
    impl Acc {
        fn new() -> Self {
            Self {
                n_scs: 0,
                n_excluded: 0,
                n_negative: 0,
                min: f64::INFINITY,
                max: f64::NEG_INFINITY,
                sum: 0.0,
            }
        }
        fn push(&mut self, r: Option<f64>) {
            match r {
                Some(r) => {
                    self.n_scs += 1;
                    if r < 0.0 {
                        self.n_negative += 1;
                    }
                    self.min = self.min.min(r);
                    self.max = self.max.max(r);
                    self.sum += r;
                }
                None => self.n_excluded += 1,
            }
        }
        fn row(&self, area: Option<AreaId>) -> ScCorrelationSummary {
            ScCorrelationSummary {
                area,
                n_scs: self.n_scs,
                n_excluded: self.n_excluded,
                n_negative: self.n_negative,
                corr_min: if self.n_scs == 0 { 0.0 } else { self.min },
                corr_max: if self.n_scs == 0 { 0.0 } else { self.max },
                corr_mean: if self.n_scs == 0 {
                    0.0
                } else {
                    self.sum / self.n_scs as f64
                },
            }
        }
    }

    let mut per_area = alloc::vec![Acc::new(); registry.n_areas()];
    let mut total = Acc::new();
    for c in &correlations {
        per_area[c.area.0 as usize].push(c.r);
        total.push(c.r);
    }
    let mut rows: Vec<ScCorrelationSummary> = per_area
        .iter()
        .enumerate()
        .map(|(i, acc)| acc.row(Some(AreaId(i as u32))))
        .collect();
    rows.push(total.row(None));
    (correlations, rows)
}

/// One point of the impact-by-spread curve.
#[derive(Debug, Clone, PartialEq)]
pub struct SpreadImpactPoint {
    pub spread: u64,
    pub mean_impact: f64,
    pub n: u64,
}

/// Mean impact grouped by flow spread (distinct citing categories), sorted
/// by spread.
pub fn impact_by_spread(profiles: &[FlowProfile], impacts: &[ImpactScore]) -> Vec<SpreadImpactPoint> {
    let lookup = impact_lookup(impacts);
    let mut groups: alloc::collections::BTreeMap<u64, (f64, u64)> =
        alloc::collections::BTreeMap::new();
    for p in profiles {
        if let Some(&imp) = lookup.get(&p.pub_idx) {
            let slot = groups.entry(p.distinct_all).or_insert((0.0, 0));
            slot.0 += imp;
            slot.1 += 1;
        }
    }
    groups
        .into_iter()
        .map(|(spread, (sum, n))| SpreadImpactPoint {
            spread,
            mean_impact: sum / n as f64,
            n,
        })
        .collect()
}

/// All window-dependent per-area series for one citation window.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowSeries {
    pub window: CitationWindow,
    pub skipped_uncited: u64,
    pub coverage: CoverageShare,
    pub breakdown: Vec<AreaFlowBreakdown>,
}

/// Recomputes the profile population per window over frozen assignments and
/// emits the side-by-side series behind the window-comparison figures.
pub fn window_comparison(
    graph: &CorpusGraph,
    assignments: &AssignmentTable,
    windows: &[CitationWindow],
) -> Vec<WindowSeries> {
    windows
        .iter()
        .map(|&window| {
            let pop = profile_population(graph, assignments, window);
            WindowSeries {
                window,
                skipped_uncited: pop.skipped_uncited,
                coverage: coverage_share(graph, assignments, window),
                breakdown: area_flow_breakdown(&pop.profiles, graph.registry()),
            }
        })
        .collect()
}
