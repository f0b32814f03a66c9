//! Brute-force enumeration oracles: every aggregate recomputed with plain
//! loops straight from the graph and the assignment table, sharing no code
//! with the library implementations.

use citeflow_core::corpus::{CorpusGraph, PubIdx};
use citeflow_core::resolver::AssignmentTable;

pub const EPS: f64 = 1e-12;

pub fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= EPS
}

/// One cited cohort publication's flow numbers under a window, recomputed
/// by direct edge enumeration. `window_years: None` means full horizon.
#[derive(Debug, Clone)]
pub struct OProfile {
    pub idx: PubIdx,
    pub sc: usize,
    pub area: usize,
    pub n_cit: u64,
    pub n_intra: u64,
    pub distinct_all: u64,
    pub distinct_extra: u64,
}

impl OProfile {
    pub fn share(&self) -> f64 {
        self.n_intra as f64 / self.n_cit as f64
    }
    pub fn totally_intra(&self) -> bool {
        self.n_intra == self.n_cit
    }
    pub fn totally_extra(&self) -> bool {
        self.n_intra == 0
    }
    pub fn predominantly_intra(&self) -> bool {
        2 * self.n_intra > self.n_cit
    }
    pub fn predominantly_extra(&self) -> bool {
        2 * self.n_intra < self.n_cit
    }
}

/// Profiles of all cited cohort publications plus the skipped count.
pub fn profiles(
    graph: &CorpusGraph,
    table: &AssignmentTable,
    window_years: Option<u32>,
) -> (Vec<OProfile>, u64) {
    let cohort = graph.cohort_year();
    let w = window_years.unwrap_or((graph.horizon_year() - cohort) as u32) as i64;
    let mut out = Vec::new();
    let mut skipped = 0u64;
    for &idx in graph.cohort_publications() {
        let own = table.sc_of(idx).0 as usize;
        let mut per_sc = std::collections::BTreeMap::<usize, u64>::new();
        for &citer in graph.in_citations(idx) {
            let year = graph.publication(citer).year;
            let offset = i64::from(year) - i64::from(cohort);
            if offset >= 0 && offset <= w {
                *per_sc.entry(table.sc_of(citer).0 as usize).or_insert(0) += 1;
            }
        }
        let n_cit: u64 = per_sc.values().sum();
        if n_cit == 0 {
            skipped += 1;
            continue;
        }
        let n_intra = per_sc.get(&own).copied().unwrap_or(0);
        out.push(OProfile {
            idx,
            sc: own,
            area: graph.registry().area_of(table.sc_of(idx)).0 as usize,
            n_cit,
            n_intra,
            distinct_all: per_sc.len() as u64,
            distinct_extra: per_sc.len() as u64 - u64::from(n_intra > 0),
        });
    }
    (out, skipped)
}

/// Per-area flow-class percentages; one row per area plus a Total row.
/// Columns: (total_pubs, pct_totally_intra, pct_totally_extra,
/// pct_predominantly_intra, avg_share_intra_pct).
pub fn breakdown(profiles: &[OProfile], n_areas: usize) -> Vec<(u64, f64, f64, f64, f64)> {
    let mut rows = Vec::new();
    for group in 0..=n_areas {
        let selected: Vec<&OProfile> = profiles
            .iter()
            .filter(|p| group == n_areas || p.area == group)
            .collect();
        let n = selected.len() as u64;
        if n == 0 {
            rows.push((0, 0.0, 0.0, 0.0, 0.0));
            continue;
        }
        let ti = selected.iter().filter(|p| p.totally_intra()).count() as f64;
        let te = selected.iter().filter(|p| p.totally_extra()).count() as f64;
        let pi = selected.iter().filter(|p| p.predominantly_intra()).count() as f64;
        let mut sum = 0.0;
        for p in &selected {
            sum += p.share();
        }
        rows.push((
            n,
            100.0 * ti / n as f64,
            100.0 * te / n as f64,
            100.0 * pi / n as f64,
            100.0 * sum / n as f64,
        ));
    }
    rows
}

/// Per-category share summary, sorted by diff ascending then category.
/// Columns: (sc, area, n_obs, avg_intra_pct, avg_extra_pct, diff_pct,
/// n_totally_intra, n_totally_extra).
pub fn sc_shares(
    profiles: &[OProfile],
    n_scs: usize,
) -> Vec<(usize, usize, u64, f64, f64, f64, u64, u64)> {
    let mut rows = Vec::new();
    for sc in 0..n_scs {
        let selected: Vec<&OProfile> = profiles.iter().filter(|p| p.sc == sc).collect();
        if selected.is_empty() {
            continue;
        }
        let n = selected.len() as u64;
        let mut sum = 0.0;
        for p in &selected {
            sum += p.share();
        }
        let avg = 100.0 * sum / n as f64;
        rows.push((
            sc,
            selected[0].area,
            n,
            avg,
            100.0 - avg,
            avg - (100.0 - avg),
            selected.iter().filter(|p| p.totally_intra()).count() as u64,
            selected.iter().filter(|p| p.totally_extra()).count() as u64,
        ));
    }
    rows.sort_by(|a, b| a.5.total_cmp(&b.5).then(a.0.cmp(&b.0)));
    rows
}

/// Per-area count of categories with avg intra share strictly above 50%,
/// plus a Total row. Columns: (n_scs_in_area, n_majority).
pub fn majority(
    shares: &[(usize, usize, u64, f64, f64, f64, u64, u64)],
    graph: &CorpusGraph,
) -> Vec<(u64, u64)> {
    let n_areas = graph.registry().n_areas();
    let mut rows = vec![(0u64, 0u64); n_areas + 1];
    for (_, sc) in graph.registry().categories() {
        rows[sc.area.0 as usize].0 += 1;
        rows[n_areas].0 += 1;
    }
    for &(_, area, _, avg_intra, _, _, _, _) in shares {
        if avg_intra > 50.0 {
            rows[area].1 += 1;
            rows[n_areas].1 += 1;
        }
    }
    rows
}

/// Linear interpolation quantile at position (n-1)*q, written from the
/// formula directly.
pub fn quantile(sorted: &[u64], q: f64) -> f64 {
    let pos = q * (sorted.len() as f64 - 1.0);
    let below = pos.floor();
    let frac = pos - below;
    let i = below as usize;
    if i + 1 < sorted.len() && frac > 0.0 {
        sorted[i] as f64 + frac * (sorted[i + 1] as f64 - sorted[i] as f64)
    } else {
        sorted[i] as f64
    }
}

/// Spread descriptives per area plus Total.
/// Columns: (n, mean, sd, min, max, median, q1, q3).
pub fn spread(
    profiles: &[OProfile],
    n_areas: usize,
) -> Vec<(u64, f64, f64, u64, u64, f64, f64, f64)> {
    let mut rows = Vec::new();
    for group in 0..=n_areas {
        let mut values: Vec<u64> = profiles
            .iter()
            .filter(|p| group == n_areas || p.area == group)
            .map(|p| p.distinct_all)
            .collect();
        if values.is_empty() {
            rows.push((0, 0.0, 0.0, 0, 0, 0.0, 0.0, 0.0));
            continue;
        }
        values.sort_unstable();
        let n = values.len();
        let mean = values.iter().map(|&v| v as f64).sum::<f64>() / n as f64;
        let sd = if n <= 1 {
            0.0
        } else {
            let mut ss = 0.0;
            for &v in &values {
                let d = v as f64 - mean;
                ss += d * d;
            }
            (ss / (n as f64 - 1.0)).sqrt()
        };
        rows.push((
            n as u64,
            mean,
            sd,
            values[0],
            values[n - 1],
            quantile(&values, 0.5),
            quantile(&values, 0.25),
            quantile(&values, 0.75),
        ));
    }
    rows
}

/// Normalized impacts at full horizon: (idx, sc, raw, norm) in cohort order.
pub fn impacts(graph: &CorpusGraph, table: &AssignmentTable) -> Vec<(PubIdx, usize, u64, f64)> {
    let cohort = graph.cohort_year();
    let horizon = graph.horizon_year();
    let raw_of = |idx: PubIdx| -> u64 {
        graph
            .in_citations(idx)
            .iter()
            .filter(|&&c| {
                let y = graph.publication(c).year;
                y >= cohort && y <= horizon
            })
            .count() as u64
    };
    let population: Vec<(PubIdx, usize, u64)> = graph
        .cohort_publications()
        .iter()
        .filter_map(|&idx| {
            let raw = raw_of(idx);
            (raw > 0).then(|| (idx, table.sc_of(idx).0 as usize, raw))
        })
        .collect();
    population
        .iter()
        .map(|&(idx, sc, raw)| {
            let members: Vec<u64> = population
                .iter()
                .filter(|&&(_, s, _)| s == sc)
                .map(|&(_, _, r)| r)
                .collect();
            let mean = members.iter().sum::<u64>() as f64 / members.len() as f64;
            let norm = if mean == 0.0 { 0.0 } else { raw as f64 / mean };
            (idx, sc, raw, norm)
        })
        .collect()
}

/// Mean impact of the strictly-intra vs strictly-extra subsets per area
/// plus Total. Columns: (n_intra, avg_intra, n_extra, avg_extra, delta).
pub fn impact_by_class(
    profiles: &[OProfile],
    impacts: &[(PubIdx, usize, u64, f64)],
    n_areas: usize,
) -> Vec<(u64, f64, u64, f64, f64)> {
    let norm_of = |idx: PubIdx| impacts.iter().find(|&&(i, _, _, _)| i == idx).map(|&(_, _, _, n)| n);
    let mut rows = Vec::new();
    for group in 0..=n_areas {
        let mut ni = 0u64;
        let mut si = 0.0;
        let mut ne = 0u64;
        let mut se = 0.0;
        for p in profiles {
            if group != n_areas && p.area != group {
                continue;
            }
            let Some(norm) = norm_of(p.idx) else { continue };
            if p.predominantly_intra() {
                ni += 1;
                si += norm;
            } else if p.predominantly_extra() {
                ne += 1;
                se += norm;
            }
        }
        let ai = if ni == 0 { 0.0 } else { si / ni as f64 };
        let ae = if ne == 0 { 0.0 } else { se / ne as f64 };
        rows.push((ni, ai, ne, ae, ai - ae));
    }
    rows
}

/// Pearson r via the raw-sums formula; `None` on zero variance.
pub fn pearson_formula(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let syy: f64 = ys.iter().map(|y| y * y).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let vx = n * sxx - sx * sx;
    let vy = n * syy - sy * sy;
    if vx <= 0.0 || vy <= 0.0 {
        return None;
    }
    Some(((n * sxy - sx * sy) / (vx * vy).sqrt()).clamp(-1.0, 1.0))
}

/// Centered Pearson written independently of the library (covariance over
/// the product of the separate standard deviations).
fn pearson_centered(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        cov += (x - mx) * (y - my);
        vx += (x - mx) * (x - mx);
        vy += (y - my) * (y - my);
    }
    if vx == 0.0 || vy == 0.0 {
        return None;
    }
    Some((cov / (vx * vy).sqrt()).clamp(-1.0, 1.0))
}

/// Per-area rollup of per-category (share, impact) correlations plus Total.
/// Columns: (n_scs, n_excluded, n_negative, min, max, mean).
pub fn sc_correlation(
    profiles: &[OProfile],
    impacts: &[(PubIdx, usize, u64, f64)],
    n_scs: usize,
    areas_of_sc: &[usize],
    n_areas: usize,
) -> Vec<(u64, u64, u64, f64, f64, f64)> {
    let norm_of = |idx: PubIdx| impacts.iter().find(|&&(i, _, _, _)| i == idx).map(|&(_, _, _, n)| n);
    // (area, r) per category with observations
    let mut per_sc: Vec<(usize, Option<f64>)> = Vec::new();
    for sc in 0..n_scs {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for p in profiles {
            if p.sc == sc {
                if let Some(norm) = norm_of(p.idx) {
                    xs.push(p.share());
                    ys.push(norm);
                }
            }
        }
        if xs.is_empty() {
            continue;
        }
        let r = if xs.len() < 2 {
            None
        } else {
            pearson_centered(&xs, &ys)
        };
        per_sc.push((areas_of_sc[sc], r));
    }
    let mut rows = Vec::new();
    for group in 0..=n_areas {
        let rs: Vec<Option<f64>> = per_sc
            .iter()
            .filter(|(a, _)| group == n_areas || *a == group)
            .map(|&(_, r)| r)
            .collect();
        let defined: Vec<f64> = rs.iter().filter_map(|&r| r).collect();
        let excluded = (rs.len() - defined.len()) as u64;
        if defined.is_empty() {
            rows.push((0, excluded, 0, 0.0, 0.0, 0.0));
            continue;
        }
        let negative = defined.iter().filter(|&&r| r < 0.0).count() as u64;
        let min = defined.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        let max = defined.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        let mean = defined.iter().sum::<f64>() / defined.len() as f64;
        rows.push((defined.len() as u64, excluded, negative, min, max, mean));
    }
    rows
}

/// Mean impact grouped by spread: (spread, mean_impact, n) sorted by spread.
pub fn impact_by_spread(
    profiles: &[OProfile],
    impacts: &[(PubIdx, usize, u64, f64)],
) -> Vec<(u64, f64, u64)> {
    let norm_of = |idx: PubIdx| impacts.iter().find(|&&(i, _, _, _)| i == idx).map(|&(_, _, _, n)| n);
    let mut groups = std::collections::BTreeMap::<u64, (f64, u64)>::new();
    for p in profiles {
        if let Some(norm) = norm_of(p.idx) {
            let slot = groups.entry(p.distinct_all).or_insert((0.0, 0));
            slot.0 += norm;
            slot.1 += 1;
        }
    }
    groups
        .into_iter()
        .map(|(s, (sum, n))| (s, sum / n as f64, n))
        .collect()
}

/// Per-area coverage (cited within window / cited by horizon) plus Total.
/// Columns: (in_window, cited_total).
pub fn coverage(
    graph: &CorpusGraph,
    table: &AssignmentTable,
    window_years: Option<u32>,
) -> Vec<(u64, u64)> {
    let cohort = graph.cohort_year();
    let horizon_w = (graph.horizon_year() - cohort) as i64;
    let w = window_years.map(i64::from).unwrap_or(horizon_w);
    let n_areas = graph.registry().n_areas();
    let mut rows = vec![(0u64, 0u64); n_areas + 1];
    for &idx in graph.cohort_publications() {
        let count_within = |span: i64| {
            graph
                .in_citations(idx)
                .iter()
                .filter(|&&c| {
                    let off = i64::from(graph.publication(c).year) - i64::from(cohort);
                    off >= 0 && off <= span
                })
                .count() as u64
        };
        if count_within(horizon_w) == 0 {
            continue;
        }
        let area = graph.registry().area_of(table.sc_of(idx)).0 as usize;
        rows[area].1 += 1;
        rows[n_areas].1 += 1;
        if count_within(w) >= 1 {
            rows[area].0 += 1;
            rows[n_areas].0 += 1;
        }
    }
    rows
}
