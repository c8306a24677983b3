//! Cheapest-first subband purchase under coverage and rate targets.
//!
//! Candidates are ranked by cost (ties by id) and prefixes of that ranking
//! are scanned. M is the shortest prefix whose summed band coverage reaches
//! 1 − ε, N the shortest whose summed band rate reaches R_min, and the plan
//! buys the first max(N, M) bands.
//!
//! N always refers to the rate target and M to the coverage target. Both are
//! found by a full prefix scan before L_max = max(N, M) is taken, rather
//! than by a stopping test inside the scan. Per-band counts N_l and M_l are
//! never materialized.

use rayon::prelude::*;

use crate::coverage::{band_coverage, CoverageMethod};
use crate::error::{Error, Result};
use crate::numerics::QuadratureSpec;
use crate::rate::band_rate;
use crate::scenario::{QosTargets, SharingScenario};

/// Largest market [`brute_force_select`] will enumerate.
pub const BRUTE_FORCE_MAX_BANDS: usize = 16;

/// Coverage and rate of a candidate band, evaluated as if purchased.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMetrics {
    pub id: String,
    pub cost: f64,
    pub coverage: f64,
    pub rate: f64,
}

/// One row of the ranked candidate list with running totals over the prefix.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedCandidate {
    pub metrics: BandMetrics,
    pub cumulative_cost: f64,
    pub cumulative_coverage: f64,
    pub cumulative_rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PurchasePlan {
    pub selected_band_ids: Vec<String>,
    /// Bands needed for the rate target; `None` if the whole market falls short.
    pub n_rate: Option<usize>,
    /// Bands needed for the coverage target; `None` if the whole market falls short.
    pub m_coverage: Option<usize>,
    pub l_max: usize,
    pub achieved_coverage: f64,
    pub achieved_rate: f64,
    pub total_cost: f64,
    pub feasible: bool,
}

/// How band metrics are evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlannerSettings {
    pub coverage_method: CoverageMethod,
    pub quad: QuadratureSpec,
}

impl Default for PlannerSettings {
    fn default() -> Self {
        Self {
            coverage_method: CoverageMethod::ClosedForm,
            quad: QuadratureSpec::default(),
        }
    }
}

/// Metrics of every band in the market at the scenario threshold, in market order.
pub fn market_metrics(s: &SharingScenario, settings: &PlannerSettings) -> Result<Vec<BandMetrics>> {
    if s.bands.is_empty() {
        return Err(Error::EmptyMarket);
    }
    let t = s.radio.threshold_lin();
    s.bands
        .par_iter()
        .map(|b| {
            Ok(BandMetrics {
                id: b.id.clone(),
                cost: b.cost,
                coverage: band_coverage(s, b, t, settings.coverage_method)?,
                rate: band_rate(s, b, &settings.quad)?,
            })
        })
        .collect()
}

fn by_cost_then_id(a: &BandMetrics, b: &BandMetrics) -> std::cmp::Ordering {
    a.cost.total_cmp(&b.cost).then_with(|| a.id.cmp(&b.id))
}

/// Candidates sorted by cost then id, with prefix totals.
pub fn rank_candidates(metrics: &[BandMetrics]) -> Vec<RankedCandidate> {
    let mut sorted = metrics.to_vec();
    sorted.sort_by(by_cost_then_id);
    let (mut cost, mut cov, mut rate) = (0.0, 0.0, 0.0);
    sorted
        .into_iter()
        .map(|m| {
            cost += m.cost;
            cov += m.coverage;
            rate += m.rate;
            RankedCandidate {
                metrics: m,
                cumulative_cost: cost,
                cumulative_coverage: cov,
                cumulative_rate: rate,
            }
        })
        .collect()
}

fn meets_coverage(coverage: f64, qos: &QosTargets) -> bool {
    coverage >= qos.coverage_target()
}

fn meets_rate(rate: f64, qos: &QosTargets) -> bool {
    rate >= qos.min_rate
}

fn plan_for(
    chosen: &[&BandMetrics],
    n_rate: Option<usize>,
    m_coverage: Option<usize>,
    qos: &QosTargets,
) -> PurchasePlan {
    let achieved_coverage = chosen.iter().map(|m| m.coverage).sum();
    let achieved_rate = chosen.iter().map(|m| m.rate).sum();
    PurchasePlan {
        selected_band_ids: chosen.iter().map(|m| m.id.clone()).collect(),
        n_rate,
        m_coverage,
        l_max: chosen.len(),
        total_cost: chosen.iter().map(|m| m.cost).sum(),
        feasible: meets_coverage(achieved_coverage, qos) && meets_rate(achieved_rate, qos),
        achieved_coverage,
        achieved_rate,
    }
}

/// Greedy cheapest-prefix plan from precomputed band metrics.
///
/// When either target is out of reach the plan holds the whole market and
/// `feasible` is false.
pub fn greedy_from_metrics(metrics: &[BandMetrics], qos: &QosTargets) -> Result<PurchasePlan> {
    if metrics.is_empty() {
        return Err(Error::EmptyMarket);
    }
    qos.validate()?;
    let ranked = rank_candidates(metrics);
    let m_coverage = ranked
        .iter()
        .position(|c| meets_coverage(c.cumulative_coverage, qos))
        .map(|i| i + 1);
    let n_rate = ranked
        .iter()
        .position(|c| meets_rate(c.cumulative_rate, qos))
        .map(|i| i + 1);
    let l_max = match (n_rate, m_coverage) {
        (Some(n), Some(m)) => n.max(m),
        _ => ranked.len(),
    };
    let chosen: Vec<&BandMetrics> = ranked[..l_max].iter().map(|c| &c.metrics).collect();
    Ok(plan_for(&chosen, n_rate, m_coverage, qos))
}

/// Exhaustive minimum-cost plan from precomputed band metrics.
///
/// Ties on cost go to fewer bands, then to the lexicographically smaller
/// sorted id list. N and M are the smallest cardinalities of any subset
/// meeting the rate and coverage targets on their own.
pub fn brute_force_from_metrics(metrics: &[BandMetrics], qos: &QosTargets) -> Result<PurchasePlan> {
    if metrics.is_empty() {
        return Err(Error::EmptyMarket);
    }
    if metrics.len() > BRUTE_FORCE_MAX_BANDS {
        return Err(Error::TooManyBands {
            max: BRUTE_FORCE_MAX_BANDS,
            got: metrics.len(),
        });
    }
    qos.validate()?;
    let mut sorted = metrics.to_vec();
    sorted.sort_by(by_cost_then_id);

    let mut best: Option<(f64, usize, Vec<&str>, u32)> = None;
    let (mut n_rate, mut m_coverage) = (None::<usize>, None::<usize>);
    for mask in 1u32..(1 << sorted.len()) {
        let members = || {
            (0..sorted.len())
                .filter(move |i| mask & (1 << i) != 0)
                .map(|i| &sorted[i])
        };
        let size = mask.count_ones() as usize;
        let cost: f64 = members().map(|m| m.cost).sum();
        let cov_ok = meets_coverage(members().map(|m| m.coverage).sum(), qos);
        let rate_ok = meets_rate(members().map(|m| m.rate).sum(), qos);
        if cov_ok {
            m_coverage = Some(m_coverage.map_or(size, |m| m.min(size)));
        }
        if rate_ok {
            n_rate = Some(n_rate.map_or(size, |n| n.min(size)));
        }
        if !(cov_ok && rate_ok) {
            continue;
        }
        let mut ids: Vec<&str> = members().map(|m| m.id.as_str()).collect();
        ids.sort_unstable();
        let better = match &best {
            None => true,
            Some((c, n, best_ids, _)) => cost
                .total_cmp(c)
                .then(size.cmp(n))
                .then_with(|| ids.cmp(best_ids))
                .is_lt(),
        };
        if better {
            best = Some((cost, size, ids, mask));
        }
    }
    let mask = best.map_or((1u32 << sorted.len()) - 1, |b| b.3);
    let chosen: Vec<&BandMetrics> = (0..sorted.len())
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| &sorted[i])
        .collect();
    Ok(plan_for(&chosen, n_rate, m_coverage, qos))
}

/// Greedy plan for the scenario's market using the closed-form band metrics.
pub fn greedy_select(s: &SharingScenario, qos: &QosTargets) -> Result<PurchasePlan> {
    greedy_select_with(s, qos, &PlannerSettings::default())
}

pub fn greedy_select_with(
    s: &SharingScenario,
    qos: &QosTargets,
    settings: &PlannerSettings,
) -> Result<PurchasePlan> {
    greedy_from_metrics(&market_metrics(s, settings)?, qos)
}

/// Exhaustive oracle over at most [`BRUTE_FORCE_MAX_BANDS`] bands.
pub fn brute_force_select(s: &SharingScenario, qos: &QosTargets) -> Result<PurchasePlan> {
    brute_force_select_with(s, qos, &PlannerSettings::default())
}

pub fn brute_force_select_with(
    s: &SharingScenario,
    qos: &QosTargets,
    settings: &PlannerSettings,
) -> Result<PurchasePlan> {
    if s.bands.len() > BRUTE_FORCE_MAX_BANDS {
        return Err(Error::TooManyBands {
            max: BRUTE_FORCE_MAX_BANDS,
            got: s.bands.len(),
        });
    }
    brute_force_from_metrics(&market_metrics(s, settings)?, qos)
}
