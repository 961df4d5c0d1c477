//! Ranking evaluation with DCG, NDCG and NDCG@k.
//!
//! Gains are linear in relevance and the discount at 1-indexed rank `r` is
//! `1 / log2(r + 1)`. Items sharing a predicted score form a tie group;
//! every member of the group contributes the group's mean relevance at its
//! own rank, which equals the expected DCG over all orderings of the group.
//! The ideal DCG sorts by relevance and needs no tie handling.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::catalog::{check_permutation, Catalog, StakeholderProfile, AVERAGE_UTILITY};
use crate::error::{Error, Result};
use crate::report::{EvaluationCell, EvaluationReport, MethodGroup};
use crate::valuation::{rank, Dimension, Method, UsageMode, ValuationConfig, WeightVector};

pub const DEFAULT_K: usize = 5;

/// Scores closer than this are marked jointly best.
pub const BEST_TIE_TOLERANCE: f64 = 1e-9;

/// Graded relevance per dataset id.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct RelevanceVector(BTreeMap<String, f64>);

impl RelevanceVector {
    pub fn new(map: BTreeMap<String, f64>) -> Self {
        RelevanceVector(map)
    }

    /// Linear encoding of an ordering: with `N` items, position `p` (1-indexed)
    /// gets relevance `N - p`.
    pub fn from_ranking<S: AsRef<str>>(ideal: &[S]) -> Result<Self> {
        let n = ideal.len();
        let mut map = BTreeMap::new();
        for (i, id) in ideal.iter().enumerate() {
            let id = id.as_ref();
            if map.insert(id.to_string(), (n - 1 - i) as f64).is_some() {
                return Err(Error::NotPermutation(format!("duplicate id {id:?}")));
            }
        }
        Ok(RelevanceVector(map))
    }

    pub fn get(&self, id: &str) -> Option<f64> {
        self.0.get(id).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// The relevance values used as scores, which is the ideal ordering.
    pub fn as_scores(&self) -> BTreeMap<String, f64> {
        self.0.clone()
    }
}

/// Relevance for an ideal ranking that must list every catalog id once.
pub fn relevance_from_ranking<S: AsRef<str>>(
    ideal: &[S],
    catalog: &Catalog,
) -> Result<RelevanceVector> {
    check_permutation(ideal, catalog)?;
    RelevanceVector::from_ranking(ideal)
}

#[inline]
fn discount(rank0: usize) -> f64 {
    1.0 / ((rank0 + 2) as f64).log2()
}

fn cutoff(n: usize, k: Option<usize>) -> Result<usize> {
    match k {
        Some(0) => Err(Error::InvalidK),
        Some(k) => Ok(k.min(n)),
        None => Ok(n),
    }
}

/// Tie-averaged DCG over parallel slices.
pub fn dcg_slices(relevance: &[f64], scores: &[f64], k: Option<usize>) -> Result<f64> {
    if relevance.len() != scores.len() {
        return Err(Error::IdMismatch(format!(
            "{} relevances, {} scores",
            relevance.len(),
            scores.len()
        )));
    }
    let limit = cutoff(relevance.len(), k)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let mut total = 0.0;
    let mut start = 0;
    while start < limit {
        let score = scores[order[start]];
        let end = start
            + order[start..]
                .iter()
                .take_while(|&&i| scores[i] == score)
                .count();
        let group = &order[start..end];
        let first = relevance[group[0]];
        let gain = if group.iter().all(|&i| relevance[i] == first) {
            first
        } else {
            group.iter().map(|&i| relevance[i]).sum::<f64>() / group.len() as f64
        };
        for r in start..end.min(limit) {
            total += gain * discount(r);
        }
        start = end;
    }
    Ok(total)
}

/// DCG of the best possible ordering.
pub fn ideal_dcg_slice(relevance: &[f64], k: Option<usize>) -> Result<f64> {
    let limit = cutoff(relevance.len(), k)?;
    let mut sorted = relevance.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    Ok(sorted
        .iter()
        .take(limit)
        .enumerate()
        .map(|(r, rel)| rel * discount(r))
        .sum())
}

pub fn ndcg_slices(relevance: &[f64], scores: &[f64], k: Option<usize>) -> Result<f64> {
    let ideal = ideal_dcg_slice(relevance, k)?;
    if ideal <= 0.0 {
        return Err(Error::UndefinedMetric);
    }
    Ok(dcg_slices(relevance, scores, k)? / ideal)
}

fn aligned(
    relevance: &RelevanceVector,
    scores: &BTreeMap<String, f64>,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let rel_ids: BTreeSet<&str> = relevance.0.keys().map(String::as_str).collect();
    let score_ids: BTreeSet<&str> = scores.keys().map(String::as_str).collect();
    if rel_ids != score_ids {
        let diff: Vec<&str> = rel_ids.symmetric_difference(&score_ids).copied().collect();
        return Err(Error::IdMismatch(diff.join(", ")));
    }
    let mut rels = Vec::with_capacity(scores.len());
    let mut vals = Vec::with_capacity(scores.len());
    for (id, &s) in scores {
        if !s.is_finite() {
            return Err(Error::NonFiniteScore(id.clone()));
        }
        rels.push(relevance.0[id]);
        vals.push(s);
    }
    Ok((rels, vals))
}

pub fn dcg(
    relevance: &RelevanceVector,
    scores: &BTreeMap<String, f64>,
    k: Option<usize>,
) -> Result<f64> {
    let (rels, vals) = aligned(relevance, scores)?;
    dcg_slices(&rels, &vals, k)
}

/// DCG divided by the ideal DCG. Fails with [`Error::UndefinedMetric`] when
/// no relevance is positive.
pub fn ndcg(
    relevance: &RelevanceVector,
    scores: &BTreeMap<String, f64>,
    k: Option<usize>,
) -> Result<f64> {
    let (rels, vals) = aligned(relevance, scores)?;
    ndcg_slices(&rels, &vals, k)
}

/// Which method groups an evaluation runs, and with what shared settings.
#[derive(Debug, Clone)]
pub struct EvaluationPlan {
    pub k: usize,
    /// Decline rate and as-of date are taken from here; usage mode and
    /// utility source vary per variant.
    pub config: ValuationConfig,
    pub groups: Vec<MethodGroup>,
}

impl Default for EvaluationPlan {
    fn default() -> Self {
        EvaluationPlan {
            k: DEFAULT_K,
            config: ValuationConfig::default(),
            groups: vec![
                MethodGroup::Weighted,
                MethodGroup::SimpleAverage,
                MethodGroup::Univariate,
            ],
        }
    }
}

/// One row to compute: a method with a fixed usage mode and utility source.
#[derive(Debug, Clone, PartialEq)]
pub struct Variant {
    pub key: String,
    pub label: String,
    pub method: Method,
    pub usage_mode: UsageMode,
    pub utility_source: Option<String>,
}

impl Variant {
    fn new(
        key: impl Into<String>,
        label: impl Into<String>,
        method: Method,
        usage_mode: UsageMode,
        utility_source: Option<String>,
    ) -> Self {
        Variant {
            key: key.into(),
            label: label.into(),
            method,
            usage_mode,
            utility_source,
        }
    }
}

/// Rows of one method group for one stakeholder.
///
/// Averaged methods get a total-usage and an average-usage row under the
/// catalog's default utility source, plus a "Provided Utility" row when the
/// catalog has a utility source labelled with the stakeholder's id.
/// The univariate group has one row per utility source, then objects,
/// creation date, total usage and average usage.
pub fn variants_for(group: MethodGroup, profile_id: &str, catalog: &Catalog) -> Vec<Variant> {
    let default_source = catalog.default_utility_source();
    match group {
        MethodGroup::Weighted | MethodGroup::SimpleAverage => {
            let method = if group == MethodGroup::Weighted {
                Method::Weighted
            } else {
                Method::SimpleAverage
            };
            let mut out = vec![
                Variant::new(
                    "total_usage",
                    "Total Usage",
                    method,
                    UsageMode::Total,
                    default_source.clone(),
                ),
                Variant::new(
                    "average_usage",
                    "Average Usage",
                    method,
                    UsageMode::Average,
                    default_source.clone(),
                ),
            ];
            if catalog.has_utility_source(profile_id)
                && default_source.as_deref() != Some(profile_id)
            {
                out.push(Variant::new(
                    format!("provided_utility:{profile_id}"),
                    "Provided Utility",
                    method,
                    UsageMode::Total,
                    Some(profile_id.to_string()),
                ));
            }
            out
        }
        MethodGroup::Univariate => {
            let mut out: Vec<Variant> = catalog
                .utility_sources()
                .into_iter()
                .map(|s| {
                    let label = if s == AVERAGE_UTILITY {
                        "Average Utility".to_string()
                    } else {
                        format!("Utility ({s})")
                    };
                    Variant::new(
                        format!("utility:{s}"),
                        label,
                        Method::Univariate(Dimension::Utility),
                        UsageMode::Total,
                        Some(s),
                    )
                })
                .collect();
            let uni = |key: &str, label: &str, dim, mode| {
                Variant::new(
                    key,
                    label,
                    Method::Univariate(dim),
                    mode,
                    default_source.clone(),
                )
            };
            out.push(uni(
                "n_objects",
                "Number of Spatial Objects",
                Dimension::Objects,
                UsageMode::Total,
            ));
            out.push(uni(
                "creation_date",
                "Creation Date",
                Dimension::CreationDate,
                UsageMode::Total,
            ));
            out.push(uni(
                "total_usage",
                "Total Usage",
                Dimension::Usage,
                UsageMode::Total,
            ));
            out.push(uni(
                "average_usage",
                "Average Usage",
                Dimension::Usage,
                UsageMode::Average,
            ));
            out
        }
    }
}

/// NDCG and NDCG@k of the ranking produced by `weights` against `ideal`.
pub fn score_ranking(
    catalog: &Catalog,
    weights: &WeightVector,
    config: &ValuationConfig,
    relevance: &RelevanceVector,
    k: usize,
) -> Result<(f64, f64)> {
    let ranked = rank(catalog, weights, config)?;
    let scores: BTreeMap<String, f64> = ranked
        .entries
        .into_iter()
        .map(|e| (e.dataset_id, e.value))
        .collect();
    Ok((
        ndcg(relevance, &scores, None)?,
        ndcg(relevance, &scores, Some(k))?,
    ))
}

/// Evaluates every (stakeholder, method, variant) combination.
///
/// Profiles without an ideal ranking are skipped with a warning. Profiles
/// whose sliders are all zero get no weighted rows.
pub fn evaluate(
    catalog: &Catalog,
    profiles: &[StakeholderProfile],
    plan: &EvaluationPlan,
) -> Result<EvaluationReport> {
    if plan.k == 0 {
        return Err(Error::InvalidK);
    }
    let mut sorted: Vec<&StakeholderProfile> = profiles.iter().collect();
    sorted.sort_by(|a, b| a.id.cmp(&b.id));

    let mut cells = Vec::new();
    let mut warnings = Vec::new();
    for profile in sorted {
        let Some(ideal) = &profile.ideal_ranking else {
            warnings.push(format!("profile {}: no ideal ranking, skipped", profile.id));
            continue;
        };
        let relevance = relevance_from_ranking(ideal, catalog)?;
        for &group in &plan.groups {
            if group == MethodGroup::Weighted && profile.weights.is_all_zero() {
                warnings.push(format!(
                    "profile {}: all weights are zero, weighted rows omitted",
                    profile.id
                ));
                continue;
            }
            let mut group_cells = Vec::new();
            for variant in variants_for(group, &profile.id, catalog) {
                let config = ValuationConfig {
                    usage_mode: variant.usage_mode,
                    utility_source: variant.utility_source.clone(),
                    ..plan.config.clone()
                };
                let weights = variant.method.weights(&profile.weights);
                let (ndcg, ndcg_at_k) =
                    score_ranking(catalog, &weights, &config, &relevance, plan.k)?;
                group_cells.push(EvaluationCell {
                    stakeholder: profile.id.clone(),
                    group,
                    method: variant.method,
                    variant: variant.key,
                    variant_label: variant.label,
                    usage_mode: variant.usage_mode,
                    utility_source: variant.utility_source,
                    ndcg,
                    ndcg_at_k,
                    k: plan.k,
                    best_ndcg: false,
                    best_ndcg_at_k: false,
                });
            }
            mark_best(&mut group_cells);
            cells.extend(group_cells);
        }
    }
    Ok(EvaluationReport {
        k: plan.k,
        cells,
        warnings,
    })
}

fn mark_best(cells: &mut [EvaluationCell]) {
    let best = |f: fn(&EvaluationCell) -> f64, cells: &[EvaluationCell]| {
        cells.iter().map(f).fold(f64::NEG_INFINITY, f64::max)
    };
    let top = best(|c| c.ndcg, cells);
    let top_k = best(|c| c.ndcg_at_k, cells);
    for c in cells {
        c.best_ndcg = top - c.ndcg <= BEST_TIE_TOLERANCE;
        c.best_ndcg_at_k = top_k - c.ndcg_at_k <= BEST_TIE_TOLERANCE;
    }
}
