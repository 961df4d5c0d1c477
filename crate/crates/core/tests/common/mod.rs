#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use chrono::{Duration, NaiveDate};
use rand::Rng;
use valuerank::catalog::{UsageEntry, YearMonth};
use valuerank::{Catalog, DatasetRecord, UsageSeries};

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(rel)
}

pub fn fixture_str(rel: &str) -> String {
    std::fs::read_to_string(fixture(rel)).unwrap()
}

pub fn profile_args() -> Vec<String> {
    ["sh1", "sh2", "sh3"]
        .iter()
        .flat_map(|p| {
            [
                "--profile".to_string(),
                fixture(&format!("profiles/{p}.json")).display().to_string(),
            ]
        })
        .collect()
}

/// Runs the CLI in-process and returns (status code, stdout, stderr).
pub fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("valuerank").chain(args.iter().copied());
    let status = valuerank::cli::run(argv, &mut out, &mut err);
    (
        status.code(),
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

// ---------------------------------------------------------------------------
// Brute-force NDCG oracle.
//
// Tie-averaged DCG is the expected plain DCG over every ordering of the
// items that share a score. The oracle enumerates those orderings
// explicitly and averages, so it shares nothing with the closed-form
// group-mean implementation under test.

fn plain_dcg(order: &[usize], relevance: &[f64], k: usize) -> f64 {
    order
        .iter()
        .take(k)
        .enumerate()
        .map(|(r, &i)| relevance[i] / ((r + 2) as f64).log2())
        .sum()
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &head) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Groups of indices sharing a score, in descending score order.
fn tie_groups(scores: &[f64]) -> Vec<Vec<usize>> {
    let mut distinct: Vec<f64> = scores.to_vec();
    distinct.sort_by(|a, b| b.partial_cmp(a).unwrap());
    distinct.dedup();
    distinct
        .iter()
        .map(|s| (0..scores.len()).filter(|&i| scores[i] == *s).collect())
        .collect()
}

pub fn orderings_count(scores: &[f64]) -> u64 {
    tie_groups(scores)
        .iter()
        .map(|g| (1..=g.len() as u64).product::<u64>())
        .product()
}

pub fn brute_force_dcg(relevance: &[f64], scores: &[f64], k: Option<usize>) -> f64 {
    let k = k.unwrap_or(relevance.len());
    let per_group: Vec<Vec<Vec<usize>>> =
        tie_groups(scores).iter().map(|g| permutations(g)).collect();
    let mut total = 0.0;
    let mut count = 0u64;
    let mut idx = vec![0usize; per_group.len()];
    loop {
        let order: Vec<usize> = per_group
            .iter()
            .zip(&idx)
            .flat_map(|(perms, &i)| perms[i].iter().copied())
            .collect();
        total += plain_dcg(&order, relevance, k);
        count += 1;
        // odometer increment
        let mut pos = per_group.len();
        loop {
            if pos == 0 {
                return total / count as f64;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < per_group[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

pub fn brute_force_ndcg(relevance: &[f64], scores: &[f64], k: Option<usize>) -> Option<f64> {
    let mut ideal: Vec<usize> = (0..relevance.len()).collect();
    ideal.sort_by(|&a, &b| relevance[b].partial_cmp(&relevance[a]).unwrap());
    let idcg = plain_dcg(&ideal, relevance, k.unwrap_or(relevance.len()));
    (idcg > 0.0).then(|| brute_force_dcg(relevance, scores, k) / idcg)
}

/// A random instance with forced score ties whose tie orderings stay
/// enumerable.
pub fn random_ranking_instance<R: Rng>(rng: &mut R, max_n: usize) -> (Vec<f64>, Vec<f64>) {
    loop {
        let n = rng.gen_range(1..=max_n);
        let relevance: Vec<f64> = (0..n).map(|_| rng.gen_range(0..=4) as f64).collect();
        if relevance.iter().all(|&r| r == 0.0) {
            continue;
        }
        let levels = rng.gen_range(1..=n);
        let level_values: Vec<f64> = (0..levels).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let scores: Vec<f64> = (0..n)
            .map(|_| level_values[rng.gen_range(0..levels)])
            .collect();
        if orderings_count(&scores) <= 5_040 {
            return (relevance, scores);
        }
    }
}

// ---------------------------------------------------------------------------
// Random catalogs.

pub fn random_catalog<R: Rng>(rng: &mut R, max_n: usize) -> Catalog {
    let as_of = NaiveDate::from_ymd_opt(2023, 1, 31).unwrap();
    let n = rng.gen_range(1..=max_n);
    let datasets = (0..n)
        .map(|i| {
            let months = rng.gen_range(0..30);
            let start = rng.gen_range(2010..2020);
            let mut usage = Vec::new();
            for m in 0..months {
                if rng.gen_bool(0.8) {
                    usage.push(UsageEntry {
                        month: YearMonth::new(start + m / 12, (m % 12) as u32 + 1).unwrap(),
                        count: rng.gen_range(0..200),
                    });
                }
            }
            let mut utilities = BTreeMap::new();
            utilities.insert("sh1".to_string(), rng.gen_range(0..=100) as f64);
            utilities.insert("avg".to_string(), rng.gen_range(0.0..=100.0));
            DatasetRecord {
                id: format!("ds-{i:02}"),
                name: format!("dataset {i}"),
                creation_date: as_of - Duration::days(rng.gen_range(0..9000)),
                n_spatial_objects: if rng.gen_bool(0.1) {
                    0
                } else {
                    rng.gen_range(0..100_000)
                },
                usage: UsageSeries::new(usage),
                utilities,
            }
        })
        .collect();
    Catalog {
        as_of_date: as_of,
        datasets,
    }
}
