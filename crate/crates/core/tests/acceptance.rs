//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Run with `cargo test --test acceptance`.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use chrono::NaiveDate;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tower::ServiceExt;
use valuerank::catalog::{load_catalog, load_profile};
use valuerank::evaluation::ndcg_slices;
use valuerank::service::router;
use valuerank::valuation::{
    currency, currency_for_age, normalize_weights, variant_weights, Dimension, Method,
};
use valuerank::{
    evaluate, rank, Catalog, DatasetRecord, Error, EvaluationPlan, MethodGroup, ValuationConfig,
    WeightVector,
};

use common::{
    brute_force_ndcg, fixture, fixture_str, profile_args, random_catalog, random_ranking_instance,
    run_cli,
};

const ORACLE_TOL: f64 = 1e-9;
const EXACT_TOL: f64 = 1e-12;
const ORACLE_BUDGET: Duration = Duration::from_secs(10);
const GOLDEN_BUDGET: Duration = Duration::from_secs(1);

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn main() {
    let checks: [Check; 8] = [
        (
            "ndcg matches brute-force tie-averaged oracle",
            ndcg_oracle_equivalence,
        ),
        (
            "ndcg sanity: perfect = 1, bounded, k >= N untruncated",
            metric_sanity,
        ),
        (
            "simple and univariate rankings are weighted special cases",
            special_cases,
        ),
        (
            "currency decay: age 0, five years, monotone",
            currency_checks,
        ),
        ("all-zero weights rejected everywhere", all_zero_rejection),
        (
            "fixture slider weights normalize by their sum",
            fixture_normalization,
        ),
        (
            "end-to-end outputs byte-identical to goldens",
            end_to_end_golden,
        ),
        (
            "markdown report row taxonomy and best-cell marking",
            report_structure,
        ),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        match check() {
            Ok(detail) => println!("PASS  {name} ({detail})"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("{} passed, {failed} failed", checks.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

fn ndcg_oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20230131);
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut tied = 0;
    for i in 0..1000 {
        let (rel, scores) = random_ranking_instance(&mut rng, 12);
        let mut distinct = scores.clone();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup();
        if distinct.len() < scores.len() {
            tied += 1;
        }
        for k in [None, Some(5)] {
            let got = ndcg_slices(&rel, &scores, k).map_err(|e| format!("instance {i}: {e}"))?;
            let want = brute_force_ndcg(&rel, &scores, k).ok_or("oracle undefined")?;
            worst = worst.max((got - want).abs());
        }
    }
    let elapsed = start.elapsed();
    ensure(worst <= ORACLE_TOL, || {
        format!("max |diff| {worst:e} > {ORACLE_TOL:e}")
    })?;
    ensure(elapsed < ORACLE_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "1000 instances, {tied} with ties, max |diff| {worst:.1e} <= {ORACLE_TOL:e}, {elapsed:.2?}"
    ))
}

fn metric_sanity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..500 {
        let (rel, scores) = random_ranking_instance(&mut rng, 12);
        let n = rel.len();
        ensure(ndcg_slices(&rel, &rel, None).unwrap() == 1.0, || {
            format!("perfect {rel:?} != 1")
        })?;
        ensure(ndcg_slices(&rel, &rel, Some(3)).unwrap() == 1.0, || {
            format!("perfect@3 {rel:?} != 1")
        })?;
        let full = ndcg_slices(&rel, &scores, None).unwrap();
        for k in 1..=n + 3 {
            let at_k = ndcg_slices(&rel, &scores, Some(k)).unwrap();
            ensure((0.0..=1.0).contains(&at_k), || {
                format!("ndcg@{k} = {at_k} out of [0,1]")
            })?;
            if k >= n {
                ensure(at_k == full, || {
                    format!("ndcg@{k} {at_k} != ndcg {full} for N={n}")
                })?;
            }
        }
    }
    Ok("500 instances".into())
}

/// The single normalized dimension, computed directly from the record.
fn single_dimension(
    catalog: &Catalog,
    record: &DatasetRecord,
    dim: Dimension,
    source: &str,
) -> f64 {
    match dim {
        Dimension::Utility => record.utilities[source] / 100.0,
        Dimension::CreationDate => {
            let days = (catalog.as_of_date - record.creation_date).num_days() as f64;
            (-0.2 * days / 365.25).exp().min(1.0)
        }
        Dimension::Objects => {
            let max = catalog
                .datasets
                .iter()
                .map(|d| d.n_spatial_objects)
                .max()
                .unwrap();
            if max == 0 {
                0.0
            } else {
                record.n_spatial_objects as f64 / max as f64
            }
        }
        Dimension::Usage => {
            let max = catalog
                .datasets
                .iter()
                .map(|d| d.usage.total())
                .max()
                .unwrap();
            if max == 0 {
                0.0
            } else {
                record.usage.total() as f64 / max as f64
            }
        }
    }
}

fn special_cases() -> Outcome {
    let config = ValuationConfig::default();
    let mut worst = 0.0f64;
    for seed in 0..100 {
        let catalog = random_catalog(&mut ChaCha8Rng::seed_from_u64(seed), 20);
        let simple = rank(
            &catalog,
            &variant_weights(Method::SimpleAverage).unwrap(),
            &config,
        )
        .map_err(|e| e.to_string())?;
        let equal = rank(&catalog, &WeightVector::new(7, 7, 7, 7).unwrap(), &config)
            .map_err(|e| e.to_string())?;
        ensure(simple.ids() == equal.ids(), || {
            format!("seed {seed}: simple order differs")
        })?;
        for (a, b) in simple.entries.iter().zip(&equal.entries) {
            worst = worst.max((a.value - b.value).abs());
        }
        let source = catalog.default_utility_source().unwrap();
        for dim in Dimension::ALL {
            let uni = rank(
                &catalog,
                &variant_weights(Method::Univariate(dim)).unwrap(),
                &config,
            )
            .map_err(|e| e.to_string())?;
            let mut expected: Vec<(f64, &str)> = catalog
                .datasets
                .iter()
                .map(|r| (single_dimension(&catalog, r, dim, &source), r.id.as_str()))
                .collect();
            expected.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(b.1)));
            for (entry, (value, id)) in uni.entries.iter().zip(&expected) {
                worst = worst.max((entry.value - value).abs());
                ensure(
                    entry.dataset_id == *id || (entry.value - value).abs() <= EXACT_TOL,
                    || format!("seed {seed} {dim:?}: {} vs {id}", entry.dataset_id),
                )?;
            }
        }
    }
    ensure(worst <= EXACT_TOL, || format!("max |diff| {worst:e}"))?;
    Ok(format!(
        "100 catalogs, max |diff| {worst:.1e} <= {EXACT_TOL:e}"
    ))
}

fn currency_checks() -> Outcome {
    let day = NaiveDate::from_ymd_opt(2023, 1, 31).unwrap();
    ensure(currency(day, day, 0.2) == 1.0, || {
        "currency(age 0) != 1".into()
    })?;
    ensure(currency_for_age(0.0, 0.2) == 1.0, || {
        "currency_for_age(0) != 1".into()
    })?;
    let five = currency_for_age(5.0, 0.2);
    let diff = (five - (-1.0f64).exp()).abs();
    ensure(diff <= EXACT_TOL, || {
        format!("currency(5y) off by {diff:e}")
    })?;
    let mut prev = f64::INFINITY;
    for i in 0..100 {
        let age = i as f64 * 0.37;
        let c = currency_for_age(age, 0.2);
        ensure(c < prev, || format!("not decreasing at age {age}"))?;
        prev = c;
    }
    let mut prev = f64::INFINITY;
    for i in 0..100 {
        let created = day - chrono::Duration::days(i * 97);
        let c = currency(created, day, 0.2);
        ensure(c < prev, || format!("not decreasing at {created}"))?;
        prev = c;
    }
    Ok(format!(
        "|currency(5y) - e^-1| = {diff:.1e}, 100 ages strictly decreasing"
    ))
}

fn all_zero_rejection() -> Outcome {
    let sh2 = load_profile(&fixture("profiles/sh2.json")).map_err(|e| e.to_string())?;
    ensure(sh2.weights.is_all_zero(), || {
        "fixture sh2 is not all-zero".into()
    })?;
    ensure(
        matches!(normalize_weights(&sh2.weights), Err(Error::AllZeroWeights)),
        || "normalize_weights accepted zero weights".into(),
    )?;

    let catalog_path = fixture("catalog.json").display().to_string();
    let profile_path = fixture("profiles/sh2.json").display().to_string();
    let (code, _, err) = run_cli(&["rank", &catalog_path, "--profile", &profile_path]);
    ensure(code == 3, || format!("CLI exit {code}: {err}"))?;

    let catalog = load_catalog(&fixture("catalog.json"), None, None).map_err(|e| e.to_string())?;
    let body = serde_json::json!({"weights": {"utility": 0, "creation_date": 0, "n_objects": 0, "usage": 0}});
    let status = tokio::runtime::Runtime::new().unwrap().block_on(async {
        let req = Request::post("/api/rank")
            .header(header::CONTENT_TYPE, "application/json")
            .body(Body::from(body.to_string()))
            .unwrap();
        router(catalog.clone(), None)
            .oneshot(req)
            .await
            .unwrap()
            .status()
    });
    ensure(status == StatusCode::UNPROCESSABLE_ENTITY, || {
        format!("API status {status}")
    })?;

    let report =
        evaluate(&catalog, &[sh2], &EvaluationPlan::default()).map_err(|e| e.to_string())?;
    let groups: Vec<MethodGroup> = report.cells.iter().map(|c| c.group).collect();
    ensure(!groups.contains(&MethodGroup::Weighted), || {
        "weighted rows present".into()
    })?;
    ensure(groups.contains(&MethodGroup::SimpleAverage), || {
        "simple rows missing".into()
    })?;
    ensure(groups.contains(&MethodGroup::Univariate), || {
        "univariate rows missing".into()
    })?;
    Ok(format!(
        "CLI exit 3, API 422, report keeps {} rows without weighted",
        report.cells.len()
    ))
}

fn fixture_normalization() -> Outcome {
    let mut worst = 0.0f64;
    for (profile, expected, sum) in [
        ("sh1", [8.0, 10.0, 8.0, 5.0], 31.0),
        ("sh3", [7.0, 9.0, 9.0, 4.0], 29.0),
    ] {
        let p = load_profile(&fixture(&format!("profiles/{profile}.json")))
            .map_err(|e| e.to_string())?;
        let n = normalize_weights(&p.weights).map_err(|e| e.to_string())?;
        for (dim, e) in Dimension::ALL.iter().zip(expected) {
            worst = worst.max((n.get(*dim) - e / sum).abs());
        }
    }
    ensure(worst <= EXACT_TOL, || format!("max |diff| {worst:e}"))?;
    Ok(format!(
        "/31 and /29, max |diff| {worst:.1e} <= {EXACT_TOL:e}"
    ))
}

fn end_to_end_golden() -> Outcome {
    let catalog = fixture("catalog.json").display().to_string();
    let sh1 = fixture("profiles/sh1.json").display().to_string();
    let profiles = profile_args();
    let mut evaluate_args = vec!["evaluate", catalog.as_str()];
    evaluate_args.extend(profiles.iter().map(String::as_str));

    let start = Instant::now();
    let (rc, rank_out, _) = run_cli(&["rank", &catalog, "--profile", &sh1]);
    let (ec, eval_out, _) = run_cli(&evaluate_args);
    let elapsed = start.elapsed();

    ensure(rc == 0 && ec == 0, || format!("exit codes {rc}, {ec}"))?;
    ensure(rank_out == fixture_str("golden/rank_sh1.csv"), || {
        "rank differs from golden".into()
    })?;
    ensure(eval_out == fixture_str("golden/evaluate.csv"), || {
        "evaluate differs from golden".into()
    })?;
    ensure(elapsed < GOLDEN_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("rank + evaluate byte-identical, {elapsed:.2?}"))
}

fn report_structure() -> Outcome {
    let catalog = fixture("catalog.json").display().to_string();
    let profiles = profile_args();
    let mut args = vec!["report", catalog.as_str()];
    args.extend(profiles.iter().map(String::as_str));
    let (code, md, _) = run_cli(&args);
    ensure(code == 0, || format!("exit {code}"))?;
    ensure(md == fixture_str("golden/evaluate.md"), || {
        "markdown differs from golden".into()
    })?;

    let mut lines = md.lines();
    ensure(
        lines.next() == Some("| Stakeholder | Method | Variant | NDCG | NDCG@5 |"),
        || "header".into(),
    )?;
    ensure(
        lines.next() == Some("| --- | --- | --- | ---: | ---: |"),
        || "separator".into(),
    )?;

    // (stakeholder, method) -> rows of (variant, [(value, bold); 2])
    type Row = (String, [(f64, bool); 2]);
    type Block = ((String, String), Vec<Row>);
    let mut blocks: Vec<Block> = Vec::new();
    let mut who = String::new();
    for line in lines {
        let cols: Vec<&str> = line.trim_matches('|').split('|').map(str::trim).collect();
        ensure(cols.len() == 5, || format!("bad row {line}"))?;
        if !cols[0].is_empty() {
            who = cols[0].to_string();
        }
        if !cols[1].is_empty() {
            blocks.push(((who.clone(), cols[1].to_string()), Vec::new()));
        }
        let cell = |s: &str| -> Result<(f64, bool), String> {
            let bold = s.starts_with("**");
            let v = s
                .trim_matches('*')
                .parse::<f64>()
                .map_err(|e| format!("{s}: {e}"))?;
            Ok((v, bold))
        };
        let row = (cols[2].to_string(), [cell(cols[3])?, cell(cols[4])?]);
        blocks.last_mut().ok_or("row before any block")?.1.push(row);
    }

    let combined = ["Total Usage", "Average Usage", "Provided Utility"];
    let univariate = [
        "Utility (sh1)",
        "Average Utility",
        "Number of Spatial Objects",
        "Creation Date",
        "Total Usage",
        "Average Usage",
    ];
    let expected: BTreeMap<&str, Vec<(&str, Vec<&str>)>> = BTreeMap::from([
        (
            "sh1",
            vec![
                ("Weighted Average", combined.to_vec()),
                ("Simple Average", combined.to_vec()),
                ("Univariate", univariate.to_vec()),
            ],
        ),
        // sh2 has all-zero sliders and no provided utility column
        (
            "sh2",
            vec![
                ("Simple Average", combined[..2].to_vec()),
                ("Univariate", univariate.to_vec()),
            ],
        ),
        (
            "sh3",
            vec![
                ("Weighted Average", combined[..2].to_vec()),
                ("Simple Average", combined[..2].to_vec()),
                ("Univariate", univariate.to_vec()),
            ],
        ),
    ]);
    let actual: Vec<(&str, &str, Vec<&str>)> = blocks
        .iter()
        .map(|((w, m), rows)| {
            (
                w.as_str(),
                m.as_str(),
                rows.iter().map(|r| r.0.as_str()).collect(),
            )
        })
        .collect();
    let wanted: Vec<(&str, &str, Vec<&str>)> = expected
        .iter()
        .flat_map(|(w, groups)| groups.iter().map(move |(m, v)| (*w, *m, v.clone())))
        .collect();
    ensure(actual == wanted, || format!("taxonomy {actual:?}"))?;

    for ((w, m), rows) in &blocks {
        for col in 0..2 {
            let best = rows
                .iter()
                .map(|r| r.1[col].0)
                .fold(f64::NEG_INFINITY, f64::max);
            for (variant, cells) in rows {
                let (v, bold) = cells[col];
                ensure(bold == (v == best), || {
                    format!("{w}/{m}/{variant} column {col} bolding")
                })?;
            }
        }
    }
    Ok(format!(
        "{} blocks, {} rows, best cells bold per block",
        blocks.len(),
        blocks.iter().map(|b| b.1.len()).sum::<usize>()
    ))
}
