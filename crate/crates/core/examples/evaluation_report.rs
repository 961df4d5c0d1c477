//! Evaluate every method variant against the fixture stakeholders' ideal
//! rankings and print the Markdown report.
//!
//! cargo run --example evaluation_report -- [k]

use std::path::Path;

use valuerank::catalog::{load_catalog, load_profile};
use valuerank::{evaluate, EvaluationPlan};

fn main() -> valuerank::Result<()> {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let catalog = load_catalog(&fixtures.join("catalog.json"), None, None)?;
    let profiles = ["sh1", "sh2", "sh3"]
        .iter()
        .map(|p| load_profile(&fixtures.join("profiles").join(format!("{p}.json"))))
        .collect::<valuerank::Result<Vec<_>>>()?;

    let k = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(5);
    let report = evaluate(
        &catalog,
        &profiles,
        &EvaluationPlan {
            k,
            ..EvaluationPlan::default()
        },
    )?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    print!("{}", report.to_markdown());

    for who in report.stakeholders() {
        let best = report
            .cells
            .iter()
            .filter(|c| c.stakeholder == who)
            .max_by(|a, b| a.ndcg_at_k.total_cmp(&b.ndcg_at_k))
            .expect("every listed stakeholder has cells");
        println!(
            "\n{who}: best NDCG@{k} {:.4} from {} / {}",
            best.ndcg_at_k,
            best.group.label(),
            best.variant_label
        );
    }
    Ok(())
}
