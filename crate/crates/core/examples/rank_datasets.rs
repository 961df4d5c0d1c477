//! Rank the fixture catalog for one stakeholder's slider settings.
//!
//! cargo run --example rank_datasets -- [U,C,O,S]

use std::path::Path;

use valuerank::catalog::load_catalog;
use valuerank::{rank, ValuationConfig, WeightVector};

fn main() -> valuerank::Result<()> {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let catalog = load_catalog(&fixtures.join("catalog.json"), None, None)?;

    let weights: WeightVector = std::env::args()
        .nth(1)
        .as_deref()
        .unwrap_or("8,10,8,5")
        .parse()?;
    let ranked = rank(&catalog, &weights, &ValuationConfig::default())?;

    println!("weights {:?}", ranked.weights);
    println!("{:>4}  {:<6}  {:<28}  {:>7}", "rank", "id", "name", "value");
    for (i, entry) in ranked.entries.iter().enumerate() {
        let name = &catalog
            .get(&entry.dataset_id)
            .expect("ranked ids come from the catalog")
            .name;
        println!(
            "{:>4}  {:<6}  {:<28}  {:>7.4}",
            i + 1,
            entry.dataset_id,
            name,
            entry.value
        );
    }
    Ok(())
}
