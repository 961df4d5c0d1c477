//! Compare the weighted, simple-average and univariate rankings of the same
//! catalog side by side (top five of each).
//!
//! cargo run --example slider_variants

use std::path::Path;

use valuerank::catalog::load_catalog;
use valuerank::valuation::{Dimension, Method};
use valuerank::{rank, UsageMode, ValuationConfig, WeightVector};

fn main() -> valuerank::Result<()> {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let catalog = load_catalog(&fixtures.join("catalog.json"), None, None)?;
    let own = WeightVector::new(8, 10, 8, 5)?;

    let methods = std::iter::once(Method::Weighted)
        .chain(std::iter::once(Method::SimpleAverage))
        .chain(Dimension::ALL.into_iter().map(Method::Univariate));
    for method in methods {
        for usage_mode in [UsageMode::Total, UsageMode::Average] {
            let config = ValuationConfig {
                usage_mode,
                ..ValuationConfig::default()
            };
            let ranked = rank(&catalog, &method.weights(&own), &config)?;
            let top: Vec<&str> = ranked.ids().into_iter().take(5).collect();
            println!(
                "{:<26} {:<8} {}",
                method.to_string(),
                format!("{usage_mode:?}"),
                top.join(" ")
            );
        }
    }
    Ok(())
}
