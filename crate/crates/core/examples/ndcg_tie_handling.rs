//! NDCG when the scored ranking contains ties: tied items share the mean
//! gain of the positions they occupy, so the result does not depend on how
//! the tie happens to be broken.
//!
//! cargo run --example ndcg_tie_handling

use std::collections::BTreeMap;

use valuerank::evaluation::{dcg_slices, ndcg_slices};
use valuerank::{ndcg, RelevanceVector};

fn main() -> valuerank::Result<()> {
    let relevance = [3.0, 2.0, 1.0, 0.0];

    let distinct = [4.0, 3.0, 2.0, 1.0];
    let tied_top = [1.0, 1.0, 0.0, 0.0];
    let reversed = [1.0, 2.0, 3.0, 4.0];
    for (label, scores) in [
        ("perfect", distinct),
        ("tied pairs", tied_top),
        ("reversed", reversed),
    ] {
        println!(
            "{label:<11} DCG {:.4}  NDCG {:.4}  NDCG@2 {:.4}",
            dcg_slices(&relevance, &scores, None)?,
            ndcg_slices(&relevance, &scores, None)?,
            ndcg_slices(&relevance, &scores, Some(2))?,
        );
    }

    // The same metric keyed by dataset id, with relevance taken from an
    // ideal ordering (first place gets the highest relevance).
    let ideal = ["ds-b", "ds-a", "ds-c"];
    let relevance = RelevanceVector::from_ranking(&ideal)?;
    let scores: BTreeMap<String, f64> = [("ds-a", 0.9), ("ds-b", 0.9), ("ds-c", 0.1)]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    println!(
        "ideal {ideal:?}, a and b tied: NDCG {:.4}",
        ndcg(&relevance, &scores, None)?
    );
    Ok(())
}
