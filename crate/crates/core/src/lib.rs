//! Personalized dataset ranking from catalog metadata.
//!
//! A stakeholder rates four metadata dimensions (utility, creation date,
//! number of spatial objects, usage) on integer sliders from 0 to 10. Every
//! dataset in a catalog is scored by the weighted average of its normalized
//! dimensions, datasets are ranked by that score, and rankings are compared
//! to the stakeholder's own ideal ordering with tie-aware NDCG and NDCG@k.
//!
//! ```
//! use valuerank::{catalog, valuation};
//!
//! let json = r#"{"as_of_date":"2023-01-31","datasets":[
//!   {"id":"roads","name":"Roads","creation_date":"2022-06-01","n_spatial_objects":900,
//!    "usage":[{"month":"2022-07","count":12}],"utilities":{"sh1":80}},
//!   {"id":"rivers","name":"Rivers","creation_date":"2009-02-11","n_spatial_objects":300,
//!    "utilities":{"sh1":60}}]}"#;
//! let cat = catalog::parse_catalog_json(json.as_bytes()).unwrap();
//! let weights = valuation::WeightVector::new(8, 10, 8, 5).unwrap();
//! let ranked = valuation::rank(&cat, &weights, &Default::default()).unwrap();
//! assert_eq!(ranked.ids(), vec!["roads", "rivers"]);
//! ```

pub mod catalog;
pub mod cli;
mod error;
pub mod evaluation;
pub mod report;
pub mod service;
pub mod valuation;

pub use catalog::{Catalog, DatasetRecord, StakeholderProfile, UsageSeries, Violation};
pub use error::{Error, Result, SourceFormat};
pub use evaluation::{evaluate, ndcg, EvaluationPlan, RelevanceVector};
pub use report::{EvaluationCell, EvaluationReport, MethodGroup};
pub use valuation::{
    normalize_weights, rank, DimensionVector, Method, NormalizedWeights, RankedList, UsageMode,
    ValuationConfig, WeightVector,
};
