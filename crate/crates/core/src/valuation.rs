//! Personalized data value.
//!
//! Each dataset is reduced to four normalized dimensions:
//!
//! * utility: the raw 0-100 expert score divided by 100,
//! * currency: `exp(-decline_rate * age_years)` of the creation date,
//! * objects: spatial object count divided by the catalog maximum,
//! * usage: total or average monthly usage divided by the catalog maximum.
//!
//! The data value is the convex combination of those dimensions under the
//! stakeholder's slider weights, each divided by the sum of all four.

use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, DatasetRecord, UsageSeries};
use crate::error::{Error, Result};

pub const DEFAULT_DECLINE_RATE: f64 = 0.2;
pub const MAX_SLIDER: u8 = 10;
const DAYS_PER_YEAR: f64 = 365.25;

/// One of the four value dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimension {
    Utility,
    CreationDate,
    #[serde(rename = "n_objects")]
    Objects,
    Usage,
}

impl Dimension {
    pub const ALL: [Dimension; 4] = [
        Dimension::Utility,
        Dimension::CreationDate,
        Dimension::Objects,
        Dimension::Usage,
    ];

    pub fn key(&self) -> &'static str {
        match self {
            Dimension::Utility => "utility",
            Dimension::CreationDate => "creation_date",
            Dimension::Objects => "n_objects",
            Dimension::Usage => "usage",
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Dimension {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Dimension::ALL
            .into_iter()
            .find(|d| d.key() == s)
            .ok_or_else(|| {
                format!(
                    "unknown dimension {s:?} (expected utility, creation_date, n_objects or usage)"
                )
            })
    }
}

/// Raw slider positions, each an integer in `0..=10`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct WeightVector {
    utility: u8,
    creation_date: u8,
    n_objects: u8,
    usage: u8,
}

impl WeightVector {
    pub fn new(utility: u8, creation_date: u8, n_objects: u8, usage: u8) -> Result<Self> {
        let w = WeightVector {
            utility,
            creation_date,
            n_objects,
            usage,
        };
        for d in Dimension::ALL {
            if w.get(d) > MAX_SLIDER {
                return Err(Error::InvalidWeight {
                    field: d.key().to_string(),
                    value: w.get(d).to_string(),
                });
            }
        }
        Ok(w)
    }

    /// All sliders at the same position.
    pub fn equal() -> Self {
        WeightVector::new(1, 1, 1, 1).expect("in range")
    }

    pub fn one_hot(dim: Dimension) -> Self {
        let mut w = WeightVector::new(0, 0, 0, 0).expect("in range");
        *w.slot(dim) = 1;
        w
    }

    pub fn get(&self, dim: Dimension) -> u8 {
        match dim {
            Dimension::Utility => self.utility,
            Dimension::CreationDate => self.creation_date,
            Dimension::Objects => self.n_objects,
            Dimension::Usage => self.usage,
        }
    }

    fn slot(&mut self, dim: Dimension) -> &mut u8 {
        match dim {
            Dimension::Utility => &mut self.utility,
            Dimension::CreationDate => &mut self.creation_date,
            Dimension::Objects => &mut self.n_objects,
            Dimension::Usage => &mut self.usage,
        }
    }

    pub fn is_all_zero(&self) -> bool {
        Dimension::ALL.iter().all(|d| self.get(*d) == 0)
    }

    pub fn sum(&self) -> u32 {
        Dimension::ALL.iter().map(|d| u32::from(self.get(*d))).sum()
    }

    /// Parses `{"utility": 8, "creation_date": 10, "n_objects": 8, "usage": 5}`.
    /// Every key is required and every value must be an integer literal in
    /// `0..=10`.
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let obj = value.as_object().ok_or_else(|| Error::InvalidWeight {
            field: "weights".into(),
            value: value.to_string(),
        })?;
        if let Some(k) = obj.keys().find(|k| k.parse::<Dimension>().is_err()) {
            return Err(Error::InvalidWeight {
                field: k.clone(),
                value: "unknown weight name".into(),
            });
        }
        let mut w = WeightVector::new(0, 0, 0, 0)?;
        for d in Dimension::ALL {
            let raw = obj.get(d.key()).ok_or_else(|| Error::InvalidWeight {
                field: d.key().into(),
                value: "missing".into(),
            })?;
            let v = raw
                .as_u64()
                .filter(|v| *v <= u64::from(MAX_SLIDER))
                .ok_or_else(|| Error::InvalidWeight {
                    field: d.key().into(),
                    value: raw.to_string(),
                })?;
            *w.slot(d) = v as u8;
        }
        Ok(w)
    }
}

/// `utility,creation_date,n_objects,usage`, e.g. `8,10,8,5`.
impl FromStr for WeightVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::InvalidWeight {
                field: "weights".into(),
                value: format!("{s:?} (expected four comma-separated values)"),
            });
        }
        let mut vals = [0u8; 4];
        for ((slot, part), dim) in vals.iter_mut().zip(&parts).zip(Dimension::ALL) {
            *slot = part
                .parse::<u8>()
                .ok()
                .filter(|v| *v <= MAX_SLIDER)
                .ok_or_else(|| Error::InvalidWeight {
                    field: dim.key().into(),
                    value: part.to_string(),
                })?;
        }
        WeightVector::new(vals[0], vals[1], vals[2], vals[3])
    }
}

/// Slider weights divided by their sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedWeights {
    pub utility: f64,
    pub creation_date: f64,
    pub n_objects: f64,
    pub usage: f64,
}

impl NormalizedWeights {
    pub fn get(&self, dim: Dimension) -> f64 {
        match dim {
            Dimension::Utility => self.utility,
            Dimension::CreationDate => self.creation_date,
            Dimension::Objects => self.n_objects,
            Dimension::Usage => self.usage,
        }
    }
}

/// Fails with [`Error::AllZeroWeights`] when every slider is at zero.
pub fn normalize_weights(w: &WeightVector) -> Result<NormalizedWeights> {
    if w.is_all_zero() {
        return Err(Error::AllZeroWeights);
    }
    let total = f64::from(w.sum());
    let part = |d| f64::from(w.get(d)) / total;
    Ok(NormalizedWeights {
        utility: part(Dimension::Utility),
        creation_date: part(Dimension::CreationDate),
        n_objects: part(Dimension::Objects),
        usage: part(Dimension::Usage),
    })
}

/// Per-dataset dimension values, all in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionVector {
    pub utility: f64,
    pub currency: f64,
    pub objects: f64,
    pub usage: f64,
}

impl DimensionVector {
    pub fn get(&self, dim: Dimension) -> f64 {
        match dim {
            Dimension::Utility => self.utility,
            Dimension::CreationDate => self.currency,
            Dimension::Objects => self.objects,
            Dimension::Usage => self.usage,
        }
    }
}

/// Exponential currency decay. Age is measured in years of 365.25 days;
/// creation dates after `as_of` yield 1.
pub fn currency(creation_date: NaiveDate, as_of: NaiveDate, decline_rate: f64) -> f64 {
    let age_years = (as_of - creation_date).num_days() as f64 / DAYS_PER_YEAR;
    currency_for_age(age_years, decline_rate)
}

/// Currency for an age given directly in years. Negative ages yield 1.
pub fn currency_for_age(age_years: f64, decline_rate: f64) -> f64 {
    (-decline_rate * age_years).exp().min(1.0)
}

/// Divides each value by the maximum. An all-zero input maps to all zeros.
pub fn max_normalize(values: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let max = values.iter().copied().fold(0.0, f64::max);
    Ok(values
        .iter()
        .map(|v| if max > 0.0 { v / max } else { 0.0 })
        .collect())
}

pub fn normalize_utility(raw: f64) -> Result<f64> {
    if !(0.0..=100.0).contains(&raw) {
        return Err(Error::UtilityOutOfRange(raw));
    }
    Ok(raw / 100.0)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UsageMode {
    #[default]
    Total,
    Average,
}

impl FromStr for UsageMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "total" => Ok(UsageMode::Total),
            "average" => Ok(UsageMode::Average),
            _ => Err(format!(
                "unknown usage mode {s:?} (expected total or average)"
            )),
        }
    }
}

impl fmt::Display for UsageMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UsageMode::Total => "total",
            UsageMode::Average => "average",
        })
    }
}

/// Sum of monthly counts, or their mean over the months present. An empty
/// series aggregates to zero either way.
pub fn aggregate_usage(series: &UsageSeries, mode: UsageMode) -> f64 {
    if series.is_empty() {
        return 0.0;
    }
    let total = series.total() as f64;
    match mode {
        UsageMode::Total => total,
        UsageMode::Average => total / series.len() as f64,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValuationConfig {
    /// Yearly currency decline rate.
    pub decline_rate: f64,
    pub usage_mode: UsageMode,
    /// `None` picks [`Catalog::default_utility_source`].
    pub utility_source: Option<String>,
    /// `None` uses the catalog's as-of date.
    pub as_of: Option<NaiveDate>,
}

impl Default for ValuationConfig {
    fn default() -> Self {
        ValuationConfig {
            decline_rate: DEFAULT_DECLINE_RATE,
            usage_mode: UsageMode::Total,
            utility_source: None,
            as_of: None,
        }
    }
}

/// Catalog-wide normalization constants resolved against one config.
#[derive(Debug, Clone)]
pub struct Valuator {
    as_of: NaiveDate,
    decline_rate: f64,
    usage_mode: UsageMode,
    utility_source: Option<String>,
    max_objects: f64,
    max_usage: f64,
}

impl Valuator {
    pub fn new(catalog: &Catalog, config: &ValuationConfig) -> Result<Self> {
        if catalog.is_empty() {
            return Err(Error::EmptyCatalog);
        }
        if !(config.decline_rate.is_finite() && config.decline_rate > 0.0) {
            return Err(Error::InvalidDeclineRate(config.decline_rate));
        }
        let utility_source = match &config.utility_source {
            Some(s) if !catalog.has_utility_source(s) => {
                return Err(Error::UnknownUtilitySource(s.clone()))
            }
            Some(s) => Some(s.clone()),
            None => catalog.default_utility_source(),
        };
        let max_objects = catalog
            .datasets
            .iter()
            .map(|d| d.n_spatial_objects as f64)
            .fold(0.0, f64::max);
        let max_usage = catalog
            .datasets
            .iter()
            .map(|d| aggregate_usage(&d.usage, config.usage_mode))
            .fold(0.0, f64::max);
        Ok(Valuator {
            as_of: config.as_of.unwrap_or(catalog.as_of_date),
            decline_rate: config.decline_rate,
            usage_mode: config.usage_mode,
            utility_source,
            max_objects,
            max_usage,
        })
    }

    pub fn utility_source(&self) -> Option<&str> {
        self.utility_source.as_deref()
    }

    pub fn as_of(&self) -> NaiveDate {
        self.as_of
    }

    /// Computes the dimension vector of one record. A missing utility is an
    /// error only when `require_utility` is set; otherwise it reads as 0.
    pub fn dimensions(
        &self,
        record: &DatasetRecord,
        require_utility: bool,
    ) -> Result<DimensionVector> {
        let raw_utility = self
            .utility_source
            .as_deref()
            .and_then(|s| record.utilities.get(s).copied());
        let utility = match raw_utility {
            Some(raw) => normalize_utility(raw)?,
            None if require_utility => {
                return Err(Error::MissingDimension {
                    dataset: record.id.clone(),
                    source_label: self.utility_source.clone().unwrap_or_default(),
                })
            }
            None => 0.0,
        };
        let ratio = |v: f64, max: f64| if max > 0.0 { v / max } else { 0.0 };
        Ok(DimensionVector {
            utility,
            currency: currency(record.creation_date, self.as_of, self.decline_rate),
            objects: ratio(record.n_spatial_objects as f64, self.max_objects),
            usage: ratio(
                aggregate_usage(&record.usage, self.usage_mode),
                self.max_usage,
            ),
        })
    }
}

pub fn dimension_vector(
    record: &DatasetRecord,
    catalog: &Catalog,
    config: &ValuationConfig,
    weights: &NormalizedWeights,
) -> Result<DimensionVector> {
    Valuator::new(catalog, config)?.dimensions(record, weights.utility > 0.0)
}

/// Weighted sum of the dimensions. Clamped to `[0, 1]` to absorb rounding in
/// the weight sum.
pub fn data_value(dims: &DimensionVector, weights: &NormalizedWeights) -> f64 {
    let v = weights.utility * dims.utility
        + weights.usage * dims.usage
        + weights.creation_date * dims.currency
        + weights.n_objects * dims.objects;
    v.clamp(0.0, 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DataValue {
    pub dataset_id: String,
    pub value: f64,
    pub dimensions: DimensionVector,
}

/// Datasets in descending value order, ties broken by ascending id.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedList {
    pub weights: NormalizedWeights,
    pub entries: Vec<DataValue>,
}

impl RankedList {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn ids(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.dataset_id.as_str()).collect()
    }

    pub fn value_of(&self, id: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.dataset_id == id)
            .map(|e| e.value)
    }

    /// `rank,dataset_id,data_value` with six decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("rank,dataset_id,data_value\n");
        for (i, e) in self.entries.iter().enumerate() {
            out.push_str(&format!("{},{},{:.6}\n", i + 1, e.dataset_id, e.value));
        }
        out
    }
}

pub fn rank(
    catalog: &Catalog,
    weights: &WeightVector,
    config: &ValuationConfig,
) -> Result<RankedList> {
    let weights = normalize_weights(weights)?;
    let valuator = Valuator::new(catalog, config)?;
    let require_utility = weights.utility > 0.0;
    let mut entries = catalog
        .datasets
        .iter()
        .map(|record| {
            let dimensions = valuator.dimensions(record, require_utility)?;
            Ok(DataValue {
                dataset_id: record.id.clone(),
                value: data_value(&dimensions, &weights),
                dimensions,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    entries.sort_by(|a, b| {
        b.value
            .total_cmp(&a.value)
            .then_with(|| a.dataset_id.cmp(&b.dataset_id))
    });
    Ok(RankedList { weights, entries })
}

/// How slider weights are chosen for a ranking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// The stakeholder's own sliders.
    Weighted,
    /// All sliders equal.
    SimpleAverage,
    /// A single non-zero slider.
    Univariate(Dimension),
}

impl Method {
    /// Weights for this method, given the stakeholder's own sliders.
    pub fn weights(&self, own: &WeightVector) -> WeightVector {
        variant_weights(*self).unwrap_or(*own)
    }
}

/// Fixed weights of the simple-average and univariate methods; `None` for
/// [`Method::Weighted`], which depends on the stakeholder.
pub fn variant_weights(method: Method) -> Option<WeightVector> {
    match method {
        Method::Weighted => None,
        Method::SimpleAverage => Some(WeightVector::equal()),
        Method::Univariate(d) => Some(WeightVector::one_hot(d)),
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "weighted" => Ok(Method::Weighted),
            "simple" | "simple_average" => Ok(Method::SimpleAverage),
            _ => match s.strip_prefix("univariate:") {
                Some(dim) => Ok(Method::Univariate(dim.parse()?)),
                None => Err(format!(
                    "unknown method {s:?} (expected weighted, simple or univariate:<dimension>)"
                )),
            },
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Weighted => f.write_str("weighted"),
            Method::SimpleAverage => f.write_str("simple"),
            Method::Univariate(d) => write!(f, "univariate:{d}"),
        }
    }
}
