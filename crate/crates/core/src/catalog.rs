//! Catalog data model, file parsing and validation.
//!
//! Two on-disk layouts are accepted. The canonical one is a single JSON
//! document:
//!
//! ```json
//! {"as_of_date": "2023-01-31",
//!  "datasets": [{"id": "ds-01", "name": "Roads", "creation_date": "2017-06-01",
//!                "n_spatial_objects": 12345,
//!                "usage": [{"month": "2017-01", "count": 4}],
//!                "utilities": {"sh1": 80}}]}
//! ```
//!
//! The spreadsheet layout is a dataset CSV (`id,name,creation_date,
//! n_spatial_objects,utility:<label>...`) plus an optional usage CSV
//! (`id,month,count`).
//!
//! When a record carries two or more utility sources, their mean is stored
//! under the reserved label [`AVERAGE_UTILITY`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result, SourceFormat};
use crate::valuation::WeightVector;

/// Reserved utility label holding the per-record mean of the other sources.
pub const AVERAGE_UTILITY: &str = "avg";

const AVG_TOLERANCE: f64 = 1e-9;

/// A calendar month, `YYYY-MM`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct YearMonth {
    year: i32,
    month: u32,
}

impl YearMonth {
    pub fn new(year: i32, month: u32) -> Option<Self> {
        (1..=12)
            .contains(&month)
            .then_some(YearMonth { year, month })
    }

    pub fn year(&self) -> i32 {
        self.year
    }

    pub fn month(&self) -> u32 {
        self.month
    }

    pub fn last_day(&self) -> NaiveDate {
        let (y, m) = if self.month == 12 {
            (self.year + 1, 1)
        } else {
            (self.year, self.month + 1)
        };
        NaiveDate::from_ymd_opt(y, m, 1)
            .and_then(|d| d.pred_opt())
            .expect("month bounds are valid")
    }
}

impl fmt::Display for YearMonth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for YearMonth {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let bad = || format!("invalid month {s:?}, expected YYYY-MM");
        let (y, m) = s.split_once('-').ok_or_else(bad)?;
        if y.len() != 4 || m.len() != 2 {
            return Err(bad());
        }
        let year = y.parse().map_err(|_| bad())?;
        let month = m.parse().map_err(|_| bad())?;
        YearMonth::new(year, month).ok_or_else(bad)
    }
}

impl Serialize for YearMonth {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for YearMonth {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UsageEntry {
    pub month: YearMonth,
    pub count: u64,
}

/// Monthly usage counts. Months absent from the series are unobserved, not zero.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UsageSeries {
    pub entries: Vec<UsageEntry>,
}

impl UsageSeries {
    pub fn new(entries: Vec<UsageEntry>) -> Self {
        UsageSeries { entries }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|e| e.count).sum()
    }

    fn is_strictly_increasing(&self) -> bool {
        self.entries.windows(2).all(|w| w[0].month < w[1].month)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetRecord {
    pub id: String,
    pub name: String,
    pub creation_date: NaiveDate,
    pub n_spatial_objects: u64,
    pub usage: UsageSeries,
    /// Raw utility scores in `[0, 100]`, keyed by source label.
    pub utilities: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Catalog {
    /// The date treated as "now" when computing dataset age.
    pub as_of_date: NaiveDate,
    pub datasets: Vec<DatasetRecord>,
}

impl Catalog {
    pub fn len(&self) -> usize {
        self.datasets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.datasets.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&DatasetRecord> {
        self.datasets.iter().find(|d| d.id == id)
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.datasets.iter().map(|d| d.id.as_str())
    }

    /// Utility source labels present on any record, sorted, with
    /// [`AVERAGE_UTILITY`] last.
    pub fn utility_sources(&self) -> Vec<String> {
        let labels: BTreeSet<&str> = self
            .datasets
            .iter()
            .flat_map(|d| d.utilities.keys().map(String::as_str))
            .collect();
        let mut out: Vec<String> = labels
            .iter()
            .filter(|l| **l != AVERAGE_UTILITY)
            .map(|l| l.to_string())
            .collect();
        if labels.contains(AVERAGE_UTILITY) {
            out.push(AVERAGE_UTILITY.to_string());
        }
        out
    }

    pub fn has_utility_source(&self, label: &str) -> bool {
        self.datasets
            .iter()
            .any(|d| d.utilities.contains_key(label))
    }

    /// The utility source used when none is requested: the average if the
    /// catalog has one, otherwise the first label alphabetically.
    pub fn default_utility_source(&self) -> Option<String> {
        let sources = self.utility_sources();
        if sources.iter().any(|s| s == AVERAGE_UTILITY) {
            return Some(AVERAGE_UTILITY.to_string());
        }
        sources.into_iter().next()
    }

    pub fn with_as_of(mut self, as_of: NaiveDate) -> Self {
        self.as_of_date = as_of;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("catalog serializes")
    }

    /// Serializes to the spreadsheet layout: `(datasets_csv, usage_csv)`.
    pub fn to_csv(&self) -> (String, String) {
        let sources = self.utility_sources();
        let mut datasets = csv::Writer::from_writer(Vec::new());
        let mut header = vec![
            "id".to_string(),
            "name".to_string(),
            "creation_date".to_string(),
            "n_spatial_objects".to_string(),
        ];
        header.extend(sources.iter().map(|s| format!("utility:{s}")));
        datasets.write_record(&header).expect("in-memory write");
        for d in &self.datasets {
            let mut row = vec![
                d.id.clone(),
                d.name.clone(),
                d.creation_date.to_string(),
                d.n_spatial_objects.to_string(),
            ];
            row.extend(
                sources
                    .iter()
                    .map(|s| d.utilities.get(s).map(f64::to_string).unwrap_or_default()),
            );
            datasets.write_record(&row).expect("in-memory write");
        }

        let mut usage = csv::Writer::from_writer(Vec::new());
        usage
            .write_record(["id", "month", "count"])
            .expect("in-memory write");
        for d in &self.datasets {
            for e in &d.usage.entries {
                usage
                    .write_record([d.id.clone(), e.month.to_string(), e.count.to_string()])
                    .expect("in-memory write");
            }
        }
        let finish = |w: csv::Writer<Vec<u8>>| {
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
        };
        (finish(datasets), finish(usage))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// A broken catalog rule, located by record id and field.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Violation {
    pub record_id: String,
    pub field: String,
    pub rule: String,
    pub severity: Severity,
}

impl Violation {
    fn error(record_id: &str, field: impl Into<String>, rule: impl Into<String>) -> Self {
        Violation {
            record_id: record_id.to_string(),
            field: field.into(),
            rule: rule.into(),
            severity: Severity::Error,
        }
    }

    fn warning(record_id: &str, field: impl Into<String>, rule: impl Into<String>) -> Self {
        Violation {
            severity: Severity::Warning,
            ..Violation::error(record_id, field, rule)
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        let id = if self.record_id.is_empty() {
            "<catalog>"
        } else {
            &self.record_id
        };
        write!(f, "{sev}: {id}: {}: {}", self.field, self.rule)
    }
}

fn sort_violations(v: &mut [Violation]) {
    v.sort_by(|a, b| (&a.record_id, &a.field, &a.rule).cmp(&(&b.record_id, &b.field, &b.rule)));
}

/// Checks every catalog invariant. Violations come back ordered by record id,
/// then field name.
pub fn validate_catalog(catalog: &Catalog) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for d in &catalog.datasets {
        if d.id.is_empty() {
            out.push(Violation::error(&d.id, "id", "id must be non-empty"));
        } else if !seen.insert(d.id.as_str()) {
            out.push(Violation::error(&d.id, "id", "duplicate id"));
        }
        for (label, &score) in &d.utilities {
            if !(0.0..=100.0).contains(&score) {
                out.push(Violation::error(
                    &d.id,
                    format!("utilities.{label}"),
                    "utility out of range [0,100]",
                ));
            }
        }
        if !d.usage.is_strictly_increasing() {
            out.push(Violation::error(
                &d.id,
                "usage",
                "usage months not strictly increasing",
            ));
        }
        if d.creation_date > catalog.as_of_date {
            out.push(Violation::warning(
                &d.id,
                "creation_date",
                "creation date in the future",
            ));
        }
    }
    sort_violations(&mut out);
    out
}

/// Parses a catalog from a single stream. CSV input carries no usage and no
/// as-of date; use [`parse_catalog_csv`] to supply them.
pub fn parse_catalog<R: Read>(source: R, format: SourceFormat) -> Result<Catalog> {
    match format {
        SourceFormat::Json => parse_catalog_json(source),
        SourceFormat::Csv => parse_catalog_csv(source, None::<&[u8]>, None),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    as_of_date: String,
    datasets: Vec<RawRecord>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecord {
    id: String,
    #[serde(default)]
    name: String,
    creation_date: String,
    n_spatial_objects: i64,
    #[serde(default)]
    usage: Vec<RawUsage>,
    #[serde(default)]
    utilities: BTreeMap<String, f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawUsage {
    month: String,
    count: i64,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse {
        format: SourceFormat::Json,
        line: e.line() as u64,
        column: e.column() as u64,
        message: e.to_string(),
    }
}

pub fn parse_catalog_json<R: Read>(source: R) -> Result<Catalog> {
    let raw: RawCatalog = serde_json::from_reader(source).map_err(json_error)?;
    let mut violations = Vec::new();
    let as_of = parse_date(&raw.as_of_date, "", "as_of_date", &mut violations);
    let records = raw
        .datasets
        .into_iter()
        .filter_map(|r| {
            let usage = r
                .usage
                .into_iter()
                .filter_map(|u| convert_usage(&r.id, &u.month, u.count, &mut violations))
                .collect();
            convert_record(
                r.id,
                r.name,
                &r.creation_date,
                r.n_spatial_objects,
                UsageSeries::new(usage),
                r.utilities,
                &mut violations,
            )
        })
        .collect();
    finish(as_of, records, violations)
}

/// Parses the spreadsheet layout. Without `as_of`, the as-of date is the
/// latest date the data mentions: the newest creation date or the last day
/// of the newest usage month.
pub fn parse_catalog_csv<R: Read, U: Read>(
    datasets: R,
    usage: Option<U>,
    as_of: Option<NaiveDate>,
) -> Result<Catalog> {
    let mut violations = Vec::new();
    let mut usage_by_id: BTreeMap<String, Vec<UsageEntry>> = BTreeMap::new();
    if let Some(usage) = usage {
        let mut reader = csv::Reader::from_reader(usage);
        expect_headers(&mut reader, &["id", "month", "count"])?;
        for row in reader.records() {
            let row = row.map_err(csv_error)?;
            let line = row_line(&row);
            let id = row.get(0).unwrap_or_default();
            let count = parse_int(row.get(2).unwrap_or_default(), line, 3)?;
            if let Some(e) =
                convert_usage(id, row.get(1).unwrap_or_default(), count, &mut violations)
            {
                usage_by_id.entry(id.to_string()).or_default().push(e);
            }
        }
    }

    let mut reader = csv::Reader::from_reader(datasets);
    let headers = reader.headers().map_err(csv_error)?.clone();
    let required = ["id", "name", "creation_date", "n_spatial_objects"];
    if headers.len() < required.len() || headers.iter().zip(required).any(|(h, r)| h != r) {
        return Err(header_error(&required.join(","), &headers));
    }
    let mut labels = Vec::new();
    for (i, h) in headers.iter().enumerate().skip(required.len()) {
        match h.strip_prefix("utility:") {
            Some(label) if !label.is_empty() => labels.push(label.to_string()),
            _ => {
                return Err(Error::Parse {
                    format: SourceFormat::Csv,
                    line: 1,
                    column: i as u64 + 1,
                    message: format!("unexpected column {h:?}, expected utility:<label>"),
                })
            }
        }
    }

    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(csv_error)?;
        let line = row_line(&row);
        let id = row.get(0).unwrap_or_default().to_string();
        let objects = parse_int(row.get(3).unwrap_or_default(), line, 4)?;
        let mut utilities = BTreeMap::new();
        for (j, label) in labels.iter().enumerate() {
            let cell = row.get(required.len() + j).unwrap_or_default().trim();
            if cell.is_empty() {
                continue;
            }
            let value = cell.parse::<f64>().map_err(|_| Error::Parse {
                format: SourceFormat::Csv,
                line,
                column: (required.len() + j + 1) as u64,
                message: format!("utility {cell:?} is not a number"),
            })?;
            utilities.insert(label.clone(), value);
        }
        let usage = UsageSeries::new(usage_by_id.remove(&id).unwrap_or_default());
        if let Some(r) = convert_record(
            id,
            row.get(1).unwrap_or_default().to_string(),
            row.get(2).unwrap_or_default(),
            objects,
            usage,
            utilities,
            &mut violations,
        ) {
            records.push(r);
        }
    }
    for id in usage_by_id.keys() {
        violations.push(Violation::error(
            id,
            "usage",
            "usage rows for unknown dataset",
        ));
    }

    let as_of = as_of.or_else(|| {
        records
            .iter()
            .map(|r| r.creation_date)
            .chain(
                records
                    .iter()
                    .filter_map(|r| r.usage.entries.last().map(|e| e.month.last_day())),
            )
            .max()
    });
    let as_of = match as_of {
        Some(d) => Some(d),
        None => {
            violations.push(Violation::error(
                "",
                "as_of_date",
                "cannot infer as-of date from an empty catalog",
            ));
            None
        }
    };
    finish(as_of, records, violations)
}

/// Loads a catalog file, choosing the format by extension (`.csv` or JSON
/// otherwise). `usage` is the companion usage CSV for spreadsheet catalogs.
pub fn load_catalog(
    path: &Path,
    usage: Option<&Path>,
    as_of: Option<NaiveDate>,
) -> Result<Catalog> {
    let is_csv = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let file = std::fs::File::open(path)?;
    let catalog = if is_csv {
        let usage = usage.map(std::fs::File::open).transpose()?;
        parse_catalog_csv(file, usage, as_of)?
    } else {
        parse_catalog_json(file)?
    };
    Ok(match as_of {
        Some(d) => catalog.with_as_of(d),
        None => catalog,
    })
}

fn finish(
    as_of: Option<NaiveDate>,
    records: Vec<DatasetRecord>,
    mut violations: Vec<Violation>,
) -> Result<Catalog> {
    if !violations.is_empty() {
        sort_violations(&mut violations);
        return Err(Error::Validation(violations));
    }
    let catalog = Catalog {
        as_of_date: as_of.expect("as_of is only missing alongside a violation"),
        datasets: records,
    };
    let violations = validate_catalog(&catalog);
    if violations.iter().any(Violation::is_error) {
        return Err(Error::Validation(violations));
    }
    Ok(catalog)
}

fn parse_date(
    s: &str,
    record_id: &str,
    field: &str,
    violations: &mut Vec<Violation>,
) -> Option<NaiveDate> {
    match NaiveDate::parse_from_str(s, "%Y-%m-%d") {
        Ok(d) => Some(d),
        Err(_) => {
            violations.push(Violation::error(
                record_id,
                field,
                format!("invalid date {s:?}, expected YYYY-MM-DD"),
            ));
            None
        }
    }
}

fn convert_usage(
    id: &str,
    month: &str,
    count: i64,
    violations: &mut Vec<Violation>,
) -> Option<UsageEntry> {
    let month = match month.parse::<YearMonth>() {
        Ok(m) => m,
        Err(e) => {
            violations.push(Violation::error(id, "usage", e));
            return None;
        }
    };
    match u64::try_from(count) {
        Ok(count) => Some(UsageEntry { month, count }),
        Err(_) => {
            violations.push(Violation::error(
                id,
                "usage",
                format!("usage count for {month} must be non-negative"),
            ));
            None
        }
    }
}

fn convert_record(
    id: String,
    name: String,
    creation_date: &str,
    n_spatial_objects: i64,
    usage: UsageSeries,
    mut utilities: BTreeMap<String, f64>,
    violations: &mut Vec<Violation>,
) -> Option<DatasetRecord> {
    let date = parse_date(creation_date, &id, "creation_date", violations);
    let objects = match u64::try_from(n_spatial_objects) {
        Ok(n) => Some(n),
        Err(_) => {
            violations.push(Violation::error(
                &id,
                "n_spatial_objects",
                "count must be non-negative",
            ));
            None
        }
    };
    derive_average_utility(&id, &mut utilities, violations);
    Some(DatasetRecord {
        id,
        name,
        creation_date: date?,
        n_spatial_objects: objects?,
        usage,
        utilities,
    })
}

fn derive_average_utility(
    id: &str,
    utilities: &mut BTreeMap<String, f64>,
    violations: &mut Vec<Violation>,
) {
    let sources: Vec<f64> = utilities
        .iter()
        .filter(|(k, _)| k.as_str() != AVERAGE_UTILITY)
        .map(|(_, v)| *v)
        .collect();
    if sources.len() < 2 || sources.iter().any(|v| !(0.0..=100.0).contains(v)) {
        return;
    }
    let mean = sources.iter().sum::<f64>() / sources.len() as f64;
    match utilities.get(AVERAGE_UTILITY) {
        Some(given) if (given - mean).abs() > AVG_TOLERANCE => violations.push(Violation::error(
            id,
            format!("utilities.{AVERAGE_UTILITY}"),
            format!(
                "average utility {given} disagrees with the mean of the other sources ({mean})"
            ),
        )),
        _ => {
            utilities.insert(AVERAGE_UTILITY.to_string(), mean);
        }
    }
}

fn csv_error(e: csv::Error) -> Error {
    let (line, column) = match e.position() {
        Some(p) => (p.line(), 0),
        None => (0, 0),
    };
    Error::Parse {
        format: SourceFormat::Csv,
        line,
        column,
        message: e.to_string(),
    }
}

fn header_error(expected: &str, got: &csv::StringRecord) -> Error {
    Error::Parse {
        format: SourceFormat::Csv,
        line: 1,
        column: 1,
        message: format!(
            "expected header {expected}, got {}",
            got.iter().collect::<Vec<_>>().join(",")
        ),
    }
}

fn expect_headers<R: Read>(reader: &mut csv::Reader<R>, expected: &[&str]) -> Result<()> {
    let headers = reader.headers().map_err(csv_error)?;
    if headers.iter().ne(expected.iter().copied()) {
        return Err(header_error(&expected.join(","), headers));
    }
    Ok(())
}

fn row_line(row: &csv::StringRecord) -> u64 {
    row.position().map(|p| p.line()).unwrap_or(0)
}

fn parse_int(cell: &str, line: u64, column: u64) -> Result<i64> {
    cell.trim().parse().map_err(|_| Error::Parse {
        format: SourceFormat::Csv,
        line,
        column,
        message: format!("{cell:?} is not an integer"),
    })
}

/// A stakeholder's slider weights and, optionally, their ideal ordering of
/// the catalog (most preferred first).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StakeholderProfile {
    pub id: String,
    pub weights: WeightVector,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ideal_ranking: Option<Vec<String>>,
}

/// Parses a profile document. All-zero weights are accepted here; they are
/// rejected when the weights are normalized.
pub fn parse_profile<R: Read>(source: R) -> Result<StakeholderProfile> {
    let value: serde_json::Value = serde_json::from_reader(source).map_err(json_error)?;
    let obj = value.as_object().ok_or_else(|| {
        Error::Validation(vec![Violation::error(
            "",
            "profile",
            "profile must be a JSON object",
        )])
    })?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "id" | "weights" | "ideal_ranking") {
            return Err(Error::Validation(vec![Violation::error(
                "",
                key.as_str(),
                "unknown profile field",
            )]));
        }
    }
    let id = match obj.get("id") {
        Some(serde_json::Value::String(s)) if !s.is_empty() => s.clone(),
        _ => {
            return Err(Error::Validation(vec![Violation::error(
                "",
                "id",
                "profile id must be a non-empty string",
            )]))
        }
    };
    let weights = obj.get("weights").ok_or_else(|| {
        Error::Validation(vec![Violation::error(&id, "weights", "missing weights")])
    })?;
    let weights = WeightVector::from_json(weights)?;
    let ideal_ranking = match obj.get("ideal_ranking") {
        None | Some(serde_json::Value::Null) => None,
        Some(v) => Some(parse_id_list(v).ok_or_else(|| {
            Error::Validation(vec![Violation::error(
                &id,
                "ideal_ranking",
                "ideal ranking must be a list of dataset ids",
            )])
        })?),
    };
    Ok(StakeholderProfile {
        id,
        weights,
        ideal_ranking,
    })
}

pub fn load_profile(path: &Path) -> Result<StakeholderProfile> {
    parse_profile(std::fs::File::open(path)?)
}

pub(crate) fn parse_id_list(v: &serde_json::Value) -> Option<Vec<String>> {
    v.as_array()?
        .iter()
        .map(|x| x.as_str().map(str::to_string))
        .collect()
}

/// Checks that `ranking` lists every catalog id exactly once.
pub fn check_permutation<S: AsRef<str>>(ranking: &[S], catalog: &Catalog) -> Result<()> {
    let known: BTreeSet<&str> = catalog.ids().collect();
    let mut seen = BTreeSet::new();
    for id in ranking {
        let id = id.as_ref();
        if !known.contains(id) {
            return Err(Error::NotPermutation(format!("unknown id {id:?}")));
        }
        if !seen.insert(id) {
            return Err(Error::NotPermutation(format!("duplicate id {id:?}")));
        }
    }
    if let Some(missing) = known.difference(&seen).next() {
        return Err(Error::NotPermutation(format!("missing id {missing:?}")));
    }
    Ok(())
}
