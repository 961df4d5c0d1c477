//! Evaluation report rows and their CSV / Markdown renderings.

use std::fmt::Write as _;

use serde::Serialize;

use crate::valuation::{Method, UsageMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodGroup {
    Weighted,
    SimpleAverage,
    Univariate,
}

impl MethodGroup {
    pub fn key(&self) -> &'static str {
        match self {
            MethodGroup::Weighted => "weighted",
            MethodGroup::SimpleAverage => "simple",
            MethodGroup::Univariate => "univariate",
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            MethodGroup::Weighted => "Weighted Average",
            MethodGroup::SimpleAverage => "Simple Average",
            MethodGroup::Univariate => "Univariate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationCell {
    pub stakeholder: String,
    pub group: MethodGroup,
    #[serde(serialize_with = "serialize_display")]
    pub method: Method,
    /// Machine-readable variant key, e.g. `total_usage` or `utility:avg`.
    pub variant: String,
    pub variant_label: String,
    pub usage_mode: UsageMode,
    pub utility_source: Option<String>,
    pub ndcg: f64,
    pub ndcg_at_k: f64,
    pub k: usize,
    pub best_ndcg: bool,
    pub best_ndcg_at_k: bool,
}

fn serialize_display<S: serde::Serializer>(m: &Method, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(m)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub k: usize,
    /// Ordered by stakeholder id, then method group, then variant.
    pub cells: Vec<EvaluationCell>,
    pub warnings: Vec<String>,
}

impl EvaluationReport {
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn stakeholders(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for c in &self.cells {
            if out.last() != Some(&c.stakeholder.as_str()) {
                out.push(&c.stakeholder);
            }
        }
        out
    }

    pub fn cells_for<'a>(
        &'a self,
        stakeholder: &'a str,
        group: MethodGroup,
    ) -> impl Iterator<Item = &'a EvaluationCell> + 'a {
        self.cells
            .iter()
            .filter(move |c| c.stakeholder == stakeholder && c.group == group)
    }

    /// `stakeholder,method,variant,ndcg,ndcg_at_k,best_ndcg,best_ndcg_at_k`
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("stakeholder,method,variant,ndcg,ndcg_at_k,best_ndcg,best_ndcg_at_k\n");
        for c in &self.cells {
            let _ = writeln!(
                out,
                "{},{},{},{:.6},{:.6},{},{}",
                c.stakeholder,
                c.group.key(),
                c.variant,
                c.ndcg,
                c.ndcg_at_k,
                c.best_ndcg,
                c.best_ndcg_at_k
            );
        }
        out
    }

    /// A table grouped by stakeholder and method, best cells in bold.
    pub fn to_markdown(&self) -> String {
        let mut out = format!(
            "| Stakeholder | Method | Variant | NDCG | NDCG@{} |\n| --- | --- | --- | ---: | ---: |\n",
            self.k
        );
        let mut prev: Option<(&str, MethodGroup)> = None;
        for c in &self.cells {
            let stakeholder = match prev {
                Some((s, _)) if s == c.stakeholder => "",
                _ => c.stakeholder.as_str(),
            };
            let method = match prev {
                Some((s, g)) if s == c.stakeholder && g == c.group => "",
                _ => c.group.label(),
            };
            let _ = writeln!(
                out,
                "| {stakeholder} | {method} | {} | {} | {} |",
                c.variant_label,
                score_cell(c.ndcg, c.best_ndcg),
                score_cell(c.ndcg_at_k, c.best_ndcg_at_k)
            );
            prev = Some((&c.stakeholder, c.group));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn score_cell(v: f64, best: bool) -> String {
    if best {
        format!("**{v:.4}**")
    } else {
        format!("{v:.4}")
    }
}
