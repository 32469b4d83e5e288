use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::outranking::{ElectreOutcome, KernelStep, PairMatrix};
use super::ranking::Ranking;
use super::recommend::{Strategy, StrategyRecommendation};
use super::verify::Verification;
use crate::decision::{ScoreMatrix, ScoredCriterion};
use crate::error::{Error, Result};
use crate::method_base::Candidate;
use crate::weighting::WeightVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscordanceSummary {
    pub alternative: String,
    pub max_discordance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MissingWeight {
    pub alternative: String,
    pub weight: f64,
}

/// Outranking results in report form: matrices rendered with two decimals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutrankingSection {
    pub concordance: Vec<Vec<Option<String>>>,
    pub discordance: Vec<Vec<Option<String>>>,
    pub max_discordance: Vec<DiscordanceSummary>,
    /// Present only when one alternative has a strictly smallest maximum.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub least_discordant: Option<String>,
    pub missing_weight: Vec<MissingWeight>,
    pub kernels: Vec<KernelStep>,
}

impl OutrankingSection {
    pub fn from_outcome(outcome: &ElectreOutcome, missing: Vec<(String, f64)>) -> Self {
        let d: &PairMatrix = &outcome.discordance.matrix;
        OutrankingSection {
            concordance: outcome.concordance.0.rendered(),
            discordance: d.rendered(),
            max_discordance: d
                .alternatives()
                .iter()
                .enumerate()
                .map(|(i, a)| DiscordanceSummary {
                    alternative: a.clone(),
                    max_discordance: format!("{:.2}", d.row_max(i)),
                })
                .collect(),
            least_discordant: outcome
                .discordance
                .least_discordant()
                .map(|i| d.alternatives()[i].clone()),
            missing_weight: missing
                .into_iter()
                .map(|(alternative, weight)| MissingWeight { alternative, weight })
                .collect(),
            kernels: outcome.steps.clone(),
        }
    }

    pub fn final_kernel(&self) -> &[String] {
        self.kernels.last().map(|s| s.survivors.as_slice()).unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImpactDelta {
    pub a: String,
    pub b: String,
    /// `score(a) - score(b)` per criterion; `None` where either is MISSING.
    pub deltas: Vec<Option<f64>>,
}

/// Pairwise score differences between the given alternatives.
pub fn impact_deltas(scores: &ScoreMatrix, survivors: &[String]) -> Vec<ImpactDelta> {
    let idx: Vec<usize> = survivors
        .iter()
        .filter_map(|s| scores.alternatives().iter().position(|a| a == s))
        .collect();
    let mut out = Vec::new();
    for (i, &a) in idx.iter().enumerate() {
        for &b in &idx[i + 1..] {
            out.push(ImpactDelta {
                a: scores.alternatives()[a].clone(),
                b: scores.alternatives()[b].clone(),
                deltas: scores.rows()[a]
                    .iter()
                    .zip(&scores.rows()[b])
                    .map(|(x, y)| Some(x.as_ref()? - y.as_ref()?))
                    .collect(),
            });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub strategy: Strategy,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recommendation: Option<StrategyRecommendation>,
    pub alternatives: Vec<String>,
    pub criteria: Vec<ScoredCriterion>,
    pub scores: Vec<Vec<Option<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranking: Option<Ranking>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outranking: Option<OutrankingSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub candidates: Vec<Candidate>,
    pub verification: Verification,
    pub impact: Vec<ImpactDelta>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl SelectionReport {
    /// Alternatives sharing first place, or the final kernel.
    pub fn top_group(&self) -> Vec<String> {
        if let Some(r) = &self.ranking {
            return r.top().into_iter().map(str::to_owned).collect();
        }
        self.outranking
            .as_ref()
            .map(|o| o.final_kernel().to_vec())
            .unwrap_or_default()
    }

    /// Pretty JSON with a trailing newline; the canonical byte form.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(Error::from_json)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "Technique: {}", self.strategy);
        if let Some(r) = &self.recommendation {
            let _ = writeln!(out, "Recommended because {}", r.rationale);
        }
        out.push('\n');

        let weight = |id: &str| self.weights.as_ref().and_then(|w| w.get(id));
        let mut header = vec!["criterion".to_string()];
        if self.weights.is_some() {
            header.push("weight".into());
        }
        header.extend(self.alternatives.iter().cloned());
        let mut rows = vec![header];
        for (j, c) in self.criteria.iter().enumerate() {
            let mut row = vec![format!("{}{}", c.id, c.direction.suffix())];
            if self.weights.is_some() {
                row.push(weight(&c.id).map(|w| format!("{w:.2}")).unwrap_or_default());
            }
            row.extend(self.scores.iter().map(|r| fmt_cell(r[j])));
            rows.push(row);
        }
        if let Some(ranking) = &self.ranking {
            let pad = usize::from(self.weights.is_some());
            let mut total = vec!["total".to_string()];
            let mut rank = vec!["rank".to_string()];
            total.extend(std::iter::repeat_n(String::new(), pad));
            rank.extend(std::iter::repeat_n(String::new(), pad));
            for a in &self.alternatives {
                let e = ranking.entries.iter().find(|e| &e.alternative == a);
                total.push(e.map(|e| format!("{:.2}", e.value)).unwrap_or_default());
                rank.push(e.map(|e| e.rank.to_string()).unwrap_or_default());
            }
            rows.push(total);
            rows.push(rank);
        }
        write_table(&mut out, &rows);

        if let Some(o) = &self.outranking {
            for (title, matrix) in [("Concordance", &o.concordance), ("Discordance", &o.discordance)] {
                let _ = writeln!(out, "\n{title}");
                let mut rows = vec![std::iter::once(String::new())
                    .chain(self.alternatives.iter().cloned())
                    .collect()];
                for (a, r) in self.alternatives.iter().zip(matrix) {
                    let mut row = vec![a.clone()];
                    row.extend(r.iter().map(|v| v.clone().unwrap_or_else(|| "-".into())));
                    rows.push(row);
                }
                write_table(&mut out, &rows);
            }
            let _ = writeln!(out, "\nMaximum discordance");
            for s in &o.max_discordance {
                let _ = writeln!(out, "  {}: {}", s.alternative, s.max_discordance);
            }
            if let Some(a) = &o.least_discordant {
                let _ = writeln!(out, "  least discordant: {a}");
            }
            let _ = writeln!(out, "\nKernels");
            for step in &o.kernels {
                let _ = writeln!(
                    out,
                    "  c >= {:.2}, d <= {:.2}: {{{}}}",
                    step.level.concordance,
                    step.level.discordance,
                    step.survivors.join(", ")
                );
                for r in &step.removed {
                    let _ = writeln!(
                        out,
                        "    removed {} (outranked by {} via {})",
                        r.alternative, r.outranked_by, r.via
                    );
                }
                for g in &step.tied_groups {
                    let _ = writeln!(out, "    tied: {{{}}}", g.join(", "));
                }
            }
        }

        out.push('\n');
        let _ = writeln!(out, "{}", self.verification);
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        out
    }
}

fn fmt_cell(x: Option<f64>) -> String {
    match x {
        None => "n/a".into(),
        Some(x) if x.fract() == 0.0 => format!("{x:.0}"),
        Some(x) => format!("{x:.2}"),
    }
}

fn write_table(out: &mut String, rows: &[Vec<String>]) {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|j| {
            rows.iter()
                .filter_map(|r| r.get(j))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    for row in rows {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(j, s)| {
                if j == 0 {
                    format!("{s:<w$}", w = widths[j])
                } else {
                    format!("{s:>w$}", w = widths[j])
                }
            })
            .collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
    }
}
