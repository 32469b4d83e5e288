//! Criterion weight elicitation: SMART, SWING and trade-off weighting.

mod session;

use std::collections::{HashMap, HashSet, VecDeque};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use session::{Answer, ElicitationSession, QaPair, Question, Skip, Transcript};

/// Weights are accepted when their sum is within this distance of 1.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Largest tolerated `|log-ratio residual|` on a judgment cycle.
pub const DEFAULT_INCONSISTENCY_THRESHOLD: f64 = 0.05;

/// Normalized, non-negative criterion weights in criterion order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "IndexMap<String, f64>", into = "IndexMap<String, f64>")]
pub struct WeightVector {
    weights: IndexMap<String, f64>,
}

impl TryFrom<IndexMap<String, f64>> for WeightVector {
    type Error = Error;

    fn try_from(weights: IndexMap<String, f64>) -> Result<Self> {
        WeightVector::new(weights)
    }
}

impl From<WeightVector> for IndexMap<String, f64> {
    fn from(w: WeightVector) -> Self {
        w.weights
    }
}

impl WeightVector {
    /// Accepts weights that are already normalized.
    pub fn new(weights: IndexMap<String, f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyCriteria);
        }
        if let Some((id, w)) = weights.iter().find(|(_, w)| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidWeights(format!("`{id}` has weight {w}")));
        }
        let sum: f64 = weights.values().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidWeights(format!("weights sum to {sum}, not 1")));
        }
        Ok(WeightVector { weights })
    }

    /// Divides non-negative raw values by their total.
    pub fn normalize<K: Into<String>>(raw: impl IntoIterator<Item = (K, f64)>) -> Result<Self> {
        let mut weights = IndexMap::new();
        for (k, v) in raw {
            let k = k.into();
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidWeights(format!("`{k}` has raw weight {v}")));
            }
            if weights.insert(k.clone(), v).is_some() {
                return Err(Error::DuplicateCriterion(k));
            }
        }
        if weights.is_empty() {
            return Err(Error::EmptyCriteria);
        }
        let total: f64 = weights.values().sum();
        if total <= 0.0 {
            return Err(Error::InvalidWeights("raw weights sum to zero".into()));
        }
        weights.values_mut().for_each(|w| *w /= total);
        Ok(WeightVector { weights })
    }

    pub fn uniform<S: AsRef<str>>(ids: &[S]) -> Result<Self> {
        Self::normalize(ids.iter().map(|id| (id.as_ref().to_owned(), 1.0)))
    }

    pub fn get(&self, id: &str) -> Option<f64> {
        self.weights.get(id).copied()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.weights.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.weights.keys().map(String::as_str)
    }

    /// Weights aligned with `criteria`; errors unless the id sets coincide.
    pub fn aligned<'a>(&self, criteria: impl IntoIterator<Item = &'a str>) -> Result<Vec<f64>> {
        let criteria: Vec<&str> = criteria.into_iter().collect();
        let same = criteria.len() == self.weights.len() && criteria.iter().all(|c| self.weights.contains_key(*c));
        if !same {
            return Err(Error::WeightMismatch {
                expected: criteria.iter().map(|s| s.to_string()).collect(),
                found: self.weights.keys().cloned().collect(),
            });
        }
        Ok(criteria.iter().map(|c| self.weights[*c]).collect())
    }
}

/// SMART: every criterion gets an importance score in `[1, 100]`;
/// weights are the scores over their total.
pub fn smart_weights<K: Into<String>>(importances: impl IntoIterator<Item = (K, f64)>) -> Result<WeightVector> {
    let scores: Vec<(String, f64)> = importances.into_iter().map(|(k, v)| (k.into(), v)).collect();
    if scores.is_empty() {
        return Err(Error::EmptyCriteria);
    }
    for (id, s) in &scores {
        if !(1.0..=100.0).contains(s) {
            return Err(Error::ScoreOutOfRange {
                criterion: id.clone(),
                value: *s,
                range: "[1, 100]",
            });
        }
    }
    WeightVector::normalize(scores)
}

/// SWING: criteria in the order the decision maker would improve them from
/// the all-worst profile. The first gets 100 points, the rest at most as many
/// as their predecessor.
pub fn swing_weights<S: AsRef<str>>(improvement_order: &[S], points: &HashMap<String, f64>) -> Result<WeightVector> {
    if improvement_order.is_empty() {
        return Err(Error::EmptyCriteria);
    }
    let mut seen = HashSet::new();
    for id in improvement_order {
        if !seen.insert(id.as_ref()) {
            return Err(Error::Swing(format!(
                "`{}` appears twice in the improvement order",
                id.as_ref()
            )));
        }
    }
    if seen.len() != points.len() || points.keys().any(|k| !seen.contains(k.as_str())) {
        return Err(Error::Swing(
            "improvement order and points cover different criteria".into(),
        ));
    }

    let mut previous = f64::INFINITY;
    let mut raw = Vec::with_capacity(improvement_order.len());
    for (i, id) in improvement_order.iter().enumerate() {
        let id = id.as_ref();
        let p = points[id];
        if i == 0 && p != 100.0 {
            return Err(Error::Swing(format!(
                "first criterion `{id}` must get 100 points, got {p}"
            )));
        }
        if !(p > 0.0 && p <= 100.0) {
            return Err(Error::ScoreOutOfRange {
                criterion: id.to_owned(),
                value: p,
                range: "(0, 100]",
            });
        }
        if p > previous {
            return Err(Error::Swing(format!(
                "`{id}` gets {p} points, more than its predecessor's {previous}"
            )));
        }
        previous = p;
        raw.push((id.to_owned(), p));
    }
    WeightVector::normalize(raw)
}

/// `w(criterion_a) / w(criterion_b) = ratio` at the indifference point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TradeoffJudgment {
    pub criterion_a: String,
    pub criterion_b: String,
    pub ratio: f64,
}

impl TradeoffJudgment {
    pub fn new(a: impl Into<String>, b: impl Into<String>, ratio: f64) -> Self {
        TradeoffJudgment {
            criterion_a: a.into(),
            criterion_b: b.into(),
            ratio,
        }
    }
}

/// Residual of one judgment not used to derive the weights: the log of the
/// stated ratio minus the log of the ratio implied by the weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleResidual {
    pub criterion_a: String,
    pub criterion_b: String,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub residuals: Vec<CycleResidual>,
    pub max_abs_residual: f64,
    pub threshold: f64,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TradeoffOutcome {
    pub weights: WeightVector,
    pub consistency: ConsistencyReport,
}

pub fn tradeoff_weights<S: AsRef<str>>(criteria: &[S], judgments: &[TradeoffJudgment]) -> Result<TradeoffOutcome> {
    tradeoff_weights_with(criteria, judgments, DEFAULT_INCONSISTENCY_THRESHOLD)
}

/// Trade-off weighting over a connected judgment graph.
///
/// Each criterion's weight relative to the first criterion is the product of
/// ratios along a shortest judgment path (breadth-first tree). Every judgment
/// outside the tree closes one cycle and contributes one residual.
pub fn tradeoff_weights_with<S: AsRef<str>>(
    criteria: &[S],
    judgments: &[TradeoffJudgment],
    threshold: f64,
) -> Result<TradeoffOutcome> {
    if criteria.is_empty() {
        return Err(Error::EmptyCriteria);
    }
    let mut index = HashMap::new();
    for (i, c) in criteria.iter().enumerate() {
        if index.insert(c.as_ref(), i).is_some() {
            return Err(Error::DuplicateCriterion(c.as_ref().to_owned()));
        }
    }

    // adjacency: (neighbour, judgment index)
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); criteria.len()];
    let mut endpoints = Vec::with_capacity(judgments.len());
    for (j, judgment) in judgments.iter().enumerate() {
        if !(judgment.ratio.is_finite() && judgment.ratio > 0.0) {
            return Err(Error::InvalidJudgment(format!(
                "{}/{} ratio {} is not positive",
                judgment.criterion_a, judgment.criterion_b, judgment.ratio
            )));
        }
        let lookup = |id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::InvalidJudgment(format!("unknown criterion `{id}`")))
        };
        let a = lookup(&judgment.criterion_a)?;
        let b = lookup(&judgment.criterion_b)?;
        if a == b {
            return Err(Error::InvalidJudgment(format!(
                "`{}` compared with itself",
                judgment.criterion_a
            )));
        }
        adjacency[a].push((b, j));
        adjacency[b].push((a, j));
        endpoints.push((a, b));
    }

    // relative[i] = w_i / w_reference
    let mut relative: Vec<Option<f64>> = vec![None; criteria.len()];
    let mut tree_edge = vec![false; judgments.len()];
    relative[0] = Some(1.0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(node) = queue.pop_front() {
        let here = relative[node].expect("queued nodes are reached");
        for &(next, j) in &adjacency[node] {
            if relative[next].is_some() {
                continue;
            }
            let (a, _) = endpoints[j];
            let ratio = judgments[j].ratio;
            // w_a / w_b = ratio
            relative[next] = Some(if next == a { here * ratio } else { here / ratio });
            tree_edge[j] = true;
            queue.push_back(next);
        }
    }

    let unreachable: Vec<String> = criteria
        .iter()
        .zip(&relative)
        .filter(|(_, r)| r.is_none())
        .map(|(c, _)| c.as_ref().to_owned())
        .collect();
    if !unreachable.is_empty() {
        return Err(Error::DisconnectedJudgments(unreachable));
    }
    let relative: Vec<f64> = relative.into_iter().map(|r| r.expect("all reached")).collect();

    let residuals: Vec<CycleResidual> = judgments
        .iter()
        .zip(&endpoints)
        .zip(&tree_edge)
        .filter(|(_, on_tree)| !**on_tree)
        .map(|((judgment, &(a, b)), _)| CycleResidual {
            criterion_a: judgment.criterion_a.clone(),
            criterion_b: judgment.criterion_b.clone(),
            residual: judgment.ratio.ln() - (relative[a] / relative[b]).ln(),
        })
        .collect();
    let max_abs_residual = residuals.iter().map(|r| r.residual.abs()).fold(0.0, f64::max);

    let weights = WeightVector::normalize(criteria.iter().map(|c| c.as_ref().to_owned()).zip(relative))?;
    Ok(TradeoffOutcome {
        weights,
        consistency: ConsistencyReport {
            residuals,
            max_abs_residual,
            threshold,
            consistent: max_abs_residual <= threshold,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightingTechnique {
    Smart,
    Swing,
    Tradeoff,
}

impl std::str::FromStr for WeightingTechnique {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "smart" => Ok(WeightingTechnique::Smart),
            "swing" => Ok(WeightingTechnique::Swing),
            "tradeoff" | "trade-off" => Ok(WeightingTechnique::Tradeoff),
            "fuzzy" | "fuzzy-weighting" => Err(Error::NotImplemented("by fuzzy weighting".into())),
            other => Err(Error::MalformedAnswer(format!("unknown weighting technique `{other}`"))),
        }
    }
}

impl std::fmt::Display for WeightingTechnique {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            WeightingTechnique::Smart => "smart",
            WeightingTechnique::Swing => "swing",
            WeightingTechnique::Tradeoff => "tradeoff",
        })
    }
}
