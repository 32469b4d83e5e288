//! End-to-end selection: matrix, scores, aggregation, verification.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::decision::{build_matrix, score, Criterion};
use crate::error::{Error, Result};
use crate::method_base::Repository;
use crate::prioritization::{
    electre_select, impact_deltas, missing_weight, recommend_technique, simple_addition, verify_top, weighted_sum,
    OutrankingSection, SelectionReport, Strategy, ThresholdSchedule, DEFAULT_REQUIRED_SEPARATION,
};
use crate::typology::ProjectProfile;
use crate::weighting::WeightVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Technique {
    Addition,
    Wsum,
    Electre,
    /// Pick from weights presence and data nature.
    Auto,
}

impl FromStr for Technique {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "addition" => Ok(Technique::Addition),
            "wsum" | "weighted-sum" => Ok(Technique::Wsum),
            "electre" | "outranking" => Ok(Technique::Electre),
            "auto" => Ok(Technique::Auto),
            other => Err(Error::NotImplemented(format!("technique {other}"))),
        }
    }
}

fn default_separation() -> usize {
    DEFAULT_REQUIRED_SEPARATION
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionRequest {
    pub criteria: Vec<Criterion>,
    pub technique: Technique,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ThresholdSchedule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProjectProfile>,
    #[serde(default = "default_separation")]
    pub required_separation: usize,
}

impl SelectionRequest {
    pub fn new(criteria: Vec<Criterion>, technique: Technique) -> Self {
        SelectionRequest {
            criteria,
            technique,
            weights: None,
            schedule: None,
            profile: None,
            required_separation: DEFAULT_REQUIRED_SEPARATION,
        }
    }

    pub fn with_weights(mut self, weights: WeightVector) -> Self {
        self.weights = Some(weights);
        self
    }

    pub fn with_schedule(mut self, schedule: ThresholdSchedule) -> Self {
        self.schedule = Some(schedule);
        self
    }

    pub fn with_profile(mut self, profile: ProjectProfile) -> Self {
        self.profile = Some(profile);
        self
    }
}

/// Runs the selection over every chunk of `repo`, in repository order.
pub fn run_selection(repo: &Repository, req: &SelectionRequest) -> Result<SelectionReport> {
    // an empty profile ranks nothing, so it yields no candidate list
    let candidates = match &req.profile {
        Some(p) if !p.is_empty() => repo.query_by_profile(p)?,
        _ => Vec::new(),
    };
    let alternatives: Vec<&str> = repo.ids().collect();
    let scores = score(&build_matrix(repo, &alternatives, &req.criteria)?);

    let mut recommendation = None;
    let strategy = match req.technique {
        Technique::Addition => Strategy::SimpleAddition,
        Technique::Wsum => Strategy::WeightedSum,
        Technique::Electre if req.weights.is_some() => Strategy::WeightedOutranking,
        Technique::Electre => Strategy::Outranking,
        Technique::Auto => {
            let r = recommend_technique(req.weights.is_some(), scores.data_nature());
            let s = r.strategy;
            recommendation = Some(r);
            s
        }
    };

    let mut warnings = Vec::new();
    let mut ranking = None;
    let mut outranking = None;
    let weights = match strategy {
        Strategy::SimpleAddition => {
            ranking = Some(simple_addition(&scores)?);
            None
        }
        Strategy::WeightedSum => {
            let w = req.weights.clone().ok_or(Error::MissingWeights)?;
            ranking = Some(weighted_sum(&scores, &w)?);
            Some(w)
        }
        Strategy::Outranking | Strategy::WeightedOutranking => {
            let w = match (&req.weights, strategy) {
                (Some(w), Strategy::WeightedOutranking) => w.clone(),
                _ => WeightVector::uniform(&scores.criterion_ids().collect::<Vec<_>>())?,
            };
            let schedule = req.schedule.clone().unwrap_or_default();
            let outcome = electre_select(&scores, &w, &schedule)?;
            for c in &outcome.discordance.excluded_criteria {
                warnings.push(format!(
                    "criterion `{c}` has a zero score range and was left out of discordance"
                ));
            }
            outranking = Some(OutrankingSection::from_outcome(&outcome, missing_weight(&scores, &w)?));
            Some(w)
        }
    };

    let top = match (&ranking, &outranking) {
        (Some(r), _) => r.top().into_iter().map(str::to_owned).collect(),
        (None, Some(o)) => o.final_kernel().to_vec(),
        (None, None) => unreachable!("one aggregation ran"),
    };
    let criterion_ids: Vec<String> = scores.criterion_ids().map(str::to_owned).collect();
    let impact = impact_deltas(&scores, &top);
    let verification = verify_top(top, &criterion_ids, req.required_separation, repo);

    Ok(SelectionReport {
        strategy,
        recommendation,
        alternatives: scores.alternatives().to_vec(),
        criteria: scores.criteria().to_vec(),
        scores: scores.rows().to_vec(),
        weights,
        ranking,
        outranking,
        candidates,
        verification,
        impact,
        warnings,
    })
}
