use serde::{Deserialize, Serialize};

use crate::decision::ScoreMatrix;
use crate::error::Result;
use crate::weighting::WeightVector;

/// Aggregates closer than this share a rank.
pub const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankEntry {
    pub alternative: String,
    pub value: f64,
    pub rank: usize,
}

/// Alternatives by descending aggregate; ties share the rank of the first
/// of their group (1, 1, 3, ...) and are listed by ascending id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ranking {
    pub entries: Vec<RankEntry>,
}

impl Ranking {
    pub fn from_values(values: impl IntoIterator<Item = (String, f64)>) -> Self {
        let mut entries: Vec<(String, f64)> = values.into_iter().collect();
        entries.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));

        let mut ranked: Vec<RankEntry> = Vec::with_capacity(entries.len());
        let mut group_start = 0;
        for (i, (alternative, value)) in entries.into_iter().enumerate() {
            let lead = ranked.get(group_start).map(|e| e.value);
            if lead.is_none_or(|lead| lead - value > TIE_TOLERANCE) {
                ranked[group_start..].sort_by(|a, b| a.alternative.cmp(&b.alternative));
                group_start = i;
            }
            ranked.push(RankEntry {
                alternative,
                value,
                rank: group_start + 1,
            });
        }
        ranked[group_start..].sort_by(|a, b| a.alternative.cmp(&b.alternative));
        Ranking { entries: ranked }
    }

    pub fn top(&self) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|e| e.rank == 1)
            .map(|e| e.alternative.as_str())
            .collect()
    }

    pub fn value_of(&self, alternative: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.alternative == alternative)
            .map(|e| e.value)
    }
}

/// Column sums. Requires complete scores on one shared ordinal scale, or
/// normalized scores.
pub fn simple_addition(scores: &ScoreMatrix) -> Result<Ranking> {
    scores.missing_error()?;
    scores.check_homogeneous()?;
    Ok(Ranking::from_values(
        scores
            .alternatives()
            .iter()
            .zip(scores.rows())
            .map(|(a, row)| (a.clone(), row.iter().map(|x| x.expect("complete")).sum())),
    ))
}

pub fn weighted_sum(scores: &ScoreMatrix, weights: &WeightVector) -> Result<Ranking> {
    let w = weights.aligned(scores.criterion_ids())?;
    scores.missing_error()?;
    Ok(Ranking::from_values(
        scores.alternatives().iter().zip(scores.rows()).map(|(a, row)| {
            let total = row.iter().zip(&w).map(|(x, w)| w * x.expect("complete")).sum();
            (a.clone(), total)
        }),
    ))
}
