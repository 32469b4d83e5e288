use serde::{Deserialize, Serialize};

use crate::decision::DataNature;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    SimpleAddition,
    WeightedSum,
    /// Outranking with uniform weights.
    Outranking,
    WeightedOutranking,
}

impl Strategy {
    pub fn is_outranking(self) -> bool {
        matches!(self, Strategy::Outranking | Strategy::WeightedOutranking)
    }

    pub fn uses_weights(self) -> bool {
        matches!(self, Strategy::WeightedSum | Strategy::WeightedOutranking)
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Strategy::SimpleAddition => "simple addition",
            Strategy::WeightedSum => "weighted sum",
            Strategy::Outranking => "outranking (equal weights)",
            Strategy::WeightedOutranking => "outranking (weighted)",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Importance {
    Equal,
    Differentiated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyRecommendation {
    pub strategy: Strategy,
    pub importance: Importance,
    pub data_nature: DataNature,
    pub rationale: String,
}

pub fn recommend_technique(weighted: bool, data_nature: DataNature) -> StrategyRecommendation {
    let importance = if weighted {
        Importance::Differentiated
    } else {
        Importance::Equal
    };
    let strategy = match (weighted, data_nature) {
        (false, DataNature::HomogeneousNormalized) => Strategy::SimpleAddition,
        (false, DataNature::Mixed) => Strategy::Outranking,
        (true, DataNature::HomogeneousNormalized) => Strategy::WeightedSum,
        (true, DataNature::Mixed) => Strategy::WeightedOutranking,
    };
    let importance_text = match importance {
        Importance::Equal => "criteria are equally important",
        Importance::Differentiated => "criteria carry different weights",
    };
    let data_text = match data_nature {
        DataNature::HomogeneousNormalized => "scores are complete and on one common scale, so they can be summed",
        DataNature::Mixed => "scores mix scales or have gaps, which outranking tolerates",
    };
    StrategyRecommendation {
        strategy,
        importance,
        data_nature,
        rationale: format!("{importance_text}; {data_text}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_cells() {
        use DataNature::*;
        let cells = [
            (false, HomogeneousNormalized, Strategy::SimpleAddition),
            (false, Mixed, Strategy::Outranking),
            (true, HomogeneousNormalized, Strategy::WeightedSum),
            (true, Mixed, Strategy::WeightedOutranking),
        ];
        for (weighted, nature, expected) in cells {
            let r = recommend_technique(weighted, nature);
            assert_eq!(r.strategy, expected);
            assert_eq!(r.strategy.uses_weights(), weighted);
            assert_eq!(r.strategy.is_outranking(), nature == Mixed);
        }
    }
}
