//! Aggregation of scores into a priority structure.

mod outranking;
mod ranking;
mod recommend;
mod report;
mod verify;

pub use outranking::{
    concordance_matrix, discordance_matrix, electre_select, kernel, missing_weight, outranking_at, select_kernels,
    ConcordanceMatrix, DiscordanceMatrix, Edge, ElectreOutcome, KernelStep, OutrankingRelation, PairMatrix, Removal,
    ThresholdLevel, ThresholdSchedule, THRESHOLD_TOLERANCE,
};
pub use ranking::{simple_addition, weighted_sum, RankEntry, Ranking, TIE_TOLERANCE};
pub use recommend::{recommend_technique, Importance, Strategy, StrategyRecommendation};
pub use report::{impact_deltas, DiscordanceSummary, ImpactDelta, MissingWeight, OutrankingSection, SelectionReport};
pub(crate) use verify::verify_top;
pub use verify::{verify_selection, Suggestion, Verdict, Verification, DEFAULT_REQUIRED_SEPARATION};
