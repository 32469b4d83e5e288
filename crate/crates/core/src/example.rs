//! Bundled worked example: five security requirements-engineering chunks.

use crate::decision::{build_matrix, score, Criterion, ScoreMatrix};
use crate::method_base::{MethodChunk, Repository};
use crate::prioritization::{ConcordanceMatrix, DiscordanceMatrix, PairMatrix, ThresholdSchedule};
use crate::typology::{Characteristic, Dimension, Typology, ValueDomain};
use crate::value::Value;
use crate::weighting::WeightVector;

pub const REPOSITORY_JSON: &str = include_str!("../data/is-security/repository.json");
pub const CRITERIA_JSON: &str = include_str!("../data/is-security/criteria.json");
pub const FULL_CRITERIA_JSON: &str = include_str!("../data/is-security/criteria-full.json");
pub const WEIGHTS_JSON: &str = include_str!("../data/is-security/weights.json");
pub const SCHEDULE_JSON: &str = include_str!("../data/is-security/schedule.json");
pub const OUTRANKING_MATRICES_JSON: &str = include_str!("../data/is-security/outranking-matrices.json");

/// Built-in typology plus guidance, approach and formalism.
pub fn typology() -> Typology {
    let extra = [
        Characteristic::new(
            "guidance",
            "Guidance",
            Dimension::DevelopmentStrategy,
            ValueDomain::nominal(&["none", "guidelines", "heuristics", "predefined-taxonomy"]),
        ),
        Characteristic::new(
            "approach",
            "Approach",
            Dimension::DevelopmentStrategy,
            ValueDomain::nominal(&["explanatory", "exploratory", "systemic"]),
        ),
        Characteristic::new(
            "formalism",
            "Formalism",
            Dimension::DevelopmentStrategy,
            ValueDomain::ordinal(&["informal", "semi-formal", "formal"]),
        ),
    ];
    extra
        .into_iter()
        .try_fold(Typology::builtin(), |t, c| t.extend(c))
        .expect("extension ids are new")
}

/// Chunk ids in repository order.
pub const CHUNKS: [&str; 5] = ["nfr-framework", "kaos", "secure-tropos", "gbram", "misuse-cases"];

pub fn repository() -> Repository {
    #[rustfmt::skip]
    let rows: [(&str, &str, &str, [&str; 6]); 5] = [
        ("nfr-framework", "NFR Framework", "Goal-oriented treatment of non-functional requirements via softgoal graphs",
            ["high", "high", "normal", "predefined-taxonomy", "explanatory", "semi-formal"]),
        ("kaos", "KAOS", "Goal refinement with formal specification of obstacles and anti-goals",
            ["low", "high", "high", "heuristics", "exploratory", "formal"]),
        ("secure-tropos", "Secure Tropos", "Agent-oriented modelling of security constraints and dependencies",
            ["high", "low", "high", "none", "systemic", "formal"]),
        ("gbram", "GBRAM", "Goal identification and elaboration from existing documents",
            ["low", "high", "normal", "heuristics", "__missing__", "informal"]),
        ("misuse-cases", "Misuse Cases", "Use cases extended with hostile actors and threatening scenarios",
            ["normal", "high", "low", "guidelines", "explanatory", "informal"]),
    ];
    let characteristics = [
        "impact",
        "level-of-innovation",
        "expertise",
        "guidance",
        "approach",
        "formalism",
    ];
    let mut repo = Repository::new(typology());
    for (id, name, descriptor, values) in rows {
        let mut chunk = MethodChunk::new(id, name);
        chunk.descriptor = descriptor.to_owned();
        for (c, v) in characteristics.iter().zip(values) {
            let value = if v == crate::value::MISSING_MARKER {
                Value::Missing
            } else {
                Value::label(v)
            };
            chunk = chunk.with(*c, value);
        }
        repo.add_chunk(chunk).expect("example chunks are valid");
    }
    repo
}

/// Impact, level of innovation and expertise (the latter minimized).
pub fn quantified_criteria() -> Vec<Criterion> {
    serde_json::from_str(CRITERIA_JSON).expect("bundled criteria parse")
}

/// The quantified criteria plus guidance, approach and formalism.
pub fn full_criteria() -> Vec<Criterion> {
    serde_json::from_str(FULL_CRITERIA_JSON).expect("bundled criteria parse")
}

pub fn weights() -> WeightVector {
    serde_json::from_str(WEIGHTS_JSON).expect("bundled weights parse")
}

pub fn schedule() -> ThresholdSchedule {
    serde_json::from_str(SCHEDULE_JSON).expect("bundled schedule parses")
}

fn scores_for(criteria: &[Criterion]) -> ScoreMatrix {
    let repo = repository();
    score(&build_matrix(&repo, &CHUNKS, criteria).expect("example matrix builds"))
}

pub fn quantified_scores() -> ScoreMatrix {
    scores_for(&quantified_criteria())
}

pub fn full_scores() -> ScoreMatrix {
    scores_for(&full_criteria())
}

#[derive(serde::Deserialize)]
struct MatricesDoc {
    alternatives: Vec<String>,
    concordance: Vec<Vec<Option<f64>>>,
    discordance: Vec<Vec<Option<f64>>>,
}

/// Published concordance and discordance matrices over Fr1..Fr5, used as
/// fixed input data.
pub fn outranking_matrices() -> (ConcordanceMatrix, DiscordanceMatrix) {
    let doc: MatricesDoc = serde_json::from_str(OUTRANKING_MATRICES_JSON).expect("bundled matrices parse");
    let c = PairMatrix::new(doc.alternatives.clone(), doc.concordance).expect("valid concordance");
    let d = PairMatrix::new(doc.alternatives, doc.discordance).expect("valid discordance");
    (ConcordanceMatrix(c), DiscordanceMatrix::from_matrix(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_repository_file_matches_code() {
        let from_file = Repository::from_json(REPOSITORY_JSON).unwrap();
        assert_eq!(from_file.chunks(), repository().chunks());
        assert_eq!(from_file.typology(), repository().typology());
    }

    #[test]
    fn typology_has_three_extensions() {
        let t = typology();
        assert_eq!(t.len(), 32);
        assert!(["guidance", "approach", "formalism"]
            .iter()
            .all(|id| !t.get(id).unwrap().builtin));
    }
}
