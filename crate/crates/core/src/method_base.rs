//! Method base: a repository of method chunks described against a typology.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::typology::{ProjectProfile, Typology};
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodChunk {
    pub id: String,
    pub name: String,
    #[serde(default)]
    pub descriptor: String,
    /// Characteristic id to value. An absent key means "not described",
    /// which is different from an explicit [`Value::Missing`].
    #[serde(default)]
    pub valuations: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub citation: Option<String>,
}

impl MethodChunk {
    pub fn new(id: impl Into<String>, name: impl Into<String>) -> Self {
        MethodChunk {
            id: id.into(),
            name: name.into(),
            descriptor: String::new(),
            valuations: BTreeMap::new(),
            citation: None,
        }
    }

    pub fn with(mut self, characteristic: impl Into<String>, value: Value) -> Self {
        self.valuations.insert(characteristic.into(), value);
        self
    }

    pub fn valuation(&self, characteristic: &str) -> Option<&Value> {
        self.valuations.get(characteristic)
    }
}

/// A candidate returned by profile-driven retrieval.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub chunk: String,
    pub matches: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Repository {
    typology: Typology,
    chunks: Vec<MethodChunk>,
}

impl Repository {
    pub fn new(typology: Typology) -> Self {
        Repository {
            typology,
            chunks: Vec::new(),
        }
    }

    pub fn typology(&self) -> &Typology {
        &self.typology
    }

    pub fn chunks(&self) -> &[MethodChunk] {
        &self.chunks
    }

    pub fn len(&self) -> usize {
        self.chunks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chunks.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&MethodChunk> {
        self.chunks.iter().find(|c| c.id == id)
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.chunks.iter().map(|c| c.id.as_str())
    }

    pub fn add_chunk(&mut self, chunk: MethodChunk) -> Result<()> {
        if self.get(&chunk.id).is_some() {
            return Err(Error::DuplicateChunk(chunk.id));
        }
        self.check_chunk(&chunk)?;
        self.chunks.push(chunk);
        Ok(())
    }

    fn check_chunk(&self, chunk: &MethodChunk) -> Result<()> {
        for (id, value) in &chunk.valuations {
            let c = self
                .typology
                .get(id)
                .ok_or_else(|| Error::UnknownCharacteristic(id.clone()))?;
            if !value.is_missing() && !c.admits(value) {
                return Err(Error::InvalidValuation {
                    chunk: chunk.id.clone(),
                    characteristic: id.clone(),
                    value: value.to_string(),
                });
            }
        }
        Ok(())
    }

    /// Orders every chunk by descending number of profile entries it matches,
    /// ties by ascending id. Nothing is filtered out.
    pub fn query_by_profile(&self, profile: &ProjectProfile) -> Result<Vec<Candidate>> {
        self.typology.validate_profile(profile).into_result()?;
        let mut candidates: Vec<Candidate> = self
            .chunks
            .iter()
            .map(|chunk| Candidate {
                chunk: chunk.id.clone(),
                matches: profile
                    .entries
                    .iter()
                    .filter(|(id, entry)| chunk.valuation(id).is_some_and(|v| v.matches(&entry.value)))
                    .count(),
            })
            .collect();
        candidates.sort_by(|a, b| b.matches.cmp(&a.matches).then_with(|| a.chunk.cmp(&b.chunk)));
        Ok(candidates)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("repository serializes") + "\n"
    }

    /// Parses and validates a repository document.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Doc {
            typology: Typology,
            #[serde(default)]
            chunks: Vec<MethodChunk>,
        }
        let doc: Doc = serde_json::from_str(text).map_err(Error::from_json)?;
        let mut repo = Repository::new(doc.typology);
        let mut problems = Vec::new();
        let mut ids = HashSet::new();
        for chunk in doc.chunks {
            if !ids.insert(chunk.id.clone()) {
                problems.push(format!("duplicate chunk id `{}`", chunk.id));
                continue;
            }
            match repo.check_chunk(&chunk) {
                Ok(()) => repo.chunks.push(chunk),
                Err(e) => problems.push(format!("chunk `{}`: {e}", chunk.id)),
            }
        }
        if problems.is_empty() {
            Ok(repo)
        } else {
            Err(Error::InvalidRepository(problems))
        }
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::example;

    fn label(s: &str) -> Value {
        Value::label(s)
    }

    #[test]
    fn add_chunk_stores_and_counts() {
        let mut repo = Repository::new(Typology::builtin());
        let nfr = MethodChunk::new("nfr-framework", "NFR Framework")
            .with("impact", label("high"))
            .with("level-of-innovation", label("high"))
            .with("expertise", label("normal"));
        repo.add_chunk(nfr.clone()).unwrap();
        assert_eq!(repo.len(), 1);
        assert_eq!(repo.get("nfr-framework"), Some(&nfr));
        assert!(matches!(repo.add_chunk(nfr), Err(Error::DuplicateChunk(_))));
    }

    #[test]
    fn add_chunk_rejects_out_of_domain() {
        let mut repo = Repository::new(Typology::builtin());
        let bad = MethodChunk::new("x", "X").with("impact", label("enormous"));
        match repo.add_chunk(bad) {
            Err(Error::InvalidValuation { characteristic, .. }) => assert_eq!(characteristic, "impact"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(repo.is_empty());
    }

    #[test]
    fn add_chunk_accepts_missing_marker() {
        let repo = example::repository();
        let mut repo = Repository::new(repo.typology().clone());
        repo.add_chunk(MethodChunk::new("gbram", "GBRAM").with("approach", Value::Missing))
            .unwrap();
        assert_eq!(repo.get("gbram").unwrap().valuation("approach"), Some(&Value::Missing));
    }

    #[test]
    fn query_orders_by_match_count_then_id() {
        let repo = example::repository();
        let profile = ProjectProfile::new().with("impact", label("high"));
        let got = repo.query_by_profile(&profile).unwrap();
        let order: Vec<(&str, usize)> = got.iter().map(|c| (c.chunk.as_str(), c.matches)).collect();
        assert_eq!(
            order,
            vec![
                ("nfr-framework", 1),
                ("secure-tropos", 1),
                ("gbram", 0),
                ("kaos", 0),
                ("misuse-cases", 0),
            ]
        );
    }

    #[test]
    fn query_never_drops_alternatives() {
        let repo = example::repository();
        let empty = repo.query_by_profile(&ProjectProfile::new()).unwrap();
        let ids: Vec<&str> = empty.iter().map(|c| c.chunk.as_str()).collect();
        assert_eq!(
            ids,
            vec!["gbram", "kaos", "misuse-cases", "nfr-framework", "secure-tropos"]
        );
        assert!(empty.iter().all(|c| c.matches == 0));

        let nothing = ProjectProfile::new().with("time-pressure", label("high"));
        let got = repo.query_by_profile(&nothing).unwrap();
        assert_eq!(got.len(), repo.len());
        assert!(got.iter().all(|c| c.matches == 0));
    }

    #[test]
    fn missing_valuations_never_match() {
        let repo = example::repository();
        // gbram's approach is explicitly not applicable
        let profile = ProjectProfile::new().with("approach", label("explanatory"));
        let got = repo.query_by_profile(&profile).unwrap();
        let gbram = got.iter().find(|c| c.chunk == "gbram").unwrap();
        assert_eq!(gbram.matches, 0);
    }

    #[test]
    fn query_rejects_invalid_profile() {
        let repo = example::repository();
        let profile = ProjectProfile::new().with("impact", label("enormous"));
        assert!(matches!(repo.query_by_profile(&profile), Err(Error::InvalidProfile(_))));
    }

    #[test]
    fn save_load_round_trip() {
        let repo = example::repository();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("repo.json");
        repo.save(&path).unwrap();
        assert_eq!(Repository::load(&path).unwrap(), repo);
    }

    #[test]
    fn load_rejects_unknown_characteristic() {
        let text = serde_json::json!({
            "typology": Typology::builtin(),
            "chunks": [{"id": "a", "name": "A", "valuations": {"warp-speed": "high"}}]
        })
        .to_string();
        match Repository::from_json(&text) {
            Err(Error::InvalidRepository(problems)) => {
                assert_eq!(problems.len(), 1);
                assert!(problems[0].contains("chunk `a`"));
                assert!(problems[0].contains("warp-speed"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn load_empty_repository() {
        let text = serde_json::json!({ "typology": Typology::builtin(), "chunks": [] }).to_string();
        let repo = Repository::from_json(&text).unwrap();
        assert!(repo.is_empty());
        assert_eq!(repo.typology().len(), 29);
    }

    #[test]
    fn parse_errors_carry_position() {
        match Repository::from_json("{\n  \"typology\": [,\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }
}
