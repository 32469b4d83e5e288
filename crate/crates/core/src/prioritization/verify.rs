use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::report::SelectionReport;
use crate::method_base::Repository;

pub const DEFAULT_REQUIRED_SEPARATION: usize = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Suggestion {
    pub characteristic: String,
    /// The tied chunks do not all share one valuation of it.
    pub discriminates: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Verdict {
    Sufficient,
    RefineNeeded { suggested: Vec<Suggestion> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub required_separation: usize,
    pub top: Vec<String>,
    pub verdict: Verdict,
}

impl Verification {
    pub fn is_sufficient(&self) -> bool {
        self.verdict == Verdict::Sufficient
    }
}

impl fmt::Display for Verification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.verdict {
            Verdict::Sufficient => write!(f, "Selection sufficient: {}", self.top.join(", ")),
            Verdict::RefineNeeded { suggested } => {
                write!(
                    f,
                    "Refinement needed: {} chunks share first place ({}), at most {} allowed",
                    self.top.len(),
                    self.top.join(", "),
                    self.required_separation
                )?;
                let useful: Vec<&str> = suggested
                    .iter()
                    .filter(|s| s.discriminates)
                    .map(|s| s.characteristic.as_str())
                    .collect();
                if !useful.is_empty() {
                    write!(f, "\n  characteristics that separate them: {}", useful.join(", "))?;
                }
                Ok(())
            }
        }
    }
}

/// Checks whether the top group is small enough. When it is not, suggests
/// typology characteristics not already used as criteria, those that
/// separate the tied chunks first.
pub fn verify_selection(report: &SelectionReport, required_separation: usize, repo: &Repository) -> Verification {
    verify_top(
        report.top_group(),
        &report.criteria.iter().map(|c| c.id.clone()).collect::<Vec<_>>(),
        required_separation,
        repo,
    )
}

pub(crate) fn verify_top(
    top: Vec<String>,
    criteria: &[String],
    required_separation: usize,
    repo: &Repository,
) -> Verification {
    if top.len() <= required_separation {
        return Verification {
            required_separation,
            top,
            verdict: Verdict::Sufficient,
        };
    }
    let used: BTreeSet<&str> = criteria.iter().map(String::as_str).collect();
    let chunks: Vec<_> = top.iter().filter_map(|id| repo.get(id)).collect();
    let mut suggested: Vec<Suggestion> = repo
        .typology()
        .characteristics()
        .iter()
        .filter(|c| !used.contains(c.id.as_str()))
        .map(|c| {
            let mut values = chunks.iter().map(|ch| ch.valuation(&c.id));
            let first = values.next().flatten();
            let discriminates = first.is_some() && values.any(|v| v != first);
            Suggestion {
                characteristic: c.id.clone(),
                discriminates,
            }
        })
        .collect();
    // stable: typology order within each class
    suggested.sort_by_key(|s| !s.discriminates);
    Verification {
        required_separation,
        top,
        verdict: Verdict::RefineNeeded { suggested },
    }
}
