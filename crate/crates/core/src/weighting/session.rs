//! Question-by-question elicitation sessions.
//!
//! A session is a value: answering returns a new session and leaves the old
//! one untouched, so a rejected answer never changes state. Once complete the
//! weights equal the one-shot technique applied to the transcript.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{
    smart_weights, swing_weights, tradeoff_weights, ConsistencyReport, TradeoffJudgment, WeightVector,
    WeightingTechnique,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Question {
    /// SMART: importance of one criterion, 1 to 100.
    Importance { criterion: String },
    /// SWING: order in which criteria would be improved from the worst case.
    ImprovementOrder { criteria: Vec<String> },
    /// SWING: points for a criterion, at most `max`.
    SwingPoints { criterion: String, max: f64 },
    /// Trade-off: ratio `w(a) / w(b)` at indifference.
    TradeoffRatio { criterion_a: String, criterion_b: String },
    /// Trade-off: extra ratio closing a cycle; may be skipped.
    CycleCheck { criterion_a: String, criterion_b: String },
}

impl fmt::Display for Question {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Question::Importance { criterion } => write!(f, "Importance of `{criterion}` (1-100)"),
            Question::ImprovementOrder { criteria } => write!(
                f,
                "All criteria start at their worst level. List them in the order you would improve them, first = most wanted: {}",
                criteria.join(", ")
            ),
            Question::SwingPoints { criterion, max } => {
                write!(f, "Points for improving `{criterion}` (first criterion = 100, at most {max})")
            }
            Question::TradeoffRatio { criterion_a, criterion_b } => {
                write!(f, "Weight of `{criterion_a}` relative to `{criterion_b}` at indifference (ratio > 0)")
            }
            Question::CycleCheck { criterion_a, criterion_b } => write!(
                f,
                "Check: weight of `{criterion_a}` relative to `{criterion_b}` (ratio > 0, or skip)"
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Skip {
    Skip,
}

/// Serialized untagged: a number, a list of criterion ids, or `"skip"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Answer {
    Value(f64),
    Order(Vec<String>),
    Skip(Skip),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaPair {
    pub question: Question,
    pub answer: Answer,
}

/// Replayable record of a session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub technique: WeightingTechnique,
    pub criteria: Vec<String>,
    pub qa: Vec<QaPair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightVector>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElicitationSession {
    transcript: Transcript,
    pending: Option<Question>,
    consistency: Option<ConsistencyReport>,
}

enum Next {
    Ask(Question),
    Done(WeightVector, Option<ConsistencyReport>),
}

impl ElicitationSession {
    pub fn start<S: AsRef<str>>(technique: WeightingTechnique, criteria: &[S]) -> Result<Self> {
        if criteria.is_empty() {
            return Err(Error::EmptyCriteria);
        }
        let mut seen = HashSet::new();
        for c in criteria {
            if !seen.insert(c.as_ref()) {
                return Err(Error::DuplicateCriterion(c.as_ref().to_owned()));
            }
        }
        let mut session = ElicitationSession {
            transcript: Transcript {
                technique,
                criteria: criteria.iter().map(|c| c.as_ref().to_owned()).collect(),
                qa: Vec::new(),
                weights: None,
            },
            pending: None,
            consistency: None,
        };
        session.advance()?;
        Ok(session)
    }

    /// Rebuilds a session by answering every recorded question in order.
    /// Recorded weights, when present, must agree with the recomputed ones.
    pub fn replay(transcript: &Transcript) -> Result<Self> {
        let mut session = Self::start(transcript.technique, &transcript.criteria)?;
        for (i, qa) in transcript.qa.iter().enumerate() {
            match session.pending() {
                Some(q) if *q == qa.question => {}
                Some(q) => {
                    return Err(Error::MalformedAnswer(format!(
                        "transcript step {i} asks `{}`, session expects `{q}`",
                        qa.question
                    )))
                }
                None => {
                    return Err(Error::MalformedAnswer(format!(
                        "transcript continues past completion at step {i}"
                    )))
                }
            }
            session = session.answer(qa.answer.clone())?;
        }
        if let (Some(recorded), Some(computed)) = (&transcript.weights, session.weights()) {
            let agree = recorded.len() == computed.len()
                && recorded
                    .iter()
                    .all(|(id, w)| computed.get(id).is_some_and(|c| (c - w).abs() <= 1e-9));
            if !agree {
                return Err(Error::MalformedAnswer(
                    "recorded weights differ from the replayed ones".into(),
                ));
            }
        }
        Ok(session)
    }

    pub fn technique(&self) -> WeightingTechnique {
        self.transcript.technique
    }

    pub fn criteria(&self) -> &[String] {
        &self.transcript.criteria
    }

    pub fn pending(&self) -> Option<&Question> {
        self.pending.as_ref()
    }

    pub fn is_complete(&self) -> bool {
        self.pending.is_none()
    }

    pub fn weights(&self) -> Option<&WeightVector> {
        self.transcript.weights.as_ref()
    }

    /// Trade-off sessions only.
    pub fn consistency(&self) -> Option<&ConsistencyReport> {
        self.consistency.as_ref()
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn answer(&self, answer: Answer) -> Result<ElicitationSession> {
        let question = self.pending.as_ref().ok_or(Error::SessionComplete)?;
        check_answer(question, &answer, &self.transcript.criteria)?;
        let mut next = self.clone();
        next.transcript.qa.push(QaPair {
            question: question.clone(),
            answer,
        });
        next.advance()?;
        Ok(next)
    }

    fn advance(&mut self) -> Result<()> {
        match next_step(&self.transcript)? {
            Next::Ask(q) => self.pending = Some(q),
            Next::Done(weights, consistency) => {
                self.pending = None;
                self.transcript.weights = Some(weights);
                self.consistency = consistency;
            }
        }
        Ok(())
    }
}

fn value_of(answer: &Answer) -> Option<f64> {
    match answer {
        Answer::Value(x) => Some(*x),
        _ => None,
    }
}

fn check_answer(question: &Question, answer: &Answer, criteria: &[String]) -> Result<()> {
    let malformed = |msg: String| Err(Error::MalformedAnswer(msg));
    match (question, answer) {
        (Question::Importance { .. }, Answer::Value(x)) if (1.0..=100.0).contains(x) => Ok(()),
        (Question::Importance { criterion }, _) => {
            malformed(format!("importance of `{criterion}` must be a number in [1, 100]"))
        }
        (Question::ImprovementOrder { .. }, Answer::Order(order)) => {
            let listed: HashSet<&str> = order.iter().map(String::as_str).collect();
            let expected: HashSet<&str> = criteria.iter().map(String::as_str).collect();
            if order.len() == criteria.len() && listed == expected {
                Ok(())
            } else {
                malformed(format!("order must list each of {} exactly once", criteria.join(", ")))
            }
        }
        (Question::ImprovementOrder { .. }, _) => malformed("expected a list of criterion ids".into()),
        (Question::SwingPoints { max, .. }, Answer::Value(x)) if *x > 0.0 && x <= max => Ok(()),
        (Question::SwingPoints { criterion, max }, _) => {
            malformed(format!("points for `{criterion}` must be in (0, {max}]"))
        }
        (Question::TradeoffRatio { .. } | Question::CycleCheck { .. }, Answer::Value(x))
            if x.is_finite() && *x > 0.0 =>
        {
            Ok(())
        }
        (Question::CycleCheck { .. }, Answer::Skip(_)) => Ok(()),
        (Question::TradeoffRatio { .. } | Question::CycleCheck { .. }, _) => {
            malformed("ratio must be a positive number".into())
        }
    }
}

fn next_step(t: &Transcript) -> Result<Next> {
    let n = t.criteria.len();
    let answered = t.qa.len();
    match t.technique {
        WeightingTechnique::Smart => {
            if answered < n {
                return Ok(Next::Ask(Question::Importance {
                    criterion: t.criteria[answered].clone(),
                }));
            }
            let scores = t
                .criteria
                .iter()
                .zip(&t.qa)
                .map(|(c, qa)| (c.clone(), value_of(&qa.answer).unwrap_or(f64::NAN)));
            Ok(Next::Done(smart_weights(scores)?, None))
        }
        WeightingTechnique::Swing => {
            if n == 1 {
                let points = HashMap::from([(t.criteria[0].clone(), 100.0)]);
                return Ok(Next::Done(swing_weights(&t.criteria, &points)?, None));
            }
            let Some(first) = t.qa.first() else {
                return Ok(Next::Ask(Question::ImprovementOrder {
                    criteria: t.criteria.clone(),
                }));
            };
            let Answer::Order(order) = &first.answer else {
                return Err(Error::MalformedAnswer(
                    "first swing answer must be the improvement order".into(),
                ));
            };
            let mut points = HashMap::from([(order[0].clone(), 100.0)]);
            let mut previous = 100.0;
            for (criterion, qa) in order[1..].iter().zip(&t.qa[1..]) {
                let p = value_of(&qa.answer).unwrap_or(f64::NAN);
                points.insert(criterion.clone(), p);
                previous = p;
            }
            if points.len() < n {
                return Ok(Next::Ask(Question::SwingPoints {
                    criterion: order[points.len()].clone(),
                    max: previous,
                }));
            }
            Ok(Next::Done(swing_weights(order, &points)?, None))
        }
        WeightingTechnique::Tradeoff => {
            let star = n - 1;
            if answered < star {
                return Ok(Next::Ask(Question::TradeoffRatio {
                    criterion_a: t.criteria[answered + 1].clone(),
                    criterion_b: t.criteria[0].clone(),
                }));
            }
            let checks_answered = answered - star;
            let skipped = t.qa.last().is_some_and(|qa| matches!(qa.answer, Answer::Skip(_)));
            let checks_total = n.saturating_sub(2);
            if !skipped && checks_answered < checks_total {
                let i = 1 + checks_answered;
                return Ok(Next::Ask(Question::CycleCheck {
                    criterion_a: t.criteria[i].clone(),
                    criterion_b: t.criteria[i + 1].clone(),
                }));
            }
            let judgments: Vec<TradeoffJudgment> =
                t.qa.iter()
                    .filter_map(|qa| match (&qa.question, &qa.answer) {
                        (
                            Question::TradeoffRatio {
                                criterion_a,
                                criterion_b,
                            }
                            | Question::CycleCheck {
                                criterion_a,
                                criterion_b,
                            },
                            Answer::Value(r),
                        ) => Some(TradeoffJudgment::new(criterion_a, criterion_b, *r)),
                        _ => None,
                    })
                    .collect();
            let outcome = tradeoff_weights(&t.criteria, &judgments)?;
            Ok(Next::Done(outcome.weights, Some(outcome.consistency)))
        }
    }
}
