//! Decision matrices and direction-aware scoring.
//!
//! A [`DecisionMatrix`] mirrors the repository valuations of the chosen
//! alternatives on the chosen criteria. [`score`] turns it into a
//! [`ScoreMatrix`]: ordinal labels become their 1-based rank in preference
//! order (worst = 1), numeric values pass through (negated when minimized).

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::method_base::Repository;
use crate::typology::DomainKind;
use crate::value::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Maximize,
    Minimize,
    ExplicitOrder,
}

impl Direction {
    pub fn suffix(self) -> &'static str {
        match self {
            Direction::Maximize => ":max",
            Direction::Minimize => ":min",
            Direction::ExplicitOrder => ":ord",
        }
    }
}

/// A characteristic used to compare alternatives, with its preference rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub id: String,
    pub direction: Direction,
    /// Preference order, worst first. Required for `explicit-order`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<String>>,
    /// Labels read as "no evidence" and turned into MISSING cells.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub missing_levels: Vec<String>,
}

impl Criterion {
    pub fn maximize(id: impl Into<String>) -> Self {
        Self::plain(id, Direction::Maximize)
    }

    pub fn minimize(id: impl Into<String>) -> Self {
        Self::plain(id, Direction::Minimize)
    }

    pub fn explicit<S: AsRef<str>>(id: impl Into<String>, order: &[S]) -> Self {
        Criterion {
            order: Some(order.iter().map(|s| s.as_ref().to_owned()).collect()),
            ..Self::plain(id, Direction::ExplicitOrder)
        }
    }

    pub fn with_missing_levels<S: AsRef<str>>(mut self, levels: &[S]) -> Self {
        self.missing_levels = levels.iter().map(|s| s.as_ref().to_owned()).collect();
        self
    }

    fn plain(id: impl Into<String>, direction: Direction) -> Self {
        Criterion {
            id: id.into(),
            direction,
            order: None,
            missing_levels: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Scale {
    /// Labels in preference order, worst first.
    Ordinal {
        preference: Vec<String>,
    },
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixCriterion {
    pub id: String,
    pub direction: Direction,
    pub scale: Scale,
}

impl MatrixCriterion {
    pub fn scale_size(&self) -> Option<usize> {
        match &self.scale {
            Scale::Ordinal { preference } => Some(preference.len()),
            Scale::Numeric => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Label(String),
    Number(f64),
    Missing,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Label(l) => f.write_str(l),
            Cell::Number(x) => write!(f, "{x}"),
            Cell::Missing => Ok(()),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cell::Label(l) => s.serialize_str(l),
            Cell::Number(x) => s.serialize_f64(*x),
            Cell::Missing => s.serialize_none(),
        }
    }
}

/// Alternatives x criteria evaluations. `cells[a][c]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecisionMatrix {
    pub alternatives: Vec<String>,
    pub criteria: Vec<MatrixCriterion>,
    pub cells: Vec<Vec<Cell>>,
}

pub fn build_matrix<S: AsRef<str>>(
    repo: &Repository,
    alternatives: &[S],
    criteria: &[Criterion],
) -> Result<DecisionMatrix> {
    if criteria.is_empty() {
        return Err(Error::EmptyCriteria);
    }
    if alternatives.is_empty() {
        return Err(Error::TooFewAlternatives { required: 1, found: 0 });
    }
    let mut seen = HashSet::new();
    for c in criteria {
        if !seen.insert(c.id.as_str()) {
            return Err(Error::DuplicateCriterion(c.id.clone()));
        }
    }
    let mut seen = HashSet::new();
    for a in alternatives {
        if !seen.insert(a.as_ref()) {
            return Err(Error::DuplicateChunk(a.as_ref().to_owned()));
        }
    }

    let resolved = criteria
        .iter()
        .map(|c| resolve_criterion(repo, c))
        .collect::<Result<Vec<_>>>()?;

    let mut cells = Vec::with_capacity(alternatives.len());
    for alt in alternatives {
        let alt = alt.as_ref();
        let chunk = repo.get(alt).ok_or_else(|| Error::UnknownChunk(alt.to_owned()))?;
        let row = criteria
            .iter()
            .zip(&resolved)
            .map(|(criterion, mc)| {
                let value = chunk.valuation(&criterion.id).ok_or_else(|| Error::UndescribedCell {
                    alternative: alt.to_owned(),
                    criterion: criterion.id.clone(),
                })?;
                to_cell(alt, criterion, mc, value)
            })
            .collect::<Result<Vec<_>>>()?;
        cells.push(row);
    }

    Ok(DecisionMatrix {
        alternatives: alternatives.iter().map(|a| a.as_ref().to_owned()).collect(),
        criteria: resolved,
        cells,
    })
}

fn resolve_criterion(repo: &Repository, criterion: &Criterion) -> Result<MatrixCriterion> {
    let invalid = |reason: &str| Error::InvalidCriterion {
        criterion: criterion.id.clone(),
        reason: reason.to_owned(),
    };
    let characteristic = repo
        .typology()
        .get(&criterion.id)
        .ok_or_else(|| Error::UnknownCharacteristic(criterion.id.clone()))?;
    let domain = &characteristic.domain;
    if domain.multi_select {
        return Err(invalid("multi-select characteristics cannot be criteria"));
    }

    let scale = match (domain.kind, criterion.direction) {
        (DomainKind::Numeric, Direction::ExplicitOrder) => {
            return Err(invalid("numeric criteria take maximize or minimize"));
        }
        (DomainKind::Numeric, _) => Scale::Numeric,
        (DomainKind::Nominal, Direction::Maximize | Direction::Minimize) => {
            return Err(invalid("nominal criteria need an explicit order"));
        }
        (_, Direction::ExplicitOrder) => {
            let order = criterion
                .order
                .as_ref()
                .ok_or_else(|| invalid("explicit-order criterion without an order"))?;
            let listed: HashSet<&str> = order.iter().map(String::as_str).collect();
            let levels: HashSet<&str> = domain.levels.iter().map(String::as_str).collect();
            if order.len() != domain.levels.len() || listed != levels {
                return Err(invalid("order must list every domain label exactly once"));
            }
            Scale::Ordinal {
                preference: order.clone(),
            }
        }
        (_, Direction::Maximize) => Scale::Ordinal {
            preference: domain.levels.clone(),
        },
        (_, Direction::Minimize) => Scale::Ordinal {
            preference: domain.levels.iter().rev().cloned().collect(),
        },
    };

    if let Some(level) = criterion.missing_levels.iter().find(|l| domain.position(l).is_none()) {
        return Err(invalid(&format!("missing level `{level}` is not a domain label")));
    }

    Ok(MatrixCriterion {
        id: criterion.id.clone(),
        direction: criterion.direction,
        scale,
    })
}

fn to_cell(alternative: &str, criterion: &Criterion, mc: &MatrixCriterion, value: &Value) -> Result<Cell> {
    let cell = match (&mc.scale, value) {
        (_, Value::Missing) => Cell::Missing,
        (Scale::Ordinal { .. }, Value::Label(l)) if criterion.missing_levels.contains(l) => Cell::Missing,
        (Scale::Ordinal { preference }, Value::Label(l)) if preference.contains(l) => Cell::Label(l.clone()),
        (Scale::Numeric, Value::Number(x)) => Cell::Number(*x),
        _ => {
            return Err(Error::InvalidCell {
                alternative: alternative.to_owned(),
                criterion: criterion.id.clone(),
                value: value.to_string(),
            })
        }
    };
    Ok(cell)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ScaleKind {
    Ordinal { levels: usize },
    Numeric,
}

/// A scored criterion with the score range used for discordance.
///
/// Ordinal criteria span their full scale `[1, L]`; numeric criteria span
/// the observed scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredCriterion {
    pub id: String,
    pub direction: Direction,
    pub kind: ScaleKind,
    pub min: f64,
    pub max: f64,
}

impl ScoredCriterion {
    pub fn ordinal(id: impl Into<String>, direction: Direction, levels: usize) -> Self {
        ScoredCriterion {
            id: id.into(),
            direction,
            kind: ScaleKind::Ordinal { levels },
            min: 1.0,
            max: levels as f64,
        }
    }

    pub fn numeric(id: impl Into<String>, direction: Direction, min: f64, max: f64) -> Self {
        ScoredCriterion {
            id: id.into(),
            direction,
            kind: ScaleKind::Numeric,
            min,
            max,
        }
    }

    pub fn range(&self) -> f64 {
        self.max - self.min
    }
}

/// Numeric scores, same shape as the decision matrix. `None` is MISSING.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreMatrix {
    alternatives: Vec<String>,
    criteria: Vec<ScoredCriterion>,
    cells: Vec<Vec<Option<f64>>>,
    #[serde(default)]
    normalized: bool,
}

/// Whether the data allow additive aggregation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DataNature {
    HomogeneousNormalized,
    Mixed,
}

impl ScoreMatrix {
    pub fn new(
        alternatives: Vec<String>,
        criteria: Vec<ScoredCriterion>,
        cells: Vec<Vec<Option<f64>>>,
    ) -> Result<Self> {
        let m = ScoreMatrix {
            alternatives,
            criteria,
            cells,
            normalized: false,
        };
        m.check()?;
        Ok(m)
    }

    fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidMatrix(msg));
        if self.cells.len() != self.alternatives.len() {
            return bad(format!(
                "{} rows for {} alternatives",
                self.cells.len(),
                self.alternatives.len()
            ));
        }
        let ids: HashSet<&str> = self.alternatives.iter().map(String::as_str).collect();
        if ids.len() != self.alternatives.len() {
            return bad("duplicate alternative ids".into());
        }
        let ids: HashSet<&str> = self.criteria.iter().map(|c| c.id.as_str()).collect();
        if ids.len() != self.criteria.len() {
            return bad("duplicate criterion ids".into());
        }
        for (a, row) in self.alternatives.iter().zip(&self.cells) {
            if row.len() != self.criteria.len() {
                return bad(format!(
                    "row `{a}` has {} cells for {} criteria",
                    row.len(),
                    self.criteria.len()
                ));
            }
            for (c, cell) in self.criteria.iter().zip(row) {
                let Some(x) = cell else { continue };
                if !x.is_finite() {
                    return bad(format!("({a}, {}) is not finite", c.id));
                }
                if let ScaleKind::Ordinal { levels } = c.kind {
                    if !self.normalized && (x.fract() != 0.0 || *x < 1.0 || *x > levels as f64) {
                        return bad(format!(
                            "({a}, {}) = {x} is not a level of a {levels}-level scale",
                            c.id
                        ));
                    }
                }
            }
        }
        for c in &self.criteria {
            if let ScaleKind::Ordinal { levels } = c.kind {
                if levels < 2 {
                    return bad(format!("`{}` has fewer than 2 levels", c.id));
                }
            }
            if c.min.partial_cmp(&c.max).is_none_or(|o| o.is_gt()) {
                return bad(format!("`{}` has an empty range", c.id));
            }
        }
        Ok(())
    }

    pub fn alternatives(&self) -> &[String] {
        &self.alternatives
    }

    pub fn criteria(&self) -> &[ScoredCriterion] {
        &self.criteria
    }

    pub fn criterion_ids(&self) -> impl Iterator<Item = &str> {
        self.criteria.iter().map(|c| c.id.as_str())
    }

    pub fn rows(&self) -> &[Vec<Option<f64>>] {
        &self.cells
    }

    pub fn get(&self, alternative: usize, criterion: usize) -> Option<f64> {
        self.cells[alternative][criterion]
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn first_missing(&self) -> Option<(usize, usize)> {
        self.cells
            .iter()
            .enumerate()
            .find_map(|(a, row)| row.iter().position(Option::is_none).map(|c| (a, c)))
    }

    pub(crate) fn missing_error(&self) -> Result<()> {
        match self.first_missing() {
            Some((a, c)) => Err(Error::MissingCell {
                alternative: self.alternatives[a].clone(),
                criterion: self.criteria[c].id.clone(),
            }),
            None => Ok(()),
        }
    }

    /// Ok when every criterion shares one ordinal scale or the scores are
    /// normalized.
    pub fn check_homogeneous(&self) -> Result<()> {
        if self.normalized {
            return Ok(());
        }
        let mut first: Option<(usize, &str)> = None;
        for c in &self.criteria {
            match (c.kind, first) {
                (ScaleKind::Numeric, _) => {
                    return Err(Error::HeterogeneousScores(format!(
                        "`{}` is numeric and not normalized",
                        c.id
                    )))
                }
                (ScaleKind::Ordinal { levels }, None) => first = Some((levels, &c.id)),
                (ScaleKind::Ordinal { levels }, Some((expected, other))) if levels != expected => {
                    return Err(Error::HeterogeneousScores(format!(
                        "`{}` has {levels} levels, `{other}` has {expected}",
                        c.id
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn data_nature(&self) -> DataNature {
        if self.first_missing().is_none() && self.check_homogeneous().is_ok() {
            DataNature::HomogeneousNormalized
        } else {
            DataNature::Mixed
        }
    }

    /// Keeps only the named criteria, in the given order.
    pub fn select_criteria<S: AsRef<str>>(&self, ids: &[S]) -> Result<ScoreMatrix> {
        let idx = ids
            .iter()
            .map(|id| {
                self.criteria
                    .iter()
                    .position(|c| c.id == id.as_ref())
                    .ok_or_else(|| Error::UnknownCharacteristic(id.as_ref().to_owned()))
            })
            .collect::<Result<Vec<_>>>()?;
        let m = ScoreMatrix {
            alternatives: self.alternatives.clone(),
            criteria: idx.iter().map(|&i| self.criteria[i].clone()).collect(),
            cells: self
                .cells
                .iter()
                .map(|row| idx.iter().map(|&i| row[i]).collect())
                .collect(),
            normalized: self.normalized,
        };
        m.check()?;
        Ok(m)
    }

    pub fn to_csv(&self) -> Result<String> {
        write_csv(
            &self.alternatives,
            self.criteria
                .iter()
                .map(|c| format!("{}{}", c.id, c.direction.suffix())),
            self.cells.iter().map(|row| {
                row.iter()
                    .map(|c| c.map(|x| x.to_string()).unwrap_or_default())
                    .collect()
            }),
        )
    }
}

pub fn score(matrix: &DecisionMatrix) -> ScoreMatrix {
    let cells: Vec<Vec<Option<f64>>> = matrix
        .cells
        .iter()
        .map(|row| {
            row.iter()
                .zip(&matrix.criteria)
                .map(|(cell, c)| match (cell, &c.scale) {
                    (Cell::Missing, _) => None,
                    (Cell::Label(l), Scale::Ordinal { preference }) => {
                        preference.iter().position(|p| p == l).map(|i| (i + 1) as f64)
                    }
                    (Cell::Number(x), Scale::Numeric) => Some(match c.direction {
                        Direction::Minimize => -x,
                        _ => *x,
                    }),
                    // build_matrix only produces cells matching their scale
                    _ => None,
                })
                .collect()
        })
        .collect();

    let criteria = matrix
        .criteria
        .iter()
        .enumerate()
        .map(|(i, c)| match &c.scale {
            Scale::Ordinal { preference } => ScoredCriterion::ordinal(&c.id, c.direction, preference.len()),
            Scale::Numeric => {
                let (min, max) = observed_range(cells.iter().map(|row| row[i])).unwrap_or((0.0, 0.0));
                ScoredCriterion::numeric(&c.id, c.direction, min, max)
            }
        })
        .collect();

    ScoreMatrix {
        alternatives: matrix.alternatives.clone(),
        criteria,
        cells,
        normalized: false,
    }
}

fn observed_range(column: impl Iterator<Item = Option<f64>>) -> Option<(f64, f64)> {
    column.flatten().fold(None, |acc, x| match acc {
        None => Some((x, x)),
        Some((lo, hi)) => Some((lo.min(x), hi.max(x))),
    })
}

/// Per-criterion min-max rescaling of observed scores to `[0, 1]`.
/// Constant columns map to 1.0.
pub fn normalize(scores: &ScoreMatrix) -> Result<ScoreMatrix> {
    scores.missing_error()?;
    let n_crit = scores.criteria.len();
    let ranges: Vec<(f64, f64)> = (0..n_crit)
        .map(|i| observed_range(scores.cells.iter().map(|row| row[i])).unwrap_or((0.0, 0.0)))
        .collect();
    let cells = scores
        .cells
        .iter()
        .map(|row| {
            row.iter()
                .zip(&ranges)
                .map(|(x, &(lo, hi))| {
                    let x = x.expect("checked for missing cells");
                    Some(if hi > lo { (x - lo) / (hi - lo) } else { 1.0 })
                })
                .collect()
        })
        .collect();
    let criteria = scores
        .criteria
        .iter()
        .map(|c| ScoredCriterion {
            min: 0.0,
            max: 1.0,
            ..c.clone()
        })
        .collect();
    Ok(ScoreMatrix {
        alternatives: scores.alternatives.clone(),
        criteria,
        cells,
        normalized: true,
    })
}

impl DecisionMatrix {
    pub fn to_csv(&self) -> Result<String> {
        write_csv(
            &self.alternatives,
            self.criteria
                .iter()
                .map(|c| format!("{}{}", c.id, c.direction.suffix())),
            self.cells.iter().map(|row| row.iter().map(Cell::to_string).collect()),
        )
    }
}

fn write_csv(
    alternatives: &[String],
    header: impl Iterator<Item = String>,
    rows: impl Iterator<Item = Vec<String>>,
) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(std::iter::once("alternative".to_owned()).chain(header))?;
    for (alt, row) in alternatives.iter().zip(rows) {
        w.write_record(std::iter::once(alt.clone()).chain(row))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
