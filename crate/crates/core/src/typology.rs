//! Project-characteristics typology.
//!
//! The built-in catalog holds 29 characteristics in four dimensions. Each
//! characteristic has a primary value domain and optionally secondary facet
//! domains (subtype sets listed next to the intensity scale). The catalog can
//! be extended with method-proper characteristics such as guidance or
//! formalism.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::value::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dimension {
    Organisational,
    Human,
    ApplicationDomain,
    DevelopmentStrategy,
}

impl Dimension {
    pub const ALL: [Dimension; 4] = [
        Dimension::Organisational,
        Dimension::Human,
        Dimension::ApplicationDomain,
        Dimension::DevelopmentStrategy,
    ];
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dimension::Organisational => "organisational",
            Dimension::Human => "human",
            Dimension::ApplicationDomain => "application-domain",
            Dimension::DevelopmentStrategy => "development-strategy",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainKind {
    Ordinal,
    Nominal,
    Numeric,
}

/// Set of admissible values for a characteristic.
///
/// Ordinal levels run from least to greatest (`low < normal < high`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueDomain {
    pub kind: DomainKind,
    #[serde(default)]
    pub levels: Vec<String>,
    /// Nominal domains only: a value may pick several labels.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub multi_select: bool,
    /// Numeric domains only: values are non-negative integers.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub count: bool,
}

impl ValueDomain {
    pub fn ordinal<S: AsRef<str>>(levels: &[S]) -> Self {
        Self::with_kind(DomainKind::Ordinal, levels)
    }

    pub fn nominal<S: AsRef<str>>(labels: &[S]) -> Self {
        Self::with_kind(DomainKind::Nominal, labels)
    }

    pub fn numeric() -> Self {
        Self::with_kind::<&str>(DomainKind::Numeric, &[])
    }

    pub fn count() -> Self {
        ValueDomain {
            count: true,
            ..Self::numeric()
        }
    }

    pub fn multi_select(mut self) -> Self {
        self.multi_select = true;
        self
    }

    fn with_kind<S: AsRef<str>>(kind: DomainKind, levels: &[S]) -> Self {
        ValueDomain {
            kind,
            levels: levels.iter().map(|s| s.as_ref().to_owned()).collect(),
            multi_select: false,
            count: false,
        }
    }

    pub fn check(&self) -> std::result::Result<(), String> {
        match self.kind {
            DomainKind::Ordinal | DomainKind::Nominal => {
                if self.levels.len() < 2 {
                    return Err(format!("{:?} domain needs at least 2 labels", self.kind));
                }
                let distinct: HashSet<&str> = self.levels.iter().map(String::as_str).collect();
                if distinct.len() != self.levels.len() {
                    return Err("labels must be distinct".into());
                }
                if self.count {
                    return Err("only numeric domains can be counts".into());
                }
                if self.multi_select && self.kind == DomainKind::Ordinal {
                    return Err("ordinal domains cannot be multi-select".into());
                }
            }
            DomainKind::Numeric => {
                if !self.levels.is_empty() {
                    return Err("numeric domains have no labels".into());
                }
                if self.multi_select {
                    return Err("numeric domains cannot be multi-select".into());
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, value: &Value) -> bool {
        match (self.kind, value) {
            (DomainKind::Numeric, Value::Number(x)) => {
                x.is_finite() && (!self.count || (*x >= 0.0 && x.fract() == 0.0))
            }
            (DomainKind::Ordinal | DomainKind::Nominal, Value::Label(l)) => self.position(l).is_some(),
            (DomainKind::Nominal, Value::Labels(picks)) if self.multi_select => {
                !picks.is_empty() && picks.iter().all(|l| self.position(l).is_some())
            }
            _ => false,
        }
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.levels.iter().position(|l| l == label)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Characteristic {
    pub id: String,
    pub name: String,
    pub dimension: Dimension,
    #[serde(flatten)]
    pub domain: ValueDomain,
    #[serde(default)]
    pub facets: Vec<ValueDomain>,
    #[serde(default)]
    pub source: Vec<u8>,
    #[serde(default)]
    pub builtin: bool,
}

impl Characteristic {
    pub fn new(id: impl Into<String>, name: impl Into<String>, dimension: Dimension, domain: ValueDomain) -> Self {
        Characteristic {
            id: id.into(),
            name: name.into(),
            dimension,
            domain,
            facets: Vec::new(),
            source: Vec::new(),
            builtin: false,
        }
    }

    /// Whether `value` belongs to the primary domain or to one of the facets.
    pub fn admits(&self, value: &Value) -> bool {
        self.domain.contains(value) || self.facets.iter().any(|f| f.contains(value))
    }

    fn check(&self) -> Result<()> {
        let invalid = |reason: String| Error::InvalidDomain {
            id: self.id.clone(),
            reason,
        };
        if self.id.is_empty() {
            return Err(invalid("empty id".into()));
        }
        self.domain.check().map_err(&invalid)?;
        for facet in &self.facets {
            facet.check().map_err(|r| invalid(format!("facet: {r}")))?;
        }
        if let Some(s) = self.source.iter().find(|s| !(1..=3).contains(*s)) {
            return Err(invalid(format!("source {s} is not one of 1, 2, 3")));
        }
        if self.builtin && self.source.is_empty() {
            return Err(invalid("built-in characteristic without source".into()));
        }
        Ok(())
    }
}

/// Catalog of characteristics in table order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Characteristic>", into = "Vec<Characteristic>")]
pub struct Typology {
    characteristics: Vec<Characteristic>,
}

impl TryFrom<Vec<Characteristic>> for Typology {
    type Error = Error;

    fn try_from(characteristics: Vec<Characteristic>) -> Result<Self> {
        Typology::new(characteristics)
    }
}

impl From<Typology> for Vec<Characteristic> {
    fn from(t: Typology) -> Self {
        t.characteristics
    }
}

impl Typology {
    pub fn new(characteristics: Vec<Characteristic>) -> Result<Self> {
        let mut seen = HashSet::new();
        for c in &characteristics {
            c.check()?;
            if !seen.insert(c.id.as_str()) {
                return Err(Error::DuplicateCharacteristic(c.id.clone()));
            }
        }
        Ok(Typology { characteristics })
    }

    /// The built-in 29-characteristic catalog.
    pub fn builtin() -> Self {
        Typology {
            characteristics: builtin_catalog(),
        }
    }

    pub fn characteristics(&self) -> &[Characteristic] {
        &self.characteristics
    }

    pub fn len(&self) -> usize {
        self.characteristics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characteristics.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Characteristic> {
        self.characteristics.iter().find(|c| c.id == id)
    }

    pub fn in_dimension(&self, dimension: Dimension) -> impl Iterator<Item = &Characteristic> {
        self.characteristics.iter().filter(move |c| c.dimension == dimension)
    }

    /// Returns a new catalog with `characteristic` appended as a user extension.
    pub fn extend(&self, mut characteristic: Characteristic) -> Result<Typology> {
        if self.get(&characteristic.id).is_some() {
            return Err(Error::DuplicateCharacteristic(characteristic.id));
        }
        characteristic.builtin = false;
        characteristic.check()?;
        let mut characteristics = self.characteristics.clone();
        characteristics.push(characteristic);
        Ok(Typology { characteristics })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("typology serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(Error::from_json)
    }

    pub fn validate_profile(&self, profile: &ProjectProfile) -> ValidationReport {
        let issues = profile
            .entries
            .iter()
            .filter_map(|(id, entry)| match self.get(id) {
                None => Some(ValidationIssue {
                    characteristic: id.clone(),
                    problem: Problem::UnknownCharacteristic,
                }),
                Some(c) if !c.admits(&entry.value) => Some(ValidationIssue {
                    characteristic: id.clone(),
                    problem: Problem::OutOfDomain {
                        value: entry.value.clone(),
                    },
                }),
                Some(_) => None,
            })
            .collect();
        ValidationReport { issues }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub value: Value,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub critical: bool,
}

/// Chosen values for the project at hand, keyed by characteristic id.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ProjectProfile {
    #[serde(default)]
    pub entries: BTreeMap<String, ProfileEntry>,
}

impl ProjectProfile {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, id: impl Into<String>, value: Value, critical: bool) -> &mut Self {
        self.entries.insert(id.into(), ProfileEntry { value, critical });
        self
    }

    pub fn with(mut self, id: impl Into<String>, value: Value) -> Self {
        self.set(id, value, false);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn critical(&self) -> impl Iterator<Item = &str> {
        self.entries
            .iter()
            .filter(|(_, e)| e.critical)
            .map(|(id, _)| id.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Problem {
    UnknownCharacteristic,
    OutOfDomain { value: Value },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationIssue {
    pub characteristic: String,
    #[serde(flatten)]
    pub problem: Problem,
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.problem {
            Problem::UnknownCharacteristic => write!(f, "unknown characteristic `{}`", self.characteristic),
            Problem::OutOfDomain { value } => {
                write!(f, "{value} is not a value of `{}`", self.characteristic)
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidProfile(
                self.issues.iter().map(|i| i.to_string()).collect(),
            ))
        }
    }
}

const LNH: &[&str] = &["low", "normal", "high"];

fn builtin_catalog() -> Vec<Characteristic> {
    use Dimension::*;

    let row = |id: &str, name: &str, dim: Dimension, domain: ValueDomain, source: &[u8]| Characteristic {
        id: id.into(),
        name: name.into(),
        dimension: dim,
        domain,
        facets: Vec::new(),
        source: source.to_vec(),
        builtin: true,
    };
    let with_facets = |mut c: Characteristic, facets: Vec<ValueDomain>| {
        c.facets = facets;
        c
    };
    let lnh = || ValueDomain::ordinal(LNH);

    vec![
        // organisational
        row(
            "management-commitment",
            "Management commitment",
            Organisational,
            lnh(),
            &[1, 2, 3],
        ),
        row("importance", "Importance", Organisational, lnh(), &[1, 3]),
        row("impact", "Impact", Organisational, lnh(), &[1, 2, 3]),
        row("time-pressure", "Time pressure", Organisational, lnh(), &[1, 2, 3]),
        with_facets(
            row(
                "shortage-of-resources",
                "Shortage of resources",
                Organisational,
                lnh(),
                &[1, 2, 3],
            ),
            vec![
                ValueDomain::nominal(&["human", "means"]),
                ValueDomain::nominal(&[
                    "financial resources",
                    "human resources",
                    "temporal resources",
                    "informational resources",
                ]),
            ],
        ),
        row("size", "Size", Organisational, lnh(), &[1, 2, 3]),
        with_facets(
            row(
                "level-of-innovation",
                "Level of innovation",
                Organisational,
                lnh(),
                &[1, 2, 3],
            ),
            vec![ValueDomain::nominal(&["business innovation", "technology innovation"])],
        ),
        // human
        row(
            "resistance-and-conflict",
            "Resistance and conflict",
            Human,
            lnh(),
            &[1, 3],
        ),
        with_facets(
            row(
                "expertise",
                "Expertise (knowledge, experience, and skills)",
                Human,
                lnh(),
                &[1, 2, 3],
            ),
            vec![ValueDomain::nominal(&["tester", "developer", "designer", "analyst"])],
        ),
        row(
            "clarity-and-stability",
            "Clarity and stability",
            Human,
            lnh(),
            &[1, 2, 3],
        ),
        row(
            "user-involvement",
            "User involvement",
            Human,
            ValueDomain::nominal(&["real", "virtual"]),
            &[2, 3],
        ),
        row(
            "stakeholder-number",
            "Stakeholder number",
            Human,
            ValueDomain::count(),
            &[3],
        ),
        // application domain
        row("formality", "Formality", ApplicationDomain, lnh(), &[1, 2, 3]),
        row("relationships", "Relationships", ApplicationDomain, lnh(), &[1, 3]),
        row("dependency", "Dependency", ApplicationDomain, lnh(), &[1, 2, 3]),
        row("complexity", "Complexity", ApplicationDomain, lnh(), &[1, 3]),
        row(
            "application-type",
            "Application type",
            ApplicationDomain,
            ValueDomain::nominal(&[
                "intra-organization application",
                "inter-organization application",
                "organization-customer application",
            ]),
            &[2, 3],
        ),
        row(
            "application-technology",
            "Application technology",
            ApplicationDomain,
            ValueDomain::nominal(&[
                "application to develop includes a database",
                "application to develop is distributed",
                "application to develop includes a GUI",
            ]),
            &[2, 3],
        ),
        row(
            "dividing-project",
            "Dividing project",
            ApplicationDomain,
            ValueDomain::nominal(&[
                "one single system",
                "establishing system-oriented subprojects",
                "establishing process-oriented subprojects",
                "establishing hybrid subprojects",
            ]),
            &[1, 2, 3],
        ),
        row("repetitiveness", "Repetitiveness", ApplicationDomain, lnh(), &[3]),
        row("variability", "Variability", ApplicationDomain, lnh(), &[3]),
        row(
            "variable-artefacts",
            "Variable artefacts",
            ApplicationDomain,
            ValueDomain::nominal(&["organisational", "human", "application domain", "development strategy"])
                .multi_select(),
            &[3],
        ),
        // development strategy
        with_facets(
            row(
                "source-system",
                "Source system",
                DevelopmentStrategy,
                ValueDomain::ordinal(&["weak", "medium", "strong"]),
                &[2, 3],
            ),
            vec![ValueDomain::nominal(&[
                "code reuse",
                "functional domain reuse",
                "interface reuse",
            ])],
        ),
        row(
            "project-organization",
            "Project organization",
            DevelopmentStrategy,
            ValueDomain::nominal(&["standard", "adapted"]),
            &[1, 2, 3],
        ),
        row(
            "development-strategy",
            "Development strategy",
            DevelopmentStrategy,
            ValueDomain::nominal(&["outsourcing", "iterative", "prototyping", "phase-wise", "tile-wise"]),
            &[1, 2, 3],
        ),
        row(
            "realization-strategy",
            "Realization strategy",
            DevelopmentStrategy,
            ValueDomain::nominal(&["at once", "incremental", "concurrent", "overlapping"]),
            &[1, 2, 3],
        ),
        row(
            "delivery-strategy",
            "Delivery strategy",
            DevelopmentStrategy,
            ValueDomain::nominal(&["at once", "incremental", "evolutionary"]),
            &[1, 2, 3],
        ),
        row(
            "tracing-project",
            "Tracing project",
            DevelopmentStrategy,
            ValueDomain::ordinal(&["weak", "strong"]),
            &[1, 2, 3],
        ),
        row(
            "goal-number",
            "Goal number",
            DevelopmentStrategy,
            ValueDomain::nominal(&["one goal", "multi-goals"]),
            &[3],
        ),
    ]
}
