//! Characteristic values as they appear in profiles and chunk descriptions.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Wire marker for a valuation that is explicitly not applicable.
pub const MISSING_MARKER: &str = "__missing__";

/// A single characteristic value.
///
/// Serialized untagged: labels as strings, numbers as numbers, multi-select
/// picks as arrays of strings, and [`Value::Missing`] as `"__missing__"`.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Label(String),
    Number(f64),
    Labels(Vec<String>),
    Missing,
}

impl Value {
    pub fn label(s: impl Into<String>) -> Self {
        Value::Label(s.into())
    }

    pub fn is_missing(&self) -> bool {
        matches!(self, Value::Missing)
    }

    /// Equality used for profile matching. Missing never matches, and
    /// multi-select picks compare as sets.
    pub fn matches(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Missing, _) | (_, Value::Missing) => false,
            (Value::Labels(a), Value::Labels(b)) => {
                let mut a = a.clone();
                let mut b = b.clone();
                a.sort();
                a.dedup();
                b.sort();
                b.dedup();
                a == b
            }
            (a, b) => a == b,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Label(s) => write!(f, "\"{s}\""),
            Value::Number(x) => write!(f, "{x}"),
            Value::Labels(v) => write!(f, "[{}]", v.join(", ")),
            Value::Missing => f.write_str(MISSING_MARKER),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawValue {
    Number(f64),
    Text(String),
    List(Vec<String>),
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Label(s) => serializer.serialize_str(s),
            Value::Number(x) => serializer.serialize_f64(*x),
            Value::Labels(v) => v.serialize(serializer),
            Value::Missing => serializer.serialize_str(MISSING_MARKER),
        }
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match RawValue::deserialize(deserializer)? {
            RawValue::Number(x) if x.is_finite() => Ok(Value::Number(x)),
            RawValue::Number(x) => Err(D::Error::custom(format!("non-finite number {x}"))),
            RawValue::Text(s) if s == MISSING_MARKER => Ok(Value::Missing),
            RawValue::Text(s) => Ok(Value::Label(s)),
            RawValue::List(v) => Ok(Value::Labels(v)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_marker_round_trips() {
        let json = serde_json::to_string(&Value::Missing).unwrap();
        assert_eq!(json, "\"__missing__\"");
        let back: Value = serde_json::from_str(&json).unwrap();
        assert_eq!(back, Value::Missing);
    }

    #[test]
    fn untagged_shapes() {
        let v: Vec<Value> = serde_json::from_str(r#"["high", 12, ["human", "organisational"]]"#).unwrap();
        assert_eq!(v[0], Value::label("high"));
        assert_eq!(v[1], Value::Number(12.0));
        assert_eq!(v[2], Value::Labels(vec!["human".into(), "organisational".into()]));
    }

    #[test]
    fn missing_never_matches() {
        assert!(!Value::Missing.matches(&Value::Missing));
        assert!(Value::label("high").matches(&Value::label("high")));
        assert!(Value::Labels(vec!["a".into(), "b".into()]).matches(&Value::Labels(vec!["b".into(), "a".into()])));
    }
}
