//! Action tokens and observable words.

use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Name used for the quiescence token in files and reports.
pub const QUIESCENCE: &str = "delta";
/// Name used for the internal action in model files.
pub const TAU: &str = "tau";

const RESERVED: [&str; 4] = [TAU, QUIESCENCE, "fail", "pass"];

/// An observable action label.
///
/// User actions are validated names over `[A-Za-z0-9_]`. The quiescence
/// token δ is a distinguished value that can only be obtained through
/// [`Action::quiescence`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Action(Arc<str>);

impl Action {
    pub fn new(name: &str) -> Result<Self> {
        if !is_identifier(name) {
            return Err(Error::InvalidName(name.to_string()));
        }
        if is_reserved(name) {
            return Err(Error::Reserved(name.to_string()));
        }
        Ok(Action(name.into()))
    }

    /// The quiescence token δ.
    pub fn quiescence() -> Self {
        Action(QUIESCENCE.into())
    }

    pub fn is_quiescence(&self) -> bool {
        &*self.0 == QUIESCENCE
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// Parses a token as written in regexes and reports, where `delta`
    /// (or `δ`) denotes quiescence.
    pub fn parse_observable(name: &str) -> Result<Self> {
        if name == QUIESCENCE || name == "δ" {
            Ok(Action::quiescence())
        } else {
            Action::new(name)
        }
    }
}

pub(crate) fn is_identifier(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn is_reserved(name: &str) -> bool {
    RESERVED.contains(&name)
}

impl fmt::Debug for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Action {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Action {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Action::parse_observable(&s).map_err(serde::de::Error::custom)
    }
}

/// A sequence of observable actions. Never contains τ.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<Action>);

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    /// Parses a whitespace-separated word; `delta` denotes quiescence.
    pub fn parse(text: &str) -> Result<Self> {
        text.split_whitespace()
            .map(Action::parse_observable)
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn push(&mut self, action: Action) {
        self.0.push(action);
    }

    pub fn into_vec(self) -> Vec<Action> {
        self.0
    }
}

impl From<Vec<Action>> for Word {
    fn from(v: Vec<Action>) -> Self {
        Word(v)
    }
}

impl FromIterator<Action> for Word {
    fn from_iter<I: IntoIterator<Item = Action>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl Deref for Word {
    type Target = [Action];

    fn deref(&self) -> &[Action] {
        &self.0
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

/// Tokens separated by single spaces; the empty word prints as `ε`.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_reserved_and_malformed_names() {
        for bad in ["tau", "delta", "fail", "pass"] {
            assert!(matches!(Action::new(bad), Err(Error::Reserved(_))));
        }
        assert!(matches!(Action::new(""), Err(Error::InvalidName(_))));
        assert!(matches!(Action::new("a-b"), Err(Error::InvalidName(_))));
        assert!(Action::new("amo_2").is_ok());
    }

    #[test]
    fn quiescence_only_via_constructor() {
        assert!(Action::quiescence().is_quiescence());
        assert!(Action::parse_observable("δ").unwrap().is_quiescence());
        assert!(!Action::new("x").unwrap().is_quiescence());
    }

    #[test]
    fn word_display_and_parse() {
        let w = Word::parse("ic pin delta").unwrap();
        assert_eq!(w.len(), 3);
        assert!(w[2].is_quiescence());
        assert_eq!(w.to_string(), "ic pin delta");
        assert_eq!(Word::new().to_string(), "ε");
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(json, r#"["ic","pin","delta"]"#);
        let back: Word = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w);
    }
}
