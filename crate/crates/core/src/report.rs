//! Pass/fail records produced by checks and verification suites.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub inputs: BTreeMap<String, String>,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Case {
    pub fn new(
        inputs: impl IntoIterator<Item = (&'static str, String)>,
        expected: impl Into<String>,
        actual: impl Into<String>,
    ) -> Case {
        let expected = expected.into();
        let actual = actual.into();
        Case {
            inputs: inputs.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            pass: expected == actual,
            expected,
            actual,
            witness: None,
        }
    }

    /// A case whose verdict is decided by the caller rather than by string
    /// equality of `expected` and `actual`.
    pub fn judged(
        inputs: impl IntoIterator<Item = (&'static str, String)>,
        expected: impl Into<String>,
        actual: impl Into<String>,
        pass: bool,
    ) -> Case {
        Case {
            pass,
            ..Case::new(inputs, expected, actual)
        }
    }

    pub fn with_witness(mut self, witness: impl Into<String>) -> Case {
        self.witness = Some(witness.into());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub config: BTreeMap<String, Value>,
    pub cases: Vec<Case>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(suite: impl Into<String>, seed: u64) -> Report {
        Report {
            suite: suite.into(),
            seed,
            config: BTreeMap::new(),
            cases: Vec::new(),
            summary: Summary {
                total: 0,
                passed: 0,
                failed: 0,
            },
            notes: Vec::new(),
        }
    }

    pub fn config(mut self, key: &str, value: impl Into<Value>) -> Report {
        self.config.insert(key.to_string(), value.into());
        self
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn push(&mut self, case: Case) {
        self.summary.total += 1;
        if case.pass {
            self.summary.passed += 1;
        } else {
            self.summary.failed += 1;
        }
        self.cases.push(case);
    }

    pub fn extend(&mut self, cases: impl IntoIterator<Item = Case>) {
        for c in cases {
            self.push(c);
        }
    }

    /// Folds another report's cases into this one, prefixing their inputs
    /// with the other suite's name.
    pub fn absorb(&mut self, other: Report) {
        for mut c in other.cases {
            c.inputs.insert("suite".to_string(), other.suite.clone());
            self.push(c);
        }
        self.notes.extend(other.notes);
    }

    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn first_failure(&self) -> Option<&Case> {
        self.cases.iter().find(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_tracks_cases() {
        let mut r = Report::new("demo", 7).config("budget", 4);
        r.push(Case::new([("x", "1".into())], "a", "a"));
        r.push(Case::new([("x", "2".into())], "a", "b").with_witness("x=2"));
        assert_eq!(r.summary.total, 2);
        assert_eq!(r.summary.failed, 1);
        assert!(!r.passed());
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
