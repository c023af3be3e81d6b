//! Structured pass/fail reports shared by every verification routine.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub lemma: String,
    pub instance: String,
    pub checks: Vec<Check>,
    pub dims: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(lemma: impl Into<String>, instance: impl Into<String>) -> Self {
        Report { lemma: lemma.into(), instance: instance.into(), ..Default::default() }
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, witness: Option<String>) -> bool {
        self.checks.push(Check { name: name.into(), pass, witness: if pass { None } else { witness } });
        pass
    }

    pub fn check_result(&mut self, name: impl Into<String>, result: Result<(), String>) -> bool {
        match result {
            Ok(()) => self.check(name, true, None),
            Err(w) => self.check(name, false, Some(w)),
        }
    }

    pub fn dim(&mut self, key: impl Into<String>, value: usize) {
        self.dims.insert(key.into(), value);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Append `other`'s checks with a name prefix.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for c in other.checks {
            self.checks.push(Check { name: format!("{prefix}.{}", c.name), ..c });
        }
        for (k, v) in other.dims {
            self.dims.insert(format!("{prefix}.{k}"), v);
        }
        self.notes.extend(other.notes.into_iter().map(|n| format!("{prefix}: {n}")));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }

    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["pass"] = Value::Bool(self.passed());
        v
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        writeln!(f, "{verdict}  {} [{}]", self.lemma, self.instance)?;
        for c in &self.checks {
            write!(f, "  {} {}", if c.pass { "ok  " } else { "FAIL" }, c.name)?;
            if let Some(w) = &c.witness {
                write!(f, "  ({w})")?;
            }
            writeln!(f)?;
        }
        for (k, v) in &self.dims {
            writeln!(f, "  dim {k} = {v}")?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}
