use std::fmt;

use serde_json::{json, Value};

use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    NotApplicable,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
            Status::NotApplicable => "not-applicable",
        }
    }
}

/// Where a check was evaluated.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Locus {
    Global,
    Degree(i64),
    Pair(i64, i64),
    Triple(i64, i64, i64),
    Branches(usize, usize),
    Window(i64, i64),
    Symbolic(String),
    Named(String),
}

impl fmt::Display for Locus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Locus::Global => f.write_str("-"),
            Locus::Degree(i) => write!(f, "({i})"),
            Locus::Pair(i, j) => write!(f, "({i},{j})"),
            Locus::Triple(i, j, k) => write!(f, "({i},{j},{k})"),
            Locus::Branches(a, b) => write!(f, "branches {a}/{b}"),
            Locus::Window(lo, hi) => write!(f, "[{lo},{hi}]"),
            Locus::Symbolic(v) => write!(f, "symbolic in {v}"),
            Locus::Named(s) => f.write_str(s),
        }
    }
}

impl Locus {
    fn to_json(&self) -> Value {
        match self {
            Locus::Global => Value::Null,
            Locus::Degree(i) => json!([i]),
            Locus::Pair(i, j) => json!([i, j]),
            Locus::Triple(i, j, k) => json!([i, j, k]),
            Locus::Branches(a, b) => json!({"branches": [a, b]}),
            Locus::Window(lo, hi) => json!({"window": [lo, hi]}),
            Locus::Symbolic(v) => json!({"symbolic": v}),
            Locus::Named(s) => json!(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckEntry {
    pub check: String,
    pub locus: Locus,
    pub context: String,
    pub status: Status,
    pub residual: Poly,
    pub note: String,
}

impl CheckEntry {
    pub fn new(check: &str, locus: Locus, context: &str, residual: Poly) -> Self {
        let status = if residual.is_zero() {
            Status::Pass
        } else {
            Status::Fail
        };
        CheckEntry {
            check: check.to_string(),
            locus,
            context: context.to_string(),
            status,
            residual,
            note: String::new(),
        }
    }

    pub fn skipped(check: &str, locus: Locus, note: impl Into<String>) -> Self {
        CheckEntry {
            check: check.to_string(),
            locus,
            context: String::new(),
            status: Status::Skipped,
            residual: Poly::zero(),
            note: note.into(),
        }
    }

    pub fn not_applicable(check: &str, note: impl Into<String>) -> Self {
        CheckEntry {
            check: check.to_string(),
            locus: Locus::Global,
            context: String::new(),
            status: Status::NotApplicable,
            residual: Poly::zero(),
            note: note.into(),
        }
    }

    /// A failure whose witness is not a polynomial residual.
    pub fn failed(check: &str, locus: Locus, residual: Poly, note: impl Into<String>) -> Self {
        let residual = if residual.is_zero() { Poly::one() } else { residual };
        CheckEntry {
            check: check.to_string(),
            locus,
            context: String::new(),
            status: Status::Fail,
            residual,
            note: note.into(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    fn key(&self) -> (&str, &Locus, &str) {
        (&self.check, &self.locus, &self.context)
    }
}

/// Outcome of one or more audits, sorted by check name and locus.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    entries: Vec<CheckEntry>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, e: CheckEntry) {
        let pos = self
            .entries
            .partition_point(|x| x.key() <= e.key());
        self.entries.insert(pos, e);
    }

    pub fn merge(&mut self, other: Report) {
        for e in other.entries {
            self.push(e);
        }
    }

    pub fn entries(&self) -> &[CheckEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// No failing entry.
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| e.status == Status::Fail)
    }

    pub fn skipped(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| e.status == Status::Skipped)
    }

    pub fn count(&self, s: Status) -> usize {
        self.entries.iter().filter(|e| e.status == s).count()
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                json!({
                    "check": e.check,
                    "locus": e.locus.to_json(),
                    "context": e.context,
                    "status": e.status.as_str(),
                    "residual": e.residual.to_string(),
                    "note": e.note,
                })
            })
            .collect();
        json!({
            "passed": self.passed(),
            "summary": {
                "pass": self.count(Status::Pass),
                "fail": self.count(Status::Fail),
                "skipped": self.count(Status::Skipped),
                "not_applicable": self.count(Status::NotApplicable),
            },
            "checks": checks,
        })
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            write!(f, "{:<15} {:<6} {}", e.check, e.status.as_str(), e.locus)?;
            if !e.context.is_empty() {
                write!(f, " [{}]", e.context)?;
            }
            if e.status == Status::Fail {
                write!(f, " residual {}", e.residual)?;
            }
            if !e.note.is_empty() {
                write!(f, " ({})", e.note)?;
            }
            writeln!(f)?;
        }
        write!(
            f,
            "{} passed, {} failed, {} skipped",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skipped)
        )
    }
}
