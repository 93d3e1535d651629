//! The report object behind every command. JSON output serializes it
//! directly and the text output renders the same fields.

use std::fmt::Write;

use rinehart_core::report::{CheckReport, Status};
use serde::Serialize;
use serde_json::Value;

pub const TOOL: &str = "rinehart";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Value,
    Check,
}

#[derive(Clone, Debug, Serialize)]
pub struct Item {
    pub command: String,
    pub kind: Kind,
    pub status: String,
    pub text: String,
    pub data: Value,
    pub witnesses: Vec<String>,
    pub notes: Vec<String>,
}

impl Item {
    pub fn value(command: impl Into<String>, text: impl Into<String>, data: Value) -> Self {
        Item {
            command: command.into(),
            kind: Kind::Value,
            status: Status::Pass.as_str().into(),
            text: text.into(),
            data,
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn check(command: impl Into<String>, status: Status, text: impl Into<String>, data: Value) -> Self {
        Item {
            command: command.into(),
            kind: Kind::Check,
            status: status.as_str().into(),
            text: text.into(),
            data,
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// One item per check of `report`.
    pub fn from_checks(prefix: &str, report: &CheckReport) -> Vec<Item> {
        report
            .checks
            .iter()
            .map(|c| {
                let mut item = Item::check(format!("{prefix}: {}", c.name), c.status, "", Value::Null);
                item.witnesses.extend(c.witness.clone());
                item.notes.extend(c.note.clone());
                item
            })
            .collect()
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witnesses.push(w.into());
        self
    }

    pub fn with_note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }

    pub fn status(&self) -> Status {
        parse_status(&self.status)
    }
}

fn parse_status(s: &str) -> Status {
    match s {
        "fail" => Status::Fail,
        "undecided" => Status::Undecided,
        "hypothesis violated" => Status::HypothesisViolated,
        _ => Status::Pass,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub status: String,
    pub items: Vec<Item>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn new(command: impl Into<String>, items: Vec<Item>) -> Self {
        let status = overall(items.iter().map(Item::status));
        Report { tool: TOOL, version: VERSION, command: command.into(), status: status.as_str().into(), items, timing_ms: None }
    }

    pub fn status(&self) -> Status {
        parse_status(&self.status)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// A lone value item prints its text alone; otherwise values are labelled
    /// with their command. Checks print a status line with indented witnesses
    /// and notes.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for item in &self.items {
            match item.kind {
                Kind::Value if self.items.len() == 1 => {
                    let _ = writeln!(out, "{}", item.text);
                }
                Kind::Value => {
                    let _ = writeln!(out, "{}: {}", item.command, item.text);
                }
                Kind::Check => {
                    let _ = write!(out, "{}: {}", item.command, item.status);
                    if !item.text.is_empty() {
                        let _ = write!(out, " ({})", item.text);
                    }
                    out.push('\n');
                }
            }
            for w in &item.witnesses {
                let _ = writeln!(out, "  witness: {w}");
            }
            for n in &item.notes {
                let _ = writeln!(out, "  note: {n}");
            }
        }
        if self.items.iter().any(|i| i.kind == Kind::Check) && self.items.len() > 1 {
            let _ = writeln!(out, "overall: {}", self.status);
        }
        if let Some(t) = self.timing_ms {
            let _ = writeln!(out, "time: {t} ms");
        }
        out
    }
}

/// A failure anywhere fails the report; otherwise undecided items, then
/// violated hypotheses, are reported ahead of a pass.
pub fn overall(statuses: impl IntoIterator<Item = Status>) -> Status {
    let all: Vec<Status> = statuses.into_iter().collect();
    [Status::Fail, Status::Undecided, Status::HypothesisViolated]
        .into_iter()
        .find(|s| all.contains(s))
        .unwrap_or(Status::Pass)
}
