use std::fmt;

/// Outcome of a single mathematical check.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Status {
    Pass,
    Fail,
    /// Neither provable nor refutable with the implemented relation set.
    Undecided,
    /// The premise of a conditional statement does not hold for the input.
    HypothesisViolated,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Undecided => "undecided",
            Status::HypothesisViolated => "hypothesis violated",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub witness: Option<String>,
    pub note: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check { name: name.into(), status: Status::Pass, witness: None, note: None }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Check { name: name.into(), status: Status::Fail, witness: Some(witness.into()), note: None }
    }

    pub fn with_status(name: impl Into<String>, status: Status) -> Self {
        Check { name: name.into(), status, witness: None, note: None }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn with_witness(mut self, witness: impl Into<String>) -> Self {
        self.witness = Some(witness.into());
        self
    }
}

/// An ordered list of checks.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CheckReport {
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Hypothesis violations dominate failures, which dominate undecided.
    pub fn overall(&self) -> Status {
        let has = |s: Status| self.checks.iter().any(|c| c.status == s);
        if has(Status::HypothesisViolated) {
            Status::HypothesisViolated
        } else if has(Status::Fail) {
            Status::Fail
        } else if has(Status::Undecided) {
            Status::Undecided
        } else {
            Status::Pass
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(f, "{:<10} {}", c.status.as_str().to_uppercase(), c.name)?;
            if let Some(w) = &c.witness {
                write!(f, " (witness: {w})")?;
            }
            if let Some(n) = &c.note {
                write!(f, " [{n}]")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
