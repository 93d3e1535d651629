use std::fmt;

use crate::ast::Pos;
use crate::parser::ParseError;

/// Everything a command can fail with, mapped onto the exit-code contract.
#[derive(Debug)]
pub enum CliError {
    Parse(ParseError),
    /// A syntax error inside a command-line argument such as `--el`.
    ParseArg { flag: String, error: ParseError },
    /// A well-formed input that the session rules reject.
    User { pos: Option<Pos>, message: String },
    /// A precondition violated inside the core library.
    Math { pos: Option<Pos>, error: rinehart_core::Error },
    Internal(String),
}

impl CliError {
    pub fn user(message: impl Into<String>) -> Self {
        CliError::User { pos: None, message: message.into() }
    }

    /// Attaches a position unless one is already present.
    pub fn at(self, p: Pos) -> Self {
        match self {
            CliError::User { pos: None, message } => CliError::User { pos: Some(p), message },
            CliError::Math { pos: None, error } => CliError::Math { pos: Some(p), error },
            other => other,
        }
    }

    pub fn expected(&self) -> &[String] {
        match self {
            CliError::Parse(e) | CliError::ParseArg { error: e, .. } => &e.expected,
            _ => &[],
        }
    }

    pub fn pos(&self) -> Option<Pos> {
        match self {
            CliError::Parse(e) | CliError::ParseArg { error: e, .. } => Some(e.pos),
            CliError::User { pos, .. } | CliError::Math { pos, .. } => *pos,
            CliError::Internal(_) => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) | CliError::ParseArg { .. } => "syntax",
            CliError::User { .. } => "session",
            CliError::Math { error: rinehart_core::Error::StepLimit(_), .. } | CliError::Internal(_) => "internal",
            CliError::Math { .. } => "precondition",
        }
    }

    /// 2 for anything the user can fix, 3 for internal breaches. Exhausting
    /// the rewriting step limit counts as internal.
    pub fn exit_code(&self) -> i32 {
        if self.kind() == "internal" {
            3
        } else {
            2
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Parse(e) | CliError::ParseArg { error: e, .. } => {
                let mut s = e.message.clone();
                if !e.expected.is_empty() {
                    s.push_str(&format!(" (expected {})", e.expected.join(" or ")));
                }
                s
            }
            CliError::User { message, .. } => message.clone(),
            CliError::Math { error, .. } => error.to_string(),
            CliError::Internal(m) => m.clone(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let CliError::ParseArg { flag, .. } = self {
            write!(f, "in {flag}: ")?;
        }
        if let Some(p) = self.pos() {
            write!(f, "{p}: ")?;
        }
        write!(f, "{}", self.message())
    }
}

impl std::error::Error for CliError {}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e)
    }
}

impl From<rinehart_core::Error> for CliError {
    fn from(error: rinehart_core::Error) -> Self {
        CliError::Math { pos: None, error }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
