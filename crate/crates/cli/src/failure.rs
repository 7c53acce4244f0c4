//! Exit codes and one-line error reasons.

use std::fmt;

pub const USAGE: u8 = 2;
pub const CAPACITY: u8 = 3;
pub const CONTRACT: u8 = 4;

/// A command failure: printed as `error[<kind>]: <message>` on stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: USAGE, kind: "usage", message: message.into() }
    }

    pub fn contract(message: impl Into<String>) -> Self {
        Self { code: CONTRACT, kind: "contract-violation", message: message.into() }
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Self { code: USAGE, kind: "io", message: format!("{}: {err}", path.display()) }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one_line = self.message.replace('\n', " ");
        write!(f, "error[{}]: {one_line}", self.kind)
    }
}

impl From<stablelab::Error> for Failure {
    fn from(err: stablelab::Error) -> Self {
        use stablelab::Error as E;
        let (code, kind) = match &err {
            E::Capacity { .. } => (CAPACITY, "capacity"),
            E::Isolation(_) | E::ModelViolation(_) | E::Protocol(_) => (CONTRACT, "contract-violation"),
            E::Domain(_) => (USAGE, "domain"),
            E::Parameter(_) => (USAGE, "parameter"),
            E::Precondition(_) => (USAGE, "precondition"),
            E::Query(_) => (USAGE, "query"),
            E::Unsupported(_) => (USAGE, "unsupported"),
            E::Format(_) => (USAGE, "format"),
        };
        let text = err.to_string();
        let message = text.split_once(": ").map_or(text.as_str(), |(_, rest)| rest).to_owned();
        Self { code, kind, message }
    }
}
