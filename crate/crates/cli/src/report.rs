use std::fmt;

use d2lab::report::Finding;
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FOUND: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

/// What a run printed in JSON mode.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub subcommand: String,
    pub result: serde_json::Value,
    pub findings: Vec<Finding>,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// A failed run: the exit code it maps to and a message.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl fmt::Display) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }

    pub fn limit(message: impl fmt::Display) -> Self {
        Failure {
            code: EXIT_LIMIT,
            message: message.to_string(),
        }
    }
}

impl From<d2lab::formula::ParseError> for Failure {
    fn from(e: d2lab::formula::ParseError) -> Self {
        Failure::usage(e)
    }
}

impl From<d2lab::formula::FormulaError> for Failure {
    fn from(e: d2lab::formula::FormulaError) -> Self {
        Failure::usage(e)
    }
}

impl From<d2lab::matrix::MatrixError> for Failure {
    fn from(e: d2lab::matrix::MatrixError) -> Self {
        match e {
            d2lab::matrix::MatrixError::TooManyAssignments { .. } => Failure::limit(e),
            _ => Failure::usage(e),
        }
    }
}

impl From<d2lab::modal::ModalError> for Failure {
    fn from(e: d2lab::modal::ModalError) -> Self {
        match e {
            d2lab::modal::ModalError::AtomLimit { .. } => Failure::limit(e),
            _ => Failure::usage(e),
        }
    }
}

impl From<d2lab::search::SearchError> for Failure {
    fn from(e: d2lab::search::SearchError) -> Self {
        use d2lab::search::SearchError;
        match e {
            SearchError::TooManyInstances { .. } => Failure::limit(e),
            SearchError::Matrix(m) => m.into(),
            _ => Failure::usage(e),
        }
    }
}

/// The outcome of a successful run, before formatting.
pub struct Outcome {
    pub result: serde_json::Value,
    pub text: String,
    pub findings: Vec<Finding>,
    pub exit_code: i32,
}

impl Outcome {
    pub fn new(result: impl Serialize, text: String, exit_code: i32) -> Self {
        Outcome {
            result: serde_json::to_value(result).expect("results serialize"),
            text,
            findings: Vec::new(),
            exit_code,
        }
    }

    /// Attaches findings; any finding makes the exit code at least 1.
    pub fn with_findings(mut self, findings: Vec<Finding>) -> Self {
        if !findings.is_empty() && self.exit_code == EXIT_OK {
            self.exit_code = EXIT_FOUND;
        }
        self.findings = findings;
        self
    }
}

pub fn finding_lines(findings: &[Finding]) -> String {
    let mut out = String::new();
    for f in findings {
        out.push_str(&format!(
            "FINDING {}: expected {}; computed {}\n",
            f.subject, f.expected, f.computed
        ));
    }
    out
}
