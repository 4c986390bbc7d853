//! The structured document every command prints on standard output.

use serde::Serialize;

use crate::files::SCHEMA_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Failed,
}

#[derive(Debug, Clone, Serialize)]
pub struct CommandEcho {
    pub name: String,
    /// Arguments after the program name, verbatim.
    pub argv: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FileDigest {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `value ≤ threshold`.
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            passed: value <= threshold,
        }
    }

    /// A yes/no check reported as 0 (holds) or 1 (fails) against 0.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self::at_most(name, if ok { 0.0 } else { 1.0 }, 0.0)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
}

impl From<&qmeas_core::Error> for ErrorInfo {
    fn from(e: &qmeas_core::Error) -> Self {
        Self {
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report<R> {
    pub schema_version: &'static str,
    pub command: CommandEcho,
    pub inputs: Vec<FileDigest>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub outputs: Vec<FileDigest>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<R>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_seconds: Option<f64>,
}

/// Accumulates digests, checks and errors while a command runs.
#[derive(Debug)]
pub struct Session {
    echo: CommandEcho,
    inputs: Vec<FileDigest>,
    outputs: Vec<FileDigest>,
    checks: Vec<Check>,
    error: Option<ErrorInfo>,
}

impl Session {
    pub fn new(echo: CommandEcho) -> Self {
        Self {
            echo,
            inputs: Vec::new(),
            outputs: Vec::new(),
            checks: Vec::new(),
            error: None,
        }
    }

    pub fn input(&mut self, role: &str, path: &std::path::Path, sha256: String) {
        self.inputs.push(FileDigest {
            role: role.into(),
            path: path.display().to_string(),
            sha256,
        });
    }

    pub fn output(&mut self, role: &str, path: &std::path::Path, sha256: String) {
        self.outputs.push(FileDigest {
            role: role.into(),
            path: path.display().to_string(),
            sha256,
        });
    }

    pub fn check(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Records a domain failure without aborting the command.
    pub fn fail(&mut self, error: &qmeas_core::Error) {
        if self.error.is_none() {
            self.error = Some(error.into());
        }
    }

    pub fn finish<R>(self, result: Option<R>) -> Report<R> {
        let failed = self.error.is_some() || self.checks.iter().any(|c| !c.passed);
        Report {
            schema_version: SCHEMA_VERSION,
            command: self.echo,
            inputs: self.inputs,
            outputs: self.outputs,
            status: if failed { Status::Failed } else { Status::Ok },
            error: self.error,
            checks: self.checks,
            result,
            wall_time_seconds: None,
        }
    }
}
