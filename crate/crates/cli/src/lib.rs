//! Command-line front end for `qmeas-core`.
//!
//! Every command prints one JSON report on standard output and exits with
//! 0 (success), 1 (unreadable or malformed input) or 2 (a check failed).

pub mod args;
pub mod commands;
pub mod error;
pub mod files;
pub mod json;
pub mod report;

use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;

use crate::args::{Cli, Command};
use crate::error::{CliError, EXIT_DOMAIN, EXIT_INPUT, EXIT_OK};
use crate::report::{CommandEcho, Session, Status};

/// What a finished invocation hands back to the process.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
    pub code: u8,
}

/// Runs `qmeas` with `argv` (excluding the program name).
pub fn run(argv: &[String]) -> Run {
    let cli = match Cli::try_parse_from(std::iter::once("qmeas".to_string()).chain(argv.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string().into_bytes();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Run {
                    stdout: text,
                    stderr: Vec::new(),
                    code: EXIT_OK,
                },
                _ => Run {
                    stdout: Vec::new(),
                    stderr: text,
                    code: EXIT_INPUT,
                },
            };
        }
    };

    let name = match &cli.command {
        Command::Validate(_) => "validate",
        Command::Measure(_) => "measure",
        Command::Discriminate(_) => "discriminate",
        Command::Dilate(_) => "dilate",
        Command::Realize(_) => "realize",
    };
    let session = Session::new(CommandEcho {
        name: name.into(),
        argv: argv.to_vec(),
    });
    let timing = cli.timing.then(Instant::now);
    match &cli.command {
        Command::Validate(a) => execute(session, timing, |s| commands::validate(s, a)),
        Command::Measure(a) => execute(session, timing, |s| commands::measure(s, a)),
        Command::Discriminate(a) => execute(session, timing, |s| commands::discriminate(s, a)),
        Command::Dilate(a) => execute(session, timing, |s| commands::dilate_cmd(s, a)),
        Command::Realize(a) => execute(session, timing, |s| commands::realize(s, a)),
    }
}

fn execute<R: Serialize>(
    mut session: Session,
    started: Option<Instant>,
    body: impl FnOnce(&mut Session) -> Result<R, CliError>,
) -> Run {
    let (result, stderr) = match body(&mut session) {
        Ok(r) => (Some(r), String::new()),
        Err(CliError::Domain(e)) => {
            session.fail(&e);
            (None, String::new())
        }
        Err(e) => {
            return Run {
                stdout: Vec::new(),
                stderr: format!("error: {e}\n").into_bytes(),
                code: e.exit_code(),
            }
        }
    };
    let mut report = session.finish(result);
    report.wall_time_seconds = started.map(|t| t.elapsed().as_secs_f64());

    let mut stderr = stderr;
    let code = if report.status == Status::Ok {
        EXIT_OK
    } else {
        if let Some(e) = &report.error {
            stderr.push_str(&format!("error: {}: {}\n", e.kind, e.message));
        }
        for c in report.checks.iter().filter(|c| !c.passed) {
            stderr.push_str(&format!(
                "check failed: {} = {:e} > {:e}\n",
                c.name, c.value, c.threshold
            ));
        }
        EXIT_DOMAIN
    };
    match json::to_vec(&report) {
        Ok(stdout) => Run {
            stdout,
            stderr: stderr.into_bytes(),
            code,
        },
        Err(e) => Run {
            stdout: Vec::new(),
            stderr: format!("error: cannot serialize report: {e}\n").into_bytes(),
            code: EXIT_INPUT,
        },
    }
}
