use std::fmt::Write;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Answer {
    Yes,
    No,
    NotFoundWithinBounds,
}

impl Answer {
    pub fn of(b: bool) -> Self {
        if b {
            Answer::Yes
        } else {
            Answer::No
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Answer::Yes => 0,
            Answer::No | Answer::NotFoundWithinBounds => 1,
        }
    }

    fn text(self) -> &'static str {
        match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::NotFoundWithinBounds => "not found within bounds",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CommandResult {
    pub command: &'static str,
    pub answer: Answer,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub route: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cfg: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl CommandResult {
    pub fn new(command: &'static str, answer: Answer) -> Self {
        CommandResult {
            command,
            answer,
            route: None,
            notes: Vec::new(),
            certificate: None,
            witness: None,
            cfg: None,
            timing_ms: None,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => pretty(self),
            Format::Text => {
                let mut s = format!("{}\n", self.answer.text());
                if let Some(r) = &self.route {
                    writeln!(s, "route: {r}").unwrap();
                }
                for n in &self.notes {
                    writeln!(s, "note: {n}").unwrap();
                }
                for (name, v) in [
                    ("certificate", &self.certificate),
                    ("witness", &self.witness),
                    ("cfg", &self.cfg),
                ] {
                    if let Some(v) = v {
                        write!(s, "{name}:\n{}", pretty(v)).unwrap();
                    }
                }
                if let Some(t) = self.timing_ms {
                    writeln!(s, "time: {t:.3} ms").unwrap();
                }
                s
            }
        }
    }
}

pub fn pretty(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    command: &'a str,
    error: ErrorBody<'a>,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    diagnostics: Vec<&'a fusegraph::io::Diagnostic>,
}

/// JSON errors go to stdout so scripts can parse them; text errors to stderr.
pub fn render_error(command: &str, e: &CliError, format: Format) -> (String, bool) {
    match format {
        Format::Text => (format!("error: {e}\n"), false),
        Format::Json => {
            let (message, diagnostics) = match e {
                CliError::Invalid { path, error } => (
                    format!("{}: invalid document", path.display()),
                    error.diagnostics.iter().collect(),
                ),
                _ => (e.to_string(), Vec::new()),
            };
            let report = ErrorReport {
                command,
                error: ErrorBody {
                    kind: e.kind(),
                    message,
                    diagnostics,
                },
            };
            (pretty(&report), true)
        }
    }
}
