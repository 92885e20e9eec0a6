use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;

use serde_json::{Map, Value};

use fisher_core::SCHEMA_VERSION;

/// Exit codes shared by every command.
pub mod code {
    pub const CONFIRMED: u8 = 0;
    pub const REFUTED: u8 = 1;
    pub const INPUT: u8 = 2;
    pub const BUDGET: u8 = 3;
    pub const INVARIANT: u8 = 4;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

/// A finished command: exit code, both renderings, and an optional line
/// for stderr.
pub struct Report {
    pub code: u8,
    pub command: &'static str,
    pub text: String,
    pub fields: Map<String, Value>,
    /// Replaces the structured envelope, for commands that emit a file
    /// format of their own.
    pub structured_raw: Option<String>,
    pub diagnostic: Option<String>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            code: code::CONFIRMED,
            command,
            text: String::new(),
            fields: Map::new(),
            structured_raw: None,
            diagnostic: None,
        }
    }

    pub fn field(&mut self, key: &str, value: impl serde::Serialize) {
        let value = serde_json::to_value(value).expect("report fields serialize");
        self.fields.insert(key.to_string(), value);
    }

    pub fn line(&mut self, line: impl AsRef<str>) {
        self.text.push_str(line.as_ref());
        self.text.push('\n');
    }

    pub fn diagnostic(mut self, message: impl Into<String>) -> Self {
        self.diagnostic = Some(message.into());
        self
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Structured if self.structured_raw.is_some() => {
                self.structured_raw.clone().unwrap_or_default()
            }
            Format::Structured => {
                let mut doc = Map::new();
                doc.insert("schema_version".into(), SCHEMA_VERSION.into());
                doc.insert("command".into(), self.command.into());
                doc.insert("exit_code".into(), self.code.into());
                doc.extend(self.fields.clone());
                let mut out = serde_json::to_string_pretty(&Value::Object(doc)).expect("json");
                out.push('\n');
                out
            }
        }
    }

    pub fn emit(self, format: Format, output: Option<&Path>) -> ExitCode {
        let body = self.render(format);
        if let Some(msg) = &self.diagnostic {
            eprintln!("fisher: {msg}");
        }
        match output {
            Some(path) => {
                if let Err(e) = std::fs::write(path, body) {
                    eprintln!("fisher: cannot write {}: {e}", path.display());
                    return ExitCode::from(code::INPUT);
                }
            }
            None => print!("{body}"),
        }
        ExitCode::from(self.code)
    }
}

/// A command that produced no report.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl std::fmt::Display) -> Self {
        Failure {
            code: code::INPUT,
            message: message.to_string(),
        }
    }

    pub fn invariant(message: impl std::fmt::Display) -> Self {
        Failure {
            code: code::INVARIANT,
            message: message.to_string(),
        }
    }
}

pub fn set_str(set: &[usize]) -> String {
    let mut s = String::from("{");
    for (i, e) in set.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        write!(s, "{e}").unwrap();
    }
    s.push('}');
    s
}

pub fn list_str<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}
