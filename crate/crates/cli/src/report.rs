use serde_json::{json, Value};

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// a checked property fails on the data
    Violated,
}

#[derive(Debug)]
pub struct Outcome {
    pub results: Value,
    pub lines: Vec<String>,
    pub warnings: Vec<String>,
    pub status: Status,
}

impl Outcome {
    pub fn new(results: Value, lines: Vec<String>, status: Status) -> Self {
        Outcome {
            results,
            lines,
            warnings: Vec::new(),
            status,
        }
    }

    pub fn warn(mut self, w: impl Into<String>) -> Self {
        self.warnings.push(w.into());
        self
    }
}

pub struct Report {
    command: String,
    args: Vec<String>,
    digest: String,
    outcome: Outcome,
}

impl Report {
    pub fn new(command: String, args: Vec<String>, digest: String, outcome: Outcome) -> Self {
        Report {
            command,
            args,
            digest,
            outcome,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self.outcome.status {
            Status::Ok => 0,
            Status::Violated => 1,
        }
    }

    pub fn to_json(&self) -> String {
        let v = json!({
            "schema": REPORT_SCHEMA,
            "command": { "name": self.command, "args": self.args },
            "inputs_sha256": self.digest,
            "results": self.outcome.results,
            "warnings": self.outcome.warnings,
            "status": match self.outcome.status {
                Status::Ok => "ok",
                Status::Violated => "violated",
            },
            "exit_code": self.exit_code(),
        });
        serde_json::to_string_pretty(&v).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for l in &self.outcome.lines {
            out.push_str(l);
            out.push('\n');
        }
        for w in &self.outcome.warnings {
            out.push_str("warning: ");
            out.push_str(w);
            out.push('\n');
        }
        out
    }
}
