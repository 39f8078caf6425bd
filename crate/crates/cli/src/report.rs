use std::fmt::Write as _;

use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Skipped => "skipped",
        }
    }

    pub fn of(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    /// Witnesses for failures, or the reason a check was skipped.
    pub notes: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Section {
    pub title: String,
    pub lines: Vec<String>,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub command: String,
    pub sections: Vec<Section>,
    pub checks: Vec<Check>,
    pub elapsed_ms: Option<u128>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            ..Default::default()
        }
    }

    pub fn section(&mut self, title: impl Into<String>, lines: Vec<String>) {
        self.sections.push(Section {
            title: title.into(),
            lines,
        });
    }

    pub fn check(&mut self, name: impl Into<String>, ok: bool, notes: Vec<String>) {
        self.checks.push(Check {
            name: name.into(),
            verdict: Verdict::of(ok),
            notes,
        });
    }

    pub fn skip(&mut self, name: impl Into<String>, reason: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            verdict: Verdict::Skipped,
            notes: vec![reason.into()],
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict != Verdict::Fail)
    }

    /// Human-readable form. Contains no timing, so it is byte-stable.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "derham {}", self.command).unwrap();
        for s in &self.sections {
            writeln!(out).unwrap();
            writeln!(out, "{}", s.title).unwrap();
            for l in &s.lines {
                writeln!(out, "  {l}").unwrap();
            }
        }
        if !self.checks.is_empty() {
            writeln!(out).unwrap();
            writeln!(out, "checks").unwrap();
            for c in &self.checks {
                writeln!(out, "  {:<7} {}", c.verdict.as_str().to_uppercase(), c.name).unwrap();
                for n in &c.notes {
                    writeln!(out, "          {n}").unwrap();
                }
            }
        }
        writeln!(out).unwrap();
        writeln!(
            out,
            "result: {}",
            if self.passed() { "PASS" } else { "FAIL" }
        )
        .unwrap();
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "verdict": if self.passed() { "pass" } else { "fail" },
            "sections": self.sections.iter().map(|s| json!({
                "title": s.title,
                "lines": s.lines,
            })).collect::<Vec<_>>(),
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "verdict": c.verdict.as_str(),
                "notes": c.notes,
            })).collect::<Vec<_>>(),
            "timing_ms": self.elapsed_ms,
        })
    }

    pub fn render_structured(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        s.push('\n');
        s
    }
}
