//! Check records and how they are rendered.

use std::fmt::Write as _;

use serde::Serialize;

use crate::WbError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

/// One verified statement.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub inputs: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(id: impl Into<String>, inputs: impl Into<String>, residual: f64, tol: f64) -> Self {
        Check { id: id.into(), inputs: inputs.into(), residual, tol, pass: residual <= tol }
    }

    /// A check whose outcome is decided structurally rather than by a threshold.
    pub fn exact(id: impl Into<String>, inputs: impl Into<String>, ok: bool) -> Self {
        Check { id: id.into(), inputs: inputs.into(), residual: if ok { 0.0 } else { 1.0 }, tol: 0.0, pass: ok }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub title: String,
    /// Parameter echo, printed as comments.
    pub params: Vec<(String, String)>,
    pub checks: Vec<Check>,
    /// Free-form lines (traces, resolved ambiguities).
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), ..Default::default() }
    }

    pub fn param(&mut self, k: &str, v: impl ToString) -> &mut Self {
        self.params.push((k.into(), v.to_string()));
        self
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    pub fn extend(&mut self, o: Report) {
        self.checks.extend(o.checks);
        self.notes.extend(o.notes);
    }

    pub fn render(&self, fmt: Format) -> Result<String, WbError> {
        match fmt {
            Format::Text => Ok(self.text()),
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }

    fn header(&self, out: &mut String, prefix: &str) {
        let _ = writeln!(out, "{prefix}{}", self.title);
        for (k, v) in &self.params {
            let _ = writeln!(out, "{prefix}{k} = {v}");
        }
    }

    fn text(&self) -> String {
        let mut out = String::new();
        self.header(&mut out, "# ");
        let w = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
        for c in &self.checks {
            let mark = if c.pass { "ok  " } else { "FAIL" };
            let _ = writeln!(out, "{mark} {:<w$}  residual {:.3e}  tol {:.1e}  {}", c.id, c.residual, c.tol, c.inputs);
        }
        for n in &self.notes {
            let _ = writeln!(out, "   {n}");
        }
        let _ = writeln!(out, "{} checks, {} failed", self.checks.len(), self.failures());
        out
    }

    fn csv(&self) -> Result<String, WbError> {
        let mut out = String::new();
        self.header(&mut out, "# ");
        for n in &self.notes {
            let _ = writeln!(out, "# {n}");
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["id", "inputs", "residual", "tol", "pass"])?;
        for c in &self.checks {
            w.write_record([c.id.clone(), c.inputs.clone(), format!("{:e}", c.residual), format!("{:e}", c.tol), c.pass.to_string()])?;
        }
        out.push_str(&String::from_utf8(w.into_inner().map_err(|e| WbError::Io(e.into_error()))?).unwrap_or_default());
        Ok(out)
    }

    fn json(&self) -> Result<String, WbError> {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&serde_json::to_string(c)?);
            out.push('\n');
        }
        for n in &self.notes {
            out.push_str(&serde_json::to_string(&serde_json::json!({ "note": n }))?);
            out.push('\n');
        }
        Ok(out)
    }
}
