use std::fmt;

use egz::zerosum::{ConstantRecord, TraceStep};

/// A headline, `key<TAB>value` lines, and an optional trace block.
pub struct Report {
    headline: String,
    lines: Vec<(String, String)>,
    trace: Vec<String>,
}

impl Report {
    pub fn new(headline: impl Into<String>) -> Self {
        Self {
            headline: headline.into(),
            lines: Vec::new(),
            trace: Vec::new(),
        }
    }

    pub fn record(rec: &ConstantRecord) -> Self {
        Self::record_as(rec, &rec.quantity.to_string())
    }

    pub fn record_as(rec: &ConstantRecord, name: &str) -> Self {
        let mut r = Self::new(rec.headline_as(name));
        r.kv("quantity", &rec.quantity);
        r.kv("lower", rec.lower);
        r.kv("upper", rec.upper);
        r.kv("status", rec.status);
        if let Some(w) = &rec.witness {
            r.kv("witness-size", w.len());
            for v in w {
                r.kv("vector", v);
            }
        }
        r
    }

    pub fn kv(&mut self, key: &str, value: impl fmt::Display) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    pub fn with_trace(mut self, trace: &[TraceStep]) -> Self {
        self.trace = trace.iter().map(ToString::to_string).collect();
        self
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.headline)?;
        for (k, v) in &self.lines {
            writeln!(f, "{k}\t{v}")?;
        }
        if !self.trace.is_empty() {
            writeln!(f, "trace:")?;
            for t in &self.trace {
                writeln!(f, "  {t}")?;
            }
        }
        Ok(())
    }
}
