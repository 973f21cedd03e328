use std::io::Write;

use alignlab::largeness::WitnessReport;
use alignlab::{RatMatrix, Q};
use serde::{Deserialize, Serialize};

use crate::failure::{CliResult, Failure};

#[derive(Clone, Copy)]
pub struct Output {
    pub json: bool,
}

impl Output {
    pub fn render<T: Serialize>(&self, doc: &T) -> CliResult<String> {
        if self.json {
            let mut s = serde_json::to_string_pretty(doc).map_err(|e| Failure::Usage(e.to_string()))?;
            s.push('\n');
            Ok(s)
        } else {
            toml::to_string(doc).map_err(|e| Failure::Usage(e.to_string()))
        }
    }

    pub fn doc<T: Serialize>(&self, doc: &T) -> CliResult<()> {
        let s = self.render(doc)?;
        let mut out = std::io::stdout().lock();
        out.write_all(s.as_bytes())?;
        out.flush()?;
        Ok(())
    }
}

pub fn note(msg: impl AsRef<str>) {
    eprintln!("{}", msg.as_ref());
}

pub fn qs(v: &[Q]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

pub fn mat(m: &RatMatrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| qs(r)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub property: String,
    pub verdict: String,
    pub window: String,
    pub witness: Vec<Vec<i64>>,
    pub failures: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl From<&WitnessReport> for ReportDoc {
    fn from(r: &WitnessReport) -> Self {
        ReportDoc {
            property: r.property.clone(),
            verdict: r.verdict.to_string(),
            window: r.window.clone(),
            witness: r.witness.clone(),
            failures: r.failures.clone(),
            detail: r.detail.clone(),
        }
    }
}
