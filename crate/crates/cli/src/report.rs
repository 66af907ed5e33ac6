use crate::config::{ExperimentConfig, Expectation};
use collar_core::scaling::{SweepPoint, SweepResult};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepStatus {
    Complete,
    Failed,
    Interrupted,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub expectation: Expectation,
    pub slope: f64,
    pub pass: bool,
    pub summary: String,
}

impl Verdict {
    pub fn new(expectation: Expectation, slope: f64) -> Self {
        let pass = expectation.holds(slope);
        let summary = format!(
            "{}: slope {slope:.4}, expected {}",
            if pass { "PASS" } else { "FAIL" },
            expectation.describe()
        );
        Verdict { expectation, slope, pass, summary }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepEntry {
    pub name: String,
    pub status: SweepStatus,
    pub error: Option<String>,
    pub result: Option<SweepResult>,
    /// points finished before a failure
    pub partial_points: Vec<SweepPoint>,
    pub verdict: Option<Verdict>,
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub unchecked: usize,
    pub errors: usize,
    pub interrupted: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub config_hash: String,
    pub config: ExperimentConfig,
    pub sweeps: Vec<SweepEntry>,
    pub summary: Summary,
}

impl Report {
    pub fn new(config: &ExperimentConfig) -> Self {
        Report {
            tool: "collar",
            version: env!("CARGO_PKG_VERSION"),
            config_hash: config.hash(),
            config: config.clone(),
            sweeps: Vec::new(),
            summary: Summary::default(),
        }
    }

    pub fn push(&mut self, entry: SweepEntry) {
        match (&entry.status, &entry.verdict) {
            (SweepStatus::Failed, _) => self.summary.errors += 1,
            (SweepStatus::Interrupted, _) => self.summary.interrupted += 1,
            (SweepStatus::Complete, Some(v)) if v.pass => self.summary.passed += 1,
            (SweepStatus::Complete, Some(_)) => self.summary.failed += 1,
            (SweepStatus::Complete, None) => self.summary.unchecked += 1,
        }
        self.sweeps.push(entry);
    }

    /// Exit status per the verdicts: numerical failures outrank verdict
    /// failures.
    pub fn exit_code(&self) -> u8 {
        if self.summary.interrupted > 0 {
            130
        } else if self.summary.errors > 0 {
            3
        } else if self.summary.failed > 0 {
            1
        } else {
            0
        }
    }

    /// One line per sweep.
    pub fn table(&self) -> String {
        render_table(self.sweeps.iter().map(|e| {
            let line = match (&e.status, &e.verdict) {
                (SweepStatus::Complete, Some(v)) => v.summary.clone(),
                (SweepStatus::Complete, None) => {
                    format!("slope {:.4}, no expectation", e.result.as_ref().map_or(f64::NAN, |r| r.fit.slope))
                }
                (SweepStatus::Failed, _) => format!("ERROR: {}", e.error.as_deref().unwrap_or("unknown")),
                (SweepStatus::Interrupted, _) => "INTERRUPTED".into(),
            };
            (e.name.clone(), line, e.flags.clone())
        }))
    }
}

pub(crate) fn render_table(rows: impl Iterator<Item = (String, String, Vec<String>)>) -> String {
    let mut out = String::new();
    for (name, line, flags) in rows {
        out.push_str(&format!("{name:<36} {line}\n"));
        for f in flags {
            out.push_str(&format!("{:<36}   note: {f}\n", ""));
        }
    }
    out
}

/// Summary table of a report previously written to disk.
pub fn table_from_json(v: &serde_json::Value) -> Result<(String, u8), String> {
    let sweeps = v.get("sweeps").and_then(|s| s.as_array()).ok_or("report has no sweep list")?;
    let mut code = 0u8;
    let rows: Vec<(String, String, Vec<String>)> = sweeps
        .iter()
        .map(|s| {
            let name = s.get("name").and_then(|n| n.as_str()).unwrap_or("?").to_string();
            let status = s.get("status").and_then(|n| n.as_str()).unwrap_or("?");
            let line = match status {
                "complete" => match s.get("verdict").and_then(|v| v.get("summary")).and_then(|v| v.as_str()) {
                    Some(t) => {
                        if !s["verdict"]["pass"].as_bool().unwrap_or(false) {
                            code = code.max(1);
                        }
                        t.to_string()
                    }
                    None => "no expectation".into(),
                },
                "failed" => {
                    code = code.max(3);
                    format!("ERROR: {}", s.get("error").and_then(|e| e.as_str()).unwrap_or("unknown"))
                }
                other => {
                    code = code.max(130);
                    other.to_uppercase()
                }
            };
            let flags = s
                .get("flags")
                .and_then(|f| f.as_array())
                .map(|a| a.iter().filter_map(|x| x.as_str().map(String::from)).collect())
                .unwrap_or_default();
            (name, line, flags)
        })
        .collect();
    Ok((render_table(rows.into_iter()), code))
}
