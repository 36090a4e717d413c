//! Machine-readable run reports.
//!
//! JSON output serializes through `serde_json::Value`, whose object maps are
//! sorted by key — so identical reports give byte-identical output, and every
//! float is rendered in the shortest form that parses back to the same bits.

use std::io::Write;

use serde::Serialize;

use crate::error::Result;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct JitterEcho {
    pub repeats: usize,
    pub scale: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ConfigEcho {
    pub k: usize,
    pub norm: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jitter: Option<JitterEcho>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct InputEcho {
    pub source: String,
    pub rows: usize,
    pub cols: usize,
    pub dropped_rows: usize,
    pub columns: Vec<String>,
}

/// Result payload; shape depends on the operation.
#[derive(Debug, Clone, Serialize, PartialEq)]
#[serde(untagged)]
pub enum Payload {
    Scalar { value: f64 },
    LagScan { direction: String, lags: Vec<usize>, values: Vec<f64> },
    Ranking { target: String, features: Vec<String>, scores: Vec<f64> },
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Report {
    pub operation: String,
    pub version: String,
    pub config: ConfigEcho,
    pub input: InputEcho,
    pub result: Payload,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

/// Serializes the report. JSON: one sorted-key object. CSV: a header line
/// then payload rows — `lag,value` for lag scans, `feature,score` for
/// rankings, a single `value` row for scalars.
pub fn write_report<W: Write>(report: &Report, format: ReportFormat, mut out: W) -> Result<()> {
    match format {
        ReportFormat::Json => {
            let value = serde_json::to_value(report)?;
            let rendered = serde_json::to_string_pretty(&value)?;
            out.write_all(rendered.as_bytes())?;
            out.write_all(b"\n")?;
        }
        ReportFormat::Csv => match &report.result {
            Payload::Scalar { value } => {
                writeln!(out, "value")?;
                writeln!(out, "{value}")?;
            }
            Payload::LagScan { lags, values, .. } => {
                writeln!(out, "lag,value")?;
                for (lag, v) in lags.iter().zip(values) {
                    writeln!(out, "{lag},{v}")?;
                }
            }
            Payload::Ranking { features, scores, .. } => {
                writeln!(out, "feature,score")?;
                for (f, s) in features.iter().zip(scores) {
                    writeln!(out, "{f},{s}")?;
                }
            }
        },
    }
    Ok(())
}
