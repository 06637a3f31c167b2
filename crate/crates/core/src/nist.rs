//! Measured hydrogen levels and their comparison with the Dirac and
//! proper-time predictions.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constants::{BoundState, PhysicalConstants};
use crate::error::{Error, Result};
use crate::spectrum::{relative_level, Theory};

/// Bundled dataset: twelve s, p, d and f levels above 1s, in eV.
pub const BUNDLED_LEVELS_CSV: &str = include_str!("../data/nist_levels.csv");

const LEVELS_HEADER: [&str; 5] = ["label", "n", "two_j", "ell", "nist_ev"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub label: String,
    pub state: BoundState,
    /// Measured level above 1s, eV.
    pub nist_ev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub record: LevelRecord,
    pub dirac_ev: f64,
    pub pt_ev: f64,
    pub delta_dirac: f64,
    pub delta_pt: f64,
}

#[derive(Debug, Deserialize)]
struct RawLevel {
    label: String,
    n: u32,
    two_j: u32,
    ell: u32,
    nist_ev: f64,
}

/// Parses `label,n,two_j,ell,nist_ev` rows.
pub fn load_levels(csv_text: &str) -> Result<Vec<LevelRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(csv_text.as_bytes());
    let header = reader.headers().map_err(|e| Error::Parse {
        line: 1,
        reason: e.to_string(),
    })?;
    if header.iter().ne(LEVELS_HEADER.iter().copied()) {
        return Err(Error::Parse {
            line: 1,
            reason: format!("expected header `{}`", LEVELS_HEADER.join(",")),
        });
    }
    let mut seen = HashSet::new();
    let mut records = Vec::new();
    for result in reader.deserialize::<RawLevel>() {
        let raw = result.map_err(|e| Error::Parse {
            line: e.position().map(|p| p.line() as usize).unwrap_or(0),
            reason: e.to_string(),
        })?;
        let state = BoundState::new(raw.n, raw.two_j, raw.ell)
            .map_err(|e| Error::Validation(format!("row `{}`: {e}", raw.label)))?;
        let parsed: BoundState = raw.label.parse()?;
        if parsed != state {
            return Err(Error::Validation(format!(
                "label `{}` does not match n={}, two_j={}, ell={}",
                raw.label, raw.n, raw.two_j, raw.ell
            )));
        }
        if !(raw.nist_ev.is_finite() && raw.nist_ev > 0.0) {
            return Err(Error::Validation(format!(
                "row `{}`: nist_ev must be positive",
                raw.label
            )));
        }
        if !seen.insert(raw.label.clone()) {
            return Err(Error::Validation(format!("duplicate label `{}`", raw.label)));
        }
        records.push(LevelRecord {
            label: raw.label,
            state,
            nist_ev: raw.nist_ev,
        });
    }
    Ok(records)
}

pub fn bundled_levels() -> Vec<LevelRecord> {
    load_levels(BUNDLED_LEVELS_CSV).expect("bundled level table is valid")
}

/// Predictions relative to 1s and their deviation from the measured values.
pub fn compare(records: &[LevelRecord], c: &PhysicalConstants) -> Result<Vec<ComparisonRow>> {
    let ground = BoundState::ground();
    records
        .iter()
        .map(|rec| {
            let dirac_ev = relative_level(&rec.state, &ground, Theory::Dirac, c)?;
            let pt_ev = relative_level(&rec.state, &ground, Theory::ProperTime, c)?;
            Ok(ComparisonRow {
                record: rec.clone(),
                dirac_ev,
                pt_ev,
                delta_dirac: dirac_ev - rec.nist_ev,
                delta_pt: pt_ev - rec.nist_ev,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReportFormat {
    Table,
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" | "text-table" | "text" => Ok(ReportFormat::Table),
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::Usage(format!(
                "unknown format `{other}` (expected table, csv or json)"
            ))),
        }
    }
}

pub const REPORT_CSV_HEADER: &str = "state,dirac,proper_time,nist,delta_dirac_nist,delta_pt_nist";

pub fn render_report(rows: &[ComparisonRow], format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Csv => {
            let mut out = String::from(REPORT_CSV_HEADER);
            out.push('\n');
            for r in rows {
                writeln!(
                    out,
                    "{},{:.8},{:.8},{:.8},{:.8},{:.8}",
                    r.record.label, r.dirac_ev, r.pt_ev, r.record.nist_ev, r.delta_dirac, r.delta_pt
                )
                .expect("writing to a String cannot fail");
            }
            Ok(out)
        }
        ReportFormat::Json => {
            let mut out = serde_json::to_string_pretty(rows)
                .map_err(|e| Error::Validation(e.to_string()))?;
            out.push('\n');
            Ok(out)
        }
        ReportFormat::Table => {
            if rows.is_empty() {
                return Err(Error::Usage("text table needs at least one row".into()));
            }
            let mut out = format!(
                "{:<12} {:>12} {:>12} {:>12} {:>12} {:>12}\n",
                "State", "Dirac", "Proper-time", "NIST", "D-DNIST", "D-PTNIST"
            );
            out.push_str(&"-".repeat(12 + 6 * 13));
            out.push('\n');
            for r in rows {
                writeln!(
                    out,
                    "{:<12} {:>12.8} {:>12.8} {:>12.8} {:>12.8} {:>12.8}",
                    r.record.label, r.dirac_ev, r.pt_ev, r.record.nist_ev, r.delta_dirac, r.delta_pt
                )
                .expect("writing to a String cannot fail");
            }
            Ok(out)
        }
    }
}

pub fn parse_report_json(text: &str) -> Result<Vec<ComparisonRow>> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        reason: e.to_string(),
    })
}
