//! Scoring of assessment units from journal scores.

use std::collections::BTreeMap;
use std::path::Path;

use crate::corpus::{resolve_name, Journal, Resolution};
use crate::error::{CitexError, Result};
use crate::linalg::pearson;

#[derive(Debug, Clone, PartialEq)]
pub struct QualityProfile {
    pub unit: String,
    pub pct4: f64,
    pub pct3: f64,
    pub pct2: f64,
    pub pct1: f64,
    pub pct_u: f64,
}

impl QualityProfile {
    pub fn new(unit: impl Into<String>, pct: [f64; 5]) -> Result<QualityProfile> {
        let unit = unit.into();
        if pct.iter().any(|p| p.is_nan() || *p < 0.0) {
            return Err(CitexError::InvalidArgument(format!("{unit}: negative percentage")));
        }
        let total: f64 = pct.iter().sum();
        if (total - 100.0).abs() > 0.1 {
            return Err(CitexError::InvalidArgument(format!("{unit}: percentages sum to {total}")));
        }
        Ok(QualityProfile {
            unit,
            pct4: pct[0],
            pct3: pct[1],
            pct2: pct[2],
            pct1: pct[3],
            pct_u: pct[4],
        })
    }
}

pub fn rae_score(p: &QualityProfile) -> f64 {
    p.pct4 + p.pct3 / 3.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputRecord {
    pub unit: String,
    pub raw_journal: String,
    pub resolved: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Transform {
    Identity,
    #[default]
    Exponentiate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Aggregate {
    #[default]
    Mean,
    Median,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitScore {
    pub unit: String,
    pub rae_score: Option<f64>,
    pub mean_journal_score: Option<f64>,
    pub n_scored: usize,
    pub n_total: usize,
    pub coverage_ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitMean {
    pub value: Option<f64>,
    pub n_scored: usize,
    pub n_total: usize,
    pub coverage_ratio: f64,
}

/// Aggregates transformed scores over outputs whose journal has a score.
pub fn unit_mean_score(
    outputs: &[&OutputRecord],
    scores: &BTreeMap<String, f64>,
    transform: Transform,
    aggregate: Aggregate,
) -> UnitMean {
    let mut vals: Vec<f64> = outputs
        .iter()
        .filter_map(|o| o.resolved.as_ref().and_then(|k| scores.get(k)))
        .map(|&s| match transform {
            Transform::Identity => s,
            Transform::Exponentiate => s.exp(),
        })
        .collect();
    let n_total = outputs.len();
    let n_scored = vals.len();
    let value = if vals.is_empty() {
        None
    } else {
        match aggregate {
            Aggregate::Mean => Some(vals.iter().sum::<f64>() / n_scored as f64),
            Aggregate::Median => {
                vals.sort_by(f64::total_cmp);
                let mid = n_scored / 2;
                Some(if n_scored % 2 == 1 { vals[mid] } else { 0.5 * (vals[mid - 1] + vals[mid]) })
            }
        }
    };
    UnitMean {
        value,
        n_scored,
        n_total,
        coverage_ratio: if n_total == 0 { 0.0 } else { n_scored as f64 / n_total as f64 },
    }
}

/// One score per unit having a profile or outputs, sorted by unit name.
pub fn score_units(
    outputs: &[OutputRecord],
    profiles: &[QualityProfile],
    scores: &BTreeMap<String, f64>,
    transform: Transform,
    aggregate: Aggregate,
) -> Vec<UnitScore> {
    let mut by_unit: BTreeMap<&str, Vec<&OutputRecord>> = BTreeMap::new();
    for p in profiles {
        by_unit.entry(p.unit.as_str()).or_default();
    }
    for o in outputs {
        by_unit.entry(o.unit.as_str()).or_default().push(o);
    }
    let rae: BTreeMap<&str, f64> = profiles.iter().map(|p| (p.unit.as_str(), rae_score(p))).collect();
    by_unit
        .into_iter()
        .map(|(unit, outs)| {
            let m = unit_mean_score(&outs, scores, transform, aggregate);
            if m.value.is_none() {
                log::warn!("unit {unit}: no scored outputs");
            }
            UnitScore {
                unit: unit.to_string(),
                rae_score: rae.get(unit).copied(),
                mean_journal_score: m.value,
                n_scored: m.n_scored,
                n_total: m.n_total,
                coverage_ratio: m.coverage_ratio,
            }
        })
        .collect()
}

/// Units kept by the coverage filter that have both scores.
pub fn eligible(units: &[UnitScore], min_coverage: f64) -> Vec<&UnitScore> {
    units
        .iter()
        .filter(|u| u.coverage_ratio >= min_coverage && u.rae_score.is_some() && u.mean_journal_score.is_some())
        .collect()
}

/// Pearson correlation of RAE score against mean journal score.
pub fn correlate(units: &[UnitScore], min_coverage: f64) -> Result<f64> {
    let kept = eligible(units, min_coverage);
    if kept.len() < 3 {
        return Err(CitexError::InvalidArgument(format!(
            "{} units pass coverage {min_coverage}; need at least 3",
            kept.len()
        )));
    }
    let x: Vec<f64> = kept.iter().map(|u| u.rae_score.expect("filtered")).collect();
    let y: Vec<f64> = kept.iter().map(|u| u.mean_journal_score.expect("filtered")).collect();
    pearson(&x, &y).ok_or_else(|| CitexError::Undefined("correlation (zero variance)".into()))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CitexError::io(path, e))
}

/// Parses `unit,journal_raw`, resolving each journal against `corpus`.
pub fn parse_outputs(text: &str, corpus: &[Journal]) -> Result<Vec<OutputRecord>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).comment(Some(b'#')).from_reader(text.as_bytes());
    let mut out = Vec::new();
    let mut unresolved = 0usize;
    for (k, rec) in reader.records().enumerate() {
        let rec = rec?;
        let unit = rec.get(0).unwrap_or("").to_string();
        if unit.is_empty() {
            return Err(CitexError::Parse { line: k + 2, message: "empty unit".into() });
        }
        let raw = rec.get(1).unwrap_or("").to_string();
        let resolved = match resolve_name(&raw, corpus) {
            Resolution::Resolved(j) => Some(j.abbrev),
            _ => {
                unresolved += 1;
                None
            }
        };
        out.push(OutputRecord { unit, raw_journal: raw, resolved });
    }
    if unresolved > 0 {
        log::info!("{unresolved} of {} outputs not matched to a listed journal", out.len());
    }
    Ok(out)
}

pub fn load_outputs(path: impl AsRef<Path>, corpus: &[Journal]) -> Result<Vec<OutputRecord>> {
    parse_outputs(&read(path.as_ref())?, corpus)
}

/// Parses `unit,pct4,pct3,pct2,pct1,pctU`.
pub fn parse_profiles(text: &str) -> Result<Vec<QualityProfile>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).comment(Some(b'#')).from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (k, rec) in reader.records().enumerate() {
        let rec = rec?;
        let line = k + 2;
        let mut pct = [0.0; 5];
        for (slot, p) in pct.iter_mut().enumerate() {
            let raw = rec.get(slot + 1).unwrap_or("");
            *p = raw
                .parse()
                .map_err(|_| CitexError::Parse { line, message: format!("bad percentage `{raw}`") })?;
        }
        out.push(QualityProfile::new(rec.get(0).unwrap_or(""), pct)?);
    }
    Ok(out)
}

pub fn load_profiles(path: impl AsRef<Path>) -> Result<Vec<QualityProfile>> {
    parse_profiles(&read(path.as_ref())?)
}
