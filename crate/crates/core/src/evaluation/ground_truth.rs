use std::collections::BTreeSet;
use std::fmt;
use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{EvalError, FinalState};
use crate::text::{normalize_for_match, normalize_whitespace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RationaleLabel {
    Consensus,
    NoConsensus,
    LazyConsensus,
    RoughConsensus,
    LittleSupport,
    Majority,
    NoMajority,
    BdflDecree,
    BdflPronouncementAfterNoConsensus,
    BdflPronouncementOverMajority,
    IneptPep,
}

impl RationaleLabel {
    pub const ALL: [RationaleLabel; 11] = [
        RationaleLabel::Consensus,
        RationaleLabel::NoConsensus,
        RationaleLabel::LazyConsensus,
        RationaleLabel::RoughConsensus,
        RationaleLabel::LittleSupport,
        RationaleLabel::Majority,
        RationaleLabel::NoMajority,
        RationaleLabel::BdflDecree,
        RationaleLabel::BdflPronouncementAfterNoConsensus,
        RationaleLabel::BdflPronouncementOverMajority,
        RationaleLabel::IneptPep,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RationaleLabel::Consensus => "consensus",
            RationaleLabel::NoConsensus => "no_consensus",
            RationaleLabel::LazyConsensus => "lazy_consensus",
            RationaleLabel::RoughConsensus => "rough_consensus",
            RationaleLabel::LittleSupport => "little_support",
            RationaleLabel::Majority => "majority",
            RationaleLabel::NoMajority => "no_majority",
            RationaleLabel::BdflDecree => "bdfl_decree",
            RationaleLabel::BdflPronouncementAfterNoConsensus => "bdfl_pronouncement_after_no_consensus",
            RationaleLabel::BdflPronouncementOverMajority => "bdfl_pronouncement_over_majority",
            RationaleLabel::IneptPep => "inept_pep",
        }
    }
}

impl fmt::Display for RationaleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RationaleLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace([' ', '-'], "_");
        RationaleLabel::ALL.into_iter().find(|l| l.as_str() == key).ok_or_else(|| format!("unknown label {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruthEntry {
    pub pep: u32,
    pub final_state: FinalState,
    pub message_id: String,
    /// Whitespace-normalized.
    pub sentence_text: String,
    pub label: RationaleLabel,
}

impl GroundTruthEntry {
    pub fn match_key(&self) -> String {
        normalize_for_match(&self.sentence_text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowError {
    /// 1-based data row (header excluded).
    pub row: usize,
    pub message: String,
}

impl fmt::Display for RowError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "row {}: {}", self.row, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GroundTruth {
    pub entries: Vec<GroundTruthEntry>,
    pub row_errors: Vec<RowError>,
    pub warnings: Vec<String>,
}

/// A row before validation; every field is text.
#[derive(Debug, Deserialize)]
struct RawRow {
    pep: serde_json::Value,
    final_state: String,
    message_id: String,
    sentence_text: String,
    label: String,
}

fn validate(raw: RawRow) -> Result<GroundTruthEntry, String> {
    let pep = match &raw.pep {
        serde_json::Value::Number(n) => n.as_u64(),
        serde_json::Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
    .and_then(|n| u32::try_from(n).ok())
    .filter(|n| *n > 0)
    .ok_or_else(|| format!("invalid pep number {}", raw.pep))?;
    let final_state = raw.final_state.parse()?;
    let label = raw.label.parse()?;
    let message_id = raw.message_id.trim().to_string();
    if message_id.is_empty() {
        return Err("empty message_id".into());
    }
    let sentence_text = normalize_whitespace(&raw.sentence_text);
    if sentence_text.is_empty() {
        return Err("empty sentence_text".into());
    }
    Ok(GroundTruthEntry { pep, final_state, message_id, sentence_text, label })
}

fn assemble(rows: Vec<Result<RawRow, String>>) -> Result<GroundTruth, EvalError> {
    let total = rows.len();
    let mut gt = GroundTruth::default();
    let mut seen = BTreeSet::new();
    for (i, row) in rows.into_iter().enumerate() {
        match row.and_then(validate) {
            Ok(e) => {
                if seen.insert((e.pep, e.message_id.clone(), e.match_key())) {
                    gt.entries.push(e);
                } else {
                    gt.warnings.push(format!("row {}: duplicate of an earlier row, dropped", i + 1));
                }
            }
            Err(message) => gt.row_errors.push(RowError { row: i + 1, message }),
        }
    }
    if gt.row_errors.len() * 10 > total {
        return Err(EvalError::GroundTruthRejected { invalid: gt.row_errors.len(), total, errors: gt.row_errors });
    }
    Ok(gt)
}

/// CSV with header `pep,final_state,message_id,sentence_text,label`.
pub fn load_ground_truth_csv<R: Read>(reader: R) -> Result<GroundTruth, EvalError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::Headers).from_reader(reader);
    let headers = rdr.headers().map_err(|e| EvalError::Input(e.to_string()))?.clone();
    for col in ["pep", "final_state", "message_id", "sentence_text", "label"] {
        if !headers.iter().any(|h| h == col) {
            return Err(EvalError::Input(format!("ground truth is missing column {col:?}")));
        }
    }
    let rows = rdr
        .records()
        .map(|r| {
            let r = r.map_err(|e| e.to_string())?;
            let get = |name: &str| headers.iter().position(|h| h == name).and_then(|i| r.get(i)).unwrap_or("").to_string();
            Ok(RawRow {
                pep: serde_json::Value::String(get("pep")),
                final_state: get("final_state"),
                message_id: get("message_id"),
                sentence_text: get("sentence_text"),
                label: get("label"),
            })
        })
        .collect();
    assemble(rows)
}

/// JSON array of objects with the same five fields.
pub fn load_ground_truth_json(text: &str) -> Result<GroundTruth, EvalError> {
    let values: Vec<serde_json::Value> = serde_json::from_str(text).map_err(|e| EvalError::Input(e.to_string()))?;
    let rows = values.into_iter().map(|v| serde_json::from_value::<RawRow>(v).map_err(|e| e.to_string())).collect();
    assemble(rows)
}

/// Picks the format from the first non-blank character.
pub fn load_ground_truth(text: &str) -> Result<GroundTruth, EvalError> {
    if text.trim_start().starts_with('[') {
        load_ground_truth_json(text)
    } else {
        load_ground_truth_csv(text.as_bytes())
    }
}

pub fn write_ground_truth_csv<W: std::io::Write>(w: W, entries: &[GroundTruthEntry]) -> Result<(), csv::Error> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["pep", "final_state", "message_id", "sentence_text", "label"])?;
    for e in entries {
        out.write_record([e.pep.to_string(), e.final_state.to_string(), e.message_id.clone(), e.sentence_text.clone(), e.label.to_string()])?;
    }
    out.flush()?;
    Ok(())
}
