//! Decision-state timelines reconstructed from the commit log of proposal
//! documents.

use std::collections::BTreeMap;
use std::io::Read;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{parse_flexible_date, DateWindow, PepRecord, StateTransition, StateVocabulary};

/// Status header value of one committed proposal version.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommitEntry {
    pub date: DateTime<Utc>,
    pub pep: u32,
    pub status: String,
    pub commit: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StateHistory {
    pub transitions: BTreeMap<u32, Vec<StateTransition>>,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Error)]
pub enum CommitLogError {
    #[error("commit log: {0}")]
    Csv(#[from] csv::Error),
    #[error("commit log is missing column {0:?}")]
    MissingColumn(&'static str),
}

/// Reads a `date,pep,status[,commit]` CSV. Rows with unreadable values are
/// returned as diagnostics rather than failing the load.
pub fn parse_commit_log<R: Read>(reader: R) -> Result<(Vec<CommitEntry>, Vec<String>), CommitLogError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).flexible(true).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let col = |name: &'static str| {
        headers.iter().position(|h| h.eq_ignore_ascii_case(name)).ok_or(CommitLogError::MissingColumn(name))
    };
    let (date_col, pep_col, status_col) = (col("date")?, col("pep")?, col("status")?);
    let commit_col = headers.iter().position(|h| h.eq_ignore_ascii_case("commit"));

    let mut entries = Vec::new();
    let mut problems = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        let date = record.get(date_col).and_then(parse_flexible_date);
        let pep = record.get(pep_col).and_then(|p| p.trim_start_matches('0').parse::<u32>().ok());
        let status = record.get(status_col).unwrap_or("").to_string();
        match (date, pep) {
            (Some(date), Some(pep)) if !status.is_empty() => entries.push(CommitEntry {
                date,
                pep,
                status,
                commit: commit_col.and_then(|c| record.get(c)).filter(|s| !s.is_empty()).map(str::to_string),
            }),
            _ => problems.push(format!("row {}: unreadable commit entry {:?}", row + 2, record)),
        }
    }
    Ok((entries, problems))
}

/// Collapses consecutive duplicate statuses per proposal and emits one
/// transition per change, starting with an initial transition from no state.
pub fn extract_state_history(entries: &[CommitEntry], vocab: &StateVocabulary, window: &DateWindow) -> StateHistory {
    let mut by_pep: BTreeMap<u32, Vec<&CommitEntry>> = BTreeMap::new();
    let mut history = StateHistory::default();
    for e in entries {
        if !window.contains(e.date) {
            history.diagnostics.push(format!(
                "PEP {}: commit at {} outside {}..{} ignored",
                e.pep,
                e.date.to_rfc3339(),
                window.start.date_naive(),
                window.end.date_naive()
            ));
            continue;
        }
        by_pep.entry(e.pep).or_default().push(e);
    }
    for (pep, mut list) in by_pep {
        list.sort_by_key(|e| e.date);
        let mut transitions: Vec<StateTransition> = Vec::new();
        for e in list {
            let state = vocab.state(&e.status);
            let previous = transitions.last().map(|t| t.to_state.clone());
            if previous.as_ref() == Some(&state) {
                continue;
            }
            transitions.push(StateTransition {
                from_state: previous,
                to_state: state,
                date: e.date,
                source_commit: e.commit.clone(),
            });
        }
        history.transitions.insert(pep, transitions);
    }
    history
}

/// Installs each proposal's transitions and makes `final_state` agree with
/// the latest one.
pub fn attach_histories(peps: &mut BTreeMap<u32, PepRecord>, history: &StateHistory) {
    for (number, transitions) in &history.transitions {
        if let Some(pep) = peps.get_mut(number) {
            pep.transitions = transitions.clone();
            if let Some(last) = transitions.last() {
                pep.final_state = last.to_state.clone();
            }
        }
    }
}
