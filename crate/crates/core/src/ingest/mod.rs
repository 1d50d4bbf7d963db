//! Archive ingestion: mbox parsing, proposal documents, state histories and
//! the line-delimited corpus file.

mod corpus;
mod history;
mod mbox;
mod pep;
pub mod segment;

use std::collections::BTreeSet;
use std::fmt;

use chrono::{DateTime, NaiveDate, TimeZone, Utc};
use serde::{Deserialize, Serialize};

pub use corpus::{read_corpus, write_corpus, Corpus, CorpusError, CorpusRecord};
pub use history::{
    attach_histories, extract_state_history, parse_commit_log, CommitEntry, CommitLogError, StateHistory,
};
pub use mbox::{parse_mbox, Diagnostic, DiagnosticKind, MboxParse};
pub use pep::{parse_identity, parse_pep_document, PepDocError};

/// One parsed archive message.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmailMessage {
    pub message_id: String,
    pub subject: String,
    pub author_email: String,
    pub author_name: String,
    pub date: Option<DateTime<Utc>>,
    pub in_reply_to: Option<String>,
    pub list_name: String,
    /// Decoded text/plain body with quoted lines and signature removed.
    pub body_raw: String,
    pub paragraphs: Vec<Paragraph>,
    pub linked_peps: BTreeSet<u32>,
    pub message_type: MessageType,
}

impl EmailMessage {
    pub fn sentences(&self) -> impl Iterator<Item = &Sentence> {
        self.paragraphs.iter().flat_map(|p| p.sentences.iter())
    }

    pub fn sentence_count(&self) -> usize {
        self.paragraphs.iter().map(|p| p.sentences.len()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Paragraph {
    pub index: usize,
    pub header: Option<String>,
    pub sentences: Vec<Sentence>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sentence {
    pub message_id: String,
    pub paragraph_index: usize,
    /// Message-global ordinal.
    pub sentence_index: usize,
    pub text: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MessageType {
    PepSummary,
    StateCommit,
    #[default]
    Ordinary,
}

/// A person as written in a header: display name and optional address.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Identity {
    pub name: String,
    pub email: Option<String>,
}

impl Identity {
    /// Case-insensitive match on address, falling back to display name.
    pub fn matches(&self, name: &str, email: &str) -> bool {
        if let Some(own) = &self.email {
            if !email.is_empty() && own.eq_ignore_ascii_case(email.trim()) {
                return true;
            }
        }
        let own_name = crate::text::normalize_whitespace(&self.name).to_lowercase();
        !own_name.is_empty() && own_name == crate::text::normalize_whitespace(name).to_lowercase()
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.email {
            Some(e) if self.name.is_empty() => write!(f, "{e}"),
            Some(e) => write!(f, "{} <{e}>", self.name),
            None => write!(f, "{}", self.name),
        }
    }
}

/// A lowercase decision-state name. `canonical` records whether it belongs
/// to the configured vocabulary.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StateName {
    pub name: String,
    pub canonical: bool,
}

impl StateName {
    pub fn unknown() -> Self {
        StateName { name: "unknown".into(), canonical: false }
    }

    pub fn as_str(&self) -> &str {
        &self.name
    }

    pub fn is(&self, name: &str) -> bool {
        self.name == name
    }
}

impl fmt::Display for StateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// The set of recognized state names. Seeded with the eight official states;
/// extra mined states are added from configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateVocabulary {
    states: BTreeSet<String>,
}

pub const OFFICIAL_STATES: [&str; 8] =
    ["draft", "accepted", "rejected", "final", "active", "superseded", "withdrawn", "deferred"];

impl Default for StateVocabulary {
    fn default() -> Self {
        StateVocabulary { states: OFFICIAL_STATES.iter().map(|s| s.to_string()).collect() }
    }
}

impl StateVocabulary {
    pub fn with_extra<I, S>(extra: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut vocab = Self::default();
        for s in extra {
            let s = s.as_ref().trim().to_lowercase();
            if !s.is_empty() {
                vocab.states.insert(s);
            }
        }
        vocab
    }

    pub fn state(&self, raw: &str) -> StateName {
        let name = crate::text::normalize_whitespace(raw).to_lowercase();
        if name.is_empty() {
            return StateName::unknown();
        }
        let canonical = self.states.contains(&name);
        StateName { name, canonical }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.states.contains(name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PepRecord {
    pub number: u32,
    pub title: String,
    pub authors: Vec<Identity>,
    pub bdfl_delegate: Option<Identity>,
    pub final_state: StateName,
    pub transitions: Vec<StateTransition>,
}

impl PepRecord {
    /// The most recent transition into one of `decisive` states.
    pub fn decisive_transition(&self, decisive: &[String]) -> Option<&StateTransition> {
        self.transitions.iter().rev().find(|t| decisive.iter().any(|d| t.to_state.is(d)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateTransition {
    pub from_state: Option<StateName>,
    pub to_state: StateName,
    pub date: DateTime<Utc>,
    pub source_commit: Option<String>,
}

/// Date range outside of which state commits are ignored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DateWindow {
    pub start: DateTime<Utc>,
    pub end: DateTime<Utc>,
}

impl Default for DateWindow {
    fn default() -> Self {
        DateWindow { start: day_start(1995, 3, 1), end: day_end(2018, 7, 12) }
    }
}

impl DateWindow {
    pub fn contains(&self, t: DateTime<Utc>) -> bool {
        t >= self.start && t <= self.end
    }
}

pub(crate) fn day_start(y: i32, m: u32, d: u32) -> DateTime<Utc> {
    Utc.from_utc_datetime(&NaiveDate::from_ymd_opt(y, m, d).expect("valid date").and_hms_opt(0, 0, 0).unwrap())
}

pub(crate) fn day_end(y: i32, m: u32, d: u32) -> DateTime<Utc> {
    Utc.from_utc_datetime(&NaiveDate::from_ymd_opt(y, m, d).expect("valid date").and_hms_opt(23, 59, 59).unwrap())
}

/// Parses the date forms accepted in commit logs and config files:
/// RFC 3339, `YYYY-MM-DD HH:MM:SS` and bare `YYYY-MM-DD`.
pub fn parse_flexible_date(s: &str) -> Option<DateTime<Utc>> {
    let s = s.trim();
    if let Ok(t) = DateTime::parse_from_rfc3339(s) {
        return Some(t.with_timezone(&Utc));
    }
    if let Ok(t) = DateTime::parse_from_rfc2822(s) {
        return Some(t.with_timezone(&Utc));
    }
    for fmt in ["%Y-%m-%d %H:%M:%S", "%Y-%m-%dT%H:%M:%S"] {
        if let Ok(t) = chrono::NaiveDateTime::parse_from_str(s, fmt) {
            return Some(Utc.from_utc_datetime(&t));
        }
    }
    NaiveDate::parse_from_str(s, "%Y-%m-%d").ok().map(|d| Utc.from_utc_datetime(&d.and_hms_opt(0, 0, 0).unwrap()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vocabulary_flags_unknown_states() {
        let vocab = StateVocabulary::default();
        assert_eq!(vocab.state("Accepted"), StateName { name: "accepted".into(), canonical: true });
        assert!(!vocab.state("April Fool!").canonical);
        assert_eq!(vocab.state("  "), StateName::unknown());
        let extended = StateVocabulary::with_extra(["Pronounced"]);
        assert!(extended.state("pronounced").canonical);
    }

    #[test]
    fn default_window_ends_on_resignation_day() {
        let w = DateWindow::default();
        assert!(w.contains(parse_flexible_date("2018-07-12 18:00:00").unwrap()));
        assert!(!w.contains(parse_flexible_date("2018-07-13").unwrap()));
        assert!(!w.contains(parse_flexible_date("1995-02-28").unwrap()));
    }

    #[test]
    fn identity_matching() {
        let id = Identity { name: "Guido van Rossum".into(), email: Some("guido@python.org".into()) };
        assert!(id.matches("", "GUIDO@python.org"));
        assert!(id.matches("guido  van rossum", "other@x"));
        assert!(!id.matches("Barry", "barry@python.org"));
    }
}
