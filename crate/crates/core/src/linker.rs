//! Links messages to proposals by number or title mention and classifies
//! message types.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::ingest::{EmailMessage, MessageType, PepRecord};
use crate::text::{normalize_whitespace, word_count};

/// Titles shorter than this (in alphanumeric words) link by number only.
pub const MIN_TITLE_WORDS: usize = 3;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinkedCorpus {
    pub messages: Vec<EmailMessage>,
    pub peps: BTreeMap<u32, PepRecord>,
    /// Message ids per proposal, ordered by (date, message id); undated
    /// messages sort last.
    pub per_pep_index: BTreeMap<u32, Vec<String>>,
    positions: BTreeMap<String, usize>,
}

fn pep_mention_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?i)\bPEP[ -]?0*(\d+)\b").unwrap())
}

/// Proposal numbers mentioned as `PEP N`, `PEP-N` or `PEPN` (leading zeros
/// dropped). A number never matches inside a longer digit run.
pub fn mentioned_numbers(text: &str) -> BTreeSet<u32> {
    pep_mention_re()
        .captures_iter(text)
        .filter_map(|c| c.get(1).and_then(|m| m.as_str().parse().ok()))
        .collect()
}

/// Proposals a message refers to, among `peps`.
pub fn detect_links(message: &EmailMessage, peps: &BTreeMap<u32, PepRecord>, titles: &[(u32, String)]) -> BTreeSet<u32> {
    let mut found: BTreeSet<u32> = mentioned_numbers(&message.subject)
        .into_iter()
        .chain(mentioned_numbers(&message.body_raw))
        .filter(|n| peps.contains_key(n))
        .collect();
    if !titles.is_empty() {
        let subject = normalize_whitespace(&message.subject).to_lowercase();
        let body = normalize_whitespace(&message.body_raw).to_lowercase();
        for (n, title) in titles {
            if subject.contains(title.as_str()) || body.contains(title.as_str()) {
                found.insert(*n);
            }
        }
    }
    found
}

/// Lowercased titles eligible for substring linking.
fn linkable_titles(peps: &BTreeMap<u32, PepRecord>) -> Vec<(u32, String)> {
    peps.values()
        .filter(|p| word_count(&p.title) >= MIN_TITLE_WORDS)
        .map(|p| (p.number, normalize_whitespace(&p.title).to_lowercase()))
        .collect()
}

/// Fills `linked_peps` on every message and builds the per-proposal index.
/// Unlinked messages stay in the corpus but are absent from the index.
pub fn link_messages(mut messages: Vec<EmailMessage>, peps: BTreeMap<u32, PepRecord>) -> LinkedCorpus {
    let titles = linkable_titles(&peps);
    for m in &mut messages {
        m.linked_peps = detect_links(m, &peps, &titles);
    }
    LinkedCorpus::from_linked(messages, peps)
}

impl LinkedCorpus {
    /// Builds the index from messages whose `linked_peps` are already set,
    /// e.g. after reading a corpus file.
    pub fn from_linked(messages: Vec<EmailMessage>, peps: BTreeMap<u32, PepRecord>) -> Self {
        let mut per_pep_index: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (i, m) in messages.iter().enumerate() {
            for n in &m.linked_peps {
                if peps.contains_key(n) {
                    per_pep_index.entry(*n).or_default().push(i);
                }
            }
        }
        let per_pep_index = per_pep_index
            .into_iter()
            .map(|(n, mut idx)| {
                idx.sort_by(|&a, &b| message_order(&messages[a], &messages[b]));
                (n, idx.into_iter().map(|i| messages[i].message_id.clone()).collect())
            })
            .collect();
        let positions = messages.iter().enumerate().map(|(i, m)| (m.message_id.clone(), i)).collect();
        LinkedCorpus { messages, peps, per_pep_index, positions }
    }

    pub fn message(&self, id: &str) -> Option<&EmailMessage> {
        self.positions.get(id).map(|&i| &self.messages[i])
    }

    /// Messages linked to proposal `n`, in index order.
    pub fn messages_for(&self, n: u32) -> impl Iterator<Item = &EmailMessage> {
        self.per_pep_index.get(&n).into_iter().flatten().filter_map(|id| self.message(id))
    }

    /// `(pep, title, messages linked)` rows for the audit CSV.
    pub fn link_stats(&self) -> Vec<(u32, String, usize)> {
        self.peps
            .values()
            .map(|p| (p.number, p.title.clone(), self.per_pep_index.get(&p.number).map_or(0, Vec::len)))
            .collect()
    }

    pub fn write_link_stats<W: std::io::Write>(&self, w: W) -> Result<(), csv::Error> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["pep", "title", "messages_linked"])?;
        for (n, title, count) in self.link_stats() {
            out.write_record([n.to_string(), title, count.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Chronological order with undated messages last, ties by id.
pub fn message_order(a: &EmailMessage, b: &EmailMessage) -> std::cmp::Ordering {
    date_key(a.date).cmp(&date_key(b.date)).then_with(|| a.message_id.cmp(&b.message_id))
}

fn date_key(d: Option<chrono::DateTime<chrono::Utc>>) -> (bool, Option<chrono::DateTime<chrono::Utc>>) {
    (d.is_none(), d)
}

/// Rules for telling official summaries and state-commit notifications
/// apart from ordinary discussion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MessageTypeRules {
    /// Lists carrying commit notifications.
    pub commit_lists: Vec<String>,
    /// Subject phrases marking a summary message.
    pub summary_subject_terms: Vec<String>,
}

impl Default for MessageTypeRules {
    fn default() -> Self {
        MessageTypeRules {
            commit_lists: vec!["python-checkins".into(), "python-commits".into()],
            summary_subject_terms: vec!["summary".into()],
        }
    }
}

fn status_line_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?mi)^\+\s*Status:\s*\S+").unwrap())
}

/// A message is a state commit when it carries a diff line setting a
/// `Status:` header, or when it comes from a commit list and mentions a
/// status change; it is a summary when its subject says so.
pub fn classify_message_type(message: &EmailMessage, rules: &MessageTypeRules) -> MessageType {
    let from_commit_list = rules.commit_lists.iter().any(|l| l.eq_ignore_ascii_case(&message.list_name));
    if status_line_re().is_match(&message.body_raw)
        || (from_commit_list && message.body_raw.to_ascii_lowercase().contains("status:"))
    {
        return MessageType::StateCommit;
    }
    let subject = crate::text::fold_for_matching(&message.subject);
    if rules.summary_subject_terms.iter().any(|t| crate::text::contains_bounded(&subject, t)) {
        return MessageType::PepSummary;
    }
    MessageType::Ordinary
}

pub fn classify_message_types(messages: &mut [EmailMessage], rules: &MessageTypeRules) {
    for m in messages {
        m.message_type = classify_message_type(m, rules);
    }
}
