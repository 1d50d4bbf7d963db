use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{AuthorRole, SamcerClass};
use crate::analysis::{contains_any, Lexicon, TermType};
use crate::ingest::{EmailMessage, MessageType, PepRecord};

/// Message-level inputs for one (message, proposal) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MessageContext {
    pub pep: u32,
    pub message_id: String,
    pub author_role: AuthorRole,
    pub message_type: MessageType,
    /// Signed days from the proposal's decisive commit; `None` when either
    /// date is unknown.
    pub days_from_decisive_commit: Option<i64>,
    pub subject_types: BTreeSet<TermType>,
    /// Shares a normalized subject with an earlier pronouncement request.
    pub shares_request_subject: bool,
    pub samcer_class: Option<SamcerClass>,
    pub paragraph_count: usize,
}

/// Sentence-level inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct SentenceContext<'a> {
    pub message: &'a MessageContext,
    pub text: &'a str,
    pub header: Option<&'a str>,
    pub paragraph_index: usize,
    pub sentence_types: BTreeSet<TermType>,
    /// Union of term types in the rest of the paragraph.
    pub remainder_types: BTreeSet<TermType>,
}

impl SentenceContext<'_> {
    pub fn is_first_or_last_paragraph(&self) -> bool {
        self.paragraph_index == 0 || self.paragraph_index + 1 == self.message.paragraph_count
    }
}

pub(crate) fn days_between(message: &EmailMessage, pep: &PepRecord, decisive: &[String]) -> Option<i64> {
    let date = message.date?;
    let commit = pep.decisive_transition(decisive)?.date;
    Some((date - commit).num_days())
}

/// First template (lexicon order) whose role admits the author and whose
/// cue occurs in the subject or body.
pub(crate) fn samcer_class(message: &EmailMessage, role: AuthorRole, lexicon: &Lexicon) -> Option<SamcerClass> {
    lexicon
        .samcer_templates
        .iter()
        .find(|t| {
            t.roles.contains(&role) && (contains_any(&message.subject, &t.cues) || contains_any(&message.body_raw, &t.cues))
        })
        .map(|t| t.class)
}

pub(crate) fn is_pronouncement_request(message: &EmailMessage, lexicon: &Lexicon) -> bool {
    lexicon.contains_pronouncement_request(&message.subject) || lexicon.contains_pronouncement_request(&message.body_raw)
}

/// Sentence contexts of one message, in sentence order.
pub(crate) fn sentence_contexts<'a>(
    message: &'a EmailMessage,
    ctx: &'a MessageContext,
    lexicon: &Lexicon,
) -> Vec<SentenceContext<'a>> {
    let mut out = Vec::with_capacity(message.sentence_count());
    for p in &message.paragraphs {
        let types: Vec<BTreeSet<TermType>> = p.sentences.iter().map(|s| lexicon.match_term_types(&s.text)).collect();
        let mut suffix = vec![BTreeSet::new(); types.len() + 1];
        for i in (0..types.len()).rev() {
            suffix[i] = suffix[i + 1].union(&types[i]).copied().collect();
        }
        for (i, s) in p.sentences.iter().enumerate() {
            out.push(SentenceContext {
                message: ctx,
                text: &s.text,
                header: p.header.as_deref(),
                paragraph_index: p.index,
                sentence_types: types[i].clone(),
                remainder_types: suffix[i + 1].clone(),
            });
        }
    }
    out
}
