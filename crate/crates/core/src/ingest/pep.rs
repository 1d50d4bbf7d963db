use thiserror::Error;

use super::{Identity, PepRecord, StateName, StateVocabulary};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PepDocError {
    #[error("proposal document is missing the {0:?} header")]
    MissingField(&'static str),
    #[error("invalid proposal number {0:?}")]
    InvalidNumber(String),
}

/// Parses the RFC-822-style preamble of a proposal document. Transitions are
/// left empty; see [`super::attach_histories`].
pub fn parse_pep_document(text: &str, vocab: &StateVocabulary) -> Result<PepRecord, PepDocError> {
    let mut fields: Vec<(String, String)> = Vec::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            if fields.is_empty() {
                continue;
            }
            break;
        }
        if line.starts_with([' ', '\t']) {
            if let Some((_, value)) = fields.last_mut() {
                value.push(' ');
                value.push_str(line.trim());
            }
            continue;
        }
        match line.split_once(':') {
            Some((key, value)) if !key.contains(char::is_whitespace) => {
                fields.push((key.trim().to_ascii_lowercase(), value.trim().to_string()))
            }
            _ => break,
        }
    }
    let get = |key: &str| fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str());

    let raw_number = get("pep").ok_or(PepDocError::MissingField("PEP"))?;
    let number: u32 = raw_number
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| PepDocError::InvalidNumber(raw_number.to_string()))?;
    let title = get("title").map(crate::text::normalize_whitespace).ok_or(PepDocError::MissingField("Title"))?;
    let authors = get("author").map(split_identities).unwrap_or_default();
    let bdfl_delegate = get("bdfl-delegate").filter(|v| !v.trim().is_empty()).map(parse_identity);
    let final_state = get("status").map(|s| vocab.state(s)).unwrap_or_else(StateName::unknown);

    Ok(PepRecord { number, title, authors, bdfl_delegate, final_state, transitions: Vec::new() })
}

fn split_identities(value: &str) -> Vec<Identity> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    for c in value.chars() {
        match c {
            '<' | '(' => depth += 1,
            '>' | ')' => depth -= 1,
            ',' if depth <= 0 => {
                if !current.trim().is_empty() {
                    out.push(parse_identity(&current));
                }
                current.clear();
                continue;
            }
            _ => {}
        }
        current.push(c);
    }
    if !current.trim().is_empty() {
        out.push(parse_identity(&current));
    }
    out
}

/// Parses `Name <addr>`, `addr (Name)`, a bare address or a bare name.
pub fn parse_identity(raw: &str) -> Identity {
    let (name, email) = super::mbox::parse_author(raw);
    Identity { name, email: (!email.is_empty()).then_some(email) }
}
