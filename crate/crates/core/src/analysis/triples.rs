//! Shallow subject-verb-object extraction over a closed verb list.
//!
//! A sentence is cut into clauses at commas, semicolons, colons and
//! coordinating conjunctions. In each clause the first closed-list verb
//! (plus a trailing `be`/`been`/`being`) is the verb group, the words before
//! it are the subject and the words after it are the object. Clauses with no
//! subject are dropped.

use serde::{Deserialize, Serialize};

use crate::text::{contains_bounded, fold_for_matching};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triple {
    pub subject: String,
    pub verb: String,
    pub object: String,
}

impl Triple {
    pub fn new(subject: &str, verb: &str, object: &str) -> Self {
        Triple { subject: subject.into(), verb: verb.into(), object: object.into() }
    }
}

const VERBS: &[&str] = &[
    "is", "are", "was", "were", "am", "be", "been", "has", "have", "had", "reached", "accepted", "rejected",
    "approved", "agreed", "decided", "pronounced", "disagreed", "objected", "voted", "supported", "opposed",
    "accept", "reject", "approve", "agree", "decide", "can", "will", "would", "should", "could", "must", "may",
];

const AUXILIARY_TAIL: &[&str] = &["be", "been", "being"];

const CONJUNCTIONS: &[&str] =
    &["and", "but", "or", "so", "because", "while", "although", "though", "whereas", "yet", "since"];

fn bare(token: &str) -> String {
    token.trim_matches(|c: char| !c.is_alphanumeric() && c != '\'').to_lowercase()
}

fn clauses(text: &str) -> Vec<Vec<&str>> {
    let mut out = Vec::new();
    for chunk in text.split([',', ';', ':']) {
        let mut current = Vec::new();
        for token in chunk.split_whitespace() {
            if CONJUNCTIONS.contains(&bare(token).as_str()) {
                if !current.is_empty() {
                    out.push(std::mem::take(&mut current));
                }
                continue;
            }
            current.push(token);
        }
        if !current.is_empty() {
            out.push(current);
        }
    }
    out
}

fn join(tokens: &[&str]) -> String {
    tokens
        .join(" ")
        .trim_matches(|c: char| c.is_ascii_punctuation() && c != '\'' && c != '"' || c.is_whitespace())
        .to_string()
}

pub fn extract_triples(text: &str) -> Vec<Triple> {
    let mut out = Vec::new();
    for clause in clauses(text) {
        let Some(v) = clause.iter().position(|t| VERBS.contains(&bare(t).as_str())) else {
            continue;
        };
        if v == 0 {
            continue;
        }
        let mut end = v + 1;
        while end < clause.len() && AUXILIARY_TAIL.contains(&bare(clause[end]).as_str()) {
            end += 1;
        }
        let subject = join(&clause[..v]);
        if subject.is_empty() {
            continue;
        }
        out.push(Triple { subject, verb: join(&clause[v..end]), object: join(&clause[end..]) });
    }
    out
}

/// True when a decision-specific term occurs in any slot of the triple.
pub fn triple_matches_decision(triple: &Triple, decision_terms: &[String]) -> bool {
    [&triple.subject, &triple.verb, &triple.object].iter().any(|slot| {
        let folded = fold_for_matching(slot);
        decision_terms.iter().any(|t| contains_bounded(&folded, t))
    })
}
