//! Body cleanup, paragraph detection and rule-based sentence splitting.

use super::{Paragraph, Sentence};
use crate::text::normalize_whitespace;

/// Blocks at most this long without a terminal period can act as a header
/// for the block that follows.
pub const HEADER_MAX_CHARS: usize = 60;

const ABBREVIATIONS: &[&str] = &[
    "e.g.", "i.e.", "vs.", "dr.", "mr.", "mrs.", "ms.", "prof.", "cf.", "viz.", "approx.", "no.", "st.", "jr.", "sr.",
    "fig.", "al.", "inc.", "ltd.", "resp.",
];

/// Drops quoted reply lines (prefix `>`) and everything after a signature
/// separator line (`--` or `-- `).
pub fn clean_body(body: &str) -> String {
    let mut kept = Vec::new();
    for line in body.lines() {
        if line.trim_end() == "--" {
            break;
        }
        if line.trim_start().starts_with('>') {
            continue;
        }
        kept.push(line.trim_end());
    }
    let mut out = kept.join("\n");
    let trimmed_len = out.trim_end().len();
    out.truncate(trimmed_len);
    out
}

/// Splits a cleaned body into paragraphs and sentences.
pub fn segment(message_id: &str, cleaned: &str) -> Vec<Paragraph> {
    let blocks = blocks(cleaned);
    let mut paragraphs = Vec::new();
    let mut pending_header: Option<String> = None;
    let mut sentence_index = 0;
    for (i, block) in blocks.iter().enumerate() {
        let next_longer = blocks.get(i + 1).is_some_and(|n| n.chars().count() > block.chars().count());
        if pending_header.is_none() && is_header_candidate(block) && next_longer {
            pending_header = Some(block.clone());
            continue;
        }
        let paragraph_index = paragraphs.len();
        let sentences = split_sentences(block)
            .into_iter()
            .map(|text| {
                let s = Sentence {
                    message_id: message_id.to_string(),
                    paragraph_index,
                    sentence_index,
                    text,
                };
                sentence_index += 1;
                s
            })
            .collect();
        paragraphs.push(Paragraph { index: paragraph_index, header: pending_header.take(), sentences });
    }
    paragraphs
}

fn blocks(cleaned: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut current = String::new();
    for line in cleaned.lines() {
        if line.trim().is_empty() {
            if !current.is_empty() {
                out.push(normalize_whitespace(&current));
                current.clear();
            }
        } else {
            current.push(' ');
            current.push_str(line);
        }
    }
    if !current.trim().is_empty() {
        out.push(normalize_whitespace(&current));
    }
    out
}

fn is_header_candidate(block: &str) -> bool {
    block.chars().count() <= HEADER_MAX_CHARS && !block.ends_with('.')
}

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '\u{201d}' | '\u{2019}')
}

fn is_opener(c: char) -> bool {
    matches!(c, '"' | '\'' | '(' | '[' | '\u{201c}' | '\u{2018}')
}

fn is_abbreviation(text: &str, dot: usize) -> bool {
    let start = text[..dot].rfind(char::is_whitespace).map_or(0, |p| p + 1);
    let token = text[start..=dot].trim_start_matches(is_opener).to_lowercase();
    if ABBREVIATIONS.contains(&token.as_str()) {
        return true;
    }
    // single-letter initials such as "J. Doe"
    let mut chars = token.chars();
    matches!((chars.next(), chars.next(), chars.next()), (Some(c), Some('.'), None) if c.is_alphabetic())
}

/// Splits on `.`, `?` or `!` followed by whitespace and a capital letter or
/// digit, except after abbreviations. Returned pieces are whitespace-normalized
/// and together contain every non-whitespace character of the input.
pub fn split_sentences(text: &str) -> Vec<String> {
    let text = normalize_whitespace(text);
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut start = 0;
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if matches!(c, '.' | '?' | '!') {
            let mut j = i + 1;
            while j < chars.len() && (matches!(chars[j].1, '.' | '?' | '!') || is_closer(chars[j].1)) {
                j += 1;
            }
            let followed_by_space = j < chars.len() && chars[j].1.is_whitespace();
            if followed_by_space {
                let mut k = j + 1;
                while k < chars.len() && is_opener(chars[k].1) {
                    k += 1;
                }
                let starts_new =
                    k < chars.len() && (chars[k].1.is_uppercase() || chars[k].1.is_ascii_digit());
                if starts_new && !(c == '.' && j == i + 1 && is_abbreviation(&text, pos)) {
                    let end = chars[j].0;
                    let piece = text[start..end].trim();
                    if !piece.is_empty() {
                        out.push(piece.to_string());
                    }
                    start = end;
                    i = j;
                    continue;
                }
            }
            i = j;
            continue;
        }
        i += 1;
    }
    let tail = text[start..].trim();
    if !tail.is_empty() {
        out.push(tail.to_string());
    }
    out
}
