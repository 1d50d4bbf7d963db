//! mbox splitting and per-message header/MIME decoding.
//!
//! A block starts at a `From ` postmark line that opens the file or follows
//! a blank line. Every block either yields one [`EmailMessage`] or one
//! skip [`Diagnostic`]; problems with messages that are kept (such as an
//! unreadable date) are reported as warnings instead.

use std::collections::HashSet;
use std::sync::OnceLock;

use chrono::{DateTime, NaiveDateTime, TimeZone, Utc};
use mailparse::{MailHeaderMap, ParsedMail};
use regex::Regex;
use serde::{Deserialize, Serialize};

use super::segment::{clean_body, segment};
use super::{EmailMessage, MessageType};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagnosticKind {
    MalformedPostmark,
    LeadingGarbage,
    HeaderParse,
    MissingMessageId,
    DuplicateMessageId,
    UnparseableDate,
    BodyDecode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub source: String,
    /// 0-based block ordinal within the source.
    pub block: usize,
    pub kind: DiagnosticKind,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MboxParse {
    pub messages: Vec<EmailMessage>,
    /// One entry per skipped block.
    pub diagnostics: Vec<Diagnostic>,
    /// Issues on messages that were kept.
    pub warnings: Vec<Diagnostic>,
    pub block_count: usize,
}

fn postmark_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^From \S.*\s\d{1,2}:\d{2}(:\d{2})?\s.*\b\d{4}\b").unwrap())
}

struct Block<'a> {
    postmark: Option<&'a [u8]>,
    content: &'a [u8],
}

fn split_blocks(data: &[u8]) -> Vec<Block<'_>> {
    // line start offsets
    let mut starts = vec![0usize];
    for (i, b) in data.iter().enumerate() {
        if *b == b'\n' && i + 1 < data.len() {
            starts.push(i + 1);
        }
    }
    let line_at = |s: usize| {
        let end = data[s..].iter().position(|b| *b == b'\n').map_or(data.len(), |p| s + p);
        &data[s..end]
    };
    let is_blank = |line: &[u8]| line.iter().all(|b| b.is_ascii_whitespace());

    let mut separators = Vec::new();
    let mut prev_blank = true;
    for &s in &starts {
        let line = line_at(s);
        if prev_blank && line.starts_with(b"From ") {
            separators.push(s);
        }
        prev_blank = is_blank(line);
    }

    let mut blocks = Vec::new();
    let first = separators.first().copied().unwrap_or(data.len());
    if !data[..first].iter().all(u8::is_ascii_whitespace) {
        blocks.push(Block { postmark: None, content: &data[..first] });
    }
    for (n, &s) in separators.iter().enumerate() {
        let end = separators.get(n + 1).copied().unwrap_or(data.len());
        let postmark = line_at(s);
        let body_start = (s + postmark.len() + 1).min(end);
        blocks.push(Block { postmark: Some(postmark), content: &data[body_start..end] });
    }
    blocks
}

/// Parses an mbox byte stream. Never fails: malformed blocks become
/// diagnostics.
pub fn parse_mbox(data: &[u8], list_name: &str) -> MboxParse {
    let mut out = MboxParse::default();
    let mut seen = HashSet::new();
    let blocks = split_blocks(data);
    out.block_count = blocks.len();
    for (n, block) in blocks.into_iter().enumerate() {
        let diag = |kind: DiagnosticKind, detail: String| Diagnostic {
            source: list_name.to_string(),
            block: n,
            kind,
            detail,
        };
        let Some(postmark) = block.postmark else {
            out.diagnostics.push(diag(DiagnosticKind::LeadingGarbage, "content before first postmark line".into()));
            continue;
        };
        let postmark = String::from_utf8_lossy(postmark).trim_end().to_string();
        if !postmark_re().is_match(&postmark) {
            out.diagnostics.push(diag(DiagnosticKind::MalformedPostmark, truncate(&postmark, 80)));
            continue;
        }
        match parse_block(block.content, &postmark, list_name) {
            Ok((message, warnings)) => {
                if !seen.insert(message.message_id.clone()) {
                    out.diagnostics.push(diag(DiagnosticKind::DuplicateMessageId, message.message_id));
                    continue;
                }
                out.warnings.extend(warnings.into_iter().map(|(k, d)| diag(k, d)));
                out.messages.push(message);
            }
            Err((kind, detail)) => out.diagnostics.push(diag(kind, detail)),
        }
    }
    out
}

type BlockResult = Result<(EmailMessage, Vec<(DiagnosticKind, String)>), (DiagnosticKind, String)>;

fn parse_block(content: &[u8], postmark: &str, list_name: &str) -> BlockResult {
    let mail = mailparse::parse_mail(content).map_err(|e| (DiagnosticKind::HeaderParse, e.to_string()))?;
    let headers = mail.get_headers();
    if mail.headers.is_empty() {
        return Err((DiagnosticKind::HeaderParse, "no header lines".into()));
    }
    let message_id = headers
        .get_first_value("Message-ID")
        .map(|v| clean_id(&v))
        .filter(|v| !v.is_empty())
        .ok_or((DiagnosticKind::MissingMessageId, "no Message-ID header".into()))?;

    let mut warnings = Vec::new();
    let date = headers
        .get_first_value("Date")
        .and_then(|v| parse_header_date(&v))
        .or_else(|| postmark_date(postmark));
    if date.is_none() {
        warnings.push((DiagnosticKind::UnparseableDate, message_id.clone()));
    }

    let (author_name, author_email) = parse_author(&headers.get_first_value("From").unwrap_or_default());
    let subject = crate::text::normalize_whitespace(&headers.get_first_value("Subject").unwrap_or_default());
    let in_reply_to = headers.get_first_value("In-Reply-To").map(|v| clean_id(&v)).filter(|v| !v.is_empty());

    let mut body = String::new();
    if let Err(e) = collect_plain_text(&mail, &mut body) {
        warnings.push((DiagnosticKind::BodyDecode, format!("{message_id}: {e}")));
    }
    let body_raw = clean_body(&body);
    let paragraphs = segment(&message_id, &body_raw);
    Ok((
        EmailMessage {
            message_id,
            subject,
            author_email,
            author_name,
            date,
            in_reply_to,
            list_name: list_name.to_string(),
            body_raw,
            paragraphs,
            linked_peps: Default::default(),
            message_type: MessageType::Ordinary,
        },
        warnings,
    ))
}

fn collect_plain_text(mail: &ParsedMail<'_>, out: &mut String) -> Result<(), mailparse::MailParseError> {
    if mail.subparts.is_empty() {
        let mime = mail.ctype.mimetype.to_ascii_lowercase();
        if mime == "text/plain" || mime.is_empty() {
            let text = mail.get_body()?;
            if !out.is_empty() {
                out.push_str("\n\n");
            }
            out.push_str(&text.replace("\r\n", "\n"));
        }
        return Ok(());
    }
    for part in &mail.subparts {
        collect_plain_text(part, out)?;
    }
    Ok(())
}

fn clean_id(raw: &str) -> String {
    raw.split_whitespace().next().unwrap_or("").trim().to_string()
}

fn truncate(s: &str, n: usize) -> String {
    s.chars().take(n).collect()
}

fn parse_header_date(v: &str) -> Option<DateTime<Utc>> {
    if let Ok(t) = DateTime::parse_from_rfc2822(v.trim()) {
        return Some(t.with_timezone(&Utc));
    }
    // mailparse is lenient and yields 0 for text it cannot read
    mailparse::dateparse(v).ok().filter(|ts| *ts > 0).and_then(|ts| Utc.timestamp_opt(ts, 0).single())
}

fn postmark_date(postmark: &str) -> Option<DateTime<Utc>> {
    // "From sender  Fri Jun 23 02:56:55 2000": the last five tokens are the date
    let tokens: Vec<&str> = postmark.split_whitespace().collect();
    if tokens.len() < 6 {
        return None;
    }
    let tail = tokens[tokens.len() - 5..].join(" ");
    NaiveDateTime::parse_from_str(&tail, "%a %b %d %H:%M:%S %Y").ok().map(|t| Utc.from_utc_datetime(&t))
}

/// Splits a From header into (display name, address). Understands
/// `Name <addr>`, `addr (Name)` and the archive obfuscation `user at host`.
pub fn parse_author(raw: &str) -> (String, String) {
    let raw = crate::text::normalize_whitespace(raw);
    if let (Some(lt), Some(gt)) = (raw.find('<'), raw.rfind('>')) {
        if lt < gt {
            let name = raw[..lt].trim().trim_matches('"').trim().to_string();
            return (name, deobfuscate(&raw[lt + 1..gt]));
        }
    }
    if let (Some(lp), Some(rp)) = (raw.find('('), raw.rfind(')')) {
        if lp < rp {
            let name = raw[lp + 1..rp].trim().to_string();
            return (name, deobfuscate(&raw[..lp]));
        }
    }
    let addr = deobfuscate(&raw);
    if addr.contains('@') {
        (String::new(), addr)
    } else {
        (raw, String::new())
    }
}

fn deobfuscate(s: &str) -> String {
    s.trim().replace(" at ", "@").to_lowercase()
}
