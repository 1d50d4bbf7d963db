//! Static HTML pages: an index plus one page per proposal with its state
//! timeline, both rankings and the linked messages. Candidate sentences
//! (fs > 0) are underlined; ground-truth sentences are highlighted.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use html_escape::{encode_double_quoted_attribute as attr, encode_text as text};
use rminer_core::evaluation::GroundTruthEntry;
use rminer_core::heuristics::ScoredSentence;
use rminer_core::ranking::{rank_mbs, rank_sbs, RankedList};
use rminer_core::text::normalize_for_match;
use rminer_core::{EmailMessage, LinkedCorpus, PepRecord, ScoredCorpus};

const STYLE: &str = "body{font-family:sans-serif;max-width:60em;margin:2em auto;padding:0 1em}\
table{border-collapse:collapse;margin-bottom:1.5em}td,th{border:1px solid #ccc;padding:.25em .5em;vertical-align:top}\
th{background:#f3f3f3}.num{text-align:right}.meta{color:#555;font-size:.9em}\
u{text-decoration-color:#b00}.truth{background:#fff3b0}section{border-top:1px solid #ddd;margin-top:1em}";

pub struct ReportInput<'a> {
    pub linked: &'a LinkedCorpus,
    pub scored: &'a ScoredCorpus,
    pub truth: &'a [GroundTruthEntry],
    /// Rows shown in each ranking table.
    pub top: usize,
}

/// File name → page contents, in file-name order.
pub fn render(input: &ReportInput, peps: &[u32]) -> BTreeMap<String, String> {
    let mut pages = BTreeMap::new();
    let mut rows = Vec::new();
    for &n in peps {
        let (Some(pep), Some(scores)) = (input.linked.peps.get(&n), input.scored.peps.get(&n)) else { continue };
        let sbs = rank_sbs(n, &scores.sentences);
        let mbs = rank_mbs(n, &scores.sentences);
        let messages: Vec<&EmailMessage> = input.linked.messages_for(n).collect();
        pages.insert(page_name(n), pep_page(pep, &scores.sentences, &sbs, &mbs, &messages, input));
        rows.push((pep, messages.len(), sbs.entries.first().and_then(|e| e.text.clone())));
    }
    pages.insert("index.html".into(), index_page(&rows));
    pages
}

pub fn page_name(pep: u32) -> String {
    format!("pep-{pep:04}.html")
}

fn head(out: &mut String, title: &str) {
    let _ = write!(
        out,
        "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>{}</title>\n<style>{STYLE}</style>\n</head>\n<body>\n",
        text(title)
    );
}

fn index_page(rows: &[(&PepRecord, usize, Option<String>)]) -> String {
    let mut out = String::new();
    head(&mut out, "Proposals");
    out.push_str("<h1>Proposals</h1>\n<table>\n<tr><th>Proposal</th><th>Title</th><th>Final state</th><th>Messages</th><th>Top sentence</th></tr>\n");
    for (pep, messages, top) in rows {
        let _ = writeln!(
            out,
            "<tr><td><a href=\"{}\">PEP {}</a></td><td>{}</td><td>{}</td><td class=\"num\">{messages}</td><td>{}</td></tr>",
            page_name(pep.number),
            pep.number,
            text(&pep.title),
            text(pep.final_state.as_str()),
            text(top.as_deref().unwrap_or(""))
        );
    }
    out.push_str("</table>\n</body>\n</html>\n");
    out
}

fn date(d: Option<chrono::DateTime<chrono::Utc>>) -> String {
    d.map_or_else(|| "undated".into(), |d| d.format("%Y-%m-%d %H:%M").to_string())
}

fn pep_page(
    pep: &PepRecord,
    sentences: &[ScoredSentence],
    sbs: &RankedList,
    mbs: &RankedList,
    messages: &[&EmailMessage],
    input: &ReportInput,
) -> String {
    let anchors: HashMap<&str, usize> = messages.iter().enumerate().map(|(i, m)| (m.message_id.as_str(), i)).collect();
    let scores: HashMap<(&str, usize), f64> =
        sentences.iter().map(|s| ((s.message_id.as_str(), s.sentence_index), s.fs())).collect();
    let truth: BTreeSet<(&str, String)> = input
        .truth
        .iter()
        .filter(|e| e.pep == pep.number)
        .map(|e| (e.message_id.as_str(), normalize_for_match(&e.sentence_text)))
        .collect();
    let is_truth = |id: &str, s: &str| truth.contains(&(id, normalize_for_match(s)));
    let link = |id: &str, sentence: Option<usize>| match (anchors.get(id), sentence) {
        (Some(m), Some(s)) => format!("#m{m}-s{s}"),
        (Some(m), None) => format!("#m{m}"),
        _ => String::new(),
    };

    let mut out = String::new();
    let title = format!("PEP {}: {}", pep.number, pep.title);
    head(&mut out, &title);
    let _ = writeln!(out, "<p><a href=\"index.html\">All proposals</a></p>\n<h1>{}</h1>", text(&title));
    let authors: Vec<String> = pep.authors.iter().map(|a| a.to_string()).collect();
    let _ = write!(out, "<p class=\"meta\">Final state: {}. Authors: {}.", text(pep.final_state.as_str()), text(&authors.join(", ")));
    if let Some(d) = &pep.bdfl_delegate {
        let _ = write!(out, " Delegate: {}.", text(&d.to_string()));
    }
    out.push_str("</p>\n");

    out.push_str("<h2>State timeline</h2>\n");
    if pep.transitions.is_empty() {
        out.push_str("<p>No state commits.</p>\n");
    } else {
        out.push_str("<table>\n<tr><th>Date</th><th>From</th><th>To</th><th>Commit</th></tr>\n");
        for t in &pep.transitions {
            let _ = writeln!(
                out,
                "<tr><td>{}</td><td>{}</td><td>{}</td><td>{}</td></tr>",
                date(Some(t.date)),
                text(t.from_state.as_ref().map_or("", |s| s.as_str())),
                text(t.to_state.as_str()),
                text(t.source_commit.as_deref().unwrap_or(""))
            );
        }
        out.push_str("</table>\n");
    }

    let by_id: HashMap<&str, &EmailMessage> = messages.iter().map(|m| (m.message_id.as_str(), *m)).collect();
    let _ = writeln!(out, "<h2>Sentence-based ranking</h2>\n<p class=\"meta\">{} candidate sentences.</p>", sbs.len());
    out.push_str("<table>\n<tr><th>Rank</th><th>Score</th><th>Sentence</th><th>Author</th><th>Date</th></tr>\n");
    for e in sbs.entries.iter().take(input.top) {
        let m = by_id.get(e.message_id.as_str());
        let sentence = e.text.as_deref().unwrap_or("");
        let class = if is_truth(&e.message_id, sentence) { " class=\"truth\"" } else { "" };
        let _ = writeln!(
            out,
            "<tr><td class=\"num\">{}</td><td class=\"num\">{:.2}</td><td{class}><a href=\"{}\">{}</a></td><td>{}</td><td>{}</td></tr>",
            e.rank,
            e.score,
            attr(&link(&e.message_id, e.sentence_index)),
            text(sentence),
            text(m.map_or("", |m| m.author_name.as_str())),
            date(m.and_then(|m| m.date))
        );
    }
    out.push_str("</table>\n");

    let _ = writeln!(out, "<h2>Message-based ranking</h2>\n<p class=\"meta\">{} candidate messages.</p>", mbs.len());
    out.push_str("<table>\n<tr><th>Rank</th><th>Score</th><th>Message</th><th>Author</th><th>Date</th><th>Candidates</th></tr>\n");
    for e in mbs.entries.iter().take(input.top) {
        let m = by_id.get(e.message_id.as_str());
        let _ = writeln!(
            out,
            "<tr><td class=\"num\">{}</td><td class=\"num\">{:.2}</td><td><a href=\"{}\">{}</a></td><td>{}</td><td>{}</td><td class=\"num\">{}</td></tr>",
            e.rank,
            e.score,
            attr(&link(&e.message_id, None)),
            text(m.map_or(e.message_id.as_str(), |m| m.subject.as_str())),
            text(m.map_or("", |m| m.author_name.as_str())),
            date(m.and_then(|m| m.date)),
            e.members.len()
        );
    }
    out.push_str("</table>\n");

    out.push_str("<h2>Messages</h2>\n");
    for (i, m) in messages.iter().enumerate() {
        let _ = writeln!(
            out,
            "<section id=\"m{i}\">\n<h3>{}</h3>\n<p class=\"meta\">{} &lt;{}&gt;, {}, {}</p>",
            text(&m.subject),
            text(&m.author_name),
            text(&m.author_email),
            date(m.date),
            text(&m.message_id)
        );
        for p in &m.paragraphs {
            if let Some(h) = &p.header {
                let _ = writeln!(out, "<h4>{}</h4>", text(h));
            }
            out.push_str("<p>");
            for (j, s) in p.sentences.iter().enumerate() {
                if j > 0 {
                    out.push(' ');
                }
                let fs = scores.get(&(m.message_id.as_str(), s.sentence_index)).copied().unwrap_or(0.0);
                let class = if is_truth(&m.message_id, &s.text) { " class=\"truth\"" } else { "" };
                if fs > 0.0 {
                    let _ = write!(out, "<u id=\"m{i}-s{}\" title=\"fs {fs:.2}\"{class}>{}</u>", s.sentence_index, text(&s.text));
                } else {
                    let _ = write!(out, "<span id=\"m{i}-s{}\"{class}>{}</span>", s.sentence_index, text(&s.text));
                }
            }
            out.push_str("</p>\n");
        }
        out.push_str("</section>\n");
    }
    out.push_str("</body>\n</html>\n");
    out
}
