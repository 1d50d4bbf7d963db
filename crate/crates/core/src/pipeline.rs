//! Ingestion of an input directory into a linked corpus.
//!
//! Layout: `archives/*.mbox` (list name = file stem), `peps/*.txt` or
//! `peps/*.rst`, and an optional `commits.csv` (`date,pep,status[,commit]`).

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::ingest::{
    attach_histories, extract_state_history, parse_commit_log, parse_mbox, parse_pep_document, Corpus, DateWindow,
    Diagnostic, StateVocabulary,
};
use crate::linker::{classify_message_types, link_messages, LinkedCorpus, MessageTypeRules};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Input(String),
}

#[derive(Debug, Clone, Default)]
pub struct IngestOptions {
    pub vocabulary: StateVocabulary,
    pub window: DateWindow,
    pub message_types: MessageTypeRules,
}

#[derive(Debug, Clone, Default)]
pub struct IngestReport {
    pub corpus: LinkedCorpus,
    /// Skipped mbox blocks.
    pub mbox_diagnostics: Vec<Diagnostic>,
    /// Kept messages with a problem (e.g. unparseable date).
    pub mbox_warnings: Vec<Diagnostic>,
    pub block_count: usize,
    /// Proposal documents, commit log and cross-file problems.
    pub diagnostics: Vec<String>,
}

fn read(path: &Path) -> Result<Vec<u8>, PipelineError> {
    fs::read(path).map_err(|source| PipelineError::Io { path: path.to_path_buf(), source })
}

fn sorted_files(dir: &Path, extensions: &[&str]) -> Result<Vec<PathBuf>, PipelineError> {
    if !dir.is_dir() {
        return Ok(Vec::new());
    }
    let entries = fs::read_dir(dir).map_err(|source| PipelineError::Io { path: dir.to_path_buf(), source })?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().and_then(|e| e.to_str()).is_some_and(|e| extensions.contains(&e)))
        .collect();
    files.sort();
    Ok(files)
}

/// Parses archives, proposal documents and the commit log, then links
/// and classifies messages.
pub fn ingest_dir(dir: &Path, options: &IngestOptions) -> Result<IngestReport, PipelineError> {
    if !dir.is_dir() {
        return Err(PipelineError::Input(format!("{} is not a directory", dir.display())));
    }
    let mut report = IngestReport::default();
    let mut corpus = Corpus::default();
    let mut seen = BTreeSet::new();
    for path in sorted_files(&dir.join("archives"), &["mbox"])? {
        let list = path.file_stem().and_then(|s| s.to_str()).unwrap_or("unknown").to_string();
        let parsed = parse_mbox(&read(&path)?, &list);
        report.block_count += parsed.block_count;
        report.mbox_diagnostics.extend(parsed.diagnostics);
        report.mbox_warnings.extend(parsed.warnings);
        for m in parsed.messages {
            if seen.insert(m.message_id.clone()) {
                corpus.messages.push(m);
            } else {
                report.diagnostics.push(format!("{}: message {} already seen in another archive", path.display(), m.message_id));
            }
        }
    }
    for path in sorted_files(&dir.join("peps"), &["txt", "rst"])? {
        let text = String::from_utf8_lossy(&read(&path)?).into_owned();
        match parse_pep_document(&text, &options.vocabulary) {
            Ok(p) => match corpus.peps.entry(p.number) {
                Entry::Occupied(_) => report.diagnostics.push(format!("{}: duplicate proposal {}", path.display(), p.number)),
                Entry::Vacant(slot) => {
                    slot.insert(p);
                }
            },
            Err(e) => report.diagnostics.push(format!("{}: {e}", path.display())),
        }
    }
    let log = dir.join("commits.csv");
    if log.is_file() {
        let (entries, problems) =
            parse_commit_log(read(&log)?.as_slice()).map_err(|e| PipelineError::Input(format!("{}: {e}", log.display())))?;
        report.diagnostics.extend(problems);
        let history = extract_state_history(&entries, &options.vocabulary, &options.window);
        report.diagnostics.extend(history.diagnostics.iter().cloned());
        attach_histories(&mut corpus.peps, &history);
    }
    classify_message_types(&mut corpus.messages, &options.message_types);
    report.corpus = link_messages(corpus.messages, corpus.peps);
    Ok(report)
}

/// Converts a linked corpus back to the serializable form.
pub fn to_corpus(linked: &LinkedCorpus) -> Corpus {
    Corpus { peps: linked.peps.clone(), messages: linked.messages.clone() }
}

pub fn from_corpus(corpus: Corpus) -> LinkedCorpus {
    LinkedCorpus::from_linked(corpus.messages, corpus.peps)
}

/// Messages per list, for the ingest summary.
pub fn messages_per_list(linked: &LinkedCorpus) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for m in &linked.messages {
        *out.entry(m.list_name.clone()).or_insert(0) += 1;
    }
    out
}
