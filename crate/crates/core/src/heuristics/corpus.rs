use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use chrono::{DateTime, Utc};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::categories::base_vector;
use super::context::{days_between, is_pronouncement_request, samcer_class, sentence_contexts};
use super::{final_score, HeuristicConfig, HeuristicId, HeuristicVector, MessageContext, RoleDirectory, ScoreError};
use super::HEURISTIC_COUNT;
use crate::analysis::Lexicon;
use crate::linker::LinkedCorpus;
use crate::text::normalize_subject;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredSentence {
    pub pep: u32,
    pub message_id: String,
    pub message_date: Option<DateTime<Utc>>,
    pub paragraph_index: usize,
    pub sentence_index: usize,
    pub text: String,
    pub bases: [f64; HEURISTIC_COUNT],
    pub vector: HeuristicVector,
}

impl ScoredSentence {
    pub fn fs(&self) -> f64 {
        self.vector.fs
    }
}

/// Scored sentences of one proposal in (message order, sentence index).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PepScores {
    pub pep: u32,
    pub sentences: Vec<ScoredSentence>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ScoredCorpus {
    pub peps: BTreeMap<u32, PepScores>,
}

/// One line of the scored output file.
#[derive(Serialize, Deserialize)]
struct ScoredLine {
    pep: u32,
    message_id: String,
    sentence_index: usize,
    component: BTreeMap<HeuristicId, f64>,
    fs: f64,
}

/// Builds message contexts for every (proposal, message) pair and scores
/// every sentence. Output order depends only on the corpus contents.
pub fn score_corpus(
    linked: &LinkedCorpus,
    config: &HeuristicConfig,
    lexicon: &Lexicon,
    roles: &RoleDirectory,
) -> ScoredCorpus {
    let directory = roles.resolve();
    let mut jobs = Vec::new();
    for (&n, pep) in &linked.peps {
        let mut request_subjects: BTreeSet<String> = BTreeSet::new();
        for message in linked.messages_for(n) {
            let subject = normalize_subject(&message.subject);
            let shares = !subject.is_empty() && request_subjects.contains(&subject);
            if is_pronouncement_request(message, lexicon) && !subject.is_empty() {
                request_subjects.insert(subject);
            }
            jobs.push((pep, message, shares));
        }
    }
    let scored: Vec<Vec<ScoredSentence>> = jobs
        .par_iter()
        .map(|&(pep, message, shares)| {
            let author_role = directory.role_of(&message.author_name, &message.author_email, Some(pep));
            let ctx = MessageContext {
                pep: pep.number,
                message_id: message.message_id.clone(),
                author_role,
                message_type: message.message_type,
                days_from_decisive_commit: days_between(message, pep, &config.decisive_states),
                subject_types: lexicon.match_term_types(&message.subject),
                shares_request_subject: shares,
                samcer_class: samcer_class(message, author_role, lexicon),
                paragraph_count: message.paragraphs.len(),
            };
            let contexts = sentence_contexts(message, &ctx, lexicon);
            message
                .sentences()
                .zip(contexts)
                .map(|(s, sc)| {
                    let bases = base_vector(&sc, config, lexicon);
                    ScoredSentence {
                        pep: pep.number,
                        message_id: message.message_id.clone(),
                        message_date: message.date,
                        paragraph_index: s.paragraph_index,
                        sentence_index: s.sentence_index,
                        text: s.text.clone(),
                        bases,
                        vector: final_score(&bases, config).expect("13 components"),
                    }
                })
                .collect()
        })
        .collect();
    let mut out = ScoredCorpus::default();
    for n in linked.peps.keys() {
        out.peps.insert(*n, PepScores { pep: *n, sentences: Vec::new() });
    }
    for sentences in scored {
        if let Some(first) = sentences.first() {
            let n = first.pep;
            out.peps.get_mut(&n).expect("pep present").sentences.extend(sentences);
        }
    }
    out
}

impl ScoredCorpus {
    /// Re-finalizes stored bases under another config (deltas, disabled
    /// set). Base values themselves are not recomputed.
    pub fn rescore(&self, config: &HeuristicConfig) -> ScoredCorpus {
        let mut out = self.clone();
        for scores in out.peps.values_mut() {
            for s in &mut scores.sentences {
                s.vector = final_score(&s.bases, config).expect("13 components");
            }
        }
        out
    }

    pub fn sentences(&self) -> impl Iterator<Item = &ScoredSentence> {
        self.peps.values().flat_map(|p| p.sentences.iter())
    }

    pub fn sentence_count(&self) -> usize {
        self.peps.values().map(|p| p.sentences.len()).sum()
    }

    /// Line-delimited JSON: pep, message_id, sentence_index, components, fs.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for s in self.sentences() {
            let line = ScoredLine {
                pep: s.pep,
                message_id: s.message_id.clone(),
                sentence_index: s.sentence_index,
                component: HeuristicId::ALL.iter().map(|h| (*h, s.vector.get(*h))).collect(),
                fs: s.vector.fs,
            };
            serde_json::to_writer(&mut w, &line)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// Reads the scored output back as `(pep, message_id, sentence_index,
/// vector)` rows.
pub fn read_scored_jsonl<R: BufRead>(r: R) -> Result<Vec<(u32, String, usize, HeuristicVector)>, ScoreError> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line.map_err(|e| ScoreError::Invalid(format!("line {}: {e}", i + 1)))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: ScoredLine =
            serde_json::from_str(&line).map_err(|e| ScoreError::Invalid(format!("line {}: {e}", i + 1)))?;
        if rec.component.len() != HEURISTIC_COUNT {
            return Err(ScoreError::ComponentCount(rec.component.len()));
        }
        let mut components = [0.0; HEURISTIC_COUNT];
        for (h, v) in rec.component {
            components[h.index()] = v;
        }
        out.push((rec.pep, rec.message_id, rec.sentence_index, HeuristicVector { components, fs: rec.fs }));
    }
    Ok(out)
}
