//! Line-delimited corpus file: one JSON object per proposal or message,
//! tagged by `kind`. Proposals are written first, in number order, followed
//! by messages in their stored order.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{EmailMessage, PepRecord};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CorpusRecord {
    Pep(PepRecord),
    Message(EmailMessage),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    pub peps: BTreeMap<u32, PepRecord>,
    pub messages: Vec<EmailMessage>,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("corpus i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("corpus line {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
    #[error("corpus line {line}: duplicate {what}")]
    Duplicate { line: usize, what: String },
}

pub fn write_corpus<W: Write>(mut w: W, corpus: &Corpus) -> Result<(), CorpusError> {
    for pep in corpus.peps.values() {
        let line = serde_json::to_string(&CorpusRecord::Pep(pep.clone())).expect("records serialize");
        writeln!(w, "{line}")?;
    }
    for m in &corpus.messages {
        let line = serde_json::to_string(&CorpusRecord::Message(m.clone())).expect("records serialize");
        writeln!(w, "{line}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_corpus<R: BufRead>(r: R) -> Result<Corpus, CorpusError> {
    let mut corpus = Corpus::default();
    let mut ids = std::collections::HashSet::new();
    for (n, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: CorpusRecord =
            serde_json::from_str(&line).map_err(|source| CorpusError::Json { line: n + 1, source })?;
        match record {
            CorpusRecord::Pep(p) => {
                if corpus.peps.insert(p.number, p.clone()).is_some() {
                    return Err(CorpusError::Duplicate { line: n + 1, what: format!("PEP {}", p.number) });
                }
            }
            CorpusRecord::Message(m) => {
                if !ids.insert(m.message_id.clone()) {
                    return Err(CorpusError::Duplicate { line: n + 1, what: m.message_id });
                }
                corpus.messages.push(m);
            }
        }
    }
    Ok(corpus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{parse_mbox, parse_pep_document, StateVocabulary};
    use proptest::prelude::*;

    #[test]
    fn duplicate_messages_rejected() {
        let mbox = "From a@b.c Mon Mar  3 17:52:35 2003\nMessage-ID: <x@y>\n\nHi.\n";
        let m = parse_mbox(mbox.as_bytes(), "l").messages.remove(0);
        let corpus = Corpus { peps: BTreeMap::new(), messages: vec![m.clone(), m] };
        let mut buf = Vec::new();
        write_corpus(&mut buf, &corpus).unwrap();
        assert!(matches!(read_corpus(buf.as_slice()), Err(CorpusError::Duplicate { line: 2, .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn round_trip(subject in "[ -~]{0,40}", body in "[ -~\n]{0,200}", n in 1u32..9999) {
            let mbox = format!(
                "From a@b.c Mon Mar  3 17:52:35 2003\nMessage-ID: <id{n}@x>\nSubject: {}\nFrom: A <a@b.c>\n\n{}\n",
                subject.replace('\n', " "),
                body.lines().map(|l| if l.starts_with("From ") { format!(">{l}") } else { l.to_string() }).collect::<Vec<_>>().join("\n"),
            );
            let parsed = parse_mbox(mbox.as_bytes(), "python-dev");
            let mut peps = BTreeMap::new();
            let doc = format!("PEP: {n}\nTitle: T {n}\nAuthor: A <a@b.c>\nStatus: Draft\n");
            peps.insert(n, parse_pep_document(&doc, &StateVocabulary::default()).unwrap());
            let corpus = Corpus { peps, messages: parsed.messages };
            let mut buf = Vec::new();
            write_corpus(&mut buf, &corpus).unwrap();
            let back = read_corpus(buf.as_slice()).unwrap();
            prop_assert_eq!(back, corpus);
        }
    }
}
