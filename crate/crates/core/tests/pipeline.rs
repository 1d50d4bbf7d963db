use std::fs;

use rminer_core::pipeline::{from_corpus, ingest_dir, messages_per_list, to_corpus, IngestOptions};
use rminer_core::ingest::{read_corpus, write_corpus};

const MSG: &str = "From a@x Mon Jan  6 10:00:00 2003\nFrom: A <a@x>\nSubject: PEP 3001: Walrus Copper Meadow\nDate: Mon, 6 Jan 2003 10:00:00 +0000\nMessage-ID: <{id}@x>\n\nThe parser moved the buffer. PEP 3001 is accepted.\n\n";

fn msg(id: &str) -> String {
    MSG.replace("{id}", id)
}

#[test]
fn ingests_layout_and_round_trips() {
    let tmp = std::env::temp_dir().join(format!("rminer-pipeline-{}", std::process::id()));
    let _ = fs::remove_dir_all(&tmp);
    fs::create_dir_all(tmp.join("archives")).unwrap();
    fs::create_dir_all(tmp.join("peps")).unwrap();
    fs::write(tmp.join("archives/python-dev.mbox"), msg("a") + &msg("b") + "garbage without postmark\n").unwrap();
    fs::write(tmp.join("archives/python-ideas.mbox"), msg("b") + &msg("c")).unwrap();
    fs::write(tmp.join("archives/notes.txt"), "ignored").unwrap();
    fs::write(tmp.join("peps/pep-3001.txt"), "PEP: 3001\nTitle: Walrus Copper Meadow\nAuthor: A <a@x>\nStatus: Accepted\nType: Standards Track\n\nBody\n").unwrap();
    fs::write(tmp.join("peps/pep-3002.txt"), "no headers at all\n").unwrap();
    fs::write(tmp.join("commits.csv"), "date,pep,status\n2002-12-01,3001,Draft\n2003-01-01,3001,Accepted\n").unwrap();

    let report = ingest_dir(&tmp, &IngestOptions::default()).unwrap();
    assert_eq!(report.block_count, 4);
    assert_eq!(report.corpus.messages.len(), 3);
    assert_eq!(report.mbox_diagnostics.len(), 0);
    // the duplicate across archives and the unparseable proposal document
    assert_eq!(report.diagnostics.len(), 2, "{:?}", report.diagnostics);
    let per_list = messages_per_list(&report.corpus);
    assert_eq!(per_list["python-dev"], 2);
    assert_eq!(per_list["python-ideas"], 1);
    let pep = &report.corpus.peps[&3001];
    assert_eq!(pep.transitions.len(), 2);
    assert_eq!(report.corpus.messages_for(3001).count(), 3);

    let mut buf = Vec::new();
    write_corpus(&mut buf, &to_corpus(&report.corpus)).unwrap();
    let back = from_corpus(read_corpus(buf.as_slice()).unwrap());
    assert_eq!(back.messages, report.corpus.messages);
    assert_eq!(back.peps, report.corpus.peps);
    fs::remove_dir_all(&tmp).unwrap();
}

#[test]
fn missing_directory_is_an_error() {
    assert!(ingest_dir(std::path::Path::new("/definitely/not/here"), &IngestOptions::default()).is_err());
}
