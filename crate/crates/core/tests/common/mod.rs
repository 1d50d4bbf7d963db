#![allow(dead_code)]

use std::path::Path;

use rminer_core::evaluation::{rank_all, rank_match_table, Cell, FinalState, RankMatchTable};
use rminer_core::heuristics::RoleDirectory;
use rminer_core::pipeline::{ingest_dir, IngestOptions};
use rminer_core::ranking::Scheme;
use rminer_core::synth::{generate, SynthCorpus, SynthSpec};
use rminer_core::{score_corpus, HeuristicConfig, Lexicon, ScoredCorpus};

pub struct Planted {
    pub synth: SynthCorpus,
    pub scored: ScoredCorpus,
}

/// Generates, writes, re-ingests and scores a synthetic corpus.
pub fn planted_corpus(spec: &SynthSpec, dir: &Path, config: &HeuristicConfig) -> Planted {
    let lexicon = Lexicon::default();
    let synth = generate(spec, &lexicon).unwrap();
    synth.write_to_dir(dir).unwrap();
    let report = ingest_dir(dir, &IngestOptions::default()).unwrap();
    assert!(report.mbox_diagnostics.is_empty(), "{:?}", report.mbox_diagnostics);
    let roles = RoleDirectory::from_json(&std::fs::read_to_string(dir.join("roles.json")).unwrap()).unwrap();
    let scored = score_corpus(&report.corpus, config, &lexicon, &roles);
    Planted { synth, scored }
}

pub fn table(p: &Planted, config: &HeuristicConfig) -> RankMatchTable {
    rank_match_table(&p.synth.ground_truth, &rank_all(&p.scored.rescore(config)))
}

/// Share of entries within top-k for a scheme, both states pooled.
pub fn top_k_share(t: &RankMatchTable, scheme: Scheme, k: usize, total: usize) -> f64 {
    let hits: usize = FinalState::BOTH.iter().map(|&state| t.top_k(Cell { scheme, state }, k)).sum();
    hits as f64 / total as f64
}

pub fn scratch_dir(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("rminer-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}
