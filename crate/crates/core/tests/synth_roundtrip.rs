mod common;

use std::fs;
use std::path::Path;

use common::{planted_corpus, scratch_dir};
use rminer_core::evaluation::load_ground_truth;
use rminer_core::heuristics::AuthorRole;
use rminer_core::synth::{PlantedSpec, Range, SynthSpec};
use rminer_core::text::normalize_for_match;
use rminer_core::{HeuristicConfig, HeuristicId};

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    for sub in ["", "archives", "peps"] {
        let mut entries: Vec<_> = fs::read_dir(dir.join(sub)).unwrap().map(|e| e.unwrap().path()).filter(|p| p.is_file()).collect();
        entries.sort();
        out.extend(entries.into_iter().map(|p| (p.strip_prefix(dir).unwrap().display().to_string(), fs::read(&p).unwrap())));
    }
    out
}

#[test]
fn same_seed_same_bytes() {
    let spec = SynthSpec { seed: 99, n_peps: 5, adversarial: true, ..SynthSpec::default() };
    let (a, b) = (scratch_dir("bytes-a"), scratch_dir("bytes-b"));
    planted_corpus(&spec, &a, &HeuristicConfig::default());
    planted_corpus(&spec, &b, &HeuristicConfig::default());
    let (fa, fb) = (files(&a), files(&b));
    assert_eq!(fa.len(), 5 + 5);
    assert_eq!(fa, fb);
    fs::remove_dir_all(&a).unwrap();
    fs::remove_dir_all(&b).unwrap();
}

#[test]
fn planted_sentences_survive_ingestion() {
    let spec = SynthSpec {
        seed: 5,
        n_peps: 6,
        messages_per_pep: Range { min: 3, max: 8 },
        planted: vec![
            PlantedSpec { author_role: Some(AuthorRole::Bdfl), days_offset: Some(0), ..Default::default() },
            PlantedSpec { author_role: Some(AuthorRole::PepAuthor), days_offset: Some(-7), ..Default::default() },
            PlantedSpec { author_role: Some(AuthorRole::CoreDeveloper), days_offset: Some(6), ..Default::default() },
        ],
        ..SynthSpec::default()
    };
    let dir = scratch_dir("survive");
    let config = HeuristicConfig::default();
    let p = planted_corpus(&spec, &dir, &config);

    let reloaded = load_ground_truth(&fs::read_to_string(dir.join("ground_truth.csv")).unwrap()).unwrap();
    assert_eq!(reloaded.entries, p.synth.ground_truth);
    assert!(reloaded.row_errors.is_empty());

    for info in &p.synth.planted {
        let s = p
            .scored
            .sentences()
            .find(|s| s.message_id == info.message_id && normalize_for_match(&s.text) == normalize_for_match(&info.sentence))
            .unwrap_or_else(|| panic!("planted sentence of {} not found", info.pep));
        assert_eq!(s.pep, info.pep);
        assert_eq!(s.bases[HeuristicId::Dfsc.index()], 0.9, "{}", info.pep);
        assert_eq!(s.bases[HeuristicId::Tpcs.index()], 0.9);
        assert_eq!(s.bases[HeuristicId::Rfute.index()], 0.9);
        assert_eq!(s.bases[HeuristicId::Nt.index()], 0.0);
        let ar = config.role_scores.score(info.author_role);
        assert_eq!(s.bases[HeuristicId::Ar.index()], ar, "{} {:?}", info.pep, info.author_role);
    }
    assert_eq!(p.synth.planted[0].days_offset, 0);
    assert_eq!(p.synth.planted[2].author_role, AuthorRole::CoreDeveloper);
    fs::remove_dir_all(&dir).unwrap();
}
