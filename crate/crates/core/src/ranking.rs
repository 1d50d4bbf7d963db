//! Sentence-based (SBS) and message-based (MBS) rankings per proposal.
//!
//! SBS orders sentences by final score, ties by earlier message date
//! (undated last), message id and sentence index. MBS scores a message by
//! its best sentence and breaks ties by the same date and id keys, so the
//! message order agrees with the order of each message's top sentence in
//! SBS. Only candidates with a positive score are ranked.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::heuristics::{ScoredCorpus, ScoredSentence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Scheme {
    Sbs,
    Mbs,
}

impl Scheme {
    pub const BOTH: [Scheme; 2] = [Scheme::Sbs, Scheme::Mbs];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Sbs => "SBS",
            Scheme::Mbs => "MBS",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sbs" => Ok(Scheme::Sbs),
            "mbs" => Ok(Scheme::Mbs),
            other => Err(format!("unknown scheme {other:?} (expected sbs or mbs)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberSentence {
    pub sentence_index: usize,
    pub score: f64,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedEntry {
    pub rank: usize,
    pub score: f64,
    pub message_id: String,
    /// SBS only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sentence_index: Option<usize>,
    /// SBS: the sentence text.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    /// MBS only: positive-score sentences of the message, best first.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub members: Vec<MemberSentence>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedList {
    pub pep: u32,
    pub scheme: Scheme,
    pub entries: Vec<RankedEntry>,
}

impl RankedList {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn truncate(&mut self, k: usize) {
        self.entries.truncate(k);
    }

    /// Rank of a sentence (SBS) or of the message containing it (MBS).
    pub fn rank_of(&self, message_id: &str, sentence_index: usize) -> Option<usize> {
        self.entries
            .iter()
            .find(|e| {
                e.message_id == message_id
                    && match self.scheme {
                        Scheme::Sbs => e.sentence_index == Some(sentence_index),
                        Scheme::Mbs => true,
                    }
            })
            .map(|e| e.rank)
    }
}

fn date_key(d: Option<DateTime<Utc>>) -> (bool, Option<DateTime<Utc>>) {
    (d.is_none(), d)
}

/// SBS comparison: score desc, date asc (undated last), message id, index.
pub fn sbs_order(a: &ScoredSentence, b: &ScoredSentence) -> Ordering {
    b.fs()
        .total_cmp(&a.fs())
        .then_with(|| date_key(a.message_date).cmp(&date_key(b.message_date)))
        .then_with(|| a.message_id.cmp(&b.message_id))
        .then_with(|| a.sentence_index.cmp(&b.sentence_index))
}

pub fn rank_sbs(pep: u32, sentences: &[ScoredSentence]) -> RankedList {
    let mut kept: Vec<&ScoredSentence> = sentences.iter().filter(|s| s.fs() > 0.0).collect();
    kept.sort_by(|a, b| sbs_order(a, b));
    let entries = kept
        .into_iter()
        .enumerate()
        .map(|(i, s)| RankedEntry {
            rank: i + 1,
            score: s.fs(),
            message_id: s.message_id.clone(),
            sentence_index: Some(s.sentence_index),
            text: Some(s.text.clone()),
            members: Vec::new(),
        })
        .collect();
    RankedList { pep, scheme: Scheme::Sbs, entries }
}

pub fn rank_mbs(pep: u32, sentences: &[ScoredSentence]) -> RankedList {
    struct Group<'a> {
        date: Option<DateTime<Utc>>,
        members: Vec<&'a ScoredSentence>,
    }
    let mut groups: BTreeMap<&str, Group> = BTreeMap::new();
    for s in sentences.iter().filter(|s| s.fs() > 0.0) {
        groups.entry(&s.message_id).or_insert_with(|| Group { date: s.message_date, members: Vec::new() }).members.push(s);
    }
    let mut rows: Vec<(&str, Group)> = groups.into_iter().collect();
    for (_, g) in &mut rows {
        g.members.sort_by(|a, b| b.fs().total_cmp(&a.fs()).then_with(|| a.sentence_index.cmp(&b.sentence_index)));
    }
    rows.sort_by(|(ida, a), (idb, b)| {
        b.members[0]
            .fs()
            .total_cmp(&a.members[0].fs())
            .then_with(|| date_key(a.date).cmp(&date_key(b.date)))
            .then_with(|| ida.cmp(idb))
    });
    let entries = rows
        .into_iter()
        .enumerate()
        .map(|(i, (id, g))| RankedEntry {
            rank: i + 1,
            score: g.members[0].fs(),
            message_id: id.to_string(),
            sentence_index: None,
            text: None,
            members: g
                .members
                .iter()
                .map(|s| MemberSentence { sentence_index: s.sentence_index, score: s.fs(), text: s.text.clone() })
                .collect(),
        })
        .collect();
    RankedList { pep, scheme: Scheme::Mbs, entries }
}

pub fn rank(pep: u32, sentences: &[ScoredSentence], scheme: Scheme) -> RankedList {
    match scheme {
        Scheme::Sbs => rank_sbs(pep, sentences),
        Scheme::Mbs => rank_mbs(pep, sentences),
    }
}

/// Rankings for every proposal of a scored corpus.
pub fn rank_corpus(scored: &ScoredCorpus, scheme: Scheme) -> BTreeMap<u32, RankedList> {
    scored.peps.iter().map(|(&n, p)| (n, rank(n, &p.sentences, scheme))).collect()
}

/// One JSON line per ranked list.
pub fn write_ranked_jsonl<'a, W: Write, I: IntoIterator<Item = &'a RankedList>>(mut w: W, lists: I) -> std::io::Result<()> {
    for l in lists {
        serde_json::to_writer(&mut w, l)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_ranked_jsonl(text: &str) -> Result<Vec<RankedList>, serde_json::Error> {
    text.lines().filter(|l| !l.trim().is_empty()).map(serde_json::from_str).collect()
}

#[cfg(test)]
pub(crate) mod tests {
    use chrono::TimeZone;
    use proptest::prelude::*;

    use super::*;
    use crate::heuristics::{HeuristicVector, HEURISTIC_COUNT};

    pub(crate) fn scored(message: &str, day: Option<u32>, index: usize, fs: f64) -> ScoredSentence {
        let mut components = [0.0; HEURISTIC_COUNT];
        components[0] = fs;
        ScoredSentence {
            pep: 1,
            message_id: message.into(),
            message_date: day.map(|d| Utc.with_ymd_and_hms(2001, 1, 1, 0, 0, 0).unwrap() + chrono::Duration::days(d.into())),
            paragraph_index: 0,
            sentence_index: index,
            text: format!("{message}-{index}"),
            bases: components,
            vector: HeuristicVector { components, fs },
        }
    }

    #[test]
    fn sbs_tie_break_by_date() {
        let s = vec![scored("b", Some(5), 0, 0.9), scored("a", Some(1), 0, 2.1), scored("c", Some(2), 0, 0.9)];
        let l = rank_sbs(1, &s);
        let ids: Vec<_> = l.entries.iter().map(|e| e.message_id.as_str()).collect();
        assert_eq!(ids, ["a", "c", "b"]);
        assert_eq!(l.entries.iter().map(|e| e.rank).collect::<Vec<_>>(), [1, 2, 3]);
    }

    #[test]
    fn nonpositive_excluded() {
        let s = vec![scored("a", Some(1), 0, 0.0), scored("b", Some(1), 0, -0.8)];
        assert!(rank_sbs(1, &s).is_empty());
        assert!(rank_mbs(1, &s).is_empty());
    }

    #[test]
    fn undated_sort_last() {
        let s = vec![scored("a", None, 0, 1.0), scored("b", Some(9), 0, 1.0)];
        assert_eq!(rank_sbs(1, &s).entries[0].message_id, "b");
        assert_eq!(rank_mbs(1, &s).entries[0].message_id, "b");
    }

    #[test]
    fn single_sentence_mbs() {
        let l = rank_mbs(1, &[scored("m", Some(0), 0, 1.5)]);
        assert_eq!(l.len(), 1);
        assert_eq!(l.entries[0].rank, 1);
        assert_eq!(l.entries[0].score, 1.5);
    }

    /// Sentences of one message at SBS ranks 3 and 8: the message takes
    /// rank 3 and carries both sentences.
    #[test]
    fn ranks_three_and_eight() {
        let mut s = Vec::new();
        let scores = [5.0, 4.5, 4.0, 3.5, 3.4, 3.3, 3.2, 3.0];
        for (i, fs) in scores.iter().enumerate() {
            if i == 2 || i == 7 {
                continue;
            }
            s.push(scored(&format!("other{i}"), Some(i as u32), 0, *fs));
        }
        s.push(scored("target", Some(3), 0, 4.0));
        s.push(scored("target", Some(3), 5, 3.0));
        let sbs = rank_sbs(1, &s);
        assert_eq!(sbs.rank_of("target", 0), Some(3));
        assert_eq!(sbs.rank_of("target", 5), Some(8));
        let mbs = rank_mbs(1, &s);
        assert_eq!(mbs.rank_of("target", 5), Some(3));
        let entry = &mbs.entries[2];
        assert_eq!(entry.members.iter().map(|m| m.sentence_index).collect::<Vec<_>>(), [0, 5]);
    }

    #[test]
    fn jsonl_round_trip() {
        let s = vec![scored("a", Some(1), 0, 1.0), scored("a", Some(1), 1, 0.5)];
        let lists = [rank_sbs(1, &s), rank_mbs(1, &s)];
        let mut buf = Vec::new();
        write_ranked_jsonl(&mut buf, &lists).unwrap();
        let back = read_ranked_jsonl(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back, lists);
    }

    /// Up to 50 sentences over 6 messages; messages m4 and m5 are undated.
    fn instance() -> impl Strategy<Value = Vec<ScoredSentence>> {
        prop::collection::vec((0u8..6, 0u8..8), 1..50).prop_map(|rows| {
            rows.into_iter()
                .enumerate()
                .map(|(i, (m, score))| {
                    let day = (m < 4).then_some(u32::from(m) % 3);
                    scored(&format!("m{m}"), day, i, f64::from(score) * 0.3 - 0.3)
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn sbs_matches_independent_sort(s in instance()) {
            // oracle: stable sort by a composite key after filtering
            let mut oracle: Vec<_> = s.iter().filter(|x| x.fs() > 0.0).collect();
            oracle.sort_by(|a, b| {
                let ka = (a.message_date.is_none(), a.message_date, a.message_id.clone(), a.sentence_index);
                let kb = (b.message_date.is_none(), b.message_date, b.message_id.clone(), b.sentence_index);
                b.fs().partial_cmp(&a.fs()).unwrap().then(ka.cmp(&kb))
            });
            let got = rank_sbs(1, &s);
            let got: Vec<_> = got.entries.iter().map(|e| (e.message_id.clone(), e.sentence_index.unwrap())).collect();
            let want: Vec<_> = oracle.iter().map(|x| (x.message_id.clone(), x.sentence_index)).collect();
            prop_assert_eq!(got, want);
        }

        #[test]
        fn permutation_invariant(s in instance(), seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let mut shuffled = s.clone();
            shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(rank_sbs(1, &s), rank_sbs(1, &shuffled));
            prop_assert_eq!(rank_mbs(1, &s), rank_mbs(1, &shuffled));
        }

        #[test]
        fn mbs_dominates_and_covers(s in instance()) {
            let sbs = rank_sbs(1, &s);
            let mbs = rank_mbs(1, &s);
            for e in &sbs.entries {
                let r = mbs.rank_of(&e.message_id, e.sentence_index.unwrap()).unwrap();
                prop_assert!(r <= e.rank);
                let m = mbs.entries.iter().find(|m| m.message_id == e.message_id).unwrap();
                prop_assert!(m.members.iter().any(|x| Some(x.sentence_index) == e.sentence_index));
            }
        }
    }
}
