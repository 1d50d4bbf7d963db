//! Deterministic synthetic corpora with one planted rationale sentence per
//! proposal.
//!
//! Output uses the same formats the ingester reads: an mbox archive,
//! proposal documents, a commit log, plus the ground truth and a role
//! roster. Identical specs produce identical bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use chrono::{DateTime, Duration, TimeZone, Utc};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{Lexicon, TermType};
use crate::evaluation::{write_ground_truth_csv, FinalState, GroundTruthEntry, RationaleLabel};
use crate::heuristics::{AuthorRole, RoleDirectory};

pub const BDFL: &str = "Guido van Rossum <guido@python.org>";
pub const LIST_NAME: &str = "python-dev";
const FIRST_PEP: u32 = 1001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Range {
    pub min: usize,
    pub max: usize,
}

impl Range {
    pub fn fixed(n: usize) -> Self {
        Range { min: n, max: n }
    }

    fn sample(self, rng: &mut ChaCha8Rng) -> usize {
        rng.gen_range(self.min..=self.max)
    }
}

/// Planted sentence for one proposal. Unset fields are drawn at random.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlantedSpec {
    pub label: Option<RationaleLabel>,
    /// Text with `{pep}`, `{state}` or term-type slots such as `{entity}`.
    pub template: Option<String>,
    pub author_role: Option<AuthorRole>,
    pub days_offset: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthSpec {
    pub seed: u64,
    pub n_peps: usize,
    pub messages_per_pep: Range,
    pub noise_sentences_per_message: Range,
    /// Largest |days| between the planted message and the decisive commit.
    pub planted_max_days: i64,
    /// Noise messages fall within this many days of the decisive commit.
    pub noise_spread_days: i64,
    /// Mix lexicon phrases into noise.
    pub adversarial: bool,
    /// Share of noise sentences drawn from lexicon-bearing templates in
    /// adversarial mode.
    pub adversarial_fraction: f64,
    /// Per-proposal overrides, by position.
    pub planted: Vec<PlantedSpec>,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            seed: 1,
            n_peps: 10,
            messages_per_pep: Range::fixed(10),
            noise_sentences_per_message: Range { min: 5, max: 20 },
            planted_max_days: 7,
            noise_spread_days: 200,
            adversarial: false,
            adversarial_fraction: 0.3,
            planted: Vec::new(),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error("template {template:?} references unknown slot {slot:?}")]
    UnknownSlot { template: String, slot: String },
    #[error("invalid synth spec: {0}")]
    Spec(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedInfo {
    pub pep: u32,
    pub final_state: FinalState,
    pub label: RationaleLabel,
    pub author_role: AuthorRole,
    pub message_id: String,
    pub sentence: String,
    pub days_offset: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthCorpus {
    pub mbox: String,
    pub pep_docs: BTreeMap<u32, String>,
    pub commits_csv: String,
    pub ground_truth: Vec<GroundTruthEntry>,
    pub roster: RoleDirectory,
    pub planted: Vec<PlantedInfo>,
}

const ADJ: &[&str] = &[
    "quiet", "small", "older", "bright", "rusty", "narrow", "gentle", "heavy", "plain", "early", "orange", "steady",
    "tidy", "hollow", "sturdy", "dusty",
];
const NOUN: &[&str] = &[
    "parser", "buffer", "cache", "widget", "table", "module", "loop", "tuple", "socket", "lambda", "iterator",
    "decorator", "compiler", "benchmark", "mirror", "garden", "window", "ticket", "branch", "script", "lantern",
    "kettle", "ladder", "teapot",
];
const VERB: &[&str] = &[
    "touched", "moved", "wrapped", "copied", "renamed", "measured", "printed", "cleaned", "sorted", "trimmed",
    "loaded", "checked", "painted", "folded",
];
const VERB_BASE: &[&str] = &["touch", "move", "wrap", "copy", "rename", "measure", "print", "clean", "sort", "trim"];
const PREP: &[&str] = &["near", "inside", "behind", "beyond", "around", "under", "beside", "across"];
const TITLE: &[&str] = &[
    "Quantum", "Bracket", "Harbor", "Falcon", "Meadow", "Copper", "Velvet", "Marble", "Canyon", "Saffron", "Tundra",
    "Juniper", "Cobalt", "Pebble", "Walrus", "Zephyr",
];
const FIRST: &[&str] = &["Alice", "Bruno", "Chidi", "Dana", "Emeka", "Freya", "Goran", "Hana", "Ivo", "Jun", "Kofi", "Lena"];
const LAST: &[&str] = &["Archer", "Baker", "Castro", "Dubois", "Eklund", "Fischer", "Garcia", "Holm", "Ito", "Jansen", "Kowal", "Lund"];

const NOISE_FORMS: &[&str] = &[
    "The {adj} {noun} {verb} the {noun} {prep} the {adj} {noun}.",
    "Our {noun} {verb} a {adj} {noun} last week.",
    "A {adj} {noun} {verb} every {noun} {prep} the {noun}.",
    "Yesterday the {noun} {verb} my {adj} {noun}.",
    "The {noun} {verb} the {adj} {noun} twice.",
];

/// Lexicon phrases used out of context.
const ADVERSARIAL_FORMS: &[&str] = &[
    "The vote counter in the {noun} was {adj} again.",
    "Everyone agreed the {noun} looked {adj} {prep} the {noun}.",
    "The {noun} poll results were {adj} {prep} the {noun}.",
    "Because the {noun} was {adj}, the {noun} test was rejected by the build bot.",
    "The old {noun} tests were accepted by the {noun} checker.",
    "We should not {verb_base} the {noun} {prep} the {noun}.",
    "Guido {verb} the {adj} {noun} {prep} the {noun}.",
    "Several developers {verb} the {noun} {prep} the {adj} {noun}.",
    "The {noun} reached {adj} support {prep} the {noun}.",
    "There was a long discussion with the community about the {adj} {noun}.",
];

/// Default planted templates per label.
pub fn default_templates(label: RationaleLabel) -> &'static [&'static str] {
    match label {
        RationaleLabel::Consensus => &[
            "{pep} was {state} because everyone reached consensus on the final design.",
            "Given the feedback, consensus is reached and {pep} is {state}.",
        ],
        RationaleLabel::NoConsensus => &["{pep} was {state} because there was no consensus in favor of the change."],
        RationaleLabel::LazyConsensus => {
            &["{pep} is {state} since nobody objected and lazy consensus was reached on the list."]
        }
        RationaleLabel::RoughConsensus => &["Given the discussion, rough consensus is that {pep} should be {state}."],
        RationaleLabel::LittleSupport => &["{pep} was {state} because few people supported it and the vote was lopsided."],
        RationaleLabel::Majority => &["The majority was clearly in favor, therefore {pep} was {state}."],
        RationaleLabel::NoMajority => &["{pep} was {state} due to the lack of an overwhelming majority for change."],
        RationaleLabel::BdflDecree => &["Based on the thread, I have decided that {pep} is {state}."],
        RationaleLabel::BdflPronouncementAfterNoConsensus => {
            &["Since there is no consensus, my pronouncement is that {pep} is {state}."]
        }
        RationaleLabel::BdflPronouncementOverMajority => {
            &["Despite the majority vote, my pronouncement is that {pep} is {state} because of the design risks."]
        }
        RationaleLabel::IneptPep => {
            &["{pep} was {state} because the benefit was too marginal for the change, and everyone agreed with that."]
        }
    }
}

fn labels_for(state: FinalState) -> &'static [RationaleLabel] {
    match state {
        FinalState::Accepted => &[
            RationaleLabel::Consensus,
            RationaleLabel::LazyConsensus,
            RationaleLabel::RoughConsensus,
            RationaleLabel::Majority,
            RationaleLabel::BdflDecree,
            RationaleLabel::BdflPronouncementOverMajority,
        ],
        FinalState::Rejected => &[
            RationaleLabel::NoConsensus,
            RationaleLabel::LittleSupport,
            RationaleLabel::NoMajority,
            RationaleLabel::BdflDecree,
            RationaleLabel::BdflPronouncementAfterNoConsensus,
            RationaleLabel::IneptPep,
        ],
    }
}

fn pick<'a>(rng: &mut ChaCha8Rng, items: &[&'a str]) -> &'a str {
    items.choose(rng).expect("non-empty")
}

fn fill_noise(form: &str, rng: &mut ChaCha8Rng) -> String {
    let mut out = String::new();
    let mut rest = form;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let close = open + rest[open..].find('}').expect("closed slot");
        let word = match &rest[open + 1..close] {
            "adj" => pick(rng, ADJ),
            "noun" => pick(rng, NOUN),
            "verb" => pick(rng, VERB),
            "verb_base" => pick(rng, VERB_BASE),
            "prep" => pick(rng, PREP),
            other => unreachable!("noise slot {other}"),
        };
        out.push_str(word);
        rest = &rest[close + 1..];
    }
    out.push_str(rest);
    let mut chars = out.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => out,
    }
}

fn term_type_slot(name: &str) -> Option<TermType> {
    serde_json::from_value(serde_json::Value::String(name.into())).ok()
}

/// Fills `{pep}`, `{state}` and term-type slots (a phrase of that type
/// from the lexicon).
pub fn instantiate(
    template: &str,
    pep: u32,
    state: FinalState,
    lexicon: &Lexicon,
    rng: &mut ChaCha8Rng,
) -> Result<String, SynthError> {
    let mut out = String::new();
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let close = open
            + rest[open..].find('}').ok_or_else(|| SynthError::UnknownSlot { template: template.into(), slot: rest[open..].into() })?;
        let slot = &rest[open + 1..close];
        match slot {
            "pep" => write!(out, "PEP {pep}").expect("string write"),
            "state" => out.push_str(state.as_str()),
            other => {
                let phrases = term_type_slot(other)
                    .and_then(|t| lexicon.term_types.get(&t))
                    .filter(|p| !p.is_empty())
                    .ok_or_else(|| SynthError::UnknownSlot { template: template.into(), slot: other.into() })?;
                out.push_str(phrases.choose(rng).expect("non-empty"));
            }
        }
        rest = &rest[close + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

fn wrap(text: &str, width: usize) -> String {
    let mut out = String::new();
    let mut line = 0;
    for word in text.split_whitespace() {
        if line > 0 && line + 1 + word.len() > width {
            out.push('\n');
            line = 0;
        } else if line > 0 {
            out.push(' ');
            line += 1;
        }
        out.push_str(word);
        line += word.len();
    }
    out
}

struct Person {
    name: String,
    email: String,
}

impl Person {
    fn header(&self) -> String {
        format!("{} <{}>", self.name, self.email)
    }
}

fn people() -> Vec<Person> {
    FIRST
        .iter()
        .zip(LAST)
        .map(|(f, l)| Person { name: format!("{f} {l}"), email: format!("{}.{}@example.org", f.to_lowercase(), l.to_lowercase()) })
        .collect()
}

struct Message {
    id: String,
    author: String,
    date: DateTime<Utc>,
    subject: String,
    in_reply_to: Option<String>,
    body: String,
}

fn render_message(m: &Message, out: &mut String) {
    let sender = m.author.rsplit('<').next().unwrap_or("").trim_end_matches('>');
    let postmark = m.date.format("%a %b %e %H:%M:%S %Y");
    writeln!(out, "From {sender} {postmark}").unwrap();
    writeln!(out, "From: {}", m.author).unwrap();
    writeln!(out, "Subject: {}", m.subject).unwrap();
    writeln!(out, "Date: {}", m.date.to_rfc2822()).unwrap();
    writeln!(out, "Message-ID: {}", m.id).unwrap();
    if let Some(r) = &m.in_reply_to {
        writeln!(out, "In-Reply-To: {r}").unwrap();
    }
    writeln!(out, "Content-Type: text/plain; charset=utf-8").unwrap();
    writeln!(out).unwrap();
    out.push_str(&m.body);
    out.push_str("\n\n");
}

/// Chunks sentences into paragraphs of two to five sentences.
fn body(sentences: &[String], rng: &mut ChaCha8Rng) -> String {
    let mut paragraphs = Vec::new();
    let mut i = 0;
    while i < sentences.len() {
        let n = rng.gen_range(2..=5).min(sentences.len() - i);
        paragraphs.push(wrap(&sentences[i..i + n].join(" "), 72));
        i += n;
    }
    paragraphs.join("\n\n")
}

impl SynthSpec {
    pub fn validate(&self) -> Result<(), SynthError> {
        if self.n_peps == 0 {
            return Err(SynthError::Spec("n_peps must be positive".into()));
        }
        if self.messages_per_pep.min == 0 || self.messages_per_pep.min > self.messages_per_pep.max {
            return Err(SynthError::Spec("messages_per_pep needs 1 <= min <= max".into()));
        }
        if self.noise_sentences_per_message.min > self.noise_sentences_per_message.max {
            return Err(SynthError::Spec("noise_sentences_per_message needs min <= max".into()));
        }
        if !(0.0..=1.0).contains(&self.adversarial_fraction) {
            return Err(SynthError::Spec("adversarial_fraction must lie in [0, 1]".into()));
        }
        if self.planted_max_days < 0 || self.noise_spread_days < 0 {
            return Err(SynthError::Spec("day ranges must be non-negative".into()));
        }
        if self.n_peps > 8999 {
            return Err(SynthError::Spec("at most 8999 proposals".into()));
        }
        Ok(())
    }
}

pub fn generate(spec: &SynthSpec, lexicon: &Lexicon) -> Result<SynthCorpus, SynthError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let people = people();
    // first five are core developers, the sixth edits proposals
    let roster = RoleDirectory {
        bdfl: vec![BDFL.into()],
        pep_editors: vec![people[5].header()],
        core_developers: people[..5].iter().map(Person::header).collect(),
    };
    let mut mbox = String::new();
    let mut pep_docs = BTreeMap::new();
    let mut commits = String::from("date,pep,status,commit\n");
    let mut ground_truth = Vec::new();
    let mut planted_info = Vec::new();
    let epoch = Utc.with_ymd_and_hms(2001, 1, 1, 12, 0, 0).unwrap();

    for p in 0..spec.n_peps {
        let number = FIRST_PEP + p as u32;
        let overrides = spec.planted.get(p).cloned().unwrap_or_default();
        let state = if rng.gen_bool(0.5) { FinalState::Accepted } else { FinalState::Rejected };
        let label = overrides.label.unwrap_or_else(|| *labels_for(state).choose(&mut rng).expect("labels"));
        let template = match &overrides.template {
            Some(t) => t.clone(),
            None => pick(&mut rng, default_templates(label)).to_string(),
        };
        let sentence = instantiate(&template, number, state, lexicon, &mut rng)?;
        let title: Vec<&str> = TITLE.choose_multiple(&mut rng, 3).copied().collect();
        let title = title.join(" ");
        let author = &people[rng.gen_range(0..people.len())];
        let delegate = rng.gen_bool(0.3).then(|| {
            let mut d = &people[rng.gen_range(0..5)];
            if d.email == author.email {
                d = &people[(rng.gen_range(0..5) + 1) % 5 + 6];
            }
            d
        });
        let role = overrides.author_role.unwrap_or_else(|| {
            *[AuthorRole::Bdfl, AuthorRole::BdflDelegate, AuthorRole::PepAuthor].choose(&mut rng).expect("roles")
        });
        let planted_author = match role {
            AuthorRole::Bdfl => BDFL.to_string(),
            AuthorRole::BdflDelegate => delegate.map_or_else(|| BDFL.to_string(), Person::header),
            AuthorRole::PepAuthor => author.header(),
            AuthorRole::PepEditor => people[5].header(),
            AuthorRole::CoreDeveloper => people[rng.gen_range(0..5)].header(),
            AuthorRole::Other => people[rng.gen_range(6..people.len())].header(),
        };
        let days_offset =
            overrides.days_offset.unwrap_or_else(|| rng.gen_range(-spec.planted_max_days..=spec.planted_max_days));
        let decisive = epoch + Duration::days(rng.gen_range(0..5000));

        let mut doc = format!("PEP: {number}\nTitle: {title}\nAuthor: {}\nStatus: {}\nType: Standards Track\n", author.header(), capitalize(state.as_str()));
        if let Some(d) = delegate {
            writeln!(doc, "BDFL-Delegate: {}", d.header()).unwrap();
        }
        writeln!(doc, "Created: {}\n\nAbstract\n\nThis document describes the {title} change.", (decisive - Duration::days(300)).format("%d-%b-%Y")).unwrap();
        pep_docs.insert(number, doc);
        writeln!(commits, "{},{number},Draft,c{number}a", (decisive - Duration::days(300)).format("%Y-%m-%d %H:%M:%S")).unwrap();
        writeln!(commits, "{},{number},{},c{number}b", decisive.format("%Y-%m-%d %H:%M:%S"), capitalize(state.as_str())).unwrap();

        let n_messages = spec.messages_per_pep.sample(&mut rng);
        let planted_slot = rng.gen_range(0..n_messages);
        let mut messages = Vec::new();
        for i in 0..n_messages {
            let id = format!("<synth-{number}-{i}@example.org>");
            let n_noise = spec.noise_sentences_per_message.sample(&mut rng);
            let mut sentences: Vec<String> = (0..n_noise)
                .map(|_| {
                    let adversarial = spec.adversarial && rng.gen_bool(spec.adversarial_fraction);
                    let forms = if adversarial { ADVERSARIAL_FORMS } else { NOISE_FORMS };
                    let form = pick(&mut rng, forms);
                    fill_noise(form, &mut rng)
                })
                .collect();
            let (author_header, date) = if i == planted_slot {
                let at = rng.gen_range(0..=sentences.len());
                sentences.insert(at, sentence.clone());
                let hours = rng.gen_range(-11..=11);
                (planted_author.clone(), decisive + Duration::days(days_offset) + Duration::hours(hours))
            } else {
                let who = match rng.gen_range(0..20) {
                    0..=1 => BDFL.to_string(),
                    2..=4 => author.header(),
                    _ => people[rng.gen_range(0..people.len())].header(),
                };
                let offset = rng.gen_range(-spec.noise_spread_days..=spec.noise_spread_days);
                (who, decisive + Duration::days(offset) + Duration::minutes(rng.gen_range(-600..=600)))
            };
            let body = if sentences.is_empty() { String::new() } else { body(&sentences, &mut rng) };
            messages.push(Message { id, author: author_header, date, subject: String::new(), in_reply_to: None, body });
        }
        messages.sort_by(|a, b| a.date.cmp(&b.date).then_with(|| a.id.cmp(&b.id)));
        let thread_subject = format!("PEP {number}: {title}");
        let root = messages[0].id.clone();
        for (i, m) in messages.iter_mut().enumerate() {
            if i == 0 {
                m.subject = thread_subject.clone();
            } else {
                m.subject = format!("Re: {thread_subject}");
                m.in_reply_to = Some(root.clone());
            }
        }
        let planted_id = format!("<synth-{number}-{planted_slot}@example.org>");
        for m in &messages {
            render_message(m, &mut mbox);
        }
        ground_truth.push(GroundTruthEntry {
            pep: number,
            final_state: state,
            message_id: planted_id.clone(),
            sentence_text: sentence.clone(),
            label,
        });
        planted_info.push(PlantedInfo {
            pep: number,
            final_state: state,
            label,
            author_role: role,
            message_id: planted_id,
            sentence,
            days_offset,
        });
    }
    Ok(SynthCorpus { mbox, pep_docs, commits_csv: commits, ground_truth, roster, planted: planted_info })
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    c.next().map(|f| f.to_uppercase().chain(c).collect()).unwrap_or_default()
}

impl SynthCorpus {
    /// Writes the ingestion layout plus `ground_truth.csv`, `roles.json`
    /// and `planted.json`.
    pub fn write_to_dir(&self, dir: &Path) -> std::io::Result<()> {
        fs::create_dir_all(dir.join("archives"))?;
        fs::create_dir_all(dir.join("peps"))?;
        fs::write(dir.join("archives").join(format!("{LIST_NAME}.mbox")), &self.mbox)?;
        for (n, doc) in &self.pep_docs {
            fs::write(dir.join("peps").join(format!("pep-{n:04}.txt")), doc)?;
        }
        fs::write(dir.join("commits.csv"), &self.commits_csv)?;
        let mut gt = Vec::new();
        write_ground_truth_csv(&mut gt, &self.ground_truth).map_err(std::io::Error::other)?;
        fs::write(dir.join("ground_truth.csv"), gt)?;
        fs::write(dir.join("roles.json"), serde_json::to_string_pretty(&self.roster)? + "\n")?;
        fs::write(dir.join("planted.json"), serde_json::to_string_pretty(&self.planted)? + "\n")?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::contains_any;
    use crate::text::fold_for_matching;

    fn all_lexicon_phrases(lex: &Lexicon) -> Vec<String> {
        let mut out: Vec<String> = lex.term_types.values().flatten().cloned().collect();
        out.extend(lex.negation_terms.iter().cloned());
        out.extend(lex.decision_terms.iter().cloned());
        out.extend(lex.decision_heading_terms.iter().cloned());
        out.extend(lex.pronouncement_request_terms.iter().cloned());
        out.extend(lex.samcer_templates.iter().flat_map(|t| t.cues.iter().cloned()));
        out
    }

    #[test]
    fn noise_vocabulary_is_lexicon_free() {
        let lex = Lexicon::default();
        let phrases = all_lexicon_phrases(&lex);
        for word in ADJ.iter().chain(NOUN).chain(VERB).chain(VERB_BASE).chain(PREP).chain(TITLE).chain(FIRST).chain(LAST) {
            assert!(!contains_any(word, &phrases), "{word}");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for form in NOISE_FORMS {
            for _ in 0..50 {
                let s = fill_noise(form, &mut rng);
                assert!(!contains_any(&s, &phrases), "{s}");
                assert!(lex.match_term_types(&s).is_empty());
                assert!(!lex.has_decision_triple(&s));
            }
        }
    }

    #[test]
    fn adversarial_forms_hit_the_lexicon() {
        let lex = Lexicon::default();
        let phrases = all_lexicon_phrases(&lex);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for form in ADVERSARIAL_FORMS {
            let s = fill_noise(form, &mut rng);
            assert!(contains_any(&s, &phrases), "{s}");
        }
    }

    #[test]
    fn planted_templates_reach_the_top_pattern_and_a_decision_triple() {
        let lex = Lexicon::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for label in RationaleLabel::ALL {
            for t in default_templates(label) {
                for state in FinalState::BOTH {
                    let s = instantiate(t, 1234, state, &lex, &mut rng).unwrap();
                    let types = lex.match_term_types(&s);
                    assert_eq!(lex.best_pattern_score(&types), 0.9, "{s}: {types:?}");
                    assert!(lex.has_decision_triple(&s), "{s}");
                    assert!(!lex.detect_negation(&s), "{s}");
                    assert!(types.contains(&TermType::DecisionTerm) || types.contains(&TermType::ProposalIdentifier));
                }
            }
        }
    }

    #[test]
    fn consensus_template_carries_decision_and_state() {
        let lex = Lexicon::default();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let s = instantiate(default_templates(RationaleLabel::Consensus)[0], 7, FinalState::Accepted, &lex, &mut rng).unwrap();
        let types = lex.match_term_types(&s);
        assert!(types.contains(&TermType::DecisionTerm) && types.contains(&TermType::State));
    }

    #[test]
    fn unknown_slot_is_an_error() {
        let lex = Lexicon::default();
        let spec = SynthSpec {
            n_peps: 1,
            planted: vec![PlantedSpec { template: Some("The {colour} is {state}.".into()), ..Default::default() }],
            ..SynthSpec::default()
        };
        assert!(matches!(generate(&spec, &lex), Err(SynthError::UnknownSlot { slot, .. }) if slot == "colour"));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = instantiate("{entity} said {pep} is {state}.", 9, FinalState::Rejected, &lex, &mut rng).unwrap();
        assert!(s.ends_with("said PEP 9 is rejected."));
        assert!(lex.match_term_types(&fold_for_matching(&s)).contains(&TermType::Entity));
    }

    #[test]
    fn deterministic() {
        let lex = Lexicon::default();
        let spec = SynthSpec { n_peps: 3, adversarial: true, ..SynthSpec::default() };
        let a = generate(&spec, &lex).unwrap();
        let b = generate(&spec, &lex).unwrap();
        assert_eq!(a, b);
        let c = generate(&SynthSpec { seed: 2, ..spec }, &lex).unwrap();
        assert_ne!(a.mbox, c.mbox);
    }

    #[test]
    fn spec_validation() {
        let lex = Lexicon::default();
        assert!(generate(&SynthSpec { n_peps: 0, ..SynthSpec::default() }, &lex).is_err());
        assert!(generate(&SynthSpec { messages_per_pep: Range { min: 3, max: 2 }, ..SynthSpec::default() }, &lex).is_err());
        let json = serde_json::to_string(&SynthSpec::default()).unwrap();
        assert_eq!(serde_json::from_str::<SynthSpec>(&json).unwrap(), SynthSpec::default());
        assert!(serde_json::from_str::<SynthSpec>(r#"{"sed": 1}"#).is_err());
    }
}
