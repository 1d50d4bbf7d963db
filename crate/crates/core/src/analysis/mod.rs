//! Linguistic primitives consumed by the heuristics: term-type lexicon
//! matching, pattern scoring, negation detection and shallow
//! subject-verb-object triples.
//!
//! All matching is case-insensitive and word-bounded. The lexicon is plain
//! data (JSON) so the shipped defaults can be replaced wholesale.

mod triples;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::heuristics::{AuthorRole, SamcerClass};
use crate::text::{contains_bounded, fold_for_matching};

pub use triples::{extract_triples, triple_matches_decision, Triple};

/// Highest score a term pattern may carry.
pub const MAX_PATTERN_SCORE: f64 = 0.9;

const DEFAULT_LEXICON_JSON: &str = include_str!("../../data/default_lexicon.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TermType {
    ProposalIdentifier,
    State,
    ReasonIdentifier,
    Entity,
    DecisionTerm,
    /// Favorable or objecting vocabulary. Provisional name for the sixth type.
    SupportTerm,
}

impl TermType {
    pub const ALL: [TermType; 6] = [
        TermType::ProposalIdentifier,
        TermType::State,
        TermType::ReasonIdentifier,
        TermType::Entity,
        TermType::DecisionTerm,
        TermType::SupportTerm,
    ];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermPattern {
    pub required_types: BTreeSet<TermType>,
    pub score: f64,
}

/// Cue phrases plus author-role constraint recognizing one kind of
/// rationale-bearing message.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamcerTemplate {
    pub class: SamcerClass,
    pub roles: Vec<AuthorRole>,
    pub cues: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lexicon {
    /// Marks lexicons whose tables are placeholders.
    #[serde(default)]
    pub provisional: bool,
    pub term_types: BTreeMap<TermType, Vec<String>>,
    pub patterns: Vec<TermPattern>,
    pub negation_terms: Vec<String>,
    pub decision_terms: Vec<String>,
    pub decision_heading_terms: Vec<String>,
    #[serde(default)]
    pub pronouncement_request_terms: Vec<String>,
    #[serde(default)]
    pub samcer_templates: Vec<SamcerTemplate>,
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("lexicon json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("pattern {index} score {score} outside [0, 0.9]")]
    ScoreOutOfRange { index: usize, score: f64 },
    #[error("pattern {index} references undefined term type {term:?}")]
    UndefinedTermType { index: usize, term: TermType },
    #[error("pattern {index} has no required types")]
    EmptyPattern { index: usize },
    #[error("{list}: phrase {phrase:?} must be lowercase and non-empty")]
    BadPhrase { list: String, phrase: String },
}

fn pep_number_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?i)\bPEP[ -]?\d+\b").unwrap())
}

impl Default for Lexicon {
    fn default() -> Self {
        Lexicon::from_json(DEFAULT_LEXICON_JSON).expect("shipped lexicon is valid")
    }
}

impl Lexicon {
    pub fn from_json(json: &str) -> Result<Self, LexiconError> {
        let lex: Lexicon = serde_json::from_str(json)?;
        lex.validate()?;
        Ok(lex)
    }

    pub fn validate(&self) -> Result<(), LexiconError> {
        for (index, p) in self.patterns.iter().enumerate() {
            if !(0.0..=MAX_PATTERN_SCORE).contains(&p.score) {
                return Err(LexiconError::ScoreOutOfRange { index, score: p.score });
            }
            if p.required_types.is_empty() {
                return Err(LexiconError::EmptyPattern { index });
            }
            for t in &p.required_types {
                if *t != TermType::ProposalIdentifier && !self.term_types.contains_key(t) {
                    return Err(LexiconError::UndefinedTermType { index, term: *t });
                }
            }
        }
        let mut lists: Vec<(String, &Vec<String>)> =
            self.term_types.iter().map(|(t, v)| (format!("{t:?}"), v)).collect();
        lists.push(("negation_terms".into(), &self.negation_terms));
        lists.push(("decision_terms".into(), &self.decision_terms));
        lists.push(("decision_heading_terms".into(), &self.decision_heading_terms));
        lists.push(("pronouncement_request_terms".into(), &self.pronouncement_request_terms));
        for t in &self.samcer_templates {
            lists.push((format!("samcer {:?}", t.class), &t.cues));
        }
        for (list, phrases) in lists {
            if let Some(bad) = phrases.iter().find(|p| p.trim().is_empty() || p.to_lowercase() != **p) {
                return Err(LexiconError::BadPhrase { list, phrase: bad.clone() });
            }
        }
        Ok(())
    }

    /// Term types present in `text`.
    pub fn match_term_types(&self, text: &str) -> BTreeSet<TermType> {
        let folded = fold_for_matching(text);
        let mut found = BTreeSet::new();
        if pep_number_re().is_match(&folded) {
            found.insert(TermType::ProposalIdentifier);
        }
        for (t, phrases) in &self.term_types {
            if !found.contains(t) && phrases.iter().any(|p| contains_bounded(&folded, p)) {
                found.insert(*t);
            }
        }
        found
    }

    /// Maximum score over patterns whose required types all occur in
    /// `types`; 0 when none applies.
    pub fn best_pattern_score(&self, types: &BTreeSet<TermType>) -> f64 {
        self.patterns
            .iter()
            .filter(|p| p.required_types.is_subset(types))
            .map(|p| p.score)
            .fold(0.0, f64::max)
    }

    pub fn detect_negation(&self, text: &str) -> bool {
        detect_negation(text, &self.negation_terms)
    }

    pub fn contains_decision_heading(&self, text: &str) -> bool {
        contains_any(text, &self.decision_heading_terms)
    }

    pub fn contains_pronouncement_request(&self, text: &str) -> bool {
        contains_any(text, &self.pronouncement_request_terms)
    }

    /// True when some triple extracted from `text` carries a decision term.
    pub fn has_decision_triple(&self, text: &str) -> bool {
        extract_triples(text).iter().any(|t| triple_matches_decision(t, &self.decision_terms))
    }

    /// Largest pattern score any input could reach.
    pub fn max_pattern_score(&self) -> f64 {
        self.patterns.iter().map(|p| p.score).fold(0.0, f64::max)
    }
}

/// True when any phrase occurs word-bounded in `text`.
pub fn contains_any(text: &str, phrases: &[String]) -> bool {
    let folded = fold_for_matching(text);
    phrases.iter().any(|p| contains_bounded(&folded, p))
}

pub fn match_term_types(text: &str, lexicon: &Lexicon) -> BTreeSet<TermType> {
    lexicon.match_term_types(text)
}

pub fn best_pattern_score(types: &BTreeSet<TermType>, lexicon: &Lexicon) -> f64 {
    lexicon.best_pattern_score(types)
}

pub fn detect_negation(text: &str, negation_terms: &[String]) -> bool {
    contains_any(text, negation_terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(types: &[TermType]) -> BTreeSet<TermType> {
        types.iter().copied().collect()
    }

    const PEP_308: &str =
        "Accordingly, the PEP was rejected due to the lack of an overwhelming majority for change.";

    #[test]
    fn pep_308_rejection_sentence() {
        let lex = Lexicon::default();
        assert_eq!(
            lex.match_term_types(PEP_308),
            set(&[TermType::ProposalIdentifier, TermType::State, TermType::ReasonIdentifier])
        );
    }

    #[test]
    fn empty_and_decision_only() {
        let lex = Lexicon::default();
        assert!(lex.match_term_types("").is_empty());
        assert_eq!(lex.match_term_types("consensus is reached"), set(&[TermType::DecisionTerm]));
    }

    #[test]
    fn pep_number_regex_fires_without_phrase() {
        let lex = Lexicon { term_types: BTreeMap::new(), ..Lexicon::default() };
        assert_eq!(lex.match_term_types("see PEP-0308 now"), set(&[TermType::ProposalIdentifier]));
        assert!(lex.match_term_types("PEP308x").is_empty());
    }

    #[test]
    fn default_pattern_table_enumeration() {
        let lex = Lexicon::default();
        assert_eq!(lex.best_pattern_score(&BTreeSet::new()), 0.0);
        assert_eq!(lex.best_pattern_score(&set(&TermType::ALL)), 0.9);
        assert_eq!(lex.best_pattern_score(&set(&[TermType::State, TermType::ReasonIdentifier])), 0.6);
        assert_eq!(
            lex.best_pattern_score(&set(&[TermType::ProposalIdentifier, TermType::State, TermType::ReasonIdentifier])),
            0.9
        );
        assert_eq!(lex.best_pattern_score(&set(&[TermType::DecisionTerm])), 0.3);
        assert_eq!(lex.best_pattern_score(&set(&[TermType::ProposalIdentifier])), 0.0);
        assert_eq!(lex.best_pattern_score(&set(&[TermType::ProposalIdentifier, TermType::ReasonIdentifier])), 0.0);
        assert_eq!(lex.best_pattern_score(&set(&[TermType::ProposalIdentifier, TermType::State])), 0.5);
    }

    #[test]
    fn shipped_table_shape() {
        let lex = Lexicon::default();
        assert!(lex.provisional);
        for p in &lex.patterns {
            assert!((0.0..=0.9).contains(&p.score));
            match p.required_types.len() {
                1 => assert_eq!(p.score, 0.3),
                2 => assert!((0.4..=0.6).contains(&p.score)),
                _ => {}
            }
        }
        assert_eq!(lex.max_pattern_score(), 0.9);
    }

    #[test]
    fn negation() {
        let lex = Lexicon::default();
        assert!(lex.detect_negation("This should not be accepted."));
        assert!(!lex.detect_negation("I approve."));
        assert!(!lex.detect_negation("Notably, it works."));
        assert!(lex.detect_negation("We can’t do that"));
    }

    #[test]
    fn decision_headings() {
        let lex = Lexicon::default();
        assert!(lex.contains_decision_heading("BDFL Pronouncement: approved."));
        assert!(lex.contains_decision_heading("PEP Rejection"));
        assert!(!lex.contains_decision_heading("Motivation"));
    }

    #[test]
    fn invalid_lexicons_rejected() {
        let mut lex = Lexicon::default();
        lex.patterns[0].score = 0.95;
        assert!(matches!(lex.validate(), Err(LexiconError::ScoreOutOfRange { index: 0, .. })));

        let mut lex = Lexicon::default();
        lex.term_types.remove(&TermType::Entity);
        assert!(matches!(lex.validate(), Err(LexiconError::UndefinedTermType { term: TermType::Entity, .. })));

        let mut lex = Lexicon::default();
        lex.negation_terms.push("Not".into());
        assert!(matches!(lex.validate(), Err(LexiconError::BadPhrase { .. })));

        assert!(Lexicon::from_json("{\"term_types\": {}}").is_err());
    }

    fn any_types() -> impl Strategy<Value = BTreeSet<TermType>> {
        proptest::sample::subsequence(TermType::ALL.to_vec(), 0..=6).prop_map(|v| v.into_iter().collect())
    }

    proptest! {
        #[test]
        fn pattern_score_is_monotone_and_bounded(types in any_types(), extra in proptest::sample::select(TermType::ALL.to_vec())) {
            let lex = Lexicon::default();
            let base = lex.best_pattern_score(&types);
            let mut bigger = types.clone();
            bigger.insert(extra);
            prop_assert!(lex.best_pattern_score(&bigger) >= base);
            prop_assert!((0.0..=0.9).contains(&base));
        }

        #[test]
        fn matchers_are_total(text in "\\PC{0,120}") {
            let lex = Lexicon::default();
            let types = lex.match_term_types(&text);
            let _ = lex.best_pattern_score(&types);
            let _ = lex.detect_negation(&text);
            let _ = extract_triples(&text);
        }
    }
}
