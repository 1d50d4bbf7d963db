//! The thirteen heuristics and the final score.
//!
//! Every sentence of every linked message receives a base value per
//! heuristic (see [`categories`]). [`final_score`] then applies the sweep
//! deltas to activated heuristics, zeroes disabled ones and sums the result:
//!
//! ```text
//! FS = TPCS + TPROP + TPMS + DFSC + SLIM + NT + MT + AR + SAMCER
//!    + RMSSCM + RFUTE + DTIM + DTHP
//! ```
//!
//! Base values are kept alongside the final vector so the ablation and
//! sweep harnesses can re-finalize without rebuilding contexts.

pub mod categories;
mod context;
mod corpus;
mod roles;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::Lexicon;

pub use context::{MessageContext, SentenceContext};
pub use corpus::{read_scored_jsonl, score_corpus, PepScores, ScoredCorpus, ScoredSentence};
pub use roles::{AuthorRole, RoleDirectory, RoleScores, SamcerClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum HeuristicId {
    Tpcs,
    Tprop,
    Tpms,
    Dfsc,
    Slim,
    Nt,
    Mt,
    Ar,
    Samcer,
    Rmsscm,
    Rfute,
    Dtim,
    Dthp,
}

pub const HEURISTIC_COUNT: usize = 13;

/// The five sweep values tried per heuristic.
pub const DELTA_GRID: [f64; 5] = [-0.3, 0.0, 0.3, 0.6, 0.9];

impl HeuristicId {
    pub const ALL: [HeuristicId; HEURISTIC_COUNT] = [
        HeuristicId::Tpcs,
        HeuristicId::Tprop,
        HeuristicId::Tpms,
        HeuristicId::Dfsc,
        HeuristicId::Slim,
        HeuristicId::Nt,
        HeuristicId::Mt,
        HeuristicId::Ar,
        HeuristicId::Samcer,
        HeuristicId::Rmsscm,
        HeuristicId::Rfute,
        HeuristicId::Dtim,
        HeuristicId::Dthp,
    ];

    /// Heuristics with positive or mixed-strong influence, the default
    /// targets of the parameter sweep.
    pub const SWEEP_ELIGIBLE: [HeuristicId; 7] = [
        HeuristicId::Rfute,
        HeuristicId::Tpcs,
        HeuristicId::Dfsc,
        HeuristicId::Dtim,
        HeuristicId::Samcer,
        HeuristicId::Mt,
        HeuristicId::Tpms,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            HeuristicId::Tpcs => "TPCS",
            HeuristicId::Tprop => "TPROP",
            HeuristicId::Tpms => "TPMS",
            HeuristicId::Dfsc => "DFSC",
            HeuristicId::Slim => "SLIM",
            HeuristicId::Nt => "NT",
            HeuristicId::Mt => "MT",
            HeuristicId::Ar => "AR",
            HeuristicId::Samcer => "SAMCER",
            HeuristicId::Rmsscm => "RMSSCM",
            HeuristicId::Rfute => "RFUTE",
            HeuristicId::Dtim => "DTIM",
            HeuristicId::Dthp => "DTHP",
        }
    }

    /// NT is the only heuristic that subtracts.
    pub fn is_penalty(self) -> bool {
        self == HeuristicId::Nt
    }
}

impl fmt::Display for HeuristicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HeuristicId {
    type Err = ScoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let upper = s.trim().to_ascii_uppercase();
        let upper = if upper == "NTP" { "NT".to_string() } else { upper };
        HeuristicId::ALL.into_iter().find(|h| h.name() == upper).ok_or_else(|| ScoreError::UnknownHeuristic(s.into()))
    }
}

/// One step of the DFSC decay table: messages within `max_days` of the
/// decisive commit score `score`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DfscStep {
    pub max_days: i64,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HeuristicConfig {
    pub slim: f64,
    pub negation_penalty: f64,
    pub message_type: f64,
    pub samcer: f64,
    pub rmsscm: f64,
    pub rfute: f64,
    pub dtim: f64,
    pub dthp: f64,
    pub role_scores: RoleScores,
    /// Checked in order; the first step with `|days| <= max_days` wins.
    pub dfsc_table: Vec<DfscStep>,
    pub sweep_delta: BTreeMap<HeuristicId, f64>,
    /// Heuristics forced to contribute 0 (ablation).
    pub disabled: BTreeSet<HeuristicId>,
    /// States whose latest transition anchors DFSC.
    pub decisive_states: Vec<String>,
}

impl Default for HeuristicConfig {
    /// The optimized configuration: default bases with DFSC and TPMS
    /// raised by 0.6.
    fn default() -> Self {
        let mut cfg = HeuristicConfig::baseline();
        cfg.sweep_delta.insert(HeuristicId::Dfsc, 0.6);
        cfg.sweep_delta.insert(HeuristicId::Tpms, 0.6);
        cfg
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ScoreError {
    #[error("expected {HEURISTIC_COUNT} components, got {0}")]
    ComponentCount(usize),
    #[error("unknown heuristic {0:?}")]
    UnknownHeuristic(String),
    #[error("sweep delta {delta} for {heuristic} is not on the grid -0.3, 0, 0.3, 0.6, 0.9")]
    OffGridDelta { heuristic: HeuristicId, delta: f64 },
    #[error("invalid heuristic config: {0}")]
    Invalid(String),
}

impl HeuristicConfig {
    /// Initial values before any sweep: all deltas zero.
    pub fn baseline() -> Self {
        HeuristicConfig {
            slim: 0.9,
            negation_penalty: -0.8,
            message_type: 0.9,
            samcer: 0.9,
            rmsscm: 0.4,
            rfute: 0.9,
            dtim: 0.9,
            dthp: 0.9,
            role_scores: RoleScores::default(),
            dfsc_table: vec![
                DfscStep { max_days: 7, score: 0.9 },
                DfscStep { max_days: 30, score: 0.6 },
                DfscStep { max_days: 90, score: 0.3 },
            ],
            sweep_delta: BTreeMap::new(),
            disabled: BTreeSet::new(),
            decisive_states: vec!["accepted".into(), "rejected".into()],
        }
    }

    pub fn delta(&self, h: HeuristicId) -> f64 {
        self.sweep_delta.get(&h).copied().unwrap_or(0.0)
    }

    pub fn with_delta(mut self, h: HeuristicId, delta: f64) -> Self {
        self.sweep_delta.insert(h, delta);
        self
    }

    pub fn with_disabled<I: IntoIterator<Item = HeuristicId>>(mut self, hs: I) -> Self {
        self.disabled.extend(hs);
        self
    }

    pub fn validate(&self) -> Result<(), ScoreError> {
        for (&h, &d) in &self.sweep_delta {
            if !DELTA_GRID.iter().any(|g| (g - d).abs() < 1e-9) {
                return Err(ScoreError::OffGridDelta { heuristic: h, delta: d });
            }
        }
        if self.negation_penalty > 0.0 {
            return Err(ScoreError::Invalid("negation_penalty must not be positive".into()));
        }
        let positives = [self.slim, self.message_type, self.samcer, self.rmsscm, self.rfute, self.dtim, self.dthp];
        if positives.iter().any(|v| *v < 0.0) || self.role_scores.values().iter().any(|v| *v < 0.0) {
            return Err(ScoreError::Invalid("base scores must be non-negative".into()));
        }
        if self.dfsc_table.iter().any(|s| s.score < 0.0 || s.max_days < 0) {
            return Err(ScoreError::Invalid("dfsc table entries must be non-negative".into()));
        }
        if self.dfsc_table.windows(2).any(|w| w[0].max_days > w[1].max_days) {
            return Err(ScoreError::Invalid("dfsc table thresholds must ascend".into()));
        }
        Ok(())
    }

    /// DFSC base value for a signed day distance.
    pub fn dfsc_for_days(&self, days: Option<i64>) -> f64 {
        let Some(days) = days else { return 0.0 };
        let d = days.abs();
        self.dfsc_table.iter().find(|s| d <= s.max_days).map_or(0.0, |s| s.score)
    }

    /// Largest base value each heuristic can take under this config.
    pub fn max_bases(&self, lexicon: &Lexicon) -> [f64; HEURISTIC_COUNT] {
        let pattern = lexicon.max_pattern_score();
        let dfsc = self.dfsc_table.iter().map(|s| s.score).fold(0.0, f64::max);
        let ar = self.role_scores.values().into_iter().fold(0.0, f64::max);
        [
            pattern,
            pattern,
            pattern,
            dfsc,
            self.slim,
            0.0,
            self.message_type,
            ar,
            self.samcer,
            self.rmsscm,
            self.rfute,
            self.dtim,
            self.dthp,
        ]
    }

    /// Inclusive range every final score lies in.
    pub fn score_bounds(&self, lexicon: &Lexicon) -> (f64, f64) {
        let max = self.max_bases(lexicon);
        let mut hi = 0.0;
        for h in HeuristicId::ALL {
            if h.is_penalty() || self.disabled.contains(&h) || max[h.index()] == 0.0 {
                continue;
            }
            hi += (max[h.index()] + self.delta(h)).max(0.0);
        }
        let lo = if self.disabled.contains(&HeuristicId::Nt) || self.negation_penalty == 0.0 {
            0.0
        } else {
            (self.negation_penalty + self.delta(HeuristicId::Nt)).min(0.0)
        };
        (lo, hi)
    }
}

/// Final component values and their sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "VectorRepr", try_from = "VectorRepr")]
pub struct HeuristicVector {
    pub components: [f64; HEURISTIC_COUNT],
    pub fs: f64,
}

impl HeuristicVector {
    pub fn get(&self, h: HeuristicId) -> f64 {
        self.components[h.index()]
    }
}

#[derive(Serialize, Deserialize)]
struct VectorRepr {
    component: BTreeMap<HeuristicId, f64>,
    fs: f64,
}

impl From<HeuristicVector> for VectorRepr {
    fn from(v: HeuristicVector) -> Self {
        VectorRepr { component: HeuristicId::ALL.iter().map(|h| (*h, v.get(*h))).collect(), fs: v.fs }
    }
}

impl TryFrom<VectorRepr> for HeuristicVector {
    type Error = ScoreError;

    fn try_from(r: VectorRepr) -> Result<Self, Self::Error> {
        if r.component.len() != HEURISTIC_COUNT {
            return Err(ScoreError::ComponentCount(r.component.len()));
        }
        let mut components = [0.0; HEURISTIC_COUNT];
        for (h, v) in r.component {
            components[h.index()] = v;
        }
        Ok(HeuristicVector { components, fs: r.fs })
    }
}

/// Applies deltas to activated heuristics (base ≠ 0) and sums. Positive
/// heuristics are floored at 0 after the delta; NT is not. Disabled
/// heuristics contribute exactly 0.
pub fn final_score(bases: &[f64], config: &HeuristicConfig) -> Result<HeuristicVector, ScoreError> {
    if bases.len() != HEURISTIC_COUNT {
        return Err(ScoreError::ComponentCount(bases.len()));
    }
    let mut components = [0.0; HEURISTIC_COUNT];
    for h in HeuristicId::ALL {
        let base = bases[h.index()];
        if base == 0.0 || config.disabled.contains(&h) {
            continue;
        }
        let value = base + config.delta(h);
        components[h.index()] = if h.is_penalty() { value } else { value.max(0.0) };
    }
    let fs = components.iter().sum();
    Ok(HeuristicVector { components, fs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bases(pairs: &[(HeuristicId, f64)]) -> [f64; HEURISTIC_COUNT] {
        let mut b = [0.0; HEURISTIC_COUNT];
        for (h, v) in pairs {
            b[h.index()] = *v;
        }
        b
    }

    #[test]
    fn all_zero() {
        let v = final_score(&[0.0; 13], &HeuristicConfig::default()).unwrap();
        assert_eq!(v.fs, 0.0);
    }

    #[test]
    fn default_weights_sum() {
        let b = bases(&[(HeuristicId::Slim, 0.9), (HeuristicId::Ar, 0.9), (HeuristicId::Nt, -0.8)]);
        let v = final_score(&b, &HeuristicConfig::baseline()).unwrap();
        assert!((v.fs - 1.0).abs() < 1e-12);
    }

    #[test]
    fn optimized_deltas() {
        let b = bases(&[(HeuristicId::Dfsc, 0.9), (HeuristicId::Tpms, 0.6)]);
        let v = final_score(&b, &HeuristicConfig::default()).unwrap();
        assert!((v.fs - 2.7).abs() < 1e-12);
        assert!((v.get(HeuristicId::Dfsc) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn inactive_heuristics_ignore_deltas() {
        let cfg = HeuristicConfig::baseline().with_delta(HeuristicId::Rfute, 0.9);
        let v = final_score(&bases(&[(HeuristicId::Slim, 0.9)]), &cfg).unwrap();
        assert_eq!(v.get(HeuristicId::Rfute), 0.0);
        assert!((v.fs - 0.9).abs() < 1e-12);
    }

    #[test]
    fn negative_delta_floors_positive_heuristics_only() {
        let cfg = HeuristicConfig::baseline()
            .with_delta(HeuristicId::Tpcs, -0.3)
            .with_delta(HeuristicId::Nt, -0.3);
        let v = final_score(&bases(&[(HeuristicId::Tpcs, 0.3), (HeuristicId::Nt, -0.8)]), &cfg).unwrap();
        assert_eq!(v.get(HeuristicId::Tpcs), 0.0);
        assert!((v.get(HeuristicId::Nt) + 1.1).abs() < 1e-12);
    }

    #[test]
    fn disabled_contributes_zero() {
        let cfg = HeuristicConfig::default().with_disabled([HeuristicId::Slim]);
        let v = final_score(&bases(&[(HeuristicId::Slim, 0.9), (HeuristicId::Ar, 0.4)]), &cfg).unwrap();
        assert_eq!(v.get(HeuristicId::Slim), 0.0);
        assert!((v.fs - 0.4).abs() < 1e-12);
    }

    #[test]
    fn wrong_component_count() {
        assert_eq!(final_score(&[0.0; 12], &HeuristicConfig::default()), Err(ScoreError::ComponentCount(12)));
    }

    #[test]
    fn dfsc_decay_table() {
        let cfg = HeuristicConfig::default();
        assert_eq!(cfg.dfsc_for_days(Some(2)), 0.9);
        assert_eq!(cfg.dfsc_for_days(Some(-7)), 0.9);
        assert_eq!(cfg.dfsc_for_days(Some(8)), 0.6);
        assert_eq!(cfg.dfsc_for_days(Some(-30)), 0.6);
        assert_eq!(cfg.dfsc_for_days(Some(90)), 0.3);
        assert_eq!(cfg.dfsc_for_days(Some(400)), 0.0);
        assert_eq!(cfg.dfsc_for_days(None), 0.0);
    }

    #[test]
    fn config_validation() {
        assert!(HeuristicConfig::default().validate().is_ok());
        let bad = HeuristicConfig::default().with_delta(HeuristicId::Mt, 0.5);
        assert!(matches!(bad.validate(), Err(ScoreError::OffGridDelta { .. })));
        let json = serde_json::to_string(&HeuristicConfig::default()).unwrap();
        let back: HeuristicConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, HeuristicConfig::default());
        assert!(serde_json::from_str::<HeuristicConfig>("{\"bogus\": 1}").is_err());
    }

    #[test]
    fn ids_parse() {
        assert_eq!("rfute".parse::<HeuristicId>().unwrap(), HeuristicId::Rfute);
        assert_eq!("NTP".parse::<HeuristicId>().unwrap(), HeuristicId::Nt);
        assert!("XYZ".parse::<HeuristicId>().is_err());
        assert_eq!(serde_json::to_string(&HeuristicId::Samcer).unwrap(), "\"SAMCER\"");
    }

    #[test]
    fn vector_serializes_as_map() {
        let v = final_score(&bases(&[(HeuristicId::Slim, 0.9)]), &HeuristicConfig::default()).unwrap();
        let json = serde_json::to_value(v).unwrap();
        assert_eq!(json["component"]["SLIM"], 0.9);
        assert_eq!(json["component"].as_object().unwrap().len(), 13);
        let back: HeuristicVector = serde_json::from_value(json).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn bounds_with_default_config() {
        let lex = Lexicon::default();
        let (lo, hi) = HeuristicConfig::default().score_bounds(&lex);
        assert!((lo + 0.8).abs() < 1e-12);
        // 3×0.9 patterns + 0.6 TPMS delta + 1.5 DFSC + 0.9×7 fixed + 0.9 AR + 0.4 RMSSCM - 0.9 counted once
        let expected = 0.9 * 3.0 + 0.6 + 1.5 + 0.9 + 0.9 + 0.9 + 0.9 + 0.4 + 0.9 + 0.9 + 0.9;
        assert!((hi - expected).abs() < 1e-9, "{hi} vs {expected}");
    }
}
