//! Base values per heuristic, grouped the way the heuristics are described:
//! term patterns, proximity, roles, responses and special terms.

use super::{HeuristicConfig, HeuristicId, SentenceContext, HEURISTIC_COUNT};
use crate::analysis::Lexicon;
use crate::ingest::MessageType;

/// (TPCS, TPROP, TPMS)
pub fn term_category(ctx: &SentenceContext, lexicon: &Lexicon) -> (f64, f64, f64) {
    (
        lexicon.best_pattern_score(&ctx.sentence_types),
        lexicon.best_pattern_score(&ctx.remainder_types),
        lexicon.best_pattern_score(&ctx.message.subject_types),
    )
}

/// (DFSC, SLIM, NT)
pub fn proximity_category(ctx: &SentenceContext, config: &HeuristicConfig, lexicon: &Lexicon) -> (f64, f64, f64) {
    let dfsc = config.dfsc_for_days(ctx.message.days_from_decisive_commit);
    let slim = if ctx.is_first_or_last_paragraph() { config.slim } else { 0.0 };
    let nt = if lexicon.detect_negation(ctx.text) { config.negation_penalty } else { 0.0 };
    (dfsc, slim, nt)
}

/// (MT, AR, SAMCER)
pub fn role_category(ctx: &SentenceContext, config: &HeuristicConfig) -> (f64, f64, f64) {
    let mt = match ctx.message.message_type {
        MessageType::PepSummary | MessageType::StateCommit => config.message_type,
        MessageType::Ordinary => 0.0,
    };
    let ar = config.role_scores.score(ctx.message.author_role);
    let samcer = if ctx.message.samcer_class.is_some() { config.samcer } else { 0.0 };
    (mt, ar, samcer)
}

/// (RMSSCM, RFUTE)
pub fn response_category(ctx: &SentenceContext, config: &HeuristicConfig, lexicon: &Lexicon) -> (f64, f64) {
    let rmsscm = if ctx.message.shares_request_subject { config.rmsscm } else { 0.0 };
    let rfute = if lexicon.has_decision_triple(ctx.text) { config.rfute } else { 0.0 };
    (rmsscm, rfute)
}

/// (DTIM, DTHP)
pub fn special_category(ctx: &SentenceContext, config: &HeuristicConfig, lexicon: &Lexicon) -> (f64, f64) {
    let dtim = if lexicon.contains_decision_heading(ctx.text) { config.dtim } else { 0.0 };
    let dthp = if ctx.header.is_some_and(|h| lexicon.contains_decision_heading(h)) { config.dthp } else { 0.0 };
    (dtim, dthp)
}

/// All thirteen base values in [`HeuristicId::ALL`] order.
pub fn base_vector(ctx: &SentenceContext, config: &HeuristicConfig, lexicon: &Lexicon) -> [f64; HEURISTIC_COUNT] {
    let (tpcs, tprop, tpms) = term_category(ctx, lexicon);
    let (dfsc, slim, nt) = proximity_category(ctx, config, lexicon);
    let (mt, ar, samcer) = role_category(ctx, config);
    let (rmsscm, rfute) = response_category(ctx, config, lexicon);
    let (dtim, dthp) = special_category(ctx, config, lexicon);
    let mut b = [0.0; HEURISTIC_COUNT];
    for (h, v) in [
        (HeuristicId::Tpcs, tpcs),
        (HeuristicId::Tprop, tprop),
        (HeuristicId::Tpms, tpms),
        (HeuristicId::Dfsc, dfsc),
        (HeuristicId::Slim, slim),
        (HeuristicId::Nt, nt),
        (HeuristicId::Mt, mt),
        (HeuristicId::Ar, ar),
        (HeuristicId::Samcer, samcer),
        (HeuristicId::Rmsscm, rmsscm),
        (HeuristicId::Rfute, rfute),
        (HeuristicId::Dtim, dtim),
        (HeuristicId::Dthp, dthp),
    ] {
        b[h.index()] = v;
    }
    b
}
