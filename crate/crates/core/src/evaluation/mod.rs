//! Comparison of rankings with ground truth: rank-match tables, NDCG@k,
//! heuristic ablation and the coordinate parameter sweep.

mod ablation;
mod ground_truth;
mod metrics;
mod sweep;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::heuristics::{HeuristicId, ScoredCorpus};
use crate::ranking::{rank, RankedList, Scheme};

pub use ablation::{ablation, activated_mass, classify_influence, AblationRow, AblationTable, Influence};
pub use ground_truth::{
    load_ground_truth, load_ground_truth_csv, load_ground_truth_json, write_ground_truth_csv, GroundTruth,
    GroundTruthEntry, RationaleLabel, RowError,
};
pub use metrics::{
    average_ndcg, discount, match_rank, ndcg_at_k, ndcg_per_pep, percentage, rank_match_table, relevance,
    write_ndcg_csv, MatchRank, NdcgCurvePoint, NdcgRow, PepNdcg, RankMatchColumn, RankMatchTable, NDCG_KS,
    TABLE_CELLS, TABLE_KS,
};
pub use sweep::{parameter_sweep, Objective, SweepCell, SweepReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FinalState {
    Accepted,
    Rejected,
}

impl FinalState {
    pub const BOTH: [FinalState; 2] = [FinalState::Accepted, FinalState::Rejected];

    pub fn as_str(self) -> &'static str {
        match self {
            FinalState::Accepted => "accepted",
            FinalState::Rejected => "rejected",
        }
    }
}

impl fmt::Display for FinalState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FinalState {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "accepted" => Ok(FinalState::Accepted),
            "rejected" => Ok(FinalState::Rejected),
            other => Err(format!("final state {other:?} is not accepted or rejected")),
        }
    }
}

/// One (scheme, final state) column of the evaluation tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub scheme: Scheme,
    pub state: FinalState,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.scheme, self.state)
    }
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("{0}")]
    Argument(String),
    #[error("{0}")]
    Input(String),
    #[error("ground truth rejected: {invalid} of {total} rows invalid")]
    GroundTruthRejected { invalid: usize, total: usize, errors: Vec<RowError> },
    #[error("{0} is not sweep-eligible")]
    NotSweepEligible(HeuristicId),
}

/// SBS and MBS lists for every proposal of a scored corpus.
pub fn rank_all(scored: &ScoredCorpus) -> BTreeMap<(u32, Scheme), RankedList> {
    let mut out = BTreeMap::new();
    for (&n, p) in &scored.peps {
        for s in Scheme::BOTH {
            out.insert((n, s), rank(n, &p.sentences, s));
        }
    }
    out
}

/// Top-k counts per cell.
pub fn top_k_counts(scored: &ScoredCorpus, entries: &[GroundTruthEntry], k: usize) -> BTreeMap<Cell, usize> {
    let table = rank_match_table(entries, &rank_all(scored));
    TABLE_CELLS.iter().map(|c| (*c, table.top_k(*c, k))).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub table: RankMatchTable,
    pub ndcg: Vec<PepNdcg>,
}

pub fn evaluate(scored: &ScoredCorpus, entries: &[GroundTruthEntry], ndcg_ks: &[usize]) -> Result<Evaluation, EvalError> {
    let rankings = rank_all(scored);
    Ok(Evaluation { table: rank_match_table(entries, &rankings), ndcg: ndcg_per_pep(entries, &rankings, ndcg_ks)? })
}
