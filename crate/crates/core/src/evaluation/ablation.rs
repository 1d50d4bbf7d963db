use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{top_k_counts, Cell, GroundTruthEntry, TABLE_CELLS};
use crate::heuristics::{HeuristicConfig, HeuristicId, ScoredCorpus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Influence {
    PositiveStrong,
    PositiveMedium,
    MixedStrong,
    MixedWeak,
    None,
}

impl Influence {
    pub fn label(self) -> &'static str {
        match self {
            Influence::PositiveStrong => "Positive (strong)",
            Influence::PositiveMedium => "Positive (medium)",
            Influence::MixedStrong => "Mixed (strong)",
            Influence::MixedWeak => "Mixed (weak)",
            Influence::None => "None",
        }
    }
}

/// Groups a heuristic by the change in top-5 counts when it is removed.
///
/// - Deltas of both signs, or only gains, are mixed: strong when some
///   |delta| ≥ 4, weak otherwise.
/// - Fewer than three non-zero cells is no influence.
/// - Only losses: strong when every |delta| ≥ 2, medium otherwise.
pub fn classify_influence(deltas: &[i64]) -> Influence {
    let nonzero = deltas.iter().filter(|d| **d != 0).count();
    if nonzero == 0 {
        return Influence::None;
    }
    let max_abs = deltas.iter().map(|d| d.abs()).max().unwrap_or(0);
    let any_gain = deltas.iter().any(|d| *d > 0);
    let any_loss = deltas.iter().any(|d| *d < 0);
    if any_gain {
        return if max_abs >= 4 { Influence::MixedStrong } else { Influence::MixedWeak };
    }
    debug_assert!(any_loss);
    if nonzero < 3 {
        Influence::None
    } else if deltas.iter().all(|d| d.abs() >= 2) {
        Influence::PositiveStrong
    } else {
        Influence::PositiveMedium
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationRow {
    pub heuristic: HeuristicId,
    /// Top-5 count without the heuristic minus the baseline, per cell.
    pub deltas: BTreeMap<Cell, i64>,
    pub influence: Influence,
    /// Σ over sentences of the heuristic's final component.
    pub activated_mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationTable {
    pub baseline: BTreeMap<Cell, usize>,
    pub rows: Vec<AblationRow>,
}

/// Total final contribution of `h` across the corpus under `config`.
pub fn activated_mass(scored: &ScoredCorpus, config: &HeuristicConfig, h: HeuristicId) -> f64 {
    scored.rescore(config).sentences().map(|s| s.vector.get(h)).sum()
}

/// Removes one heuristic at a time and records the change in top-5 counts.
pub fn ablation(scored: &ScoredCorpus, config: &HeuristicConfig, entries: &[GroundTruthEntry]) -> AblationTable {
    let base_scored = scored.rescore(config);
    let baseline = top_k_counts(&base_scored, entries, 5);
    let rows = HeuristicId::ALL
        .par_iter()
        .map(|&h| {
            let without = scored.rescore(&config.clone().with_disabled([h]));
            let counts = top_k_counts(&without, entries, 5);
            let deltas: BTreeMap<Cell, i64> =
                TABLE_CELLS.iter().map(|c| (*c, counts[c] as i64 - baseline[c] as i64)).collect();
            let ordered: Vec<i64> = TABLE_CELLS.iter().map(|c| deltas[c]).collect();
            AblationRow {
                heuristic: h,
                influence: classify_influence(&ordered),
                deltas,
                activated_mass: base_scored.sentences().map(|s| s.vector.get(h)).sum(),
            }
        })
        .collect();
    AblationTable { baseline, rows }
}

impl AblationTable {
    pub fn row(&self, h: HeuristicId) -> Option<&AblationRow> {
        self.rows.iter().find(|r| r.heuristic == h)
    }

    /// Heuristic, four delta columns, influence.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<(), csv::Error> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["heuristic".to_string()];
        header.extend(TABLE_CELLS.iter().map(|c| format!("{}_{}", c.scheme, c.state)));
        header.push("influence".into());
        out.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![r.heuristic.to_string()];
            rec.extend(TABLE_CELLS.iter().map(|c| r.deltas[c].to_string()));
            rec.push(r.influence.label().into());
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Reference ablation rows (SBS acc, SBS rej, MBS acc, MBS rej)
    /// and their reference groups.
    #[test]
    fn reference_rows_keep_their_groups() {
        let rows: [(&str, [i64; 4], Influence); 13] = [
            ("RFUTE", [-12, -5, -14, -9], Influence::PositiveStrong),
            ("TPCS", [-5, -3, -4, -2], Influence::PositiveStrong),
            ("DFSC", [-3, -1, -6, -6], Influence::PositiveMedium),
            ("DTIM", [-1, 0, -1, -2], Influence::PositiveMedium),
            ("SAMCER", [4, 2, -1, 0], Influence::MixedStrong),
            ("MT", [5, -2, -2, -1], Influence::MixedStrong),
            ("TPMS", [7, -2, -8, -1], Influence::MixedStrong),
            ("DTHP", [1, 0, -1, -1], Influence::MixedWeak),
            ("NT", [1, 0, 0, -1], Influence::MixedWeak),
            ("TPROP", [2, -1, -1, -3], Influence::MixedWeak),
            ("SLIM", [0, -2, 0, -1], Influence::None),
            ("AR", [0, -1, 0, 0], Influence::None),
            ("RMSSCM", [0, 0, 0, -1], Influence::None),
        ];
        for (name, deltas, want) in rows {
            assert_eq!(classify_influence(&deltas), want, "{name}");
        }
    }

    #[test]
    fn zero_is_none() {
        assert_eq!(classify_influence(&[0, 0, 0, 0]), Influence::None);
    }

    #[test]
    fn sweep_eligible_set_is_the_positive_and_mixed_strong_groups() {
        let mut eligible: Vec<&str> = ["RFUTE", "TPCS", "DFSC", "DTIM", "SAMCER", "MT", "TPMS"].to_vec();
        eligible.sort();
        let mut ours: Vec<&str> = HeuristicId::SWEEP_ELIGIBLE.iter().map(|h| h.name()).collect();
        ours.sort();
        assert_eq!(ours, eligible);
    }
}
