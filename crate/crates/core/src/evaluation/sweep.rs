use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{rank_match_table, rank_all, Cell, EvalError, GroundTruthEntry, TABLE_CELLS};
use crate::heuristics::{HeuristicConfig, HeuristicId, ScoredCorpus, DELTA_GRID};

/// Sum of top-k counts over the chosen cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Objective {
    pub k: usize,
    pub cells: Vec<Cell>,
}

impl Default for Objective {
    fn default() -> Self {
        Objective { k: 5, cells: TABLE_CELLS.to_vec() }
    }
}

impl Objective {
    pub fn evaluate(&self, scored: &ScoredCorpus, config: &HeuristicConfig, entries: &[GroundTruthEntry]) -> usize {
        let table = rank_match_table(entries, &rank_all(&scored.rescore(config)));
        self.cells.iter().map(|c| table.top_k(*c, self.k)).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub heuristic: HeuristicId,
    pub delta: f64,
    pub objective: usize,
    pub selected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub initial_objective: usize,
    pub best_objective: usize,
    pub best_config: HeuristicConfig,
    pub cells: Vec<SweepCell>,
}

/// Prefers the higher objective, then the smaller |delta|, then the
/// smaller delta.
fn better(a: (usize, f64), b: (usize, f64)) -> bool {
    a.0 > b.0 || (a.0 == b.0 && (a.1.abs() < b.1.abs() - 1e-12 || ((a.1.abs() - b.1.abs()).abs() <= 1e-12 && a.1 < b.1)))
}

/// Sweeps `heuristics` one at a time, in the given order, over the delta
/// grid while holding the others at their current values.
pub fn parameter_sweep(
    scored: &ScoredCorpus,
    config: &HeuristicConfig,
    entries: &[GroundTruthEntry],
    heuristics: &[HeuristicId],
    objective: &Objective,
    allow_ineligible: bool,
) -> Result<SweepReport, EvalError> {
    if !allow_ineligible {
        if let Some(h) = heuristics.iter().find(|h| !HeuristicId::SWEEP_ELIGIBLE.contains(h)) {
            return Err(EvalError::NotSweepEligible(*h));
        }
    }
    config.validate().map_err(|e| EvalError::Argument(e.to_string()))?;
    let initial_objective = objective.evaluate(scored, config, entries);
    let mut current = config.clone();
    let mut cells = Vec::new();
    for &h in heuristics {
        let results: Vec<(f64, usize)> = DELTA_GRID
            .par_iter()
            .map(|&d| (d, objective.evaluate(scored, &current.clone().with_delta(h, d), entries)))
            .collect();
        let mut best = results[0];
        for &r in &results[1..] {
            if better((r.1, r.0), (best.1, best.0)) {
                best = r;
            }
        }
        for &(d, o) in &results {
            cells.push(SweepCell { heuristic: h, delta: d, objective: o, selected: d == best.0 });
        }
        current = current.with_delta(h, best.0);
    }
    let best_objective = objective.evaluate(scored, &current, entries);
    Ok(SweepReport { initial_objective, best_objective, best_config: current, cells })
}

impl SweepReport {
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<(), csv::Error> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["heuristic", "delta", "objective", "selected"])?;
        for c in &self.cells {
            out.write_record([c.heuristic.to_string(), format!("{:+.1}", c.delta), c.objective.to_string(), c.selected.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tie_rule() {
        assert!(better((3, 0.0), (2, 0.9)));
        assert!(better((3, 0.0), (3, 0.3)));
        assert!(better((3, -0.3), (3, 0.3)));
        assert!(better((3, 0.3), (3, 0.6)));
        assert!(!better((3, 0.6), (3, 0.3)));
    }

    #[test]
    fn ineligible_rejected() {
        let err = parameter_sweep(&ScoredCorpus::default(), &HeuristicConfig::default(), &[], &[HeuristicId::Slim], &Objective::default(), false);
        assert!(matches!(err, Err(EvalError::NotSweepEligible(HeuristicId::Slim))));
        let ok = parameter_sweep(&ScoredCorpus::default(), &HeuristicConfig::default(), &[], &[HeuristicId::Slim], &Objective::default(), true);
        assert!(ok.is_ok());
    }

    #[test]
    fn flat_objective_keeps_zero() {
        let r = parameter_sweep(&ScoredCorpus::default(), &HeuristicConfig::baseline(), &[], &[HeuristicId::Rfute], &Objective::default(), false)
            .unwrap();
        assert_eq!(r.best_config.delta(HeuristicId::Rfute), 0.0);
        assert_eq!(r.cells.len(), 5);
        assert_eq!(r.cells.iter().filter(|c| c.selected).count(), 1);
    }
}
