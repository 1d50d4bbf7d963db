use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{Cell, EvalError, FinalState, GroundTruthEntry};
use crate::ranking::{RankedList, Scheme};
use crate::text::normalize_for_match;

/// Cutoffs of the rank-match table.
pub const TABLE_KS: [usize; 10] = [1, 2, 3, 4, 5, 10, 15, 30, 50, 100];

/// Default NDCG cutoffs.
pub const NDCG_KS: [usize; 6] = [5, 10, 15, 30, 50, 100];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchRank {
    Rank(usize),
    NoMatch,
}

impl MatchRank {
    pub fn rank(self) -> Option<usize> {
        match self {
            MatchRank::Rank(r) => Some(r),
            MatchRank::NoMatch => None,
        }
    }

    pub fn within(self, k: usize) -> bool {
        self.rank().is_some_and(|r| r <= k)
    }
}

/// SBS: the entry with the same message id and normalized text. MBS: the
/// entry of the containing message.
pub fn match_rank(entry: &GroundTruthEntry, list: &RankedList) -> MatchRank {
    if list.pep != entry.pep {
        return MatchRank::NoMatch;
    }
    let found = match list.scheme {
        Scheme::Sbs => {
            let key = entry.match_key();
            list.entries
                .iter()
                .find(|e| e.message_id == entry.message_id && e.text.as_deref().is_some_and(|t| normalize_for_match(t) == key))
        }
        Scheme::Mbs => list.entries.iter().find(|e| e.message_id == entry.message_id),
    };
    found.map_or(MatchRank::NoMatch, |e| MatchRank::Rank(e.rank))
}

/// Cumulative counts for one (scheme, state) column pair.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RankMatchColumn {
    /// Count with rank ≤ k, aligned with [`TABLE_KS`].
    pub cumulative: Vec<usize>,
    /// Matched beyond the last cutoff.
    pub beyond: usize,
    pub no_match: usize,
    pub total: usize,
}

impl RankMatchColumn {
    pub fn from_ranks(ranks: &[MatchRank]) -> Self {
        let last = *TABLE_KS.last().expect("non-empty");
        RankMatchColumn {
            cumulative: TABLE_KS.iter().map(|&k| ranks.iter().filter(|r| r.within(k)).count()).collect(),
            beyond: ranks.iter().filter(|r| r.rank().is_some_and(|x| x > last)).count(),
            no_match: ranks.iter().filter(|r| **r == MatchRank::NoMatch).count(),
            total: ranks.len(),
        }
    }

    pub fn count_at(&self, k: usize) -> Option<usize> {
        TABLE_KS.iter().position(|&x| x == k).map(|i| self.cumulative[i])
    }
}

/// count/total·100 rounded to one decimal; 0 for an empty column.
pub fn percentage(count: usize, total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    (count as f64 * 1000.0 / total as f64).round() / 10.0
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RankMatchTable {
    pub columns: BTreeMap<Cell, RankMatchColumn>,
    /// Per ground-truth entry (in input order): its rank under each scheme.
    pub matches: Vec<(GroundTruthEntry, BTreeMap<Scheme, MatchRank>)>,
}

/// Column order of the CSV: SBS accepted, SBS rejected, MBS accepted, MBS rejected.
pub const TABLE_CELLS: [Cell; 4] = [
    Cell { scheme: Scheme::Sbs, state: FinalState::Accepted },
    Cell { scheme: Scheme::Sbs, state: FinalState::Rejected },
    Cell { scheme: Scheme::Mbs, state: FinalState::Accepted },
    Cell { scheme: Scheme::Mbs, state: FinalState::Rejected },
];

pub fn rank_match_table(entries: &[GroundTruthEntry], rankings: &BTreeMap<(u32, Scheme), RankedList>) -> RankMatchTable {
    let mut matches = Vec::with_capacity(entries.len());
    for e in entries {
        let ranks: BTreeMap<Scheme, MatchRank> = Scheme::BOTH
            .iter()
            .map(|&s| (s, rankings.get(&(e.pep, s)).map_or(MatchRank::NoMatch, |l| match_rank(e, l))))
            .collect();
        matches.push((e.clone(), ranks));
    }
    let columns = TABLE_CELLS
        .iter()
        .map(|&cell| {
            let ranks: Vec<MatchRank> =
                matches.iter().filter(|(e, _)| e.final_state == cell.state).map(|(_, r)| r[&cell.scheme]).collect();
            (cell, RankMatchColumn::from_ranks(&ranks))
        })
        .collect();
    RankMatchTable { columns, matches }
}

impl RankMatchTable {
    pub fn top_k(&self, cell: Cell, k: usize) -> usize {
        self.matches
            .iter()
            .filter(|(e, r)| e.final_state == cell.state && r[&cell.scheme].within(k))
            .count()
    }

    /// Rows `Top 1` … `Top 100`, `Top 100+`, `No match`, `Total`; count and
    /// percentage per column pair.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<(), csv::Error> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["ranking".to_string()];
        for c in TABLE_CELLS {
            header.push(format!("{}_{}_cc", c.scheme, c.state));
            header.push(format!("{}_{}_pct", c.scheme, c.state));
        }
        out.write_record(&header)?;
        let col = |c: &Cell| self.columns.get(c).cloned().unwrap_or_default();
        let mut row = |label: String, value: &dyn Fn(&RankMatchColumn) -> Option<usize>| -> Result<(), csv::Error> {
            let mut rec = vec![label];
            for c in &TABLE_CELLS {
                let column = col(c);
                match value(&column) {
                    Some(n) => {
                        rec.push(n.to_string());
                        rec.push(format!("{:.1}", percentage(n, column.total)));
                    }
                    None => {
                        rec.push(column.total.to_string());
                        rec.push(String::new());
                    }
                }
            }
            out.write_record(&rec)
        };
        for (i, k) in TABLE_KS.iter().enumerate() {
            row(format!("Top {k}"), &|c| Some(c.cumulative.get(i).copied().unwrap_or(0)))?;
        }
        row(format!("Top {}+", TABLE_KS[TABLE_KS.len() - 1]), &|c| Some(c.beyond))?;
        row("No match".into(), &|c| Some(c.no_match))?;
        row("Total".into(), &|_| None)?;
        out.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NdcgRow {
    pub k: usize,
    pub dcg: f64,
    pub idcg: f64,
    pub ndcg: f64,
    /// True when there is nothing relevant (IDCG = 0); `ndcg` is then 0.
    pub undefined: bool,
}

/// Discount for 1-based position `i`.
pub fn discount(i: usize) -> f64 {
    1.0 / ((i + 1) as f64).log2()
}

/// `relevance[i]` is the binary relevance of rank i+1; `total_relevant`
/// counts every relevant item, ranked or not.
pub fn ndcg_at_k(relevance: &[bool], total_relevant: usize, k: usize) -> Result<NdcgRow, EvalError> {
    if k < 1 {
        return Err(EvalError::Argument("k must be at least 1".into()));
    }
    let dcg: f64 = relevance.iter().take(k).enumerate().filter(|(_, r)| **r).map(|(i, _)| discount(i + 1)).sum();
    let idcg: f64 = (1..=total_relevant.min(k)).map(discount).sum();
    if idcg == 0.0 {
        return Ok(NdcgRow { k, dcg, idcg, ndcg: 0.0, undefined: true });
    }
    Ok(NdcgRow { k, dcg, idcg, ndcg: dcg / idcg, undefined: false })
}

/// Relevance vector of a ranked list against the ground-truth entries of
/// its proposal, plus the number of relevant items (sentences for SBS,
/// distinct messages for MBS).
pub fn relevance(list: &RankedList, entries: &[&GroundTruthEntry]) -> (Vec<bool>, usize) {
    match list.scheme {
        Scheme::Sbs => {
            let keys: BTreeSet<(String, String)> =
                entries.iter().map(|e| (e.message_id.clone(), e.match_key())).collect();
            let rel = list
                .entries
                .iter()
                .map(|x| keys.contains(&(x.message_id.clone(), x.text.as_deref().map(normalize_for_match).unwrap_or_default())))
                .collect();
            (rel, keys.len())
        }
        Scheme::Mbs => {
            let ids: BTreeSet<&str> = entries.iter().map(|e| e.message_id.as_str()).collect();
            (list.entries.iter().map(|x| ids.contains(x.message_id.as_str())).collect(), ids.len())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PepNdcg {
    pub pep: u32,
    pub cell: Cell,
    pub rows: Vec<NdcgRow>,
}

/// NDCG rows per (proposal, scheme) for every proposal with ground truth.
pub fn ndcg_per_pep(
    entries: &[GroundTruthEntry],
    rankings: &BTreeMap<(u32, Scheme), RankedList>,
    ks: &[usize],
) -> Result<Vec<PepNdcg>, EvalError> {
    let mut by_pep: BTreeMap<(u32, FinalState), Vec<&GroundTruthEntry>> = BTreeMap::new();
    for e in entries {
        by_pep.entry((e.pep, e.final_state)).or_default().push(e);
    }
    let mut out = Vec::new();
    for ((pep, state), group) in by_pep {
        for scheme in Scheme::BOTH {
            let empty = RankedList { pep, scheme, entries: Vec::new() };
            let list = rankings.get(&(pep, scheme)).unwrap_or(&empty);
            let (rel, total) = relevance(list, &group);
            let rows = ks.iter().map(|&k| ndcg_at_k(&rel, total, k)).collect::<Result<_, _>>()?;
            out.push(PepNdcg { pep, cell: Cell { scheme, state }, rows });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NdcgCurvePoint {
    pub k: usize,
    pub mean_ndcg: f64,
    /// Proposals averaged (undefined rows excluded).
    pub proposals: usize,
}

/// Unweighted mean over proposals in `cell` whose NDCG is defined.
pub fn average_ndcg(per_pep: &[PepNdcg], cell: Cell) -> Vec<NdcgCurvePoint> {
    let rows: Vec<&PepNdcg> = per_pep.iter().filter(|p| p.cell == cell).collect();
    let Some(first) = rows.first() else { return Vec::new() };
    (0..first.rows.len())
        .map(|i| {
            let defined: Vec<f64> = rows.iter().map(|p| p.rows[i]).filter(|r| !r.undefined).map(|r| r.ndcg).collect();
            let mean = if defined.is_empty() { 0.0 } else { defined.iter().sum::<f64>() / defined.len() as f64 };
            NdcgCurvePoint { k: first.rows[i].k, mean_ndcg: mean, proposals: defined.len() }
        })
        .collect()
}

/// Series CSV: k, then one column per (scheme, state).
pub fn write_ndcg_csv<W: std::io::Write>(w: W, per_pep: &[PepNdcg]) -> Result<(), csv::Error> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["k".to_string()];
    let curves: Vec<Vec<NdcgCurvePoint>> = TABLE_CELLS.iter().map(|c| average_ndcg(per_pep, *c)).collect();
    for c in TABLE_CELLS {
        header.push(format!("{}_{}", c.scheme, c.state));
    }
    out.write_record(&header)?;
    let ks: Vec<usize> = per_pep.first().map(|p| p.rows.iter().map(|r| r.k).collect()).unwrap_or_default();
    for (i, k) in ks.iter().enumerate() {
        let mut rec = vec![k.to_string()];
        for curve in &curves {
            rec.push(curve.get(i).map_or(String::new(), |p| format!("{:.4}", p.mean_ndcg)));
        }
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::evaluation::RationaleLabel;
    use crate::ranking::RankedEntry;

    fn gt(pep: u32, state: FinalState, msg: &str, text: &str) -> GroundTruthEntry {
        GroundTruthEntry { pep, final_state: state, message_id: msg.into(), sentence_text: text.into(), label: RationaleLabel::Consensus }
    }

    fn sbs(pep: u32, items: &[(&str, &str)]) -> RankedList {
        RankedList {
            pep,
            scheme: Scheme::Sbs,
            entries: items
                .iter()
                .enumerate()
                .map(|(i, (m, t))| RankedEntry {
                    rank: i + 1,
                    score: 10.0 - i as f64,
                    message_id: (*m).into(),
                    sentence_index: Some(i),
                    text: Some((*t).into()),
                    members: vec![],
                })
                .collect(),
        }
    }

    #[test]
    fn sbs_match_uses_normalized_text() {
        let l = sbs(1, &[("a", "Consensus was  reached."), ("b", "Other.")]);
        assert_eq!(match_rank(&gt(1, FinalState::Accepted, "a", "Consensus was reached"), &l), MatchRank::Rank(1));
        assert_eq!(match_rank(&gt(1, FinalState::Accepted, "b", "Consensus was reached"), &l), MatchRank::NoMatch);
        assert_eq!(match_rank(&gt(2, FinalState::Accepted, "a", "Consensus was reached"), &l), MatchRank::NoMatch);
    }

    #[test]
    fn counting() {
        let col = RankMatchColumn::from_ranks(&[MatchRank::Rank(1), MatchRank::Rank(7)]);
        assert_eq!(col.count_at(1), Some(1));
        assert_eq!(col.count_at(5), Some(1));
        assert_eq!(col.count_at(10), Some(2));
        let empty = RankMatchColumn::from_ranks(&[]);
        assert!(empty.cumulative.iter().all(|c| *c == 0));
        assert_eq!(empty.total, 0);
        let col = RankMatchColumn::from_ranks(&[MatchRank::Rank(150), MatchRank::NoMatch, MatchRank::Rank(100)]);
        assert_eq!((col.count_at(100), col.beyond, col.no_match, col.total), (Some(1), 1, 1, 3));
    }

    /// Reference rank-match counts and percentages (columns: SBS acc,
    /// SBS rej, MBS acc, MBS rej). Ten reference percentages differ from
    /// their own counts by 0.1 in either direction, so no single rounding
    /// rule reproduces all of them; every cell must be within 0.1 and the
    /// remaining 34 exact.
    #[test]
    fn reference_percentages() {
        let totals = [179, 121, 179, 121];
        let rows: [[(usize, f64); 4]; 11] = [
            [(28, 15.7), (36, 29.8), (36, 20.2), (57, 47.1)],
            [(30, 16.7), (42, 34.7), (67, 37.4), (68, 56.2)],
            [(45, 25.1), (49, 40.5), (85, 47.5), (79, 65.3)],
            [(52, 29.1), (56, 46.3), (103, 57.6), (85, 70.2)],
            [(71, 39.7), (58, 48.0), (110, 61.5), (90, 74.4)],
            [(94, 52.5), (72, 59.5), (133, 74.3), (104, 86.0)],
            [(110, 61.4), (82, 67.8), (147, 82.1), (110, 91.0)],
            [(131, 73.2), (94, 77.7), (161, 90.0), (111, 91.8)],
            [(139, 77.7), (98, 81.0), (170, 95.0), (111, 91.8)],
            [(158, 88.3), (99, 81.8), (175, 97.8), (112, 92.6)],
            [(21, 11.7), (22, 18.2), (4, 2.2), (9, 7.4)],
        ];
        let mut exact = 0;
        for row in rows {
            for (i, (count, pct)) in row.into_iter().enumerate() {
                let ours = percentage(count, totals[i]);
                assert!((ours - pct).abs() <= 0.1 + 1e-9, "{count}/{}", totals[i]);
                exact += usize::from(ours == pct);
            }
        }
        assert_eq!(exact, 34);
    }

    #[test]
    fn ndcg_examples() {
        let r = ndcg_at_k(&[true], 1, 5).unwrap();
        assert_eq!(r.ndcg, 1.0);
        let r = ndcg_at_k(&[false, true], 1, 5).unwrap();
        assert!((r.ndcg - 0.6309).abs() < 1e-4);
        let r = ndcg_at_k(&[false, false], 0, 5).unwrap();
        assert!(r.undefined);
        assert_eq!(r.ndcg, 0.0);
        assert!(ndcg_at_k(&[true], 1, 0).is_err());
    }

    #[test]
    fn unranked_relevant_items_count_in_ideal() {
        let r = ndcg_at_k(&[true, false], 2, 5).unwrap();
        assert!((r.ndcg - 1.0 / (1.0 + 1.0 / 3f64.log2())).abs() < 1e-12);
    }

    #[test]
    fn averages() {
        let cell = Cell { scheme: Scheme::Sbs, state: FinalState::Accepted };
        let row = |n: f64, undefined| NdcgRow { k: 5, dcg: n, idcg: 1.0, ndcg: n, undefined };
        let per = vec![
            PepNdcg { pep: 1, cell, rows: vec![row(1.0, false)] },
            PepNdcg { pep: 2, cell, rows: vec![row(0.0, false)] },
            PepNdcg { pep: 3, cell, rows: vec![row(0.0, true)] },
        ];
        let avg = average_ndcg(&per, cell);
        assert_eq!(avg[0].mean_ndcg, 0.5);
        assert_eq!(avg[0].proposals, 2);
        assert_eq!(average_ndcg(&per[..1], cell)[0].mean_ndcg, 1.0);
    }

    #[test]
    fn table_csv_layout() {
        let entries = vec![gt(1, FinalState::Accepted, "a", "x"), gt(1, FinalState::Accepted, "zz", "none")];
        let mut rankings = BTreeMap::new();
        rankings.insert((1, Scheme::Sbs), sbs(1, &[("a", "x")]));
        let t = rank_match_table(&entries, &rankings);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 1 + 10 + 3);
        assert_eq!(lines[1], "Top 1,1,50.0,0,0.0,0,0.0,0,0.0");
        assert_eq!(lines[12], "No match,1,50.0,0,0.0,2,100.0,0,0.0");
        assert_eq!(lines[13], "Total,2,,0,,2,,0,");
    }

    proptest! {
        #[test]
        fn ndcg_bounded_and_perfect(rel in prop::collection::vec(any::<bool>(), 0..40), extra in 0usize..3, k in 1usize..50) {
            let total = rel.iter().filter(|r| **r).count() + extra;
            let r = ndcg_at_k(&rel, total, k).unwrap();
            prop_assert!((0.0..=1.0 + 1e-12).contains(&r.ndcg));
            let mut ideal = rel.clone();
            ideal.sort_by(|a, b| b.cmp(a));
            if extra == 0 && total > 0 {
                prop_assert_eq!(ndcg_at_k(&ideal, total, k).unwrap().ndcg, 1.0);
            }
        }
    }
}
