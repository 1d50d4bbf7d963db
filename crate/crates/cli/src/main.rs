//! `rminer`: ingest archives, score and rank candidate rationale sentences,
//! evaluate against ground truth and render static reports.
//!
//! Exit codes: 0 success, 1 evaluation finished but found problems in the
//! ground truth, 2 usage or input error.

mod config;
mod report;

use std::collections::BTreeSet;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rminer_core::evaluation::{
    ablation, evaluate, load_ground_truth, parameter_sweep, FinalState, GroundTruth,
    Objective, NDCG_KS,
};
use rminer_core::ingest::{read_corpus, write_corpus};
use rminer_core::pipeline::{from_corpus, ingest_dir, messages_per_list, to_corpus};
use rminer_core::ranking::{rank, write_ranked_jsonl, Scheme};
use rminer_core::synth::{generate, SynthSpec};
use rminer_core::{score_corpus, HeuristicId, LinkedCorpus, ScoredCorpus};

use config::{Loaded, PipelineConfig};

#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn contract(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

#[derive(Parser)]
#[command(name = "rminer", version, about = "Mine and rank decision rationale from proposal mailing lists")]
struct Cli {
    /// Pipeline config JSON.
    #[arg(long, global = true, env = "RMINER_CONFIG")]
    config: Option<PathBuf>,
    /// Lexicon JSON, overriding the config and the built-in lexicon.
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Seed for synthetic generation.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Sbs,
    Mbs,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum StateArg {
    Accepted,
    Rejected,
}

#[derive(Subcommand)]
enum Command {
    /// Parse archives/, peps/ and commits.csv under INPUT into a corpus file.
    Ingest { input: PathBuf },
    /// Score every sentence and write ranked lists.
    ScoreRank {
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Restrict to these proposals (repeatable).
        #[arg(long)]
        pep: Vec<u32>,
        #[arg(long, value_enum, default_value = "both")]
        scheme: SchemeArg,
        /// Restrict to proposals in this final state.
        #[arg(long, value_enum)]
        state: Option<StateArg>,
        /// Keep only the first K entries per list.
        #[arg(long)]
        top: Option<usize>,
    },
    /// Rank-match table and NDCG series against ground truth.
    Evaluate {
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        ground_truth: PathBuf,
        /// NDCG cutoffs, comma separated (default 5,10,15,30,50,100).
        #[arg(long, value_delimiter = ',')]
        k: Vec<usize>,
    },
    /// Remove one heuristic at a time and report top-5 changes.
    Ablate {
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        ground_truth: PathBuf,
    },
    /// Coordinate sweep of heuristic deltas over the grid.
    Sweep {
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        ground_truth: PathBuf,
        /// Heuristics to sweep, in order (default: the seven eligible ones).
        #[arg(long, value_delimiter = ',')]
        heuristics: Vec<HeuristicId>,
        #[arg(long)]
        allow_ineligible: bool,
        /// Top-k cutoff of the objective.
        #[arg(long, default_value_t = 5)]
        k: usize,
    },
    /// Generate a synthetic corpus into the output directory.
    Synth {
        /// Synth spec JSON.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        n_peps: Option<usize>,
        #[arg(long)]
        adversarial: bool,
    },
    /// Write static HTML pages under OUT/report.
    Report {
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        ground_truth: Option<PathBuf>,
        /// Only these proposals (repeatable).
        #[arg(long)]
        pep: Vec<u32>,
        /// Rows per ranking table.
        #[arg(long, default_value_t = 20)]
        top: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("rminer: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Failure + '_ {
    move |e| Failure::input(format!("{}: {e}", path.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(io_err(parent))?;
    }
    File::create(path).map(BufWriter::new).map_err(io_err(path))
}

fn write_with<E: std::fmt::Display>(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> Result<(), E>) -> Result<(), Failure> {
    let mut w = create(path)?;
    f(&mut w).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    w.flush().map_err(io_err(path))
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::input(format!("--jobs: {e}")))?;
    }
    let loaded = config::load(cli.config.as_deref(), cli.lexicon.as_deref())?;
    let out = cli.out.as_path();
    let corpus_path = |p: &Option<PathBuf>| p.clone().unwrap_or_else(|| out.join("corpus.jsonl"));
    match &cli.command {
        Command::Ingest { input } => ingest(input, &loaded.config, out),
        Command::ScoreRank { corpus, pep, scheme, state, top } => {
            score_rank(&loaded, &corpus_path(corpus), pep, *scheme, *state, *top, out)
        }
        Command::Evaluate { corpus, ground_truth, k } => {
            let (_, scored) = scored(&loaded, &corpus_path(corpus))?;
            let truth = truth(ground_truth)?;
            let ks = if k.is_empty() { NDCG_KS.to_vec() } else { k.clone() };
            let eval = evaluate(&scored, &truth.entries, &ks).map_err(|e| Failure::input(e.to_string()))?;
            write_with(&out.join("rank_match.csv"), |w| eval.table.write_csv(w))?;
            write_with(&out.join("ndcg.csv"), |w| rminer_core::evaluation::write_ndcg_csv(w, &eval.ndcg))?;
            for cell in rminer_core::evaluation::TABLE_CELLS {
                println!("{} {}: top-5 {} of {}", cell.scheme, cell.state.as_str(), eval.table.top_k(cell, 5), eval.table.columns[&cell].total);
            }
            truth_problems(&truth, &scored)
        }
        Command::Ablate { corpus, ground_truth } => {
            let (_, scored) = scored(&loaded, &corpus_path(corpus))?;
            let truth = truth(ground_truth)?;
            let table = ablation(&scored, &loaded.config.heuristics, &truth.entries);
            write_with(&out.join("ablation.csv"), |w| table.write_csv(w))?;
            for row in &table.rows {
                println!("{:<7} {:?} {}", row.heuristic.to_string(), row.deltas.values().collect::<Vec<_>>(), row.influence.label());
            }
            truth_problems(&truth, &scored)
        }
        Command::Sweep { corpus, ground_truth, heuristics, allow_ineligible, k } => {
            let (_, scored) = scored(&loaded, &corpus_path(corpus))?;
            let truth = truth(ground_truth)?;
            let order = if heuristics.is_empty() { HeuristicId::SWEEP_ELIGIBLE.to_vec() } else { heuristics.clone() };
            let objective = Objective { k: *k, ..Objective::default() };
            let report = parameter_sweep(&scored, &loaded.config.heuristics, &truth.entries, &order, &objective, *allow_ineligible)
                .map_err(|e| Failure::input(e.to_string()))?;
            write_with(&out.join("sweep.csv"), |w| report.write_csv(w))?;
            let best = PipelineConfig { heuristics: report.best_config.clone(), ..loaded.config.clone() };
            write_with(&out.join("best_config.json"), |w| {
                serde_json::to_writer_pretty(&mut *w, &best)?;
                writeln!(w).map_err(serde_json::Error::io)
            })?;
            println!("objective {} -> {}", report.initial_objective, report.best_objective);
            for (h, d) in &report.best_config.sweep_delta {
                println!("{h} {d:+.1}");
            }
            truth_problems(&truth, &scored)
        }
        Command::Synth { spec, n_peps, adversarial } => {
            let mut spec = match spec {
                Some(p) => serde_json::from_str::<SynthSpec>(&fs::read_to_string(p).map_err(io_err(p))?)
                    .map_err(|e| Failure::input(format!("{}: {e}", p.display())))?,
                None => SynthSpec::default(),
            };
            if let Some(s) = cli.seed {
                spec.seed = s;
            }
            if let Some(n) = n_peps {
                spec.n_peps = *n;
            }
            spec.adversarial |= *adversarial;
            let corpus = generate(&spec, &loaded.lexicon).map_err(|e| Failure::input(e.to_string()))?;
            corpus.write_to_dir(out).map_err(io_err(out))?;
            println!("{} proposals, {} planted sentences written to {}", corpus.pep_docs.len(), corpus.planted.len(), out.display());
            Ok(())
        }
        Command::Report { corpus, ground_truth, pep, top } => {
            let (linked, scored) = scored(&loaded, &corpus_path(corpus))?;
            let entries = match ground_truth {
                Some(p) => truth(p)?.entries,
                None => Vec::new(),
            };
            let mut peps: Vec<u32> = if pep.is_empty() { linked.peps.keys().copied().collect() } else { pep.clone() };
            peps.retain(|n| {
                let present = linked.peps.contains_key(n);
                if !present {
                    eprintln!("warning: proposal {n} is not in the corpus; page skipped");
                }
                present
            });
            let missing: BTreeSet<u32> = entries.iter().map(|e| e.pep).filter(|n| !linked.peps.contains_key(n)).collect();
            for n in missing {
                eprintln!("warning: ground truth references proposal {n}, which is not in the corpus");
            }
            let input = report::ReportInput { linked: &linked, scored: &scored, truth: &entries, top: *top };
            let dir = out.join("report");
            let pages = report::render(&input, &peps);
            for (name, html) in &pages {
                write_with(&dir.join(name), |w| w.write_all(html.as_bytes()))?;
            }
            println!("{} pages written to {}", pages.len(), dir.display());
            Ok(())
        }
    }
}

fn ingest(input: &Path, config: &PipelineConfig, out: &Path) -> Result<(), Failure> {
    if !input.exists() {
        return Err(Failure::input(format!("{}: no such input directory", input.display())));
    }
    let report = ingest_dir(input, &config.ingest_options()).map_err(|e| Failure::input(e.to_string()))?;
    write_with(&out.join("corpus.jsonl"), |w| write_corpus(w, &to_corpus(&report.corpus)))?;
    write_with(&out.join("link_stats.csv"), |w| report.corpus.write_link_stats(w))?;
    let diagnostics = serde_json::json!({
        "block_count": report.block_count,
        "skipped_blocks": report.mbox_diagnostics,
        "warnings": report.mbox_warnings,
        "other": report.diagnostics,
    });
    write_with(&out.join("ingest_diagnostics.json"), |w| {
        serde_json::to_writer_pretty(&mut *w, &diagnostics)?;
        writeln!(w).map_err(serde_json::Error::io)
    })?;
    for (list, n) in messages_per_list(&report.corpus) {
        println!("{list}: {n} messages");
    }
    println!(
        "{} proposals, {} messages, {} blocks skipped, {} other diagnostics",
        report.corpus.peps.len(),
        report.corpus.messages.len(),
        report.mbox_diagnostics.len(),
        report.diagnostics.len()
    );
    Ok(())
}

fn scored(loaded: &Loaded, corpus: &Path) -> Result<(LinkedCorpus, ScoredCorpus), Failure> {
    let file = File::open(corpus).map_err(io_err(corpus))?;
    let corpus = read_corpus(BufReader::new(file)).map_err(|e| Failure::input(format!("{}: {e}", corpus.display())))?;
    let linked = from_corpus(corpus);
    let scored = score_corpus(&linked, &loaded.config.heuristics, &loaded.lexicon, &loaded.roles);
    Ok((linked, scored))
}

fn truth(path: &Path) -> Result<GroundTruth, Failure> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    load_ground_truth(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// Outputs are already written; skipped rows or entries for proposals
/// missing from the corpus turn the exit code to 1.
fn truth_problems(truth: &GroundTruth, scored: &ScoredCorpus) -> Result<(), Failure> {
    let mut problems: Vec<String> = truth.row_errors.iter().map(|e| format!("row {}: {}", e.row, e.message)).collect();
    problems.extend(truth.warnings.iter().cloned());
    let missing: BTreeSet<u32> = truth.entries.iter().map(|e| e.pep).filter(|n| !scored.peps.contains_key(n)).collect();
    problems.extend(missing.iter().map(|n| format!("proposal {n} is not in the corpus")));
    if problems.is_empty() {
        return Ok(());
    }
    for p in &problems {
        eprintln!("ground truth: {p}");
    }
    Err(Failure::contract(format!("{} ground-truth problems", problems.len())))
}

fn score_rank(
    loaded: &Loaded,
    corpus: &Path,
    peps: &[u32],
    scheme: SchemeArg,
    state: Option<StateArg>,
    top: Option<usize>,
    out: &Path,
) -> Result<(), Failure> {
    let (linked, mut scored) = scored(loaded, corpus)?;
    let state = state.map(|s| match s {
        StateArg::Accepted => FinalState::Accepted,
        StateArg::Rejected => FinalState::Rejected,
    });
    scored.peps.retain(|n, _| {
        (peps.is_empty() || peps.contains(n))
            && state.is_none_or(|s| linked.peps.get(n).is_some_and(|p| p.final_state.is(s.as_str())))
    });
    write_with(&out.join("scored.jsonl"), |w| scored.write_jsonl(w))?;
    let schemes: &[Scheme] = match scheme {
        SchemeArg::Sbs => &[Scheme::Sbs],
        SchemeArg::Mbs => &[Scheme::Mbs],
        SchemeArg::Both => &Scheme::BOTH,
    };
    for &s in schemes {
        let lists: Vec<_> = scored
            .peps
            .values()
            .map(|p| {
                let mut list = rank(p.pep, &p.sentences, s);
                if let Some(k) = top {
                    list.truncate(k);
                }
                list
            })
            .collect();
        let path = out.join(format!("ranked_{}.jsonl", s.as_str().to_lowercase()));
        write_with(&path, |w| write_ranked_jsonl(w, &lists))?;
        println!("{}: {} lists written to {}", s, lists.len(), path.display());
    }
    Ok(())
}
