//! Extraction and ranking of decision rationale from proposal mailing lists.
//!
//! The pipeline runs in stages, each in its own module:
//!
//! - [`ingest`] parses mbox archives, proposal documents and commit logs.
//! - [`linker`] attaches proposal numbers to messages.
//! - [`analysis`] provides term-type matching, negation and triple extraction.
//! - [`heuristics`] computes the thirteen component scores and their sum.
//! - [`ranking`] builds sentence-level and message-level ranked lists.
//! - [`evaluation`] compares rankings with ground truth (rank tables, NDCG,
//!   ablation, parameter sweep).
//! - [`synth`] generates deterministic corpora with planted rationale.

pub mod analysis;
pub mod evaluation;
pub mod heuristics;
pub mod ingest;
pub mod linker;
pub mod pipeline;
pub mod ranking;
pub mod synth;
pub mod text;

pub use analysis::Lexicon;
pub use heuristics::{final_score, score_corpus, HeuristicConfig, HeuristicId, HeuristicVector, ScoredCorpus};
pub use ingest::{EmailMessage, MessageType, Paragraph, PepRecord, Sentence, StateName, StateTransition};
pub use linker::{link_messages, LinkedCorpus};
