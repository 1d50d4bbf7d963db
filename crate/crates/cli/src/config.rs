use std::path::{Path, PathBuf};

use rminer_core::heuristics::RoleDirectory;
use rminer_core::ingest::{DateWindow, StateVocabulary};
use rminer_core::linker::MessageTypeRules;
use rminer_core::pipeline::IngestOptions;
use rminer_core::{HeuristicConfig, Lexicon};
use serde::{Deserialize, Serialize};

use crate::Failure;

/// Contents of `--config`. Relative paths resolve against the config
/// file's directory.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub heuristics: HeuristicConfig,
    pub message_types: MessageTypeRules,
    /// State names recognized beyond the official eight.
    pub extra_states: Vec<String>,
    pub window: Option<DateWindow>,
    pub lexicon: Option<PathBuf>,
    /// Role roster JSON (`bdfl`, `pep_editors`, `core_developers`).
    pub roles: Option<PathBuf>,
}

pub struct Loaded {
    pub config: PipelineConfig,
    pub lexicon: Lexicon,
    pub roles: RoleDirectory,
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let mut config: PipelineConfig =
            serde_json::from_str(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut config.lexicon, &mut config.roles].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        config.heuristics.validate().map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        Ok(config)
    }

    pub fn ingest_options(&self) -> IngestOptions {
        IngestOptions {
            vocabulary: StateVocabulary::with_extra(&self.extra_states),
            window: self.window.unwrap_or_default(),
            message_types: self.message_types.clone(),
        }
    }
}

/// Resolves the config, lexicon and roster. `lexicon` overrides the
/// config's lexicon path.
pub fn load(config: Option<&Path>, lexicon: Option<&Path>) -> Result<Loaded, Failure> {
    let config = match config {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    let lexicon = match lexicon.or(config.lexicon.as_deref()) {
        Some(p) => Lexicon::from_json(&read(p)?).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?,
        None => Lexicon::default(),
    };
    let roles = match &config.roles {
        Some(p) => RoleDirectory::from_json(&read(p)?).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?,
        None => RoleDirectory::default(),
    };
    Ok(Loaded { config, lexicon, roles })
}
