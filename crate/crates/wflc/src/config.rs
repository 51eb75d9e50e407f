//! Project configuration: checker defaults, LLM endpoint settings, and
//! project paths, loaded from a TOML file with environment overrides for
//! credentials.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::deduction::{DEFAULT_SAMPLES, DEFAULT_SEED};
use crate::llm::{EndpointConfig, ENV_API_KEY, ENV_MODEL, ENV_URL};

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ProjectConfig {
    #[serde(default)]
    pub paths: Paths,
    #[serde(default)]
    pub llm: LlmSettings,
    #[serde(default)]
    pub checker: CheckerSettings,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Paths {
    pub scenarios: Option<PathBuf>,
    pub diagrams: Option<PathBuf>,
    pub expressions: Option<PathBuf>,
    pub requirements: Option<PathBuf>,
    pub outputs: Option<PathBuf>,
    /// Append-only log of prompt/response exchanges.
    pub session_log: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct LlmSettings {
    pub url: Option<String>,
    pub model: Option<String>,
    pub timeout_secs: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CheckerSettings {
    /// Maximum trace length searched.
    pub bound: usize,
    /// Maximum candidate traces an exhaustive search may enumerate.
    pub state_budget: u64,
    /// Random samples when falling back to incomplete search.
    pub samples: u64,
    pub seed: u64,
    /// Append the guard-decoration axioms when generating specifications.
    pub decoration_axioms: bool,
}

impl Default for CheckerSettings {
    fn default() -> Self {
        CheckerSettings {
            bound: 8,
            state_budget: 2_000_000,
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            decoration_axioms: false,
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("config {path}: {source}")]
    Parse { path: String, source: toml::de::Error },
    #[error("config {path}: referenced path {referenced} does not exist")]
    MissingPath { path: String, referenced: String },
}

impl ProjectConfig {
    /// Load a configuration file; every referenced path must resolve.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), source: e })?;
        let config: ProjectConfig = toml::from_str(&text)
            .map_err(|e| ConfigError::Parse { path: path.display().to_string(), source: e })?;
        let dirs = [
            &config.paths.scenarios,
            &config.paths.diagrams,
            &config.paths.expressions,
            &config.paths.requirements,
            &config.paths.outputs,
        ];
        for dir in dirs.into_iter().flatten() {
            if !dir.exists() {
                return Err(ConfigError::MissingPath {
                    path: path.display().to_string(),
                    referenced: dir.display().to_string(),
                });
            }
        }
        Ok(config)
    }

    /// Endpoint settings: the config file supplies defaults, environment
    /// variables win, and the credential comes from the environment only.
    pub fn endpoint(&self) -> Option<EndpointConfig> {
        let url = std::env::var(ENV_URL).ok().or_else(|| self.llm.url.clone())?;
        let model = std::env::var(ENV_MODEL)
            .ok()
            .or_else(|| self.llm.model.clone())
            .unwrap_or_else(|| "gpt-4o".to_string());
        Some(EndpointConfig {
            url,
            model,
            api_key: std::env::var(ENV_API_KEY).ok(),
            timeout_secs: self.llm.timeout_secs.unwrap_or(120),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_sane() {
        let c = ProjectConfig::default();
        assert_eq!(c.checker.bound, 8);
        assert!(!c.checker.decoration_axioms);
    }

    #[test]
    fn load_validates_paths() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("wflc.toml");
        std::fs::write(&file, "[paths]\ndiagrams = \"/definitely/not/here\"\n").unwrap();
        assert!(matches!(ProjectConfig::load(&file), Err(ConfigError::MissingPath { .. })));

        std::fs::write(
            &file,
            format!("[paths]\ndiagrams = {:?}\n[checker]\nbound = 3\nstate_budget = 10\nsamples = 5\nseed = 1\ndecoration_axioms = true\n", dir.path()),
        )
        .unwrap();
        let c = ProjectConfig::load(&file).unwrap();
        assert_eq!(c.checker.bound, 3);
        assert!(c.checker.decoration_axioms);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("wflc.toml");
        std::fs::write(&file, "[checker]\nbounds = 3\n").unwrap();
        assert!(matches!(ProjectConfig::load(&file), Err(ConfigError::Parse { .. })));
    }
}
