//! A pluggable chat-completion client. Live mode posts to a configured
//! OpenAI-style endpoint; offline mode replays a canned response file
//! verbatim so the whole pipeline runs with no network. Every exchange is
//! appended to a session log.

use std::fs::OpenOptions;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde::Deserialize;
use serde_json::json;
use thiserror::Error;

pub const ENV_URL: &str = "WFLC_LLM_URL";
pub const ENV_MODEL: &str = "WFLC_LLM_MODEL";
pub const ENV_API_KEY: &str = "WFLC_LLM_API_KEY";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndpointConfig {
    pub url: String,
    pub model: String,
    /// Bearer credential; read from the environment, never from files.
    pub api_key: Option<String>,
    pub timeout_secs: u64,
}

impl EndpointConfig {
    pub fn from_env() -> Result<Self, LlmError> {
        let url = std::env::var(ENV_URL).map_err(|_| LlmError::NotConfigured)?;
        let model = std::env::var(ENV_MODEL).unwrap_or_else(|_| "gpt-4o".to_string());
        let api_key = std::env::var(ENV_API_KEY).ok();
        Ok(EndpointConfig { url, model, api_key, timeout_secs: 120 })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LlmMode {
    Endpoint(EndpointConfig),
    /// Replay the contents of a canned response file, byte for byte.
    Offline(PathBuf),
}

#[derive(Debug, Error)]
pub enum LlmError {
    #[error("no endpoint configured; set {ENV_URL} or use offline mode")]
    NotConfigured,
    #[error("transport error{}: {message}", status.map(|s| format!(" (HTTP {s})")).unwrap_or_default())]
    Transport { status: Option<u16>, message: String },
    #[error("response carried no text content")]
    NonTextResponse,
    #[error("offline response file {path}: {source}")]
    Offline { path: String, source: std::io::Error },
    #[error("session log {path}: {source}")]
    Log { path: String, source: std::io::Error },
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<Choice>,
}

#[derive(Deserialize)]
struct Choice {
    message: ChoiceMessage,
}

#[derive(Deserialize)]
struct ChoiceMessage {
    content: Option<serde_json::Value>,
}

/// Send one prompt and return the model's text. The exchange is appended
/// to `session_log` when given.
pub fn call_llm(
    prompt: &str,
    mode: &LlmMode,
    session_log: Option<&Path>,
) -> Result<String, LlmError> {
    let response = match mode {
        LlmMode::Offline(path) => std::fs::read_to_string(path)
            .map_err(|e| LlmError::Offline { path: path.display().to_string(), source: e })?,
        LlmMode::Endpoint(config) => post_chat(prompt, config)?,
    };
    if let Some(log) = session_log {
        append_log(log, prompt, &response)
            .map_err(|e| LlmError::Log { path: log.display().to_string(), source: e })?;
    }
    Ok(response)
}

fn post_chat(prompt: &str, config: &EndpointConfig) -> Result<String, LlmError> {
    let client = reqwest::blocking::Client::builder()
        .timeout(Duration::from_secs(config.timeout_secs))
        .build()
        .map_err(|e| LlmError::Transport { status: None, message: e.to_string() })?;
    let body = json!({
        "model": config.model,
        "messages": [{"role": "user", "content": prompt}],
    });
    let mut request = client.post(&config.url).json(&body);
    if let Some(key) = &config.api_key {
        request = request.bearer_auth(key);
    }
    let response = request
        .send()
        .map_err(|e| LlmError::Transport { status: None, message: e.to_string() })?;
    let status = response.status();
    if !status.is_success() {
        return Err(LlmError::Transport {
            status: Some(status.as_u16()),
            message: format!("endpoint returned {status}"),
        });
    }
    let parsed: ChatResponse = response
        .json()
        .map_err(|e| LlmError::Transport { status: None, message: e.to_string() })?;
    match parsed.choices.into_iter().next().and_then(|c| c.message.content) {
        Some(serde_json::Value::String(text)) => Ok(text),
        _ => Err(LlmError::NonTextResponse),
    }
}

fn append_log(path: &Path, prompt: &str, response: &str) -> std::io::Result<()> {
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    let now = SystemTime::now().duration_since(UNIX_EPOCH).unwrap_or_default().as_secs();
    writeln!(file, "=== prompt @{now}")?;
    writeln!(file, "{prompt}")?;
    writeln!(file, "=== response @{now}")?;
    writeln!(file, "{response}")?;
    Ok(())
}
