//! Service configuration from flags and an optional config file.
//!
//! The file named by `GIRT_FORGE_CONFIG` is either TOML or plain
//! `key = value` lines with the same flat keys:
//!
//! ```text
//! bind_address = 127.0.0.1:8080
//! index_path = corpus.jsonl
//! max_length = 256
//! cors_allowed_origins = http://localhost:5173, http://127.0.0.1:5173
//! ```
//!
//! Values from the file override flags.

use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use girt_forge_core::generate::DecodingConfig;
use serde::Deserialize;

pub const CONFIG_ENV: &str = "GIRT_FORGE_CONFIG";

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Unreadable { path: PathBuf, source: std::io::Error },
    #[error("config line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BackendConfig {
    Retrieval { index_path: PathBuf },
    Remote { endpoint_url: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ServiceConfig {
    pub bind_address: SocketAddr,
    pub backend: BackendConfig,
    pub default_decoding: DecodingConfig,
    pub cors_allowed_origins: Vec<String>,
}

/// Flat settings shared by flags and config files; unset means "keep".
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub bind_address: Option<String>,
    pub index_path: Option<PathBuf>,
    pub endpoint_url: Option<String>,
    pub max_length: Option<usize>,
    pub min_length: Option<usize>,
    pub top_p: Option<f64>,
    pub top_k: Option<usize>,
    #[serde(default, deserialize_with = "origins")]
    pub cors_allowed_origins: Option<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Origins {
    One(String),
    Many(Vec<String>),
}

fn split_origins(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|o| !o.is_empty()).map(str::to_string).collect()
}

fn origins<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<Vec<String>>, D::Error> {
    Ok(Option::<Origins>::deserialize(d)?.map(|o| match o {
        Origins::One(s) => split_origins(&s),
        Origins::Many(v) => v,
    }))
}

impl Settings {
    /// Parses TOML, falling back to `key = value` lines.
    pub fn parse(text: &str) -> Result<Settings, ConfigError> {
        toml::from_str::<Settings>(text).or_else(|_| Self::parse_key_values(text))
    }

    fn parse_key_values(text: &str) -> Result<Settings, ConfigError> {
        let mut s = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| ConfigError::Line { line: line_no, message };
            let (key, value) = line.split_once('=').ok_or_else(|| err("expected `key = value`".into()))?;
            let value = value.trim().trim_matches('"');
            let num = |v: &str| v.parse::<usize>().map_err(|e| err(format!("{}: {e}", key.trim())));
            match key.trim() {
                "bind_address" => s.bind_address = Some(value.to_string()),
                "index_path" => s.index_path = Some(PathBuf::from(value)),
                "endpoint_url" => s.endpoint_url = Some(value.to_string()),
                "max_length" => s.max_length = Some(num(value)?),
                "min_length" => s.min_length = Some(num(value)?),
                "top_k" => s.top_k = Some(num(value)?),
                "top_p" => s.top_p = Some(value.parse().map_err(|e| err(format!("top_p: {e}")))?),
                "cors_allowed_origins" => s.cors_allowed_origins = Some(split_origins(value)),
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        Ok(s)
    }

    pub fn from_file(path: &Path) -> Result<Settings, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Unreadable { path: path.to_path_buf(), source })?;
        Settings::parse(&text)
    }

    /// Fields set in `other` replace ours. A backend in `other` replaces
    /// ours as a whole.
    pub fn overridden_by(self, other: Settings) -> Settings {
        let (index_path, endpoint_url) = if other.index_path.is_some() || other.endpoint_url.is_some() {
            (other.index_path, other.endpoint_url)
        } else {
            (self.index_path, self.endpoint_url)
        };
        Settings {
            bind_address: other.bind_address.or(self.bind_address),
            index_path,
            endpoint_url,
            max_length: other.max_length.or(self.max_length),
            min_length: other.min_length.or(self.min_length),
            top_p: other.top_p.or(self.top_p),
            top_k: other.top_k.or(self.top_k),
            cors_allowed_origins: other.cors_allowed_origins.or(self.cors_allowed_origins),
        }
    }

    pub fn decoding(&self, base: DecodingConfig) -> DecodingConfig {
        DecodingConfig {
            max_length: self.max_length.unwrap_or(base.max_length),
            min_length: self.min_length.unwrap_or(base.min_length),
            top_p: self.top_p.unwrap_or(base.top_p),
            top_k: self.top_k.unwrap_or(base.top_k),
        }
    }

    pub fn into_service_config(self) -> Result<ServiceConfig, ConfigError> {
        let bind = self.bind_address.clone().unwrap_or_else(|| "127.0.0.1:8080".into());
        let bind_address: SocketAddr =
            bind.parse().map_err(|e| ConfigError::Invalid(format!("bind_address `{bind}`: {e}")))?;
        if bind_address.port() == 0 {
            return Err(ConfigError::Invalid("bind_address port must be in 1..65535".into()));
        }
        let backend = match (self.index_path.clone(), self.endpoint_url.clone()) {
            (Some(index_path), None) => BackendConfig::Retrieval { index_path },
            (None, Some(endpoint_url)) => BackendConfig::Remote { endpoint_url },
            (Some(_), Some(_)) => {
                return Err(ConfigError::Invalid("configure either index_path or endpoint_url, not both".into()))
            }
            (None, None) => return Err(ConfigError::Invalid("no backend: set index_path or endpoint_url".into())),
        };
        let default_decoding = self.decoding(DecodingConfig::default());
        default_decoding.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(ServiceConfig {
            bind_address,
            backend,
            default_decoding,
            cors_allowed_origins: self.cors_allowed_origins.unwrap_or_default(),
        })
    }
}
