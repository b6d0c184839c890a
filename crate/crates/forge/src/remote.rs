//! HTTP clients for a remote generator and an OpenAI-compatible summarizer.

use std::time::Duration;

use girt_forge_core::generate::{check_output, DecodingConfig, GenerateError, GeneratorBackend};
use girt_forge_core::instruct::{serialize_instruction, Instruction, SummarizeError, Summarizer, SummarySource, SUMMARY_PROMPT};
use reqwest::blocking::Client;
use serde::{Deserialize, Serialize};
use serde_json::json;

const TIMEOUT: Duration = Duration::from_secs(120);

fn client() -> Client {
    Client::builder().timeout(TIMEOUT).build().expect("http client")
}

#[derive(Debug, Serialize)]
struct GenerateRequest<'a> {
    instruction: &'a str,
    config: &'a DecodingConfig,
}

#[derive(Debug, Deserialize)]
struct GenerateResponse {
    output: String,
}

/// Posts `{"instruction", "config"}` and expects `{"output"}` back.
#[derive(Debug, Clone)]
pub struct RemoteBackend {
    endpoint: String,
    client: Client,
}

impl RemoteBackend {
    pub fn new(endpoint: impl Into<String>) -> Self {
        RemoteBackend { endpoint: endpoint.into(), client: client() }
    }
}

impl GeneratorBackend for RemoteBackend {
    fn generate(&self, instruction: &Instruction, config: &DecodingConfig) -> Result<String, GenerateError> {
        config.validate()?;
        let text = serialize_instruction(instruction);
        let response = self
            .client
            .post(&self.endpoint)
            .json(&GenerateRequest { instruction: &text, config })
            .send()
            .map_err(|e| GenerateError::BackendUnavailable(e.to_string()))?;
        let status = response.status();
        if !status.is_success() {
            return Err(GenerateError::BackendUnavailable(format!("{} answered {status}", self.endpoint)));
        }
        let body: GenerateResponse =
            response.json().map_err(|e| GenerateError::InvalidBackendOutput(format!("response body: {e}")))?;
        check_output(&body.output)?;
        Ok(body.output)
    }
}

/// Chat-completions client prompted with [`SUMMARY_PROMPT`].
#[derive(Debug, Clone)]
pub struct RemoteSummarizer {
    endpoint: String,
    model: String,
    client: Client,
}

impl RemoteSummarizer {
    pub fn new(endpoint: impl Into<String>, model: impl Into<String>) -> Self {
        RemoteSummarizer { endpoint: endpoint.into(), model: model.into(), client: client() }
    }
}

impl Summarizer for RemoteSummarizer {
    fn summarize(&self, irt_text: &str) -> Result<String, SummarizeError> {
        let body = json!({
            "model": self.model,
            "temperature": 0,
            "messages": [
                {"role": "system", "content": SUMMARY_PROMPT},
                {"role": "user", "content": irt_text},
            ],
        });
        let unavailable = |e: reqwest::Error| SummarizeError::BackendUnavailable(e.to_string());
        let response = self.client.post(&self.endpoint).json(&body).send().map_err(unavailable)?;
        let response = response.error_for_status().map_err(unavailable)?;
        let value: serde_json::Value = response.json().map_err(unavailable)?;
        value["choices"][0]["message"]["content"]
            .as_str()
            .map(|s| s.trim().to_string())
            .ok_or_else(|| SummarizeError::BackendUnavailable("response has no choices[0].message.content".into()))
    }

    fn source(&self) -> SummarySource {
        SummarySource::Remote
    }
}
