//! Generator backends and the evaluation harness.
//!
//! A backend turns an [`Instruction`] into IRT text. [`RetrievalIndex`] is
//! the deterministic offline backend; [`OracleBackend`] and
//! [`EmptyBackend`] bound the metric range during evaluation.

mod evaluate;
mod retrieval;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};

use serde::{Deserialize, Serialize};

use crate::instruct::{serialize_instruction, InstructPair, Instruction};
use crate::irt::{parse_irt, validate_irt, ValidationReport};

pub use evaluate::{evaluate, render_table, MetricReport, VariantScores};
pub use retrieval::{retrieve_generate, EmptyIndex, RetrievalIndex, PLACEHOLDER_CONTENT};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecodingConfig {
    pub max_length: usize,
    pub min_length: usize,
    pub top_p: f64,
    pub top_k: usize,
}

impl Default for DecodingConfig {
    fn default() -> Self {
        DecodingConfig { max_length: 512, min_length: 0, top_p: 0.95, top_k: 50 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid decoding config: {0}")]
pub struct InvalidConfig(pub String);

impl DecodingConfig {
    pub fn validate(&self) -> Result<(), InvalidConfig> {
        if self.max_length == 0 {
            return Err(InvalidConfig("max_length must be positive".into()));
        }
        if self.min_length > self.max_length {
            return Err(InvalidConfig(format!(
                "min_length {} exceeds max_length {}",
                self.min_length, self.max_length
            )));
        }
        if !(self.top_p > 0.0 && self.top_p <= 1.0) {
            return Err(InvalidConfig(format!("top_p {} is outside (0, 1]", self.top_p)));
        }
        if self.top_k == 0 {
            return Err(InvalidConfig("top_k must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenerateError {
    #[error("backend unavailable: {0}")]
    BackendUnavailable(String),
    #[error("backend returned an unparseable IRT: {0}")]
    InvalidBackendOutput(String),
    #[error(transparent)]
    InvalidConfig(#[from] InvalidConfig),
}

pub trait GeneratorBackend {
    fn generate(&self, instruction: &Instruction, config: &DecodingConfig) -> Result<String, GenerateError>;
}

/// Parses backend output and returns its validation report.
pub fn check_output(text: &str) -> Result<ValidationReport, GenerateError> {
    let irt = parse_irt(text).map_err(|e| GenerateError::InvalidBackendOutput(e.to_string()))?;
    Ok(validate_irt(&irt))
}

/// Answers every known instruction with its reference output.
#[derive(Debug, Clone, Default)]
pub struct OracleBackend {
    answers: BTreeMap<String, String>,
}

impl OracleBackend {
    pub fn new<'a>(pairs: impl IntoIterator<Item = &'a InstructPair>) -> Self {
        let answers = pairs
            .into_iter()
            .map(|p| (p.instruction_text.clone(), p.output_text.clone()))
            .collect();
        OracleBackend { answers }
    }
}

impl GeneratorBackend for OracleBackend {
    fn generate(&self, instruction: &Instruction, _config: &DecodingConfig) -> Result<String, GenerateError> {
        self.answers
            .get(&serialize_instruction(instruction))
            .cloned()
            .ok_or_else(|| GenerateError::BackendUnavailable("instruction not in oracle table".into()))
    }
}

/// Always answers with an empty string.
#[derive(Debug, Clone, Copy, Default)]
pub struct EmptyBackend;

impl GeneratorBackend for EmptyBackend {
    fn generate(&self, _instruction: &Instruction, _config: &DecodingConfig) -> Result<String, GenerateError> {
        Ok(String::new())
    }
}
