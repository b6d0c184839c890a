use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::irt::IssueReportTemplate;

/// System prompt sent to a remote summarization model.
pub const SUMMARY_PROMPT: &str = "You are Zephyr, an AI assistant. Be polite and provide only truthful information. Summarize this GitHub issue template only using the provided text.";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SummarizeError {
    #[error("summarization backend unavailable: {0}")]
    BackendUnavailable(String),
    #[error("invalid summarizer input: {0}")]
    InvalidInput(String),
}

/// Where summaries came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SummarySource {
    Stub,
    Remote,
}

pub trait Summarizer {
    /// Summarizes a canonical IRT rendering.
    fn summarize(&self, irt_text: &str) -> Result<String, SummarizeError>;

    fn source(&self) -> SummarySource;
}

/// Deterministic offline summarizer built from the template's own text.
#[derive(Debug, Clone, Copy, Default)]
pub struct StubSummarizer;

impl StubSummarizer {
    pub fn summarize_irt(irt: &IssueReportTemplate) -> String {
        let headlines: Vec<&str> = irt.body.headlines().collect();
        let sections = if headlines.is_empty() {
            String::from("none")
        } else {
            headlines.join(", ")
        };
        format!(
            "This issue template is for '{}'. Sections: {}.",
            irt.metadata.name.trim(),
            sections
        )
    }
}

impl Summarizer for StubSummarizer {
    fn summarize(&self, irt_text: &str) -> Result<String, SummarizeError> {
        let irt = crate::irt::parse_irt(irt_text).map_err(|e| SummarizeError::InvalidInput(format!("{e}")))?;
        Ok(Self::summarize_irt(&irt))
    }

    fn source(&self) -> SummarySource {
        SummarySource::Stub
    }
}

/// Summarizes `irt` through `summarizer`, feeding it the canonical rendering.
pub fn summarize(summarizer: &dyn Summarizer, irt: &IssueReportTemplate) -> Result<String, SummarizeError> {
    summarizer.summarize(&crate::irt::render_irt(irt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::irt::parse_irt;

    #[test]
    fn stub_lists_sections() {
        let irt = parse_irt("---\nname: Bug report\nabout: x\n---\n## What\nA\n## Steps\nB\n").unwrap();
        assert_eq!(
            summarize(&StubSummarizer, &irt).unwrap(),
            "This issue template is for 'Bug report'. Sections: What, Steps."
        );
        let bare = parse_irt("---\nname: Q\n---\ntext").unwrap();
        assert_eq!(
            StubSummarizer::summarize_irt(&bare),
            "This issue template is for 'Q'. Sections: none."
        );
        assert_eq!(StubSummarizer.source(), SummarySource::Stub);
    }

    #[test]
    fn stub_rejects_unparseable_text() {
        assert!(matches!(
            StubSummarizer.summarize("no frontmatter"),
            Err(SummarizeError::InvalidInput(_))
        ));
    }
}
