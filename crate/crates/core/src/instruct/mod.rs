//! Instruction/IRT training pairs.
//!
//! An [`Instruction`] is the key/value block a generator receives:
//!
//! ```text
//! name: Bug report
//! about: <|MASK|>
//! title: <|MASK|>
//! labels: <|MASK|>
//! assignees: <|EMPTY|>
//! headlines_type: # Heading
//! headlines: ['Describe the bug', 'To Reproduce']
//! summary: This issue template is designed to help users report bugs.
//! ```
//!
//! `<|EMPTY|>` asks for an explicitly empty field and `<|MASK|>` leaves the
//! field to the generator.

mod serialize;
mod summary;
mod variants;

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::irt::IssueReportTemplate;

pub use serialize::{parse_instruction, serialize_instruction, InstructionParseError};
pub use summary::{summarize, StubSummarizer, SummarizeError, Summarizer, SummarySource, SUMMARY_PROMPT};
pub use variants::{
    expand_variants, mask_instruction, split_dataset, InstructPair, InvalidRatios, Split, SplitRatios, Variant,
};

pub const MASK_TOKEN: &str = "<|MASK|>";
pub const EMPTY_TOKEN: &str = "<|EMPTY|>";

/// State of one instruction field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldValue<T> {
    Concrete(T),
    Empty,
    Masked,
}

impl<T> FieldValue<T> {
    pub fn is_concrete(&self) -> bool {
        matches!(self, FieldValue::Concrete(_))
    }

    pub fn is_masked(&self) -> bool {
        matches!(self, FieldValue::Masked)
    }

    pub fn concrete(&self) -> Option<&T> {
        match self {
            FieldValue::Concrete(v) => Some(v),
            _ => None,
        }
    }
}

/// Line breaks become spaces; surrounding whitespace is trimmed.
fn single_line(text: &str) -> String {
    text.replace(['\r', '\n'], " ").trim().to_string()
}

impl FieldValue<String> {
    /// Interprets user text: the two marker tokens map to their states, an
    /// empty string is [`FieldValue::Empty`], anything else is concrete.
    pub fn from_text(text: &str) -> Self {
        let text = single_line(text);
        match text.as_str() {
            "" | EMPTY_TOKEN => FieldValue::Empty,
            MASK_TOKEN => FieldValue::Masked,
            _ => FieldValue::Concrete(text),
        }
    }
}

impl FieldValue<Vec<String>> {
    /// Concrete when at least one non-empty item remains after trimming.
    pub fn from_items<I, S>(items: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let items: Vec<String> = items
            .into_iter()
            .map(|s| single_line(s.as_ref()))
            .filter(|s| !s.is_empty())
            .collect();
        match items.as_slice() {
            [] => FieldValue::Empty,
            [only] if only == EMPTY_TOKEN => FieldValue::Empty,
            [only] if only == MASK_TOKEN => FieldValue::Masked,
            _ => FieldValue::Concrete(items),
        }
    }
}

/// The maskable instruction fields, in serialization order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Name,
    About,
    Title,
    Labels,
    Assignees,
    HeadlinesType,
    Headlines,
}

impl Field {
    pub const ALL: [Field; 7] = [
        Field::Name,
        Field::About,
        Field::Title,
        Field::Labels,
        Field::Assignees,
        Field::HeadlinesType,
        Field::Headlines,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Field::Name => "name",
            Field::About => "about",
            Field::Title => "title",
            Field::Labels => "labels",
            Field::Assignees => "assignees",
            Field::HeadlinesType => "headlines_type",
            Field::Headlines => "headlines",
        }
    }

    pub fn from_key(key: &str) -> Option<Field> {
        Field::ALL.into_iter().find(|f| f.key() == key)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instruction {
    pub name: FieldValue<String>,
    pub about: FieldValue<String>,
    pub title: FieldValue<String>,
    pub labels: FieldValue<Vec<String>>,
    pub assignees: FieldValue<Vec<String>>,
    pub headlines_type: FieldValue<String>,
    pub headlines: FieldValue<Vec<String>>,
    pub summary: Option<String>,
}

/// Shape of a field without its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldState {
    Concrete,
    Empty,
    Masked,
}

fn state_of<T>(v: &FieldValue<T>) -> FieldState {
    match v {
        FieldValue::Concrete(_) => FieldState::Concrete,
        FieldValue::Empty => FieldState::Empty,
        FieldValue::Masked => FieldState::Masked,
    }
}

impl Instruction {
    pub fn state(&self, field: Field) -> FieldState {
        match field {
            Field::Name => state_of(&self.name),
            Field::About => state_of(&self.about),
            Field::Title => state_of(&self.title),
            Field::Labels => state_of(&self.labels),
            Field::Assignees => state_of(&self.assignees),
            Field::HeadlinesType => state_of(&self.headlines_type),
            Field::Headlines => state_of(&self.headlines),
        }
    }

    pub fn mask(&mut self, field: Field) {
        match field {
            Field::Name => self.name = FieldValue::Masked,
            Field::About => self.about = FieldValue::Masked,
            Field::Title => self.title = FieldValue::Masked,
            Field::Labels => self.labels = FieldValue::Masked,
            Field::Assignees => self.assignees = FieldValue::Masked,
            Field::HeadlinesType => self.headlines_type = FieldValue::Masked,
            Field::Headlines => self.headlines = FieldValue::Masked,
        }
    }

    pub fn concrete_fields(&self) -> Vec<Field> {
        Field::ALL
            .into_iter()
            .filter(|&f| self.state(f) == FieldState::Concrete)
            .collect()
    }

    pub fn masked_count(&self) -> usize {
        Field::ALL
            .into_iter()
            .filter(|&f| self.state(f) == FieldState::Masked)
            .count()
    }

    /// Text of the concrete fields, one per line, used for retrieval.
    pub fn concrete_text(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        for text in [&self.name, &self.about, &self.title, &self.headlines_type] {
            if let Some(v) = text.concrete() {
                parts.push(v.clone());
            }
        }
        for list in [&self.labels, &self.assignees, &self.headlines] {
            if let Some(items) = list.concrete() {
                parts.push(items.join(" "));
            }
        }
        parts.join("\n")
    }
}

/// Instruction describing `irt`, with an optional summary attached verbatim.
pub fn build_instruction(irt: &IssueReportTemplate, summary: Option<&str>) -> Instruction {
    let m = &irt.metadata;
    Instruction {
        name: FieldValue::from_text(&m.name),
        about: FieldValue::from_text(&m.about),
        title: FieldValue::from_text(&m.title),
        labels: FieldValue::from_items(&m.labels),
        assignees: FieldValue::from_items(&m.assignees),
        headlines_type: match irt.body.dominant_kind() {
            Some(kind) => FieldValue::Concrete(kind.label().to_string()),
            None => FieldValue::Empty,
        },
        headlines: FieldValue::from_items(irt.body.headlines()),
        summary: summary.map(ToString::to_string),
    }
}
