//! Markdown issue report templates.
//!
//! An issue report template (IRT) is a Markdown file with a small
//! frontmatter table followed by a body:
//!
//! ```text
//! ---
//! name: Bug report
//! about: Create a report to help us improve
//! title: '[Bug]'
//! labels: bug
//! assignees: ''
//! ---
//!
//! ## Describe the bug
//! A clear and concise description of what the bug is.
//! ```
//!
//! [`parse_irt`] turns such text into an [`IssueReportTemplate`],
//! [`render_irt`] produces the canonical text form, and [`validate_irt`]
//! checks the minimum requirements for a template to be usable.

mod parse;
mod render;
mod validate;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

pub use parse::{parse_irt, ParseError};
pub use render::render_irt;
pub use validate::{validate_irt, ValidationReport, Violation};

pub(crate) use parse::{split_list_value, unquote};
pub(crate) use render::render_body;

/// The frontmatter table of an IRT.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct IrtMetadata {
    pub name: String,
    pub about: String,
    pub title: String,
    pub labels: Vec<String>,
    pub assignees: Vec<String>,
    /// Frontmatter keys other than the five above, in source order. The
    /// value is the raw text after `key:`, including any continuation lines.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra: Vec<(String, String)>,
}

/// How a body headline is written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeadlineStyle {
    /// ATX heading, level 1..=6.
    Heading(u8),
    /// A line consisting only of `**text**`.
    Bold,
    /// Plain text line. Never produced by the parser.
    Plain,
}

impl HeadlineStyle {
    /// Heading with the level clamped into 1..=6.
    pub fn heading(level: u8) -> Self {
        HeadlineStyle::Heading(level.clamp(1, 6))
    }

    pub fn kind(self) -> HeadlineKind {
        match self {
            HeadlineStyle::Heading(_) => HeadlineKind::Heading,
            HeadlineStyle::Bold => HeadlineKind::Bold,
            HeadlineStyle::Plain => HeadlineKind::Plain,
        }
    }
}

/// Headline style without the heading level, as used by the
/// `headlines_type` instruction field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HeadlineKind {
    Heading,
    Bold,
    Plain,
}

impl HeadlineKind {
    /// Text used for this kind in a serialized instruction.
    pub fn label(self) -> &'static str {
        match self {
            HeadlineKind::Heading => "# Heading",
            HeadlineKind::Bold => "**Bold**",
            HeadlineKind::Plain => "Plain",
        }
    }

    /// Lenient inverse of [`HeadlineKind::label`].
    pub fn from_label(label: &str) -> Self {
        let label = label.trim();
        if label.starts_with('#') || label.eq_ignore_ascii_case("heading") {
            HeadlineKind::Heading
        } else if label.starts_with("**") || label.eq_ignore_ascii_case("bold") {
            HeadlineKind::Bold
        } else {
            HeadlineKind::Plain
        }
    }
}

impl fmt::Display for HeadlineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    pub headline: String,
    pub style: HeadlineStyle,
    /// Lines between this headline and the next, without leading or
    /// trailing blank lines.
    pub content: String,
}

impl Section {
    pub fn new(headline: impl Into<String>, style: HeadlineStyle, content: impl Into<String>) -> Self {
        Section {
            headline: headline.into(),
            style,
            content: content.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct IrtBody {
    /// Content before the first headline.
    pub preamble: String,
    pub sections: Vec<Section>,
}

impl IrtBody {
    pub fn is_empty(&self) -> bool {
        self.sections.is_empty() && self.preamble.trim().is_empty()
    }

    pub fn headlines(&self) -> impl Iterator<Item = &str> {
        self.sections.iter().map(|s| s.headline.as_str())
    }

    /// Majority headline kind; ties go to headings. `None` without sections.
    pub fn dominant_kind(&self) -> Option<HeadlineKind> {
        if self.sections.is_empty() {
            return None;
        }
        let mut counts = [0usize; 3];
        for s in &self.sections {
            counts[kind_slot(s.style.kind())] += 1;
        }
        let order = [HeadlineKind::Heading, HeadlineKind::Bold, HeadlineKind::Plain];
        let mut best = HeadlineKind::Heading;
        for kind in order {
            if counts[kind_slot(kind)] > counts[kind_slot(best)] {
                best = kind;
            }
        }
        Some(best)
    }

    /// Most common heading level among heading sections, lowest level on ties.
    pub fn dominant_heading_level(&self) -> Option<u8> {
        let mut counts = [0usize; 7];
        for s in &self.sections {
            if let HeadlineStyle::Heading(level) = s.style {
                counts[level.clamp(1, 6) as usize] += 1;
            }
        }
        let (level, count) = counts
            .iter()
            .enumerate()
            .skip(1)
            .fold((0, 0), |best, (lvl, &c)| if c > best.1 { (lvl, c) } else { best });
        (count > 0).then_some(level as u8)
    }

    /// Dominant style with a concrete heading level.
    pub fn dominant_style(&self) -> Option<HeadlineStyle> {
        self.dominant_kind().map(|kind| match kind {
            HeadlineKind::Heading => HeadlineStyle::Heading(self.dominant_heading_level().unwrap_or(2)),
            HeadlineKind::Bold => HeadlineStyle::Bold,
            HeadlineKind::Plain => HeadlineStyle::Plain,
        })
    }
}

fn kind_slot(kind: HeadlineKind) -> usize {
    match kind {
        HeadlineKind::Heading => 0,
        HeadlineKind::Bold => 1,
        HeadlineKind::Plain => 2,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct IssueReportTemplate {
    pub metadata: IrtMetadata,
    pub body: IrtBody,
}

impl IssueReportTemplate {
    pub fn is_valid(&self) -> bool {
        validate_irt(self).is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn body(styles: &[HeadlineStyle]) -> IrtBody {
        IrtBody {
            preamble: String::new(),
            sections: styles.iter().map(|&s| Section::new("h", s, "")).collect(),
        }
    }

    #[test]
    fn dominant_kind_majority_and_ties() {
        let b = body(&[HeadlineStyle::Bold, HeadlineStyle::Bold, HeadlineStyle::Heading(2)]);
        assert_eq!(b.dominant_kind(), Some(HeadlineKind::Bold));
        let tie = body(&[HeadlineStyle::Bold, HeadlineStyle::Heading(3)]);
        assert_eq!(tie.dominant_kind(), Some(HeadlineKind::Heading));
        assert_eq!(body(&[]).dominant_kind(), None);
    }

    #[test]
    fn dominant_heading_level_prefers_lowest_on_tie() {
        let b = body(&[HeadlineStyle::Heading(3), HeadlineStyle::Heading(2), HeadlineStyle::Bold]);
        assert_eq!(b.dominant_heading_level(), Some(2));
        assert_eq!(b.dominant_style(), Some(HeadlineStyle::Heading(2)));
        let b = body(&[HeadlineStyle::Heading(3), HeadlineStyle::Heading(3), HeadlineStyle::Heading(1)]);
        assert_eq!(b.dominant_heading_level(), Some(3));
    }

    #[test]
    fn headline_kind_labels() {
        for kind in [HeadlineKind::Heading, HeadlineKind::Bold, HeadlineKind::Plain] {
            assert_eq!(HeadlineKind::from_label(kind.label()), kind);
        }
        assert_eq!(HeadlineKind::from_label("### Heading"), HeadlineKind::Heading);
    }
}
