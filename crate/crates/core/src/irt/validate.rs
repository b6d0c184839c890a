use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use super::IssueReportTemplate;

/// A rule an IRT fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Violation {
    MissingName,
    MissingAbout,
    EmptyBody,
}

impl Violation {
    pub fn field(self) -> &'static str {
        match self {
            Violation::MissingName => "name",
            Violation::MissingAbout => "about",
            Violation::EmptyBody => "body",
        }
    }

    pub fn rule(self) -> &'static str {
        match self {
            Violation::MissingName | Violation::MissingAbout => "must be non-empty",
            Violation::EmptyBody => "must contain at least one section or non-empty text",
        }
    }

    pub fn code(self) -> &'static str {
        match self {
            Violation::MissingName => "MissingName",
            Violation::MissingAbout => "MissingAbout",
            Violation::EmptyBody => "EmptyBody",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field(), self.rule())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn codes(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.violations.iter().map(|v| v.code())
    }
}

pub fn validate_irt(irt: &IssueReportTemplate) -> ValidationReport {
    let mut violations = Vec::new();
    if irt.metadata.name.trim().is_empty() {
        violations.push(Violation::MissingName);
    }
    if irt.metadata.about.trim().is_empty() {
        violations.push(Violation::MissingAbout);
    }
    if irt.body.is_empty() {
        violations.push(Violation::EmptyBody);
    }
    ValidationReport { violations }
}
