use unicode_script::{Script, UnicodeScript};

use super::anonymize::segments;

/// Letter counts by script class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScriptCounts {
    pub latin: usize,
    pub other: usize,
}

impl ScriptCounts {
    pub fn total(&self) -> usize {
        self.latin + self.other
    }

    /// Share of Latin letters; `None` when the text has no script-bearing letters.
    pub fn latin_fraction(&self) -> Option<f64> {
        (self.total() > 0).then(|| self.latin as f64 / self.total() as f64)
    }

    fn add(&mut self, other: ScriptCounts) {
        self.latin += other.latin;
        self.other += other.other;
    }
}

/// Counts letters whose script is specific (not Common, Inherited or
/// Unknown). Digits, punctuation, whitespace and `<|...|>` tags are ignored.
pub fn count_scripts(text: &str) -> ScriptCounts {
    let mut counts = ScriptCounts::default();
    for (is_tag, seg) in segments(text) {
        if is_tag {
            continue;
        }
        for c in seg.chars().filter(|c| c.is_alphabetic()) {
            match c.script() {
                Script::Latin => counts.latin += 1,
                Script::Common | Script::Inherited | Script::Unknown => {}
                _ => counts.other += 1,
            }
        }
    }
    counts
}

pub(crate) fn count_irt_scripts(irt: &crate::IssueReportTemplate) -> ScriptCounts {
    let m = &irt.metadata;
    let mut counts = ScriptCounts::default();
    for text in [&m.name, &m.about, &m.title, &irt.body.preamble] {
        counts.add(count_scripts(text));
    }
    for label in &m.labels {
        counts.add(count_scripts(label));
    }
    for section in &irt.body.sections {
        counts.add(count_scripts(&section.headline));
        counts.add(count_scripts(&section.content));
    }
    counts
}
