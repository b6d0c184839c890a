use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{HeadlineStyle, IrtBody, IssueReportTemplate, Section};

/// Renders the canonical text form of an IRT.
///
/// Frontmatter keys come in the fixed order name, about, title, labels,
/// assignees, followed by any extra keys. The title is always single-quoted
/// and empty values render as `''`. The body follows a blank line, with
/// preamble and sections separated by blank lines. Output uses LF line
/// endings and ends with a newline.
pub fn render_irt(irt: &IssueReportTemplate) -> String {
    let m = &irt.metadata;
    let mut out = String::with_capacity(256);
    out.push_str("---\n");
    out.push_str(&format!("name: {}\n", render_scalar(&m.name)));
    out.push_str(&format!("about: {}\n", render_scalar(&m.about)));
    out.push_str(&format!("title: {}\n", single_quoted(&m.title)));
    out.push_str(&format!("labels: {}\n", render_list_value(&m.labels)));
    out.push_str(&format!("assignees: {}\n", render_list_value(&m.assignees)));
    for (key, raw) in &m.extra {
        out.push_str(key);
        out.push(':');
        out.push_str(raw);
        out.push('\n');
    }
    out.push_str("---\n");
    let body = render_body(&irt.body);
    if !body.is_empty() {
        out.push('\n');
        out.push_str(&body);
    }
    out
}

/// Body text with a trailing newline, or an empty string for an empty body.
pub(crate) fn render_body(body: &IrtBody) -> String {
    let mut blocks: Vec<String> = Vec::with_capacity(body.sections.len() + 1);
    if !body.preamble.trim().is_empty() {
        blocks.push(body.preamble.clone());
    }
    blocks.extend(body.sections.iter().map(render_section));
    if blocks.is_empty() {
        return String::new();
    }
    let mut out = blocks.join("\n\n");
    out.push('\n');
    out
}

fn render_section(section: &Section) -> String {
    let mut out = match section.style {
        HeadlineStyle::Heading(level) => {
            let mut s = "#".repeat(level.clamp(1, 6) as usize);
            s.push(' ');
            s.push_str(&section.headline);
            s
        }
        HeadlineStyle::Bold => format!("**{}**", section.headline),
        HeadlineStyle::Plain => section.headline.clone(),
    };
    if !section.content.is_empty() {
        out.push('\n');
        out.push_str(&section.content);
    }
    out
}

fn needs_quotes(value: &str) -> bool {
    value.is_empty()
        || value.starts_with(['\'', '"', '[', '{', '>', '|'])
        || value.ends_with(['\'', '"'])
        || value != value.trim()
}

fn single_quoted(value: &str) -> String {
    format!("'{}'", value.replace('\'', "''"))
}

fn render_scalar(value: &str) -> String {
    if needs_quotes(value) {
        single_quoted(value)
    } else {
        String::from(value)
    }
}

/// Comma-joined list, quoted as a whole when an element could be misread.
pub(crate) fn render_list_value(items: &[String]) -> String {
    let joined = items.join(", ");
    let ambiguous = items
        .iter()
        .any(|i| i.starts_with(['\'', '"']) || i.ends_with(['\'', '"']));
    if ambiguous || needs_quotes(&joined) {
        single_quoted(&joined)
    } else {
        joined
    }
}
