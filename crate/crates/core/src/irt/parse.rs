use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{HeadlineStyle, IrtBody, IrtMetadata, IssueReportTemplate, Section};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: missing frontmatter, expected a leading `---` line")]
    MissingFrontmatter { line: usize },
    #[error("line {line}: malformed frontmatter: {reason}")]
    MalformedFrontmatter { line: usize, reason: String },
}

impl ParseError {
    /// 1-based line number the error refers to.
    pub fn line(&self) -> usize {
        match self {
            ParseError::MissingFrontmatter { line } | ParseError::MalformedFrontmatter { line, .. } => *line,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            ParseError::MissingFrontmatter { .. } => "MissingFrontmatter",
            ParseError::MalformedFrontmatter { .. } => "MalformedFrontmatter",
        }
    }
}

fn malformed(line: usize, reason: &str) -> ParseError {
    ParseError::MalformedFrontmatter {
        line,
        reason: reason.to_string(),
    }
}

/// Parses a Markdown IRT.
///
/// The source must start (after blank lines) with a `---` line, followed by
/// `key: value` lines and a closing `---` line. Everything after the
/// closing delimiter is the body. Headlines are ATX headings and lines that
/// are entirely bold; lines inside fenced code blocks and HTML comments are
/// never headlines.
pub fn parse_irt(source: &str) -> Result<IssueReportTemplate, ParseError> {
    let source = source.strip_prefix('\u{feff}').unwrap_or(source);
    let lines: Vec<&str> = source.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l)).collect();

    let open = lines
        .iter()
        .position(|l| !l.trim().is_empty())
        .ok_or(ParseError::MissingFrontmatter { line: 1 })?;
    if lines[open].trim_end() != "---" {
        return Err(ParseError::MissingFrontmatter { line: open + 1 });
    }
    let close = lines[open + 1..]
        .iter()
        .position(|l| l.trim_end() == "---")
        .map(|p| p + open + 1)
        .ok_or_else(|| malformed(open + 1, "frontmatter is not closed by a `---` line"))?;

    let metadata = parse_frontmatter(&lines[open + 1..close], open + 2)?;
    let body = parse_body(&lines[close + 1..]);
    Ok(IssueReportTemplate { metadata, body })
}

enum Known {
    Name,
    About,
    Title,
    Labels,
    Assignees,
}

impl Known {
    fn from_key(key: &str) -> Option<Self> {
        Some(match key {
            "name" => Known::Name,
            "about" => Known::About,
            "title" => Known::Title,
            "labels" => Known::Labels,
            "assignees" => Known::Assignees,
            _ => return None,
        })
    }
}

struct Entry<'a> {
    key: &'a str,
    inline: &'a str,
    continuation: Vec<&'a str>,
}

fn parse_frontmatter(lines: &[&str], first_line_no: usize) -> Result<IrtMetadata, ParseError> {
    let mut entries: Vec<Entry<'_>> = Vec::new();
    for (offset, &line) in lines.iter().enumerate() {
        let line_no = first_line_no + offset;
        if line.trim().is_empty() {
            continue;
        }
        let indented = line.starts_with([' ', '\t']);
        if indented || line.starts_with("- ") || line == "-" {
            match entries.last_mut() {
                Some(entry) => entry.continuation.push(line),
                None => return Err(malformed(line_no, "continuation line without a key")),
            }
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let (key, inline) = line
            .split_once(':')
            .ok_or_else(|| malformed(line_no, "expected `key: value`"))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(malformed(line_no, "empty key"));
        }
        entries.push(Entry {
            key,
            inline,
            continuation: Vec::new(),
        });
    }

    let mut meta = IrtMetadata::default();
    for entry in entries {
        match Known::from_key(entry.key) {
            Some(Known::Name) => meta.name = scalar_value(&entry),
            Some(Known::About) => meta.about = scalar_value(&entry),
            Some(Known::Title) => meta.title = scalar_value(&entry),
            Some(Known::Labels) => meta.labels = list_value(&entry),
            Some(Known::Assignees) => meta.assignees = list_value(&entry),
            None => {
                let mut raw = entry.inline.to_string();
                for c in &entry.continuation {
                    raw.push('\n');
                    raw.push_str(c);
                }
                meta.extra.push((entry.key.to_string(), raw));
            }
        }
    }
    Ok(meta)
}

fn is_block_indicator(v: &str) -> bool {
    matches!(v, "|" | ">" | "|-" | ">-" | "|+" | ">+")
}

/// Folds inline text and continuation lines into one line.
fn folded(entry: &Entry<'_>) -> String {
    let inline = entry.inline.trim();
    let mut parts: Vec<&str> = Vec::new();
    if !inline.is_empty() && !is_block_indicator(inline) {
        parts.push(inline);
    }
    parts.extend(entry.continuation.iter().map(|c| c.trim()).filter(|c| !c.is_empty()));
    parts.join(" ")
}

fn scalar_value(entry: &Entry<'_>) -> String {
    unquote(&folded(entry))
}

fn list_value(entry: &Entry<'_>) -> Vec<String> {
    let dashed = !entry.continuation.is_empty()
        && entry.continuation.iter().all(|c| {
            let t = c.trim_start();
            t.starts_with("- ") || t == "-"
        });
    if dashed {
        let mut items = split_list_value(entry.inline);
        for c in &entry.continuation {
            let item = c.trim_start().trim_start_matches('-');
            items.extend(split_list_value(item));
        }
        items
    } else {
        split_list_value(&folded(entry))
    }
}

/// Strips one level of YAML single or double quoting.
pub(crate) fn unquote(value: &str) -> String {
    let v = value.trim();
    let b = v.as_bytes();
    if b.len() >= 2 && b[0] == b'\'' && b[b.len() - 1] == b'\'' {
        return v[1..v.len() - 1].replace("''", "'");
    }
    if b.len() >= 2 && b[0] == b'"' && b[b.len() - 1] == b'"' {
        let inner = &v[1..v.len() - 1];
        let mut out = String::with_capacity(inner.len());
        let mut chars = inner.chars();
        while let Some(c) = chars.next() {
            if c != '\\' {
                out.push(c);
                continue;
            }
            match chars.next() {
                Some('n') => out.push('\n'),
                Some('t') => out.push('\t'),
                Some(other) => out.push(other),
                None => out.push('\\'),
            }
        }
        return out;
    }
    v.to_string()
}

/// Splits on commas that are not inside single or double quotes.
fn split_outside_quotes(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut quote: Option<char> = None;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match (quote, c) {
            (None, '\'' | '"') => quote = Some(c),
            (Some(q), c) if c == q => quote = None,
            (None, ',') => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

/// Parses a labels/assignees value: a comma-joined scalar or a bracketed
/// flow list. Elements are unquoted, split on commas, trimmed, and empty
/// elements dropped.
pub(crate) fn split_list_value(value: &str) -> Vec<String> {
    let v = value.trim();
    let inner = v
        .strip_prefix('[')
        .and_then(|rest| rest.strip_suffix(']'))
        .unwrap_or(v);
    split_outside_quotes(inner)
        .into_iter()
        .flat_map(|item| {
            unquote(item)
                .split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Headline recognised on a line outside code fences and comments.
pub(crate) fn headline_of(line: &str) -> Option<(String, HeadlineStyle)> {
    let indent = line.len() - line.trim_start_matches(' ').len();
    if indent <= 3 {
        let rest = &line[indent..];
        let hashes = rest.len() - rest.trim_start_matches('#').len();
        if (1..=6).contains(&hashes) {
            let after = &rest[hashes..];
            if after.is_empty() || after.starts_with([' ', '\t']) {
                let text = strip_closing_hashes(after.trim());
                if text.is_empty() {
                    return None;
                }
                return Some((text.to_string(), HeadlineStyle::Heading(hashes as u8)));
            }
        }
    }
    let t = line.trim();
    if t.len() >= 5 && t.starts_with("**") && t.ends_with("**") {
        let inner = &t[2..t.len() - 2];
        if !inner.contains("**") && !inner.trim().is_empty() {
            return Some((inner.trim().to_string(), HeadlineStyle::Bold));
        }
    }
    None
}

fn strip_closing_hashes(text: &str) -> &str {
    let without = text.trim_end_matches('#');
    if without.is_empty() {
        return "";
    }
    if without.len() != text.len() && without.ends_with([' ', '\t']) {
        without.trim_end()
    } else {
        text
    }
}

fn fence_of(line: &str) -> Option<(char, usize)> {
    let indent = line.len() - line.trim_start_matches(' ').len();
    if indent > 3 {
        return None;
    }
    let t = &line[indent..];
    let c = t.chars().next()?;
    if c != '`' && c != '~' {
        return None;
    }
    let run = t.len() - t.trim_start_matches(c).len();
    (run >= 3).then_some((c, run))
}

fn closes_fence(line: &str, fence: (char, usize)) -> bool {
    match fence_of(line) {
        Some((c, run)) => c == fence.0 && run >= fence.1 && line.trim().trim_start_matches(c).is_empty(),
        None => false,
    }
}

/// Whether an HTML comment is still open after scanning `line`.
fn comment_open_after(line: &str, mut open: bool) -> bool {
    let mut rest = line;
    loop {
        let marker = if open { "-->" } else { "<!--" };
        match rest.find(marker) {
            Some(pos) => {
                rest = &rest[pos + marker.len()..];
                open = !open;
            }
            None => return open,
        }
    }
}

fn trim_blank_lines(lines: &[&str]) -> String {
    let start = lines.iter().position(|l| !l.trim().is_empty());
    let end = lines.iter().rposition(|l| !l.trim().is_empty());
    match (start, end) {
        (Some(s), Some(e)) => lines[s..=e].join("\n"),
        _ => String::new(),
    }
}

fn parse_body(lines: &[&str]) -> IrtBody {
    let mut preamble: Vec<&str> = Vec::new();
    let mut sections: Vec<(String, HeadlineStyle, Vec<&str>)> = Vec::new();
    let mut fence: Option<(char, usize)> = None;
    let mut in_comment = false;

    for &line in lines {
        let mut is_headline = None;
        if in_comment {
            in_comment = comment_open_after(line, true);
        } else if let Some(f) = fence {
            if closes_fence(line, f) {
                fence = None;
            }
        } else if let Some(f) = fence_of(line) {
            fence = Some(f);
        } else {
            is_headline = headline_of(line);
            in_comment = comment_open_after(line, false);
        }

        match is_headline {
            Some((headline, style)) => sections.push((headline, style, Vec::new())),
            None => match sections.last_mut() {
                Some((_, _, content)) => content.push(line),
                None => preamble.push(line),
            },
        }
    }

    IrtBody {
        preamble: trim_blank_lines(&preamble),
        sections: sections
            .into_iter()
            .map(|(headline, style, content)| Section {
                headline,
                style,
                content: trim_blank_lines(&content),
            })
            .collect(),
    }
}
