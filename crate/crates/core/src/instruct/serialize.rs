use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{Field, FieldValue, Instruction, EMPTY_TOKEN, MASK_TOKEN};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstructionParseError {
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { key: String, line: usize },
    #[error("missing required key `{0}`")]
    MissingRequiredKey(&'static str),
    #[error("line {line}: text before the first key")]
    UnexpectedLine { line: usize },
    #[error("line {line}: malformed list for `{key}`")]
    MalformedList { key: &'static str, line: usize },
}

/// Serializes an instruction as `key: value` lines in fixed order.
///
/// Text values are written as-is, labels and assignees comma-joined, and
/// headlines as a bracketed list of quoted strings. The summary line is
/// only present when the instruction has one.
pub fn serialize_instruction(ins: &Instruction) -> String {
    let mut lines: Vec<String> = Vec::with_capacity(8);
    let text = |v: &FieldValue<String>| match v {
        FieldValue::Concrete(s) => s.replace(['\r', '\n'], " "),
        FieldValue::Empty => EMPTY_TOKEN.to_string(),
        FieldValue::Masked => MASK_TOKEN.to_string(),
    };
    let list = |v: &FieldValue<Vec<String>>, quoted: bool| match v {
        FieldValue::Concrete(items) if quoted => quoted_list(items),
        FieldValue::Concrete(items) => items.join(", "),
        FieldValue::Empty => EMPTY_TOKEN.to_string(),
        FieldValue::Masked => MASK_TOKEN.to_string(),
    };
    lines.push(alloc::format!("name: {}", text(&ins.name)));
    lines.push(alloc::format!("about: {}", text(&ins.about)));
    lines.push(alloc::format!("title: {}", text(&ins.title)));
    lines.push(alloc::format!("labels: {}", list(&ins.labels, false)));
    lines.push(alloc::format!("assignees: {}", list(&ins.assignees, false)));
    lines.push(alloc::format!("headlines_type: {}", text(&ins.headlines_type)));
    lines.push(alloc::format!("headlines: {}", list(&ins.headlines, true)));
    if let Some(summary) = &ins.summary {
        lines.push(alloc::format!("summary: {summary}"));
    }
    lines.join("\n")
}

/// Python-style string literal: single quotes unless the text contains a
/// single quote and no double quote.
fn quote_item(item: &str) -> String {
    let q = if item.contains('\'') && !item.contains('"') { '"' } else { '\'' };
    let mut out = String::with_capacity(item.len() + 2);
    out.push(q);
    for c in item.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if c == q => {
                out.push('\\');
                out.push(c);
            }
            c => out.push(c),
        }
    }
    out.push(q);
    out
}

fn quoted_list(items: &[String]) -> String {
    let inner: Vec<String> = items.iter().map(|i| quote_item(i)).collect();
    alloc::format!("[{}]", inner.join(", "))
}

/// Parses `['a', "b's"]`. Returns `None` on malformed input.
fn parse_quoted_list(text: &str) -> Option<Vec<String>> {
    let inner = text.trim().strip_prefix('[')?.strip_suffix(']')?;
    let mut items = Vec::new();
    let mut chars = inner.chars().peekable();
    loop {
        while chars.next_if(|c| c.is_whitespace()).is_some() {}
        let Some(q) = chars.next() else { break };
        if q != '\'' && q != '"' {
            return None;
        }
        let mut item = String::new();
        loop {
            match chars.next()? {
                '\\' => match chars.next()? {
                    'n' => item.push('\n'),
                    't' => item.push('\t'),
                    other => item.push(other),
                },
                c if c == q => break,
                c => item.push(c),
            }
        }
        items.push(item);
        while chars.next_if(|c| c.is_whitespace()).is_some() {}
        match chars.next() {
            Some(',') => continue,
            None => break,
            Some(_) => return None,
        }
    }
    Some(items)
}

fn is_key_line(line: &str) -> Option<(&str, &str)> {
    let (key, rest) = line.split_once(':')?;
    if key.is_empty() || !key.bytes().all(|b| b.is_ascii_lowercase() || b == b'_') {
        return None;
    }
    (rest.is_empty() || rest.starts_with(' ')).then_some((key, rest))
}

/// Inverse of [`serialize_instruction`].
///
/// Lines that do not start with a lowercase `key:` continue the previous
/// value (joined with a space), so hard-wrapped instructions parse too.
/// Everything after `summary:` belongs to the summary.
pub fn parse_instruction(text: &str) -> Result<Instruction, InstructionParseError> {
    let mut values: [Option<(String, usize)>; 7] = Default::default();
    let mut summary: Option<String> = None;
    let mut current: Option<usize> = None;

    let lines: Vec<&str> = text.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l)).collect();
    let mut idx = 0;
    while idx < lines.len() {
        let line = lines[idx];
        let line_no = idx + 1;
        idx += 1;
        if let Some((key, rest)) = is_key_line(line) {
            if key == "summary" {
                let mut s = rest.strip_prefix(' ').unwrap_or(rest).to_string();
                for more in &lines[idx..] {
                    s.push('\n');
                    s.push_str(more);
                }
                if s.ends_with('\n') {
                    s.pop();
                }
                summary = Some(s);
                break;
            }
            let field = Field::from_key(key).ok_or_else(|| InstructionParseError::UnknownKey {
                key: key.to_string(),
                line: line_no,
            })?;
            let slot = field as usize;
            values[slot] = Some((rest.trim().to_string(), line_no));
            current = Some(slot);
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        match current {
            Some(slot) => {
                let (value, _) = values[slot].as_mut().expect("current slot is set");
                let trimmed = value.trim_end().len();
                value.truncate(trimmed);
                if !value.is_empty() {
                    value.push(' ');
                }
                value.push_str(line.trim());
            }
            None => return Err(InstructionParseError::UnexpectedLine { line: line_no }),
        }
    }

    let mut take = |field: Field| -> Result<(String, usize), InstructionParseError> {
        values[field as usize]
            .take()
            .ok_or(InstructionParseError::MissingRequiredKey(field.key()))
    };
    let text_field = |(v, _): (String, usize)| FieldValue::from_text(&v);
    let comma_list = |(v, _): (String, usize)| marker(&v).unwrap_or_else(|| FieldValue::from_items(v.split(',')));

    let name = text_field(take(Field::Name)?);
    let about = text_field(take(Field::About)?);
    let title = text_field(take(Field::Title)?);
    let labels = comma_list(take(Field::Labels)?);
    let assignees = comma_list(take(Field::Assignees)?);
    let headlines_type = text_field(take(Field::HeadlinesType)?);
    let (raw, line) = take(Field::Headlines)?;
    let headlines = match marker(&raw) {
        Some(state) => state,
        None if raw.starts_with('[') => {
            let items = parse_quoted_list(&raw).ok_or(InstructionParseError::MalformedList {
                key: Field::Headlines.key(),
                line,
            })?;
            FieldValue::from_items(items)
        }
        None => FieldValue::from_items(raw.split(',')),
    };

    Ok(Instruction {
        name,
        about,
        title,
        labels,
        assignees,
        headlines_type,
        headlines,
        summary,
    })
}

fn marker(value: &str) -> Option<FieldValue<Vec<String>>> {
    match value.trim() {
        "" | EMPTY_TOKEN => Some(FieldValue::Empty),
        MASK_TOKEN => Some(FieldValue::Masked),
        _ => None,
    }
}
