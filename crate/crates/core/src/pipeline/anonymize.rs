//! Detectors and replacement for personal and project-identifying text.
//!
//! Every detector skips existing `<|...|>` tags, so running the
//! replacement twice gives the same text as running it once.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::ops::Range;

pub const URL_TAG: &str = "<|URL|>";
pub const EMAIL_TAG: &str = "<|Email|>";
pub const IMAGE_TAG: &str = "<|Image|>";
pub const REPO_TAG: &str = "<|Repo_Name|>";

/// Shortest repository name that is replaced; single letters would mangle text.
const MIN_REPO_NEEDLE: usize = 2;

/// Length of a `<|Word|>` tag starting at byte `i`, if any.
pub(crate) fn tag_len_at(bytes: &[u8], i: usize) -> Option<usize> {
    if bytes.get(i..i + 2)? != b"<|" {
        return None;
    }
    let mut j = i + 2;
    while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
        j += 1;
    }
    (j > i + 2 && bytes.get(j..j + 2)? == b"|>").then_some(j + 2 - i)
}

/// Splits text into alternating plain and tag pieces; `true` marks a tag.
pub(crate) fn segments(text: &str) -> Vec<(bool, &str)> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut plain_start = 0;
    let mut i = 0;
    while i < bytes.len() {
        if let Some(len) = tag_len_at(bytes, i) {
            if plain_start < i {
                out.push((false, &text[plain_start..i]));
            }
            out.push((true, &text[i..i + len]));
            i += len;
            plain_start = i;
        } else {
            i += 1;
        }
    }
    if plain_start < bytes.len() {
        out.push((false, &text[plain_start..]));
    }
    out
}

fn is_word_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

fn url_stop(b: u8) -> bool {
    b.is_ascii_whitespace() || matches!(b, b')' | b']' | b'}' | b'>' | b'<' | b'"' | b'\'' | b'`')
}

fn starts_with_ignore_case(hay: &[u8], needle: &[u8]) -> bool {
    hay.len() >= needle.len() && hay[..needle.len()].eq_ignore_ascii_case(needle)
}

/// `http(s)://…` or `www.…` up to whitespace or a closing bracket, minus
/// trailing sentence punctuation.
pub fn find_url(text: &str) -> Option<Range<usize>> {
    let b = text.as_bytes();
    let mut i = 0;
    while i < b.len() {
        let prefix = if starts_with_ignore_case(&b[i..], b"https://") {
            8
        } else if starts_with_ignore_case(&b[i..], b"http://") {
            7
        } else if starts_with_ignore_case(&b[i..], b"www.")
            && (i == 0 || !(is_word_byte(b[i - 1]) || matches!(b[i - 1], b'.' | b'/' | b'-')))
        {
            4
        } else {
            i += 1;
            continue;
        };
        let mut end = i + prefix;
        while end < b.len() && !url_stop(b[end]) {
            end += 1;
        }
        while end > i + prefix && matches!(b[end - 1], b'.' | b',' | b';' | b':' | b'!' | b'?') {
            end -= 1;
        }
        if end > i + prefix {
            return Some(i..end);
        }
        i += prefix;
    }
    None
}

fn is_local_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || matches!(b, b'.' | b'_' | b'%' | b'+' | b'-')
}

fn is_domain_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || matches!(b, b'.' | b'-')
}

/// `local@domain.tld` with an alphabetic TLD of at least two letters.
pub fn find_email(text: &str) -> Option<Range<usize>> {
    let b = text.as_bytes();
    let mut from = 0;
    while let Some(off) = b[from..].iter().position(|&c| c == b'@') {
        let at = from + off;
        from = at + 1;

        let mut start = at;
        while start > 0 && is_local_byte(b[start - 1]) {
            start -= 1;
        }
        while start < at && b[start] == b'.' {
            start += 1;
        }
        if start == at {
            continue;
        }

        let mut end = at + 1;
        while end < b.len() && is_domain_byte(b[end]) {
            end += 1;
        }
        while end > at + 1 && matches!(b[end - 1], b'.' | b'-') {
            end -= 1;
        }
        let domain = &text[at + 1..end];
        let labels: Vec<&str> = domain.split('.').collect();
        let tld = labels.last().copied().unwrap_or("");
        if labels.len() >= 2
            && labels.iter().all(|l| !l.is_empty())
            && tld.len() >= 2
            && tld.bytes().all(|c| c.is_ascii_alphabetic())
        {
            return Some(start..end);
        }
    }
    None
}

/// Markdown image `![alt](target)` on a single line.
pub fn find_image(text: &str) -> Option<Range<usize>> {
    let mut from = 0;
    while let Some(off) = text[from..].find("![") {
        let start = from + off;
        from = start + 2;
        let rest = &text[start + 2..];
        let Some(close) = rest.find(']') else { continue };
        if rest[..close].contains('\n') || !rest[close + 1..].starts_with('(') {
            continue;
        }
        let target = &rest[close + 2..];
        let Some(paren) = target.find(')') else { continue };
        if target[..paren].contains('\n') {
            continue;
        }
        return Some(start..start + 2 + close + 2 + paren + 1);
    }
    None
}

/// Case-insensitive, word-bounded occurrence of `needle`.
pub(crate) fn find_word(text: &str, needle: &str) -> Option<Range<usize>> {
    if needle.is_empty() {
        return None;
    }
    let hay = text.as_bytes();
    let n = needle.as_bytes();
    let mut i = 0;
    while i + n.len() <= hay.len() {
        if hay[i..i + n.len()].eq_ignore_ascii_case(n) && text.is_char_boundary(i) && text.is_char_boundary(i + n.len()) {
            let before = text[..i].chars().next_back();
            let after = text[i + n.len()..].chars().next();
            let bounded = |c: Option<char>| c.is_none_or(|c| !(c.is_alphanumeric() || c == '_'));
            if bounded(before) && bounded(after) {
                return Some(i..i + n.len());
            }
        }
        i += 1;
    }
    None
}

fn replace_plain<F>(text: &str, tag: &str, find: F) -> String
where
    F: Fn(&str) -> Option<Range<usize>>,
{
    let mut out = String::with_capacity(text.len());
    for (is_tag, seg) in segments(text) {
        if is_tag {
            out.push_str(seg);
            continue;
        }
        let mut rest = seg;
        while let Some(r) = find(rest) {
            out.push_str(&rest[..r.start]);
            out.push_str(tag);
            rest = &rest[r.end..];
        }
        out.push_str(rest);
    }
    out
}

/// Names under which a repository is replaced: the full `owner/project`
/// form and the project part, longest first.
pub fn repo_needles(repo_name: &str) -> Vec<String> {
    let mut needles: Vec<String> = Vec::new();
    let full = repo_name.trim();
    if full.len() >= MIN_REPO_NEEDLE {
        needles.push(full.to_string());
    }
    if let Some((_, project)) = full.rsplit_once('/') {
        let project = project.trim();
        if project.len() >= MIN_REPO_NEEDLE && !needles.iter().any(|n| n.eq_ignore_ascii_case(project)) {
            needles.push(project.to_string());
        }
    }
    needles.sort_by_key(|n| core::cmp::Reverse(n.len()));
    needles
}

/// Replaces images, URLs, emails and repository names with their tags.
pub fn anonymize_text(text: &str, repo_needles: &[String]) -> String {
    let mut out = replace_plain(text, IMAGE_TAG, find_image);
    out = replace_plain(&out, URL_TAG, find_url);
    out = replace_plain(&out, EMAIL_TAG, find_email);
    for needle in repo_needles {
        out = replace_plain(&out, REPO_TAG, |s| find_word(s, needle));
    }
    out
}

/// Whether any URL, email or image detector fires outside existing tags.
pub fn has_sensitive(text: &str) -> bool {
    segments(text)
        .into_iter()
        .filter(|(tag, _)| !tag)
        .any(|(_, s)| find_url(s).is_some() || find_email(s).is_some() || find_image(s).is_some())
}

/// `USER_1`, `USER_2`, … in list order.
pub fn anonymize_assignees(assignees: &[String]) -> Vec<String> {
    (1..=assignees.len()).map(|i| format!("USER_{i}")).collect()
}

/// Replaces word-bounded occurrences of each original assignee with its
/// positional `USER_i` token.
pub(crate) fn replace_assignee_names(text: &str, originals: &[String]) -> String {
    let mut out = String::from(text);
    for (i, name) in originals.iter().enumerate() {
        let name = name.trim_start_matches('@');
        let token = format!("USER_{}", i + 1);
        if name.len() < MIN_REPO_NEEDLE || name == token {
            continue;
        }
        out = replace_plain(&out, &token, |s| find_word(s, name));
    }
    out
}
