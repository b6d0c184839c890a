use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::pipeline::anonymize::tag_len_at;

/// Lowercased tokens: alphanumeric runs, single punctuation characters,
/// and whole `<|...|>` tags.
pub fn tokenize(text: &str) -> Vec<String> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut word = String::new();
    let mut i = 0;
    while i < text.len() {
        if let Some(len) = tag_len_at(bytes, i) {
            flush(&mut word, &mut tokens);
            tokens.push(text[i..i + len].to_string());
            i += len;
            continue;
        }
        let c = text[i..].chars().next().expect("i is on a char boundary");
        if c.is_alphanumeric() {
            word.extend(c.to_lowercase());
        } else {
            flush(&mut word, &mut tokens);
            if !c.is_whitespace() {
                tokens.push(c.to_lowercase().collect());
            }
        }
        i += c.len_utf8();
    }
    flush(&mut word, &mut tokens);
    tokens
}

fn flush(word: &mut String, tokens: &mut Vec<String>) {
    if !word.is_empty() {
        tokens.push(core::mem::take(word));
    }
}
