use std::collections::HashSet;
use std::sync::OnceLock;

use super::abstraction::AbstractedText;

const STOP_WORDS: &str = include_str!("../../data/stopwords_en.txt");

/// The bundled English stop-word list (318 words).
pub fn stop_words() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| STOP_WORDS.lines().map(str::trim).filter(|w| !w.is_empty()).collect())
}

const PLACEHOLDER_PREFIX: &str = "@abstr_";

/// Lowercases, keeps `@abstr_*` placeholders whole, splits everything else on
/// non-alphanumeric characters, drops tokens shorter than two characters and
/// removes stop words.
pub fn tokenize(text: &AbstractedText) -> Vec<String> {
    tokenize_str(text.as_str())
}

pub(crate) fn tokenize_str(text: &str) -> Vec<String> {
    let lower = text.to_lowercase();
    let stop = stop_words();
    let mut tokens = Vec::new();
    let mut current = String::new();
    let flush = |current: &mut String, tokens: &mut Vec<String>| {
        if current.chars().count() >= 2 && !stop.contains(current.as_str()) {
            tokens.push(std::mem::take(current));
        } else {
            current.clear();
        }
    };

    let mut i = 0;
    while i < lower.len() {
        let rest = &lower[i..];
        if let Some(tail) = rest.strip_prefix(PLACEHOLDER_PREFIX) {
            let len =
                PLACEHOLDER_PREFIX.len() + tail.bytes().take_while(|b| b.is_ascii_lowercase() || *b == b'_').count();
            if len > PLACEHOLDER_PREFIX.len() {
                flush(&mut current, &mut tokens);
                tokens.push(rest[..len].to_string());
                i += len;
                continue;
            }
        }
        let ch = rest.chars().next().unwrap();
        if ch.is_alphanumeric() {
            current.push(ch);
        } else {
            flush(&mut current, &mut tokens);
        }
        i += ch.len_utf8();
    }
    flush(&mut current, &mut tokens);
    tokens
}
