//! Replaces volatile markdown content with fixed placeholder tokens.
//!
//! Precedence: code blocks, images, mailto links, other links and bare URLs,
//! then numbers. Prose around a replaced span is left untouched.

pub const CODE: &str = "@abstr_code_section";
pub const IMAGE: &str = "@abstr_image";
pub const MAILTO: &str = "@abstr_mailto";
pub const HYPERLINK: &str = "@abstr_hyperlink";
pub const NUMBER: &str = "@abstr_number";

pub const PLACEHOLDERS: [&str; 5] = [MAILTO, HYPERLINK, CODE, IMAGE, NUMBER];

/// Text after content abstraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractedText(pub String);

impl AbstractedText {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub fn abstract_content(markdown: &str) -> AbstractedText {
    let text = replace_code_blocks(markdown);
    let text = replace_images(&text);
    let text = replace_links(&text);
    let text = replace_bare(&text, "mailto:", MAILTO);
    let text = replace_bare_urls(&text);
    let text = replace_numbers(&text);
    AbstractedText(text)
}

fn split_lines(text: &str) -> Vec<&str> {
    text.split_inclusive('\n').collect()
}

fn body_of(line: &str) -> &str {
    line.trim_end_matches('\n').trim_end_matches('\r')
}

fn terminator(line: &str) -> &str {
    &line[body_of(line).len()..]
}

fn indent_cols(line: &str) -> (usize, &str) {
    let mut cols = 0;
    for (i, ch) in line.char_indices() {
        match ch {
            ' ' => cols += 1,
            '\t' => cols += 4 - cols % 4,
            _ => return (cols, &line[i..]),
        }
    }
    (cols, "")
}

fn fence_marker(line: &str) -> Option<(char, usize)> {
    let (cols, rest) = indent_cols(line);
    if cols > 3 {
        return None;
    }
    let ch = rest.chars().next().filter(|c| *c == '`' || *c == '~')?;
    let n = rest.chars().take_while(|&c| c == ch).count();
    (n >= 3).then_some((ch, n))
}

fn replace_code_blocks(text: &str) -> String {
    let lines = split_lines(text);
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    let mut prev_blank = true;
    while i < lines.len() {
        let line = lines[i];
        let body = body_of(line);
        if let Some((ch, n)) = fence_marker(body) {
            let mut j = i + 1;
            let mut closed = false;
            while j < lines.len() {
                if let Some((c2, n2)) = fence_marker(body_of(lines[j])) {
                    let rest = indent_cols(body_of(lines[j])).1;
                    if c2 == ch && n2 >= n && rest[n2 * ch.len_utf8()..].trim().is_empty() {
                        closed = true;
                        break;
                    }
                }
                j += 1;
            }
            let last = if closed { j } else { lines.len() - 1 };
            out.push_str(CODE);
            out.push_str(terminator(lines[last]));
            i = last + 1;
            prev_blank = false;
            continue;
        }
        let (cols, rest) = indent_cols(body);
        if prev_blank && cols >= 4 && !rest.is_empty() {
            // Indented block: indented lines and interior blank lines.
            let mut last = i;
            let mut j = i + 1;
            while j < lines.len() {
                let b = body_of(lines[j]);
                let (c, r) = indent_cols(b);
                if r.is_empty() {
                    j += 1;
                } else if c >= 4 {
                    last = j;
                    j += 1;
                } else {
                    break;
                }
            }
            out.push_str(CODE);
            out.push_str(terminator(lines[last]));
            i = last + 1;
            prev_blank = false;
            continue;
        }
        prev_blank = body.trim().is_empty();
        out.push_str(line);
        i += 1;
    }
    out
}

/// Index just past the bracket matching the one at `open`.
fn matching(text: &str, open: usize, open_ch: u8, close_ch: u8) -> Option<usize> {
    let bytes = text.as_bytes();
    let mut depth = 0usize;
    let mut i = open;
    while i < bytes.len() {
        let b = bytes[i];
        if b == b'\n' && i + 1 < bytes.len() && bytes[i + 1] == b'\n' {
            return None;
        }
        if b == open_ch {
            depth += 1;
        } else if b == close_ch {
            depth -= 1;
            if depth == 0 {
                return Some(i + 1);
            }
        }
        i += 1;
    }
    None
}

/// Parses `[label](target)` starting at `open` (which points at `[`).
/// Returns `(label, target, end)`.
fn inline_link(text: &str, open: usize) -> Option<(&str, &str, usize)> {
    let close = matching(text, open, b'[', b']')?;
    if text.as_bytes().get(close) != Some(&b'(') {
        return None;
    }
    let end = matching(text, close, b'(', b')')?;
    Some((&text[open + 1..close - 1], text[close + 1..end - 1].trim(), end))
}

fn replace_images(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while i < text.len() {
        let rest = &text[i..];
        if rest.starts_with("![") {
            if let Some((_, _, end)) = inline_link(text, i + 1) {
                out.push_str(IMAGE);
                i = end;
                continue;
            }
        }
        if starts_with_ignore_case(rest, "<img") {
            if let Some(close) = rest.find('>') {
                out.push_str(IMAGE);
                i += close + 1;
                continue;
            }
        }
        let ch = rest.chars().next().unwrap();
        out.push(ch);
        i += ch.len_utf8();
    }
    out
}

fn starts_with_ignore_case(s: &str, prefix: &str) -> bool {
    s.as_bytes().get(..prefix.len()).is_some_and(|head| head.eq_ignore_ascii_case(prefix.as_bytes()))
}

fn is_mailto(target: &str) -> bool {
    starts_with_ignore_case(target, "mailto:")
}

fn replace_links(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while i < text.len() {
        let rest = &text[i..];
        if rest.starts_with('[') {
            if let Some((label, target, end)) = inline_link(text, i) {
                let placeholder = if is_mailto(target) { MAILTO } else { HYPERLINK };
                let label = label.trim();
                if !label.is_empty() {
                    out.push_str(label);
                    out.push(' ');
                }
                out.push_str(placeholder);
                i = end;
                continue;
            }
        }
        if rest.starts_with('<') {
            if let Some(close) = rest.find('>') {
                let inner = &rest[1..close];
                if !inner.contains(char::is_whitespace) && (is_mailto(inner) || url_scheme_len(inner).is_some()) {
                    out.push_str(if is_mailto(inner) { MAILTO } else { HYPERLINK });
                    i += close + 1;
                    continue;
                }
            }
        }
        let ch = rest.chars().next().unwrap();
        out.push(ch);
        i += ch.len_utf8();
    }
    out
}

fn url_scheme_len(s: &str) -> Option<usize> {
    ["https://", "http://", "ftp://", "www."].iter().find(|p| starts_with_ignore_case(s, p)).map(|p| p.len())
}

/// Length of a bare URL-like run starting at the beginning of `s`, with
/// trailing punctuation and unbalanced closing brackets trimmed.
fn bare_run_len(s: &str) -> usize {
    let mut end = s
        .char_indices()
        .find(|&(_, c)| c.is_whitespace() || matches!(c, '<' | '>' | '"' | '`'))
        .map_or(s.len(), |(i, _)| i);
    loop {
        let run = &s[..end];
        let Some(last) = run.chars().last() else { break };
        let trim = match last {
            '.' | ',' | ':' | ';' | '!' | '?' | '*' | '_' | '~' | '\'' => true,
            ')' => run.matches('(').count() < run.matches(')').count(),
            ']' => run.matches('[').count() < run.matches(']').count(),
            _ => false,
        };
        if !trim {
            break;
        }
        end -= last.len_utf8();
    }
    end
}

fn at_word_start(text: &str, i: usize) -> bool {
    text[..i].chars().last().is_none_or(|c| !c.is_alphanumeric())
}

fn replace_bare(text: &str, prefix: &str, placeholder: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while i < text.len() {
        let rest = &text[i..];
        if rest.len() > prefix.len() && starts_with_ignore_case(rest, prefix) && at_word_start(text, i) {
            let len = bare_run_len(rest);
            if len > prefix.len() {
                out.push_str(placeholder);
                i += len;
                continue;
            }
        }
        let ch = rest.chars().next().unwrap();
        out.push(ch);
        i += ch.len_utf8();
    }
    out
}

fn replace_bare_urls(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while i < text.len() {
        let rest = &text[i..];
        if let Some(scheme) = url_scheme_len(rest) {
            if at_word_start(text, i) {
                let len = bare_run_len(rest);
                if len > scheme {
                    out.push_str(HYPERLINK);
                    i += len;
                    continue;
                }
            }
        }
        let ch = rest.chars().next().unwrap();
        out.push(ch);
        i += ch.len_utf8();
    }
    out
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '@'
}

fn replace_numbers(text: &str) -> String {
    let bytes = text.as_bytes();
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while i < text.len() {
        if bytes[i].is_ascii_digit() {
            let glued = text[..i].chars().last().is_some_and(is_word_char);
            let mut j = i;
            loop {
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                if j + 1 < bytes.len() && bytes[j] == b'.' && bytes[j + 1].is_ascii_digit() {
                    j += 1;
                } else {
                    break;
                }
            }
            if !glued && text[j..].chars().next().is_none_or(|c| !is_word_char(c)) {
                out.push_str(NUMBER);
                i = j;
                continue;
            }
            out.push_str(&text[i..j]);
            i = j;
            continue;
        }
        let ch = text[i..].chars().next().unwrap();
        out.push(ch);
        i += ch.len_utf8();
    }
    out
}
