//! Splits GitHub-flavoured markdown into heading-delimited sections.
//!
//! Sectioning is flat: a section runs from its heading to the next heading of
//! any level. ATX (`#`..`######`) and setext (`===` / `---` underline)
//! headings are recognised; lines inside fenced code blocks and indented code
//! are never headings. HTML heading tags are left alone.

use std::collections::BTreeSet;
use std::ops::Range;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    /// 1 to 6 for headings, 0 for the preamble before the first heading.
    pub heading_level: u8,
    pub heading_text: String,
    /// Body text with leading blank lines and trailing whitespace removed.
    pub body: String,
    /// Byte range of the whole section (heading and body) in the source.
    pub span: Range<usize>,
    /// Offset just past the heading construct, where the body starts.
    pub heading_end: usize,
    /// Offset of the end of the (last) heading text line, before its line
    /// terminator. Tags are appended here.
    pub title_line_end: usize,
}

impl Section {
    pub fn is_preamble(&self) -> bool {
        self.heading_level == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReadmeDocument {
    pub file_id: String,
    pub repo_full_name: String,
    pub source: String,
    pub sections: Vec<Section>,
}

impl ReadmeDocument {
    pub fn parse(file_id: impl Into<String>, repo_full_name: impl Into<String>, source: impl Into<String>) -> Self {
        let source = source.into();
        let sections = extract_sections(&source);
        ReadmeDocument { file_id: file_id.into(), repo_full_name: repo_full_name.into(), source, sections }
    }

    /// Blank text before the first section (a dropped preamble) followed by
    /// every section span, in order.
    pub fn reconstruct(&self) -> String {
        let mut out = String::with_capacity(self.source.len());
        let first = self.sections.first().map_or(self.source.len(), |s| s.span.start);
        out.push_str(&self.source[..first]);
        for s in &self.sections {
            out.push_str(&self.source[s.span.clone()]);
        }
        out
    }
}

struct Line<'a> {
    start: usize,
    /// Text without the line terminator.
    text: &'a str,
    /// Offset after the terminator.
    end: usize,
}

fn lines(source: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < source.len() {
        let rest = &source[start..];
        let (text_len, end) = match rest.find('\n') {
            Some(i) => (i, start + i + 1),
            None => (rest.len(), source.len()),
        };
        let mut text = &rest[..text_len];
        if let Some(t) = text.strip_suffix('\r') {
            text = t;
        }
        out.push(Line { start, text, end });
        start = end;
    }
    out
}

/// Indentation width in columns (tabs advance to the next multiple of 4) and
/// the remaining text.
fn indent(text: &str) -> (usize, &str) {
    let mut cols = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            ' ' => cols += 1,
            '\t' => cols += 4 - cols % 4,
            _ => return (cols, &text[i..]),
        }
    }
    (cols, "")
}

fn is_blank(text: &str) -> bool {
    text.trim().is_empty()
}

#[derive(Clone, Copy)]
struct Fence {
    ch: char,
    len: usize,
}

fn fence_open(text: &str) -> Option<Fence> {
    let (cols, rest) = indent(text);
    if cols > 3 {
        return None;
    }
    let ch = rest.chars().next()?;
    if ch != '`' && ch != '~' {
        return None;
    }
    let len = rest.chars().take_while(|&c| c == ch).count();
    if len < 3 {
        return None;
    }
    if ch == '`' && rest[len..].contains('`') {
        return None;
    }
    Some(Fence { ch, len })
}

fn fence_closes(text: &str, fence: Fence) -> bool {
    let (cols, rest) = indent(text);
    if cols > 3 {
        return false;
    }
    let len = rest.chars().take_while(|&c| c == fence.ch).count();
    len >= fence.len && rest[len * fence.ch.len_utf8()..].trim().is_empty()
}

/// Returns `(level, text)` when the line is an ATX heading.
fn atx_heading(text: &str) -> Option<(u8, &str)> {
    let (cols, rest) = indent(text);
    if cols > 3 {
        return None;
    }
    let hashes = rest.chars().take_while(|&c| c == '#').count();
    if !(1..=6).contains(&hashes) {
        return None;
    }
    let after = &rest[hashes..];
    if !(after.is_empty() || after.starts_with(' ') || after.starts_with('\t')) {
        return None;
    }
    let mut content = after.trim();
    // Optional closing sequence: trailing #s preceded by a space, or only #s.
    let trimmed = content.trim_end_matches('#');
    if trimmed.is_empty() {
        content = "";
    } else if trimmed.len() != content.len() && (trimmed.ends_with(' ') || trimmed.ends_with('\t')) {
        content = trimmed.trim_end();
    }
    Some((hashes as u8, content))
}

fn setext_underline(text: &str) -> Option<u8> {
    let (cols, rest) = indent(text);
    if cols > 3 {
        return None;
    }
    let rest = rest.trim_end();
    let ch = rest.chars().next()?;
    if (ch == '=' || ch == '-') && rest.chars().all(|c| c == ch) {
        Some(if ch == '=' { 1 } else { 2 })
    } else {
        None
    }
}

fn thematic_break(text: &str) -> bool {
    let (cols, rest) = indent(text);
    if cols > 3 {
        return false;
    }
    let Some(ch) = rest.chars().next() else {
        return false;
    };
    if !matches!(ch, '*' | '-' | '_') {
        return false;
    }
    let mut n = 0;
    for c in rest.chars() {
        if c == ch {
            n += 1;
        } else if c != ' ' && c != '\t' {
            return false;
        }
    }
    n >= 3
}

/// Block quotes and list items cannot become setext heading content.
fn starts_container(text: &str) -> bool {
    let (_, rest) = indent(text);
    if rest.starts_with('>') {
        return true;
    }
    let mut chars = rest.chars();
    match chars.next() {
        Some('-' | '*' | '+') => matches!(chars.next(), None | Some(' ' | '\t')),
        Some(c) if c.is_ascii_digit() => {
            let digits = rest.chars().take_while(|c| c.is_ascii_digit()).count();
            let tail = &rest[digits..];
            digits <= 9 && (tail.starts_with(". ") || tail.starts_with(") ") || tail == "." || tail == ")")
        }
        _ => false,
    }
}

struct Heading {
    level: u8,
    text: String,
    start: usize,
    heading_end: usize,
    title_line_end: usize,
}

fn find_headings(source: &str) -> Vec<Heading> {
    let lines = lines(source);
    let mut headings = Vec::new();
    let mut fence: Option<Fence> = None;
    // First line index of the open paragraph, and whether it may become a
    // setext heading.
    let mut paragraph: Option<(usize, bool)> = None;

    for (i, line) in lines.iter().enumerate() {
        let text = line.text;
        if let Some(f) = fence {
            if fence_closes(text, f) {
                fence = None;
            }
            continue;
        }
        if is_blank(text) {
            paragraph = None;
            continue;
        }
        if let Some((start, setext_ok)) = paragraph {
            if let Some(level) = setext_underline(text) {
                if setext_ok {
                    let content: Vec<&str> = lines[start..i].iter().map(|l| l.text.trim()).collect();
                    headings.push(Heading {
                        level,
                        text: content.join(" "),
                        start: lines[start].start,
                        heading_end: line.end,
                        title_line_end: lines[i - 1].start + lines[i - 1].text.len(),
                    });
                    paragraph = None;
                    continue;
                }
            }
        }
        if let Some(f) = fence_open(text) {
            fence = Some(f);
            paragraph = None;
            continue;
        }
        if let Some((level, content)) = atx_heading(text) {
            headings.push(Heading {
                level,
                text: content.to_string(),
                start: line.start,
                heading_end: line.end,
                title_line_end: line.start + text.len(),
            });
            paragraph = None;
            continue;
        }
        if thematic_break(text) {
            paragraph = None;
            continue;
        }
        let (cols, _) = indent(text);
        if paragraph.is_some() && cols < 4 && starts_container(text) {
            paragraph = Some((i, false));
        } else if paragraph.is_none() {
            if cols >= 4 {
                // indented code
                continue;
            }
            paragraph = Some((i, !starts_container(text)));
        }
    }
    headings
}

fn strip_body(text: &str) -> String {
    let mut start = 0;
    for line in lines(text) {
        if is_blank(line.text) {
            start = line.end;
        } else {
            break;
        }
    }
    text[start.min(text.len())..].trim_end().to_string()
}

/// Splits `source` into sections in document order.
pub fn extract_sections(source: &str) -> Vec<Section> {
    let headings = find_headings(source);
    let mut sections = Vec::with_capacity(headings.len() + 1);

    let first_start = headings.first().map_or(source.len(), |h| h.start);
    if !is_blank(&source[..first_start]) {
        sections.push(Section {
            heading_level: 0,
            heading_text: String::new(),
            body: strip_body(&source[..first_start]),
            span: 0..first_start,
            heading_end: 0,
            title_line_end: 0,
        });
    }
    for (i, h) in headings.iter().enumerate() {
        let end = headings.get(i + 1).map_or(source.len(), |n| n.start);
        sections.push(Section {
            heading_level: h.level,
            heading_text: h.text.clone(),
            body: strip_body(&source[h.heading_end..end]),
            span: h.start..end,
            heading_end: h.heading_end,
            title_line_end: h.title_line_end,
        });
    }
    sections
}

/// Splits an identifier into words at non-alphanumeric characters and
/// camelCase boundaries, lowercased.
pub fn split_identifier(s: &str) -> Vec<String> {
    let mut words = Vec::new();
    for chunk in s.split(|c: char| !c.is_alphanumeric()) {
        let chars: Vec<char> = chunk.chars().collect();
        let mut current = String::new();
        for (i, &c) in chars.iter().enumerate() {
            if i > 0 && c.is_uppercase() {
                let prev = chars[i - 1];
                let next_lower = chars.get(i + 1).is_some_and(|n| n.is_lowercase());
                if prev.is_lowercase() || prev.is_ascii_digit() || (prev.is_uppercase() && next_lower) {
                    words.push(std::mem::take(&mut current));
                }
            }
            current.extend(c.to_lowercase());
        }
        words.push(current);
    }
    words.retain(|w| !w.is_empty());
    words
}

/// Words of the repository name (the part after `/`), split on `-`, `_`,
/// `.` and camelCase boundaries.
pub fn repo_name_words(full_name: &str) -> BTreeSet<String> {
    let name = full_name.rsplit('/').next().unwrap_or(full_name);
    split_identifier(name).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn summary(source: &str) -> Vec<(u8, String, String)> {
        extract_sections(source).into_iter().map(|s| (s.heading_level, s.heading_text, s.body)).collect()
    }

    fn s(level: u8, h: &str, b: &str) -> (u8, String, String) {
        (level, h.to_string(), b.to_string())
    }

    #[test]
    fn atx_sections() {
        assert_eq!(summary("# A\nx\n## B\ny"), vec![s(1, "A", "x"), s(2, "B", "y")]);
    }

    #[test]
    fn fenced_hash_is_not_a_heading() {
        let src = "```\n# not a heading\n```\n# Real\n";
        let secs = extract_sections(src);
        assert_eq!(secs.len(), 2);
        assert_eq!(secs[0].heading_level, 0);
        assert!(secs[0].body.contains("# not a heading"));
        assert_eq!(secs[1].heading_text, "Real");
    }

    #[test]
    fn setext_heading() {
        assert_eq!(summary("Title\n=====\nbody"), vec![s(1, "Title", "body")]);
        assert_eq!(summary("Sub\n---\nbody"), vec![s(2, "Sub", "body")]);
    }

    #[test]
    fn dash_rule_without_paragraph_is_a_break() {
        assert_eq!(summary("# A\n\n---\ntext"), vec![s(1, "A", "---\ntext")]);
    }

    #[test]
    fn list_item_is_not_setext_content() {
        assert_eq!(summary("# A\n- item\n---\n"), vec![s(1, "A", "- item\n---")]);
    }

    #[test]
    fn closing_hashes_removed() {
        assert_eq!(summary("## Usage ##\nx"), vec![s(2, "Usage", "x")]);
        assert_eq!(summary("# C# #\n"), vec![s(1, "C#", "")]);
        assert_eq!(summary("#\n"), vec![s(1, "", "")]);
    }

    #[test]
    fn hash_without_space_is_text() {
        assert_eq!(summary("#hashtag\n"), vec![s(0, "", "#hashtag")]);
    }

    #[test]
    fn seven_hashes_is_text() {
        assert_eq!(summary("####### x\n").len(), 1);
        assert_eq!(extract_sections("####### x\n")[0].heading_level, 0);
    }

    #[test]
    fn blank_preamble_dropped() {
        let secs = extract_sections("\n\n# A\n");
        assert_eq!(secs.len(), 1);
        assert_eq!(secs[0].span, 2..6);
    }

    #[test]
    fn empty_and_blank_inputs() {
        assert!(extract_sections("").is_empty());
        assert!(extract_sections("  \n\n").is_empty());
    }

    #[test]
    fn indented_hash_is_code() {
        assert_eq!(extract_sections("text\n\n    # code\n")[0].heading_level, 0);
        assert_eq!(extract_sections("text\n\n    # code\n").len(), 1);
    }

    #[test]
    fn unclosed_fence_runs_to_end() {
        assert_eq!(extract_sections("# A\n~~~\n# B\n").len(), 1);
    }

    #[test]
    fn tilde_fence_needs_matching_close() {
        let src = "~~~~\n```\n# inside\n~~~\n# still inside\n~~~~\n# Out\n";
        let secs = extract_sections(src);
        assert_eq!(secs.len(), 2);
        assert_eq!(secs[1].heading_text, "Out");
    }

    #[test]
    fn crlf_lines() {
        let src = "# A\r\nx\r\n# B\r\ny\r\n";
        assert_eq!(summary(src), vec![s(1, "A", "x"), s(1, "B", "y")]);
        let secs = extract_sections(src);
        assert_eq!(&src[secs[0].span.start..secs[0].title_line_end], "# A");
    }

    #[test]
    fn multiline_setext() {
        assert_eq!(summary("Line one\nline two\n===\nx"), vec![s(1, "Line one line two", "x")]);
    }

    #[test]
    fn title_line_end_for_setext() {
        let src = "Title\n=====\nbody";
        let sec = &extract_sections(src)[0];
        assert_eq!(&src[..sec.title_line_end], "Title");
        assert_eq!(sec.heading_end, 12);
    }

    #[test]
    fn reconstruct_is_exact() {
        let src = "\n# A\nx\n\nB\n-\n```\n# c\n```\n";
        let doc = ReadmeDocument::parse("f", "o/r", src);
        assert_eq!(doc.reconstruct(), src);
    }

    #[test]
    fn repo_words() {
        let set = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
        assert_eq!(repo_name_words("d3/d3"), set(&["d3"]));
        assert_eq!(repo_name_words("jmilleralpine/ParallelGit"), set(&["parallel", "git"]));
        assert_eq!(repo_name_words("o/x"), set(&["x"]));
        assert_eq!(repo_name_words("a/my-cool_lib.js"), set(&["my", "cool", "lib", "js"]));
        assert_eq!(repo_name_words("a/HTMLParser"), set(&["html", "parser"]));
    }
}
