//! Annotation TSV: `file_id, section_id, heading_level, heading, content,
//! labels`. Backslash, newline, carriage return and tab inside text cells are
//! escaped as `\\`, `\n`, `\r` and `\t`.

use std::collections::BTreeSet;
use std::path::Path;

use super::AnnotatedSection;
use crate::category::Code;
use crate::error::{Error, Result};

pub const TSV_HEADER: &str = "file_id\tsection_id\theading_level\theading\tcontent\tlabels";

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(s: &str, line: usize) -> Result<String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(ch) = chars.next() {
        if ch != '\\' {
            out.push(ch);
            continue;
        }
        match chars.next() {
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some('t') => out.push('\t'),
            Some('\\') => out.push('\\'),
            Some(other) => {
                // unknown escapes pass through unchanged
                out.push('\\');
                out.push(other);
            }
            None => return Err(Error::Malformed { line, message: "dangling backslash at end of cell".into() }),
        }
    }
    Ok(out)
}

fn parse_labels(cell: &str) -> Result<BTreeSet<Code>> {
    cell.split(',').map(str::trim).filter(|t| !t.is_empty()).map(|t| t.parse::<Code>()).collect()
}

fn render_labels(labels: &BTreeSet<Code>) -> String {
    labels.iter().map(|c| c.token()).collect::<Vec<_>>().join(",")
}

pub fn parse_annotations(text: &str) -> Result<Vec<AnnotatedSection>> {
    let mut out = Vec::new();
    let mut seen_header = false;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if !seen_header {
            if line.trim().is_empty() {
                continue;
            }
            if line.split('\t').map(str::trim).collect::<Vec<_>>() != TSV_HEADER.split('\t').collect::<Vec<_>>() {
                return Err(Error::Malformed {
                    line: line_no,
                    message: format!("expected header row '{}'", TSV_HEADER.replace('\t', "<TAB>")),
                });
            }
            seen_header = true;
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split('\t').collect();
        if cells.len() != 6 {
            return Err(Error::Malformed {
                line: line_no,
                message: format!("expected 6 tab-separated fields, found {}", cells.len()),
            });
        }
        let heading_level: u8 = cells[2].trim().parse().ok().filter(|l| *l <= 6).ok_or_else(|| Error::Malformed {
            line: line_no,
            message: format!("heading_level must be an integer 0-6, got '{}'", cells[2]),
        })?;
        if cells[1].is_empty() || cells[0].is_empty() {
            return Err(Error::Malformed { line: line_no, message: "file_id and section_id must be non-empty".into() });
        }
        out.push(AnnotatedSection {
            file_id: unescape(cells[0], line_no)?,
            section_id: unescape(cells[1], line_no)?,
            heading_level,
            heading_markdown: unescape(cells[3], line_no)?,
            content_markdown: unescape(cells[4], line_no)?,
            labels: parse_labels(cells[5])?,
        });
    }
    Ok(out)
}

pub fn render_annotations(sections: &[AnnotatedSection]) -> String {
    let mut out = String::from(TSV_HEADER);
    out.push('\n');
    for s in sections {
        let row = [
            escape(&s.file_id),
            escape(&s.section_id),
            s.heading_level.to_string(),
            escape(&s.heading_markdown),
            escape(&s.content_markdown),
            render_labels(&s.labels),
        ];
        out.push_str(&row.join("\t"));
        out.push('\n');
    }
    out
}

pub fn load_annotations(path: impl AsRef<Path>) -> Result<Vec<AnnotatedSection>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_annotations(&text)
}

pub fn save_annotations(path: impl AsRef<Path>, sections: &[AnnotatedSection]) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, render_annotations(sections)).map_err(|e| Error::io(path, e))
}
