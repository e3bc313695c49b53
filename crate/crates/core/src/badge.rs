//! Writing predicted categories back into a README as badges or tags.
//!
//! Shields mode puts one line of badge images right after each heading.
//! Tag mode appends ` [Label|Label]` to the heading line. [`strip_labels`]
//! removes both forms, and [`label_readme`] strips before labelling, so
//! labelling an already labelled file replaces the old labels.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::category::Category;
use crate::classifier::TrainedModel;
use crate::markdown::{extract_sections, repo_name_words, Section};
use crate::scalar::Scalar;

const SHIELDS_PREFIX: &str = "https://img.shields.io/badge/-";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BadgeMode {
    #[default]
    Shields,
    PlainTag,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadgeStyle {
    pub mode: BadgeMode,
    pub colors: BTreeMap<Category, String>,
    /// Leave out Exclusion labels.
    pub hide_exclusion: bool,
}

pub fn default_color(category: Category) -> &'static str {
    match category {
        Category::WhatWhy => "blue",
        Category::How => "green",
        Category::When => "orange",
        Category::Who => "purple",
        Category::References => "lightgrey",
        Category::Contribution => "brightgreen",
        Category::Other => "yellow",
        Category::Exclusion => "red",
    }
}

impl BadgeStyle {
    pub fn new(mode: BadgeMode) -> Self {
        BadgeStyle {
            mode,
            colors: Category::ALL.iter().map(|&c| (c, default_color(c).to_string())).collect(),
            hide_exclusion: false,
        }
    }

    pub fn color(&self, category: Category) -> &str {
        self.colors.get(&category).map_or(default_color(category), String::as_str)
    }
}

impl Default for BadgeStyle {
    fn default() -> Self {
        BadgeStyle::new(BadgeMode::Shields)
    }
}

fn encode_label(label: &str) -> String {
    label.replace('-', "--").replace('_', "__").replace(' ', "%20")
}

fn shown(labels: &BTreeSet<Category>, style: &BadgeStyle) -> Vec<Category> {
    labels.iter().copied().filter(|&c| !(style.hide_exclusion && c == Category::Exclusion)).collect()
}

pub fn shields_line(labels: &[Category], style: &BadgeStyle) -> String {
    labels
        .iter()
        .map(|c| {
            let label = c.display_label();
            format!("![{label}]({SHIELDS_PREFIX}{}-{})", encode_label(label), style.color(*c))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn plain_tag(labels: &[Category]) -> String {
    let inner: Vec<&str> = labels.iter().map(|c| c.display_label()).collect();
    format!(" [{}]", inner.join("|"))
}

fn display_category(label: &str) -> Option<Category> {
    Category::ALL.iter().copied().find(|c| c.display_label() == label)
}

/// Whether `line` consists only of badge images as written by
/// [`shields_line`].
fn is_badge_line(line: &str) -> bool {
    let mut rest = line;
    loop {
        let Some(after) = rest.strip_prefix("![") else {
            return false;
        };
        let Some((label, after)) = after.split_once("](") else {
            return false;
        };
        if display_category(label).is_none() {
            return false;
        }
        let Some(after) = after
            .strip_prefix(SHIELDS_PREFIX)
            .and_then(|r| r.strip_prefix(encode_label(label).as_str()))
            .and_then(|r| r.strip_prefix('-'))
        else {
            return false;
        };
        let color_len = after.find(|c: char| !c.is_ascii_alphanumeric()).unwrap_or(after.len());
        let Some(after) = (color_len > 0).then(|| &after[color_len..]).and_then(|r| r.strip_prefix(')')) else {
            return false;
        };
        if after.is_empty() {
            return true;
        }
        let Some(after) = after.strip_prefix(' ') else {
            return false;
        };
        rest = after;
    }
}

/// Length of a trailing ` [Label|...]` tag on a heading line, if any.
fn trailing_tag_len(line: &str) -> Option<usize> {
    let body = line.strip_suffix(']')?;
    let (_, inner) = body.rsplit_once(" [")?;
    let valid = !inner.is_empty() && inner.split('|').all(|l| display_category(l).is_some());
    valid.then_some(inner.len() + 3)
}

/// Inserts labels for every heading section. `labels[i]` belongs to
/// `sections[i]`; preamble sections never get labels.
pub fn apply_labels(source: &str, sections: &[Section], labels: &[BTreeSet<Category>], style: &BadgeStyle) -> String {
    assert_eq!(sections.len(), labels.len(), "one label set per section");
    let mut inserts: Vec<(usize, String)> = Vec::new();
    for (section, set) in sections.iter().zip(labels) {
        let cats = shown(set, style);
        if section.is_preamble() || cats.is_empty() {
            continue;
        }
        match style.mode {
            BadgeMode::PlainTag => inserts.push((section.title_line_end, plain_tag(&cats))),
            BadgeMode::Shields => {
                let line = shields_line(&cats, style);
                let at = section.heading_end;
                if source[..at].ends_with('\n') {
                    inserts.push((at, format!("{line}\n")));
                } else {
                    inserts.push((at, format!("\n{line}")));
                }
            }
        }
    }
    let mut out = String::with_capacity(source.len() + inserts.iter().map(|(_, s)| s.len()).sum::<usize>());
    let mut pos = 0;
    for (at, text) in inserts {
        out.push_str(&source[pos..at]);
        out.push_str(&text);
        pos = at;
    }
    out.push_str(&source[pos..]);
    out
}

/// Removes badge lines and heading tags.
pub fn strip_labels(source: &str) -> String {
    let mut out = String::with_capacity(source.len());
    let mut rest = source;
    while !rest.is_empty() {
        let (line, next) = match rest.find('\n') {
            Some(i) => (&rest[..i + 1], &rest[i + 1..]),
            None => (rest, ""),
        };
        let content = line.trim_end_matches('\n').trim_end_matches('\r');
        if is_badge_line(content) {
            if !line.ends_with('\n') && out.ends_with('\n') {
                // badges appended after a heading at end of file
                out.pop();
            }
        } else {
            out.push_str(line);
        }
        rest = next;
    }
    let mut cuts: Vec<std::ops::Range<usize>> = Vec::new();
    for s in extract_sections(&out) {
        if s.is_preamble() {
            continue;
        }
        let line_start = out[..s.title_line_end].rfind('\n').map_or(0, |i| i + 1);
        if let Some(len) = trailing_tag_len(&out[line_start..s.title_line_end]) {
            cuts.push(s.title_line_end - len..s.title_line_end);
        }
    }
    for cut in cuts.into_iter().rev() {
        out.replace_range(cut, "");
    }
    out
}

/// Strips old labels, predicts every section and writes the new labels.
pub fn label_readme<T: Scalar>(
    model: &TrainedModel<T>,
    source: &str,
    repo_full_name: &str,
    style: &BadgeStyle,
) -> String {
    let clean = strip_labels(source);
    let sections = extract_sections(&clean);
    let words = if repo_full_name.is_empty() { BTreeSet::new() } else { repo_name_words(repo_full_name) };
    let labels: Vec<BTreeSet<Category>> = sections.iter().map(|s| model.predict(s, &words).labels).collect();
    apply_labels(&clean, &sections, &labels, style)
}
