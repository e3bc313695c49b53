//! Binary heuristic features: configurable linguistic patterns plus three
//! fixed flags (single-word non-English heading, repository name in heading,
//! non-ASCII content).

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::markdown::split_identifier;

const BUILTIN_PATTERNS: &str = include_str!("../../data/patterns.csv");
const WORDLIST: &str = include_str!("../../data/wordlist_en.txt");

pub const FLAG_SINGLE_WORD_NON_ENGLISH: &str = "heur_single_word_non_english_heading";
pub const FLAG_REPO_NAME_IN_HEADING: &str = "heur_repo_name_in_heading";
pub const FLAG_NON_ASCII_CONTENT: &str = "heur_non_ascii_content";
pub const FIXED_FLAGS: [&str; 3] = [FLAG_SINGLE_WORD_NON_ENGLISH, FLAG_REPO_NAME_IN_HEADING, FLAG_NON_ASCII_CONTENT];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatternTarget {
    Heading,
    Content,
}

impl fmt::Display for PatternTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PatternTarget::Heading => "heading",
            PatternTarget::Content => "content",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeuristicPattern {
    pub id: String,
    pub target: PatternTarget,
    /// Lowercase substring.
    pub needle: String,
    #[serde(default)]
    pub note: String,
}

impl HeuristicPattern {
    pub fn matches(&self, heading_lower: &str, content_lower: &str) -> bool {
        match self.target {
            PatternTarget::Heading => heading_lower.contains(&self.needle),
            PatternTarget::Content => content_lower.contains(&self.needle),
        }
    }
}

/// Parses the pattern CSV: `id,target,needle[,note]`, `#` comments, an
/// optional header row.
pub fn parse_patterns(text: &str) -> Result<Vec<HeuristicPattern>> {
    let mut patterns: Vec<HeuristicPattern> = Vec::new();
    let mut ids = HashSet::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.splitn(4, ',').map(str::trim).collect();
        if patterns.is_empty() && ids.is_empty() && fields.first() == Some(&"id") && fields.get(1) == Some(&"target") {
            continue;
        }
        let line_no = n + 1;
        if fields.len() < 3 {
            return Err(Error::Pattern(format!("line {line_no}: expected id,target,needle[,note]")));
        }
        let id = fields[0];
        if id.is_empty() {
            return Err(Error::Pattern(format!("line {line_no}: empty id")));
        }
        let target = match fields[1].to_ascii_lowercase().as_str() {
            "heading" => PatternTarget::Heading,
            "content" => PatternTarget::Content,
            other => {
                return Err(Error::Pattern(format!(
                    "line {line_no}: target must be 'heading' or 'content', got '{other}'"
                )))
            }
        };
        let needle = fields[2].to_lowercase();
        if needle.is_empty() {
            return Err(Error::Pattern(format!("line {line_no}: pattern '{id}' has an empty needle")));
        }
        if !ids.insert(id.to_string()) {
            return Err(Error::Pattern(format!("line {line_no}: duplicate pattern id '{id}'")));
        }
        patterns.push(HeuristicPattern {
            id: id.to_string(),
            target,
            needle,
            note: fields.get(3).map(|s| s.to_string()).unwrap_or_default(),
        });
    }
    Ok(patterns)
}

pub fn load_patterns(path: impl AsRef<Path>) -> Result<Vec<HeuristicPattern>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_patterns(&text)
}

/// The pattern file shipped with the crate.
pub fn builtin_patterns() -> Vec<HeuristicPattern> {
    parse_patterns(BUILTIN_PATTERNS).expect("bundled pattern file is valid")
}

/// Canonical CSV rendering; parsing it yields the same list.
pub fn render_patterns(patterns: &[HeuristicPattern]) -> String {
    let mut out = String::from("id,target,needle,note\n");
    for p in patterns {
        out.push_str(&format!("{},{},{},{}\n", p.id, p.target, p.needle, p.note));
    }
    out
}

/// SHA-256 of the canonical rendering, stored in model files.
pub fn patterns_checksum(patterns: &[HeuristicPattern]) -> String {
    hex::encode(Sha256::digest(render_patterns(patterns).as_bytes()))
}

/// Bundled lowercase English word list (25,000 common words).
pub fn english_words() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| WORDLIST.lines().map(str::trim).filter(|w| !w.is_empty()).collect())
}

/// Lowercase words of a heading, including camelCase parts of each word.
fn heading_words(heading: &str) -> BTreeSet<String> {
    let mut words = BTreeSet::new();
    for w in heading.split(|c: char| !c.is_alphanumeric()).filter(|w| !w.is_empty()) {
        words.insert(w.to_lowercase());
        words.extend(split_identifier(w));
    }
    words
}

fn single_word_non_english(heading: &str, wordlist: &HashSet<&str>) -> bool {
    let mut parts = heading.split_whitespace();
    let (Some(word), None) = (parts.next(), parts.next()) else {
        return false;
    };
    let word = word.trim_matches(|c: char| !c.is_alphanumeric()).to_lowercase();
    !word.is_empty() && !wordlist.contains(word.as_str())
}

/// One flag per pattern, followed by the three fixed flags.
pub fn heuristic_flags(
    heading: &str,
    content: &str,
    patterns: &[HeuristicPattern],
    repo_words: &BTreeSet<String>,
    wordlist: &HashSet<&str>,
) -> Vec<bool> {
    let heading_lower = heading.to_lowercase();
    let content_lower = content.to_lowercase();
    let mut flags: Vec<bool> = patterns.iter().map(|p| p.matches(&heading_lower, &content_lower)).collect();
    flags.push(single_word_non_english(heading, wordlist));
    let hw = heading_words(heading);
    flags.push(repo_words.iter().any(|w| hw.contains(w)));
    flags.push(!content.is_ascii());
    flags
}
