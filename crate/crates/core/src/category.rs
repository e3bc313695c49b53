//! Content categories and the raw annotation codes they are built from.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// The eight classification targets. `WhatWhy` merges the annotation codes
/// `What` and `Why`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Category {
    WhatWhy,
    How,
    When,
    Who,
    References,
    Contribution,
    Other,
    Exclusion,
}

impl Category {
    pub const ALL: [Category; 8] = [
        Category::WhatWhy,
        Category::How,
        Category::When,
        Category::Who,
        Category::References,
        Category::Contribution,
        Category::Other,
        Category::Exclusion,
    ];

    pub const COUNT: usize = 8;

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Category> {
        Category::ALL.get(i).copied()
    }

    /// Identifier used in model files and reports.
    pub fn name(self) -> &'static str {
        match self {
            Category::WhatWhy => "WhatWhy",
            Category::How => "How",
            Category::When => "When",
            Category::Who => "Who",
            Category::References => "References",
            Category::Contribution => "Contribution",
            Category::Other => "Other",
            Category::Exclusion => "Exclusion",
        }
    }

    /// Human-facing label, used for badges and tags.
    pub fn display_label(self) -> &'static str {
        match self {
            Category::WhatWhy => "What and Why",
            other => other.name(),
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Category {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        Category::ALL
            .iter()
            .copied()
            .find(|c| c.name().eq_ignore_ascii_case(t) || c.display_label().eq_ignore_ascii_case(t))
            .ok_or_else(|| Error::UnknownLabel(t.to_string()))
    }
}

/// A code as written by annotators. `What` and `Why` are kept apart here so
/// that association rules can be mined on the unmerged scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Code {
    What,
    Why,
    How,
    When,
    Who,
    References,
    Contribution,
    Other,
    Exclusion,
}

impl Code {
    pub const ALL: [Code; 9] = [
        Code::What,
        Code::Why,
        Code::How,
        Code::When,
        Code::Who,
        Code::References,
        Code::Contribution,
        Code::Other,
        Code::Exclusion,
    ];

    pub fn category(self) -> Category {
        match self {
            Code::What | Code::Why => Category::WhatWhy,
            Code::How => Category::How,
            Code::When => Category::When,
            Code::Who => Category::Who,
            Code::References => Category::References,
            Code::Contribution => Category::Contribution,
            Code::Other => Category::Other,
            Code::Exclusion => Category::Exclusion,
        }
    }

    /// Token used in the annotation TSV.
    pub fn token(self) -> &'static str {
        match self {
            Code::What => "What",
            Code::Why => "Why",
            Code::How => "How",
            Code::When => "When",
            Code::Who => "Who",
            Code::References => "References",
            Code::Contribution => "Contribution",
            Code::Other => "Other",
            Code::Exclusion => "-",
        }
    }
}

impl From<Category> for Code {
    fn from(c: Category) -> Code {
        match c {
            Category::WhatWhy => Code::What,
            Category::How => Code::How,
            Category::When => Code::When,
            Category::Who => Code::Who,
            Category::References => Code::References,
            Category::Contribution => Code::Contribution,
            Category::Other => Code::Other,
            Category::Exclusion => Code::Exclusion,
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Code::Exclusion => f.write_str("Exclusion"),
            other => f.write_str(other.token()),
        }
    }
}

impl FromStr for Code {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "-" || t.eq_ignore_ascii_case("exclusion") {
            return Ok(Code::Exclusion);
        }
        Code::ALL
            .iter()
            .copied()
            .find(|c| c.token().eq_ignore_ascii_case(t))
            .ok_or_else(|| Error::UnknownLabel(t.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eight_categories_and_nine_codes() {
        assert_eq!(Category::ALL.len(), Category::COUNT);
        assert_eq!(Code::ALL.len(), 9);
        for (i, c) in Category::ALL.iter().enumerate() {
            assert_eq!(c.index(), i);
        }
    }

    #[test]
    fn what_and_why_merge() {
        assert_eq!(Code::What.category(), Category::WhatWhy);
        assert_eq!(Code::Why.category(), Category::WhatWhy);
    }

    #[test]
    fn parses_codes() {
        assert_eq!("-".parse::<Code>().unwrap(), Code::Exclusion);
        assert_eq!(" References ".parse::<Code>().unwrap(), Code::References);
        let err = "Banana".parse::<Code>().unwrap_err();
        assert!(err.to_string().contains("unknown label"));
    }
}
