//! Seeded generators for fuzz inputs and synthetic corpora.

use std::collections::BTreeSet;

use readme_taxonomy::corpus::AnnotatedSection;
use readme_taxonomy::rng::SeededRng;
use readme_taxonomy::{Category, Code};

const LINE_POOL: &[&str] = &[
    "# Heading",
    "## Sub heading ##",
    "###### Deep",
    "#NotHeading",
    "   ### Indented",
    "Title",
    "=====",
    "---",
    "***",
    "```",
    "```rust",
    "~~~",
    "````",
    "    indented code",
    "- list item",
    "* another",
    "1. numbered",
    "> quote",
    "",
    "",
    "plain text line",
    "Mehr Text über Ünïcode 安装",
    "see https://example.com/docs and <mail@example.com>",
    "![logo](img.png)",
    "<h1>html</h1>",
    "\t# tab heading",
    "#",
    "# trailing   ",
];

/// Random markdown assembled from structural line fragments, with mixed
/// line endings.
pub fn random_markdown(rng: &mut SeededRng) -> String {
    let lines = rng.index(30);
    let mut out = String::new();
    for _ in 0..lines {
        out.push_str(LINE_POOL[rng.index(LINE_POOL.len())]);
        out.push_str(match rng.index(10) {
            0 => "\r\n",
            1 => "",
            _ => "\n",
        });
    }
    out
}

pub const PLANTED: [(Category, &str); 8] = [
    (Category::WhatWhy, "purpose"),
    (Category::How, "installation"),
    (Category::When, "roadmap"),
    (Category::Who, "maintainers"),
    (Category::References, "documentation"),
    (Category::Contribution, "contributing"),
    (Category::Other, "licensing"),
    (Category::Exclusion, "toc"),
];

const FILLER: &[&str] = &[
    "alpha", "bravo", "charlie", "delta", "echo", "foxtrot", "golf", "hotel", "india", "juliet", "kilo", "lima",
    "mike", "november", "oscar", "papa", "quebec", "romeo", "sierra", "tango", "uniform", "victor", "whiskey", "xray",
    "yankee", "zulu",
];

/// Keywords planted per category: the category stem followed by `0..POOL`.
pub const POOL: usize = 20;
const PER_SECTION: usize = 3;

pub fn planted_keyword(category_slot: usize, j: usize) -> String {
    format!("{}{j}", PLANTED[category_slot].1)
}

/// Sections whose categories are exactly those whose planted stem occurs in
/// the body. Every category plants three keywords from its own pool, so
/// keywords recur across sections without each being in all of them. Most
/// sections carry one category, some carry two.
pub fn planted_corpus(sections: usize, seed: u64) -> Vec<AnnotatedSection> {
    let mut rng = SeededRng::new(seed);
    (0..sections)
        .map(|i| {
            let mut cats = BTreeSet::from([i % PLANTED.len()]);
            if rng.index(5) == 0 {
                cats.insert(rng.index(PLANTED.len()));
            }
            let mut words: Vec<String> =
                (0..6 + rng.index(6)).map(|_| FILLER[rng.index(FILLER.len())].to_string()).collect();
            for &c in &cats {
                for _ in 0..PER_SECTION {
                    let at = rng.index(words.len() + 1);
                    words.insert(at, planted_keyword(c, rng.index(POOL)));
                }
            }
            let labels: BTreeSet<Code> = cats.iter().map(|&c| Code::from(PLANTED[c].0)).collect();
            AnnotatedSection {
                section_id: format!("s{i}"),
                file_id: format!("owner{}__project{}", i / 5, i / 5),
                heading_markdown: format!("## {}", FILLER[rng.index(FILLER.len())]),
                heading_level: 2,
                content_markdown: words.join(" "),
                labels,
            }
        })
        .collect()
}
