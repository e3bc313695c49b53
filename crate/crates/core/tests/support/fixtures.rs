//! Hand-written README fixtures with their expected sections as
//! `(level, heading, body)`.

pub type Expected = &'static [(u8, &'static str, &'static str)];

pub const MARKDOWN_FIXTURES: &[(&str, &str, Expected)] = &[
    ("atx levels", "# A\nx\n## B\ny", &[(1, "A", "x"), (2, "B", "y")]),
    (
        "fence hides heading",
        "```\n# not a heading\n```\n# Real\n",
        &[(0, "", "```\n# not a heading\n```"), (1, "Real", "")],
    ),
    ("setext h1", "Title\n=====\nbody", &[(1, "Title", "body")]),
    ("setext h2", "Sub\n---\ntext", &[(2, "Sub", "text")]),
    ("preamble", "intro\n\n# H\n", &[(0, "", "intro"), (1, "H", "")]),
    ("blank preamble dropped", "\n\n# H\nb", &[(1, "H", "b")]),
    ("empty sections", "# A\n# B\n# C", &[(1, "A", ""), (1, "B", ""), (1, "C", "")]),
    ("tilde fence", "~~~\n## x\n~~~\n## y\nz", &[(0, "", "~~~\n## x\n~~~"), (2, "y", "z")]),
    ("closing hashes", "# Closing ##\ntext", &[(1, "Closing", "text")]),
    ("hash without space", "#NoSpace\ntext", &[(0, "", "#NoSpace\ntext")]),
    ("seven hashes", "####### seven\n", &[(0, "", "####### seven")]),
    ("indented atx", "   ### indented ok\nx", &[(3, "indented ok", "x")]),
    ("indented code", "text\n\n    # code\n", &[(0, "", "text\n\n    # code")]),
    ("list before rule", "- item\n---\n", &[(0, "", "- item\n---")]),
    ("longer fence", "````\n```\n# inside\n````\n# after", &[(0, "", "````\n```\n# inside\n````"), (1, "after", "")]),
    ("unclosed fence", "```\nunclosed\n# still code", &[(0, "", "```\nunclosed\n# still code")]),
    ("unicode", "# Héllo wörld\nünïcode", &[(1, "Héllo wörld", "ünïcode")]),
    ("crlf", "# A\r\nbody\r\n## B\r\n", &[(1, "A", "body"), (2, "B", "")]),
    ("quote is not setext", "> quote\n===\n", &[(0, "", "> quote\n===")]),
    (
        "mixed document",
        "Intro line\n\nName\n====\n\nAbout it.\n\n## Install\n\n```sh\n# comment\nnpm i\n```\n\n## License\nMIT\n",
        &[
            (0, "", "Intro line"),
            (1, "Name", "About it."),
            (2, "Install", "```sh\n# comment\nnpm i\n```"),
            (2, "License", "MIT"),
        ],
    ),
];
