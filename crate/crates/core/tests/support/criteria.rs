//! End-to-end checks shared by the integration tests and the acceptance
//! runner. Each returns a short summary on success and the first violation
//! otherwise.

use std::collections::{BTreeMap, BTreeSet};

use readme_taxonomy::badge::{apply_labels, label_readme, strip_labels, BadgeMode, BadgeStyle};
use readme_taxonomy::classifier::{
    oversample_duplicate, oversample_smote, Algorithm, Oversampler, Prediction, PreparedCorpus, TrainConfig,
};
use readme_taxonomy::evaluation::{cross_validate, EvalOptions, EvalReport};
use readme_taxonomy::features::{builtin_patterns, fit_vocabulary, vectorize};
use readme_taxonomy::markdown::{extract_sections, repo_name_words, ReadmeDocument};
use readme_taxonomy::rng::SeededRng;
use readme_taxonomy::rules::{mine_rules, MinSupport, Transaction};
use readme_taxonomy::sparse::SparseVec;
use readme_taxonomy::{Category, Model};

use super::fixtures::MARKDOWN_FIXTURES;
use super::generators::{planted_corpus, random_markdown};
use super::oracles;

pub type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(label: &str, got: f64, want: f64) -> Result<(), String> {
    ensure((got - want).abs() <= 1e-9, || format!("{label}: got {got}, oracle {want}"))
}

fn close_opt(label: &str, got: Option<f64>, want: Option<f64>) -> Result<(), String> {
    match (got, want) {
        (Some(g), Some(w)) => close(label, g, w),
        (None, None) => Ok(()),
        _ => Err(format!("{label}: got {got:?}, oracle {want:?}")),
    }
}

/// Random truth/prediction/score triples scored by the library and by the
/// brute-force oracle.
pub fn metric_oracle(cases: usize, seed: u64) -> Outcome {
    let mut rng = SeededRng::new(seed);
    let labels = Category::COUNT;
    for case in 0..cases {
        let n = 1 + rng.index(50);
        let density = 1 + rng.index(4);
        let draw = |rng: &mut SeededRng| -> Vec<Vec<bool>> {
            (0..n).map(|_| (0..labels).map(|_| rng.index(density + 1) == 0).collect()).collect()
        };
        let truth = draw(&mut rng);
        let pred = draw(&mut rng);
        // coarse grid so that score ties occur
        let scores: Vec<Vec<f64>> =
            (0..n).map(|_| (0..labels).map(|_| rng.index(9) as f64 / 4.0 - 1.0).collect()).collect();
        let as_sets = |m: &[Vec<bool>]| -> Vec<BTreeSet<Category>> {
            m.iter().map(|row| Category::ALL.iter().copied().filter(|c| row[c.index()]).collect()).collect()
        };
        let predictions: Vec<Prediction<f64>> = as_sets(&pred)
            .into_iter()
            .zip(&scores)
            .map(|(labels, s)| Prediction { labels, scores: s.clone() })
            .collect();
        let report: EvalReport<f64> = EvalReport::from_predictions(
            &as_sets(&truth),
            &predictions,
            TrainConfig::default(),
            EvalOptions::default(),
        )
        .map_err(|e| format!("case {case}: {e}"))?;
        let want = oracles::multi_label(&truth, &pred, &scores, labels);
        for (m, (w, weight)) in report.per_label.iter().zip(want.per_label.iter().zip(&want.weights)) {
            let tag = |what: &str| format!("case {case} {} {what}", m.category);
            close(&tag("precision"), m.precision, w.0)?;
            close(&tag("recall"), m.recall, w.1)?;
            close(&tag("f1"), m.f1, w.2)?;
            close(&tag("kappa"), m.kappa, w.3)?;
            close(&tag("mcc"), m.mcc, w.4)?;
            close_opt(&tag("auc"), m.auc, w.5)?;
            close(&tag("weight"), m.weight, *weight)?;
        }
        let tag = |what: &str| format!("case {case} weighted {what}");
        close(&tag("f1"), report.weighted_f1, want.weighted_f1)?;
        close(&tag("precision"), report.weighted_precision, want.weighted_precision)?;
        close(&tag("recall"), report.weighted_recall, want.weighted_recall)?;
        close(&tag("kappa"), report.weighted_kappa, want.weighted_kappa)?;
        close(&tag("mcc"), report.weighted_mcc, want.weighted_mcc)?;
        close_opt(&tag("auc"), report.weighted_auc, want.weighted_auc)?;
    }
    Ok(format!("{cases} cases agree within 1e-9"))
}

/// Apriori against exhaustive enumeration on small random transaction sets.
pub fn apriori_oracle(sets: usize, seed: u64) -> Outcome {
    let mut total_rules = 0;
    for s in 0..sets as u64 {
        let mut rng = SeededRng::derive(seed, s);
        let items = 1 + rng.index(5);
        let raw: Vec<BTreeSet<u8>> =
            (0..rng.index(9)).map(|_| (0..items as u8).filter(|_| rng.index(2) == 0).collect()).collect();
        let transactions: Vec<Transaction<u8>> = raw
            .iter()
            .enumerate()
            .map(|(i, items)| Transaction { id: format!("t{i}"), items: items.clone() })
            .collect();
        let got = mine_rules::<u8, f64>(&transactions, MinSupport::Fraction(0.1), 0.5)
            .map_err(|e| format!("set {s}: {e}"))?;
        let got: Vec<oracles::OracleRule> = got
            .into_iter()
            .map(|r| {
                (
                    r.antecedent.into_iter().collect(),
                    r.consequent.into_iter().collect(),
                    r.count,
                    r.support,
                    r.confidence,
                )
            })
            .collect();
        let want = oracles::exhaustive_rules(&raw, 0.1, 0.5);
        ensure(got == want, || format!("set {s} {raw:?}: got {got:?}, oracle {want:?}"))?;
        total_rules += got.len();
    }
    Ok(format!("{sets} transaction sets, {total_rules} rules, exact match"))
}

/// Reconstruction, contiguity and preamble placement of one document.
pub fn check_structure(source: &str) -> Result<(), String> {
    let doc = ReadmeDocument::parse("f", "o/r", source);
    ensure(doc.reconstruct() == source, || format!("reconstruction differs for {source:?}"))?;
    for pair in doc.sections.windows(2) {
        ensure(pair[0].span.start < pair[1].span.start && pair[0].span.end == pair[1].span.start, || {
            format!("non-contiguous spans in {source:?}")
        })?;
    }
    if let Some(last) = doc.sections.last() {
        ensure(last.span.end == source.len(), || format!("last span short of the end in {source:?}"))?;
    }
    let preambles: Vec<usize> = (0..doc.sections.len()).filter(|&i| doc.sections[i].is_preamble()).collect();
    ensure(preambles.is_empty() || preambles == [0], || format!("misplaced preamble in {source:?}"))
}

pub fn markdown_fixtures(generated: usize, seed: u64) -> Outcome {
    for (name, source, expected) in MARKDOWN_FIXTURES {
        let got: Vec<(u8, String, String)> =
            extract_sections(source).into_iter().map(|s| (s.heading_level, s.heading_text, s.body)).collect();
        let want: Vec<(u8, String, String)> =
            expected.iter().map(|&(l, h, b)| (l, h.to_string(), b.to_string())).collect();
        ensure(got == want, || format!("fixture {name}: got {got:?}, expected {want:?}"))?;
        check_structure(source)?;
    }
    let mut rng = SeededRng::new(seed);
    for _ in 0..generated {
        check_structure(&random_markdown(&mut rng))?;
    }
    Ok(format!("{} fixtures, {generated} generated documents", MARKDOWN_FIXTURES.len()))
}

fn toy_corpus(rng: &mut SeededRng) -> Vec<Vec<String>> {
    let types = 1 + rng.index(8);
    (0..1 + rng.index(10)).map(|_| (0..rng.index(7)).map(|_| format!("t{}", rng.index(types))).collect()).collect()
}

pub fn tfidf_oracle(corpora: usize, seed: u64) -> Outcome {
    let mut rng = SeededRng::new(seed);
    let mut checked = 0;
    while checked < corpora {
        let corpus = toy_corpus(&mut rng);
        let Ok(vocab) = fit_vocabulary::<f64, _>(&corpus) else {
            ensure(corpus.iter().all(|s| s.is_empty()), || format!("vocabulary failed on {corpus:?}"))?;
            continue;
        };
        checked += 1;
        for col in 0..vocab.len() {
            let idf = vocab.idf(col);
            ensure(idf > 0.0 && idf <= 1.0, || format!("idf {idf} out of (0, 1]"))?;
        }
        for section in &corpus {
            let got = vectorize(section, &vocab);
            let want = oracles::tfidf(&corpus, section);
            let got_map: BTreeMap<String, f64> = got.iter().map(|(col, v)| (vocab.token(col).to_string(), v)).collect();
            ensure(got_map == want, || format!("section {section:?}: got {got_map:?}, oracle {want:?}"))?;
        }
    }
    Ok(format!("{corpora} toy corpora, exact match"))
}

/// Ten-fold CV of the default configuration on a planted-keyword corpus.
pub fn synthetic_cv(sections: usize, seed: u64) -> Result<f64, String> {
    let corpus = PreparedCorpus::new(&planted_corpus(sections, seed), builtin_patterns());
    let options = EvalOptions { seed, ..EvalOptions::default() };
    let report: EvalReport<f64> =
        cross_validate(&corpus, &TrainConfig::default(), &options).map_err(|e| e.to_string())?;
    Ok(report.weighted_f1)
}

fn random_labels(rng: &mut SeededRng) -> Vec<bool> {
    let n = 12 + rng.index(40);
    loop {
        let p = 1 + rng.index(4);
        let labels: Vec<bool> = (0..n).map(|_| rng.index(p + 1) == 0).collect();
        let pos = labels.iter().filter(|&&l| l).count();
        if pos >= 4 && n - pos >= 4 {
            return labels;
        }
    }
}

fn random_row(rng: &mut SeededRng, dim: usize) -> SparseVec<f64> {
    let mut pairs = Vec::new();
    for c in 0..dim {
        if rng.index(2) == 0 {
            pairs.push((c, rng.index(7) as f64 - 3.0 + rng.unit()));
        }
    }
    SparseVec::from_pairs(pairs)
}

/// Whether `s = a + u (b - a)` for some `u` in `[0, 1]`.
fn on_segment(s: &[f64], a: &[f64], b: &[f64]) -> bool {
    let u = (0..a.len()).find(|&i| (b[i] - a[i]).abs() > 1e-12).map_or(0.0, |i| (s[i] - a[i]) / (b[i] - a[i]));
    (-1e-12..=1.0 + 1e-12).contains(&u)
        && (0..a.len()).all(|i| (a[i] + u * (b[i] - a[i]) - s[i]).abs() <= 1e-9 * (1.0 + s[i].abs()))
}

pub fn oversampling_invariants(seeds: u64) -> Outcome {
    for seed in 0..seeds {
        let mut rng = SeededRng::derive(99, seed);
        let labels = random_labels(&mut rng);
        let idx = oversample_duplicate(&labels, seed).map_err(|e| e.to_string())?;
        let pos = idx.iter().filter(|&&i| labels[i]).count();
        let neg = idx.len() - pos;
        ensure(pos.abs_diff(neg) <= 1, || format!("seed {seed}: duplicate left {pos} vs {neg}"))?;
        let mut counts = vec![0usize; labels.len()];
        for &i in &idx {
            counts[i] += 1;
        }
        ensure(counts.iter().all(|&c| c >= 1), || format!("seed {seed}: duplicate dropped an instance"))?;

        let dim = 1 + rng.index(6);
        let rows: Vec<SparseVec<f64>> = labels.iter().map(|_| random_row(&mut rng, dim)).collect();
        let k = 1 + rng.index(3);
        let out = oversample_smote(&rows, &labels, k, seed).map_err(|e| format!("seed {seed}: {e}"))?;
        let pos = out.labels.iter().filter(|&&l| l).count();
        let neg = out.labels.len() - pos;
        ensure(pos.abs_diff(neg) <= 1, || format!("seed {seed}: smote left {pos} vs {neg}"))?;
        ensure(out.rows[..out.original] == rows[..], || format!("seed {seed}: smote altered input rows"))?;
        let n_pos = labels.iter().filter(|&&l| l).count();
        let minority_label = n_pos < labels.len() - n_pos;
        let minority: Vec<Vec<f64>> =
            rows.iter().zip(&labels).filter(|(_, &l)| l == minority_label).map(|(r, _)| r.to_dense(dim)).collect();
        for (s, &l) in out.rows[out.original..].iter().zip(&out.labels[out.original..]) {
            let s = s.to_dense(dim);
            ensure(l == minority_label, || format!("seed {seed}: synthetic row has the majority label"))?;
            let convex = minority.iter().any(|a| minority.iter().any(|b| on_segment(&s, a, b)));
            ensure(convex, || format!("seed {seed}: synthetic point {s:?} off every minority segment"))?;
        }
    }
    Ok(format!("{seeds} seeds, duplicate and smote"))
}

fn fixture_model(config: &TrainConfig, seed: u64) -> Result<Model, String> {
    let corpus = PreparedCorpus::new(&planted_corpus(120, seed), builtin_patterns());
    corpus.fit_model(&corpus.all_indices(), config).map_err(|e| e.to_string())
}

/// Saves and reloads models of every algorithm and compares predictions on
/// held-out fixture sections bit for bit.
pub fn model_round_trip(fixtures: usize) -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let held_out = planted_corpus(fixtures, 777);
    let configs = [
        TrainConfig::default(),
        TrainConfig { algorithm: Algorithm::Lr, ..TrainConfig::default() },
        TrainConfig { algorithm: Algorithm::Nb, oversampler: Oversampler::None, ..TrainConfig::default() },
        TrainConfig {
            algorithm: Algorithm::Knn,
            oversampler: Oversampler::Smote,
            smote_k: 2,
            ..TrainConfig::default()
        },
    ];
    for config in configs {
        let model = fixture_model(&config, 5)?;
        let path = dir.path().join(format!("{}.json", config.algorithm));
        model.save(&path).map_err(|e| e.to_string())?;
        let loaded = Model::load(&path).map_err(|e| e.to_string())?;
        for s in &held_out {
            let words = repo_name_words(s.repo_name());
            let heading = s.heading_text();
            let a = model.predict_text(&heading, &s.content_markdown, &words);
            let b = loaded.predict_text(&heading, &s.content_markdown, &words);
            let same_bits = a.scores.iter().zip(&b.scores).all(|(x, y)| x.to_bits() == y.to_bits());
            ensure(a.labels == b.labels && same_bits, || {
                format!("{} model: prediction for {} changed after reload", config.algorithm, s.section_id)
            })?;
        }
    }
    Ok(format!("4 algorithms, {fixtures} fixtures, identical predictions"))
}

fn random_label_sets(rng: &mut SeededRng, n: usize) -> Vec<BTreeSet<Category>> {
    (0..n).map(|_| Category::ALL.iter().copied().filter(|_| rng.index(3) == 0).collect()).collect()
}

/// Label, strip and relabel on the markdown fixtures and generated documents.
pub fn badge_idempotence(generated: usize, seed: u64) -> Outcome {
    let mut rng = SeededRng::new(seed);
    let mut docs: Vec<String> = MARKDOWN_FIXTURES.iter().map(|(_, s, _)| s.to_string()).collect();
    docs.extend((0..generated).map(|_| random_markdown(&mut rng)));
    let model = fixture_model(
        &TrainConfig { algorithm: Algorithm::Nb, oversampler: Oversampler::None, ..TrainConfig::default() },
        3,
    )?;
    for source in &docs {
        let sections = extract_sections(source);
        for mode in [BadgeMode::Shields, BadgeMode::PlainTag] {
            let style = BadgeStyle::new(mode);
            let labels = random_label_sets(&mut rng, sections.len());
            let labeled = apply_labels(source, &sections, &labels, &style);
            ensure(strip_labels(&labeled) == *source, || {
                format!("{mode:?}: strip did not restore {source:?} from {labeled:?}")
            })?;
            let once = label_readme(&model, source, "owner__project", &style);
            let twice = label_readme(&model, &once, "owner__project", &style);
            ensure(once == twice, || format!("{mode:?}: relabeling changed {once:?} into {twice:?}"))?;
            ensure(strip_labels(&once) == *source, || format!("{mode:?}: strip after label_readme differs"))?;
        }
    }
    Ok(format!("{} documents, both styles", docs.len()))
}
