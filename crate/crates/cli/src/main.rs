use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use readme_taxonomy::badge::{label_readme, strip_labels, BadgeMode, BadgeStyle};
use readme_taxonomy::classifier::{Algorithm, Oversampler, PreparedCorpus, TrainConfig};
use readme_taxonomy::corpus::{
    filter_repo, load_annotations, read_repo_store, render_annotations, write_repo, AnnotatedSection, FilterConfig,
    FilterReason, RepoFetcher, API_ROOT,
};
use readme_taxonomy::evaluation::{ablation, cross_validate, feature_importance, EvalOptions, VocabularyScope};
use readme_taxonomy::features::{builtin_patterns, load_patterns, FeatureSet, HeuristicPattern};
use readme_taxonomy::markdown::{extract_sections, repo_name_words};
use readme_taxonomy::rules::{
    mine_rules, to_category_transactions, to_transactions, AssociationRule, Level, MinSupport,
};
use readme_taxonomy::{Category, Error, Model};

mod transport;

const TOKEN_VAR: &str = "GITHUB_TOKEN";

#[derive(Parser)]
#[command(name = "readme-taxonomy", version, about = "Classify README sections into content categories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample random repositories and their READMEs from the GitHub API
    Fetch(FetchArgs),
    /// Split READMEs into sections, written as an annotation TSV with empty labels
    Extract(ExtractArgs),
    /// Train a model on annotated sections
    Train(TrainArgs),
    /// Cross-validate on annotated sections
    Evaluate(EvaluateArgs),
    /// Add predicted labels to the headings of a README
    Label(LabelArgs),
    /// Mine association rules between labels
    Rules(RulesArgs),
    /// Print the feature vector of README sections
    Features(FeaturesArgs),
}

#[derive(Args)]
struct FetchArgs {
    #[arg(long)]
    count: usize,
    /// Repository store directory
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100_000_000)]
    id_upper_bound: u64,
    #[arg(long, default_value_t = 2048)]
    min_bytes: usize,
    #[arg(long, default_value = API_ROOT)]
    api_root: String,
}

#[derive(Args)]
struct ExtractArgs {
    /// A README file or a repository store directory
    #[arg(long)]
    input: PathBuf,
    /// File id for a single README (defaults to the file stem)
    #[arg(long)]
    file_id: Option<String>,
    /// Apply the inclusion filters to repository store entries
    #[arg(long)]
    filter: bool,
    #[arg(long, default_value_t = 2048)]
    min_bytes: usize,
    /// Output TSV (standard output when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FeatureChoice {
    All,
    Statistical,
    Heuristic,
}

impl From<FeatureChoice> for FeatureSet {
    fn from(c: FeatureChoice) -> Self {
        match c {
            FeatureChoice::All => FeatureSet::All,
            FeatureChoice::Statistical => FeatureSet::StatisticalOnly,
            FeatureChoice::Heuristic => FeatureSet::HeuristicOnly,
        }
    }
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, default_value = "svm", value_parser = ["svm", "lr", "nb", "knn"])]
    algorithm: String,
    #[arg(long, default_value = "duplicate", value_parser = ["duplicate", "smote", "none"])]
    oversampler: String,
    /// Regularisation constant
    #[arg(long = "c", default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = 5)]
    knn_k: usize,
    #[arg(long, default_value_t = 5)]
    smote_k: usize,
    #[arg(long, default_value_t = 1e-4)]
    tolerance: f64,
    #[arg(long, default_value_t = 1000)]
    max_epochs: usize,
    #[arg(long, value_enum, default_value = "all")]
    features: FeatureChoice,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl ModelArgs {
    fn config(&self) -> Result<TrainConfig, Error> {
        let config = TrainConfig {
            algorithm: self.algorithm.parse::<Algorithm>()?,
            oversampler: self.oversampler.parse::<Oversampler>()?,
            c: self.c,
            knn_k: self.knn_k,
            smote_k: self.smote_k,
            seed: self.seed,
            tolerance: self.tolerance,
            max_epochs: self.max_epochs,
            feature_set: self.features.into(),
        };
        config.validate()?;
        Ok(config)
    }
}

#[derive(Args)]
struct CorpusArgs {
    #[arg(long)]
    annotations: PathBuf,
    /// Pattern CSV (the bundled patterns when omitted)
    #[arg(long)]
    patterns: Option<PathBuf>,
    /// Use only sections with exactly one category
    #[arg(long)]
    single_label_only: bool,
}

impl CorpusArgs {
    fn patterns(&self) -> Result<Vec<HeuristicPattern>, Error> {
        match &self.patterns {
            Some(p) => load_patterns(p),
            None => Ok(builtin_patterns()),
        }
    }

    fn load(&self) -> Result<PreparedCorpus, Error> {
        let sections = load_annotations(&self.annotations)?;
        let corpus = PreparedCorpus::new(&sections, self.patterns()?);
        Ok(if self.single_label_only { corpus.single_label_only() } else { corpus })
    }
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 10)]
    folds: usize,
    /// Fit the vocabulary on the whole corpus instead of per training fold
    #[arg(long)]
    paper_compat: bool,
    /// Divide the weighted F1 by the number of labels
    #[arg(long)]
    literal_f1: bool,
    /// Also evaluate statistical-only and heuristic-only feature sets
    #[arg(long)]
    ablation: bool,
    /// Rank SVM weights over repeated cross-validation and print the top N per category
    #[arg(long, value_name = "N")]
    importance: Option<usize>,
    #[arg(long, default_value_t = 10)]
    repeats: usize,
    /// Write the report as JSON
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StyleChoice {
    Shields,
    Tag,
}

#[derive(Args)]
struct LabelArgs {
    #[arg(long, required_unless_present = "strip")]
    model: Option<PathBuf>,
    #[arg(long)]
    readme: PathBuf,
    /// Repository "owner/name", used by the repository-name feature
    #[arg(long, default_value = "")]
    repo: String,
    #[arg(long, value_enum, default_value = "shields")]
    style: StyleChoice,
    #[arg(long)]
    hide_exclusion: bool,
    /// Only remove existing labels
    #[arg(long)]
    strip: bool,
    /// Output file (standard output when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelChoice {
    Section,
    File,
}

#[derive(Args)]
struct RulesArgs {
    #[arg(long)]
    annotations: PathBuf,
    #[arg(long, value_enum, default_value = "section")]
    level: LevelChoice,
    #[arg(long, conflicts_with = "min_count")]
    min_support: Option<f64>,
    /// Minimum number of supporting transactions
    #[arg(long)]
    min_count: Option<usize>,
    #[arg(long, default_value_t = 0.8)]
    min_confidence: f64,
    /// Mine merged categories (What and Why as one) instead of annotation codes
    #[arg(long)]
    merged: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct FeaturesArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    readme: PathBuf,
    #[arg(long, default_value = "")]
    repo: String,
    /// Only this section (0-based)
    #[arg(long)]
    section: Option<usize>,
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    Input(String),
    Runtime(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

type CliResult<T = ()> = Result<T, CliError>;

fn write_output(path: Option<&Path>, text: &str) -> CliResult {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io_error(p, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).map_err(|e| CliError::Runtime(e.to_string()))
        }
    }
}

fn reason_name(r: FilterReason) -> &'static str {
    match r {
        FilterReason::TooSmall => "small README (< min bytes)",
        FilterReason::NotSoftware => "no programming language",
        FilterReason::NotEnglish => "not English",
        FilterReason::Included => "included",
    }
}

fn print_tally(tally: &BTreeMap<FilterReason, usize>, missing: usize) {
    println!("{:<28} {:>6}", "reason", "repos");
    println!("{:<28} {:>6}", "no README in default location", missing);
    for r in [FilterReason::TooSmall, FilterReason::NotSoftware, FilterReason::NotEnglish, FilterReason::Included] {
        println!("{:<28} {:>6}", reason_name(r), tally.get(&r).copied().unwrap_or(0));
    }
}

fn cmd_fetch(args: &FetchArgs) -> CliResult {
    let token = std::env::var(TOKEN_VAR).ok().filter(|t| !t.is_empty()).ok_or_else(|| {
        CliError::Input(format!("{TOKEN_VAR} is not set; export a GitHub personal access token to use fetch"))
    })?;
    fs::create_dir_all(&args.out).map_err(|e| io_error(&args.out, e))?;
    let filter = FilterConfig { min_bytes: args.min_bytes, ..FilterConfig::default() };
    let mut tally: BTreeMap<FilterReason, usize> = BTreeMap::new();
    let mut missing = 0;
    let mut fetcher = RepoFetcher::new(transport::UreqTransport::new(), Some(token)).with_api_root(&args.api_root);
    let result = fetcher.fetch_random_repos(args.count, args.id_upper_bound, args.seed, |record| {
        write_repo(&args.out, record)?;
        if record.readme_bytes.is_empty() {
            missing += 1;
        } else {
            *tally.entry(filter_repo(record, &filter).reason).or_default() += 1;
        }
        Ok(())
    });
    print_tally(&tally, missing);
    result.map(|_| ()).map_err(|e| CliError::Runtime(format!("{e} (records fetched so far were kept)")))
}

fn document_rows(file_id: &str, source: &str) -> Vec<AnnotatedSection> {
    extract_sections(source)
        .into_iter()
        .enumerate()
        .map(|(i, s)| AnnotatedSection {
            section_id: format!("{file_id}#{i}"),
            file_id: file_id.to_string(),
            heading_markdown: if s.is_preamble() {
                String::new()
            } else {
                format!("{} {}", "#".repeat(s.heading_level as usize), s.heading_text)
            },
            heading_level: s.heading_level,
            content_markdown: s.body,
            labels: BTreeSet::new(),
        })
        .collect()
}

fn cmd_extract(args: &ExtractArgs) -> CliResult {
    let mut rows = Vec::new();
    if args.input.is_dir() {
        let filter = FilterConfig { min_bytes: args.min_bytes, ..FilterConfig::default() };
        for record in read_repo_store(&args.input)? {
            if record.readme_bytes.is_empty() || (args.filter && !filter_repo(&record, &filter).included) {
                continue;
            }
            let file_id = record.full_name.replace('/', "__");
            rows.extend(document_rows(&file_id, &record.readme_text()));
        }
    } else {
        let source = fs::read_to_string(&args.input).map_err(|e| io_error(&args.input, e))?;
        let file_id = args
            .file_id
            .clone()
            .unwrap_or_else(|| args.input.file_stem().map_or("readme".into(), |s| s.to_string_lossy().into_owned()));
        rows.extend(document_rows(&file_id, &source));
    }
    write_output(args.out.as_deref(), &render_annotations(&rows))
}

fn cmd_train(args: &TrainArgs) -> CliResult {
    let config = args.model.config()?;
    let corpus = args.corpus.load()?;
    let started = Instant::now();
    let model: Model = corpus.fit_model(&corpus.all_indices(), &config)?;
    model.save(&args.out)?;
    println!("sections   {}", corpus.len());
    println!("vocabulary {}", model.vocabulary().len());
    println!("features   {}", model.dimension());
    println!("{:<14} {:>9}", "category", "positives");
    for c in Category::ALL {
        let n = corpus.sections.iter().filter(|s| s.categories.contains(&c)).count();
        println!("{:<14} {:>9}", c.name(), n);
    }
    println!("model written to {}", args.out.display());
    eprintln!("training took {:.2} s", started.elapsed().as_secs_f64());
    Ok(())
}

fn cmd_evaluate(args: &EvaluateArgs) -> CliResult {
    let config = args.model.config()?;
    let corpus = args.corpus.load()?;
    let options = EvalOptions {
        folds: args.folds,
        seed: args.model.seed,
        vocabulary: if args.paper_compat { VocabularyScope::WholeCorpus } else { VocabularyScope::PerFold },
        literal_f1_formula: args.literal_f1,
    };
    let started = Instant::now();
    let report = cross_validate::<f64>(&corpus, &config, &options)?;
    print!("{}", report.render_table());
    let mut json = serde_json::Map::new();
    json.insert("report".into(), serde_json::to_value(&report).expect("report serialises"));
    if args.ablation {
        let rows = ablation::<f64>(&corpus, &config, &options)?;
        println!();
        println!("{:<12} {:>11}", "features", "weighted f1");
        for row in &rows {
            let name = match row.feature_set {
                FeatureSet::All => "all",
                FeatureSet::StatisticalOnly => "statistical",
                FeatureSet::HeuristicOnly => "heuristic",
            };
            println!("{:<12} {:>11.3}", name, row.report.weighted_f1);
        }
        json.insert("ablation".into(), serde_json::to_value(&rows).expect("rows serialise"));
    }
    if let Some(top) = args.importance {
        let ranking =
            feature_importance::<f64>(&corpus, &config, args.repeats, args.folds, args.model.seed)?.truncated(top);
        println!();
        print!("{}", ranking.render_table());
        json.insert("feature_importance".into(), serde_json::to_value(&ranking).expect("ranking serialises"));
    }
    if let Some(path) = &args.report {
        let text = serde_json::to_string_pretty(&json).expect("json") + "\n";
        fs::write(path, text).map_err(|e| io_error(path, e))?;
    }
    eprintln!("evaluation took {:.2} s", started.elapsed().as_secs_f64());
    Ok(())
}

fn cmd_label(args: &LabelArgs) -> CliResult {
    let source = fs::read_to_string(&args.readme).map_err(|e| io_error(&args.readme, e))?;
    let output = if args.strip {
        strip_labels(&source)
    } else {
        let path = args.model.as_ref().expect("clap requires --model");
        let model = Model::load(path)?;
        let mode = match args.style {
            StyleChoice::Shields => BadgeMode::Shields,
            StyleChoice::Tag => BadgeMode::PlainTag,
        };
        let style = BadgeStyle { hide_exclusion: args.hide_exclusion, ..BadgeStyle::new(mode) };
        let started = Instant::now();
        let labelled = label_readme(&model, &source, &args.repo, &style);
        log::info!("labelled in {:.3} s", started.elapsed().as_secs_f64());
        labelled
    };
    write_output(args.out.as_deref(), &output)
}

fn print_rules<I: Ord + std::fmt::Display + serde::Serialize>(
    rules: &[AssociationRule<I, f64>],
    json: bool,
) -> CliResult {
    if json {
        println!("{}", serde_json::to_string_pretty(rules).expect("rules serialise"));
    } else {
        println!("{:<36} {:<24} {:>8} {:>10}", "antecedent", "consequent", "support", "confidence");
        for r in rules {
            let set =
                |s: &BTreeSet<I>| format!("{{{}}}", s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", "));
            println!("{:<36} {:<24} {:>8.3} {:>10.3}", set(&r.antecedent), set(&r.consequent), r.support, r.confidence);
        }
    }
    Ok(())
}

fn cmd_rules(args: &RulesArgs) -> CliResult {
    let corpus = load_annotations(&args.annotations)?;
    let level = match args.level {
        LevelChoice::Section => Level::Section,
        LevelChoice::File => Level::File,
    };
    let support = match (args.min_support, args.min_count) {
        (_, Some(n)) => MinSupport::Count(n),
        (Some(f), None) => MinSupport::Fraction(f),
        (None, None) => MinSupport::Fraction(match level {
            Level::Section => 0.0013,
            Level::File => 0.5,
        }),
    };
    if args.merged {
        let tx = to_category_transactions(&corpus, level);
        print_rules(&mine_rules(&tx, support, args.min_confidence)?, args.json)
    } else {
        let tx = to_transactions(&corpus, level);
        print_rules(&mine_rules(&tx, support, args.min_confidence)?, args.json)
    }
}

fn cmd_features(args: &FeaturesArgs) -> CliResult {
    let model = Model::load(&args.model)?;
    let source = fs::read_to_string(&args.readme).map_err(|e| io_error(&args.readme, e))?;
    let sections = extract_sections(&source);
    if let Some(i) = args.section {
        if i >= sections.len() {
            return Err(CliError::Input(format!("section {i} out of range: the README has {}", sections.len())));
        }
    }
    let words = if args.repo.is_empty() { BTreeSet::new() } else { repo_name_words(&args.repo) };
    let fx = model.extractor();
    let names = fx.feature_names();
    let mut out = String::new();
    for (i, s) in sections.iter().enumerate() {
        if args.section.is_some_and(|want| want != i) {
            continue;
        }
        let fv = fx.extract(&s.heading_text, &s.body, &words);
        let row = fx.to_row(&fv, model.config().feature_set);
        let prediction = model.predict_features(&fv);
        out.push_str(&format!("section {i}: level {} {:?}\n", s.heading_level, s.heading_text));
        for (col, value) in row.iter() {
            out.push_str(&format!("  {:<44} {value:.6}\n", names[col]));
        }
        let labels: Vec<&str> = prediction.labels.iter().map(|c| c.name()).collect();
        out.push_str(&format!("  predicted: {}\n", labels.join(", ")));
    }
    write_output(None, &out)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Fetch(a) => cmd_fetch(a),
        Command::Extract(a) => cmd_extract(a),
        Command::Train(a) => cmd_train(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Label(a) => cmd_label(a),
        Command::Rules(a) => cmd_rules(a),
        Command::Features(a) => cmd_features(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
