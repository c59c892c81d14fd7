use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "grafia", about = "Lombard orthography identification toolkit")]
pub struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,

    /// Only log errors.
    #[arg(short, long, global = true, conflicts_with = "verbose")]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a tagged corpus from a MediaWiki XML dump.
    Ingest(IngestArgs),
    /// Print the built-in ingest configuration.
    DefaultConfig,
    /// Stratified train/valid/test split of a JSONL corpus.
    Split(SplitArgs),
    /// Class distribution of a JSONL corpus.
    Stats(StatsArgs),
    /// Fit features and train a classifier.
    Train(TrainArgs),
    /// Evaluate a model on a labelled JSONL file.
    Evaluate(EvaluateArgs),
    /// Label raw text lines with a trained model.
    Classify(ClassifyArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Uncompressed pages-articles XML dump, or `-` for stdin.
    #[arg(long)]
    pub dump: PathBuf,
    /// Configuration file (tag map and filters).
    #[arg(long, env = "GRAFIA_CONFIG")]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write borderline kept lines to review.tsv.
    #[arg(long)]
    pub review: bool,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    /// Corpus JSONL file.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Directory for train.jsonl, valid.jsonl and test.jsonl.
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Train, validation and test fractions.
    #[arg(long, default_value = "0.8,0.1,0.1")]
    pub ratios: String,
    /// Shuffle seed.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Corpus JSONL file.
    #[arg(long = "in")]
    pub input: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Logreg,
    Svm,
    Nb,
    Rf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LossArg {
    SquaredHinge,
    Hinge,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Classifier type.
    #[arg(long, value_enum)]
    pub model: ModelArg,
    /// Comma-separated analyzers out of byte, char, word.
    #[arg(long, value_delimiter = ',', required = true)]
    pub features: Vec<String>,
    /// Training JSONL file.
    #[arg(long)]
    pub train: PathBuf,
    /// Validation file; its accuracy is printed after training.
    #[arg(long)]
    pub valid: Option<PathBuf>,
    /// Model output path.
    #[arg(long)]
    pub out: PathBuf,

    #[arg(long, default_value_t = 1)]
    pub ngram_min: usize,
    #[arg(long, default_value_t = 4)]
    pub ngram_max: usize,
    /// Vocabulary cap per analyzer.
    #[arg(long, default_value_t = 10_000)]
    pub max_features: usize,
    /// Keep letter case when extracting n-grams.
    #[arg(long)]
    pub no_lowercase: bool,
    /// Train on LSI lines too (excluded by default).
    #[arg(long)]
    pub include_lsi: bool,
    /// Disable balanced class weights (logreg, svm, rf).
    #[arg(long)]
    pub no_balanced: bool,

    /// Regularization strength (logreg).
    #[arg(long)]
    pub l2: Option<f64>,
    /// Penalty parameter (svm).
    #[arg(long)]
    pub c: Option<f64>,
    /// Loss (svm).
    #[arg(long, value_enum)]
    pub loss: Option<LossArg>,
    /// Iteration limit (logreg, svm).
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Stopping tolerance (logreg, svm).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Additive smoothing (nb).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Apply class weights to the count statistics (nb).
    #[arg(long)]
    pub nb_weighted: bool,
    /// Number of trees (rf).
    #[arg(long)]
    pub n_trees: Option<usize>,
    /// Candidate features per split (rf; default ceil(sqrt(D))).
    #[arg(long)]
    pub split_features: Option<usize>,
    /// Random seed (svm, rf).
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Model file written by `train`.
    #[arg(long)]
    pub model: PathBuf,
    /// Labelled JSONL file.
    #[arg(long)]
    pub test: PathBuf,
    /// Write the confusion matrix as CSV.
    #[arg(long)]
    pub confusion: Option<PathBuf>,
    /// Write the evaluation document as JSON.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Print the JSON document instead of the table.
    #[arg(long)]
    pub json: bool,
    /// Model identifier used in the JSON document (default: file stem).
    #[arg(long)]
    pub id: Option<String>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Model file written by `train`.
    #[arg(long)]
    pub model: PathBuf,
    /// Input text file, one line per record (default: stdin).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Label predictions below this confidence as UNKNOWN.
    #[arg(long)]
    pub min_confidence: Option<f64>,
    /// Emit corpus-format JSONL records.
    #[arg(long, conflicts_with = "echo")]
    pub jsonl: bool,
    /// Append the input text to each output line.
    #[arg(long)]
    pub echo: bool,
}
