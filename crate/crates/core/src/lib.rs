//! Orthography identification for Lombard text.
//!
//! The crate covers the whole traditional-model pipeline:
//!
//! * [`wiki`] turns a MediaWiki XML dump into orthography-tagged lines and
//!   applies the corpus quality filters;
//! * [`corpus`] loads, validates, splits and summarizes the JSONL corpus;
//! * [`features`] builds TF-IDF weighted byte, character and word n-gram
//!   vectors, optionally concatenated into a feature union;
//! * [`classifiers`] trains logistic regression, linear SVM, multinomial
//!   Naive Bayes and random forest models and persists them;
//! * [`eval`] computes confusion matrices, accuracy metrics, model selection
//!   and bulk classification reports;
//! * [`synthetic`] generates artificial orthographies for end-to-end checks.

pub mod classifiers;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod features;
pub mod synthetic;
pub mod wiki;

pub use classifiers::{
    balanced_class_weights, load_model, predict, read_model, save_model, train_logreg, train_nb,
    train_rf, write_model,
    train_model, train_svm, ClassWeights, Classifier, ForestModel, LinearKind, LinearModel,
    LogRegParams, ModelKind, ModelParams, NbModel, NbParams, Prediction, RfParams, SvmLoss,
    SvmParams, TrainedModel, MODEL_FORMAT_VERSION,
};
pub use corpus::{
    class_distribution, load_jsonl, stratified_split, write_jsonl, ClassDistribution,
    OrthographyClass, Sample, SplitRatios, SplitSet,
};
pub use error::{Error, Result};
pub use eval::{
    accuracy_range, bulk_classify, confusion_matrix, evaluate, metrics, select_best, BulkReport,
    ConfusionMatrix, MetricsReport,
};
pub use features::{
    fit_union, fit_vectorizer, tokenize, transform, transform_union, Analyzer, FeatureUnion,
    NgramConfig, SparseVector, Vectorizer,
};
pub use wiki::{
    detect_orthography_tag, extract_pages, filter_lines, ingest, strip_markup, FilterConfig,
    FilterReport, IngestConfig, RawPage, TagMap,
};
