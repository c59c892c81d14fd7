use anyhow::Result;
use grafia_core::eval::evaluate as run_evaluate;
use grafia_core::{
    load_jsonl, save_model, train_model, Analyzer, ModelKind, ModelParams, NgramConfig,
    OrthographyClass, SvmLoss,
};

use crate::args::{LossArg, ModelArg, TrainArgs};
use crate::usage;

fn model_kind(m: ModelArg) -> ModelKind {
    match m {
        ModelArg::Logreg => ModelKind::Logreg,
        ModelArg::Svm => ModelKind::Svm,
        ModelArg::Nb => ModelKind::Nb,
        ModelArg::Rf => ModelKind::Rf,
    }
}

pub(crate) fn feature_configs(a: &TrainArgs) -> Result<Vec<NgramConfig>> {
    let mut configs: Vec<NgramConfig> = Vec::new();
    for name in &a.features {
        let analyzer: Analyzer = name.trim().parse().map_err(|e| usage(format!("{e}")))?;
        if configs.iter().any(|c| c.analyzer == analyzer) {
            return Err(usage(format!("analyzer {analyzer} listed twice in --features")));
        }
        let config = NgramConfig::new(analyzer)
            .with_range(a.ngram_min, a.ngram_max)
            .with_max_features(a.max_features)
            .with_lowercase(!a.no_lowercase);
        config.validate().map_err(|e| usage(format!("{e}")))?;
        configs.push(config);
    }
    if configs.is_empty() {
        return Err(usage("--features needs at least one of byte, char, word"));
    }
    Ok(configs)
}

/// Rejects hyperparameter flags that do not apply to the chosen model.
fn check_flags(a: &TrainArgs) -> Result<()> {
    let kind = a.model;
    let flags: [(&str, bool, &[ModelArg]); 10] = [
        ("--l2", a.l2.is_some(), &[ModelArg::Logreg]),
        ("--c", a.c.is_some(), &[ModelArg::Svm]),
        ("--loss", a.loss.is_some(), &[ModelArg::Svm]),
        ("--max-iter", a.max_iter.is_some(), &[ModelArg::Logreg, ModelArg::Svm]),
        ("--tol", a.tol.is_some(), &[ModelArg::Logreg, ModelArg::Svm]),
        ("--alpha", a.alpha.is_some(), &[ModelArg::Nb]),
        ("--nb-weighted", a.nb_weighted, &[ModelArg::Nb]),
        ("--n-trees", a.n_trees.is_some(), &[ModelArg::Rf]),
        ("--split-features", a.split_features.is_some(), &[ModelArg::Rf]),
        ("--seed", a.seed.is_some(), &[ModelArg::Svm, ModelArg::Rf]),
    ];
    for (flag, given, models) in flags {
        if given && !models.contains(&kind) {
            return Err(usage(format!("{flag} does not apply to --model {}", model_kind(kind))));
        }
    }
    if a.no_balanced && kind == ModelArg::Nb {
        return Err(usage("--no-balanced does not apply to --model nb (see --nb-weighted)"));
    }
    let positive = [("--l2", a.l2), ("--c", a.c), ("--tol", a.tol), ("--alpha", a.alpha)];
    for (flag, v) in positive {
        if let Some(v) = v {
            if !(v.is_finite() && v > 0.0) {
                return Err(usage(format!("{flag} must be a positive number, got {v}")));
            }
        }
    }
    if a.max_iter == Some(0) || a.n_trees == Some(0) || a.split_features == Some(0) {
        return Err(usage("iteration, tree and feature counts must be positive"));
    }
    Ok(())
}

fn model_params(a: &TrainArgs) -> ModelParams {
    let mut p = ModelParams::default();
    let balanced = !a.no_balanced;
    p.logreg.balanced = balanced;
    p.svm.balanced = balanced;
    p.rf.balanced = balanced;
    if let Some(v) = a.l2 {
        p.logreg.l2 = v;
    }
    if let Some(v) = a.c {
        p.svm.c = v;
    }
    if let Some(loss) = a.loss {
        p.svm.loss = match loss {
            LossArg::SquaredHinge => SvmLoss::SquaredHinge,
            LossArg::Hinge => SvmLoss::Hinge,
        };
    }
    if let Some(v) = a.max_iter {
        p.logreg.max_iter = v;
        p.svm.max_iter = v;
    }
    if let Some(v) = a.tol {
        p.logreg.tol = v;
        p.svm.tol = v;
    }
    if let Some(v) = a.alpha {
        p.nb.alpha = v;
    }
    p.nb.weighted = a.nb_weighted;
    if let Some(v) = a.n_trees {
        p.rf.n_trees = v;
    }
    if a.split_features.is_some() {
        p.rf.max_features = a.split_features;
    }
    if let Some(v) = a.seed {
        p.svm.seed = v;
        p.rf.seed = v;
    }
    p
}

pub fn train(a: TrainArgs) -> Result<()> {
    check_flags(&a)?;
    let configs = feature_configs(&a)?;
    let kind = model_kind(a.model);
    let params = model_params(&a);

    let mut samples = load_jsonl(&a.train)?;
    let valid = a.valid.as_ref().map(load_jsonl).transpose()?;
    if !a.include_lsi {
        let before = samples.len();
        samples.retain(|s| s.tag != OrthographyClass::Lsi);
        if samples.len() < before {
            log::info!("excluded {} LSI lines from training", before - samples.len());
        }
    }

    let model = train_model(kind, &configs, &samples, &params)?;
    save_model(&model, &a.out)?;
    println!(
        "trained {kind} on {} lines, {} features ({}), {} classes",
        samples.len(),
        model.features.total_dim(),
        model.features.describe(),
        model.classes().len()
    );
    if let Some(valid) = valid {
        let (_, report) = run_evaluate(&model, &valid)?;
        println!(
            "validation accuracy: {:.2} (average class accuracy {:.2})",
            100.0 * report.overall_accuracy,
            100.0 * report.avg_class_accuracy
        );
    }
    println!("model written to {}", a.out.display());
    Ok(())
}
